//! Division structure on probability potentials: support indicators,
//! inverses, conditionals, conditioning on evidence and the factorization
//! equivalences.
//!
//! Potentials with equal support on one frame form a commutative group
//! under combination; the unit is the support indicator and the inverse
//! takes reciprocals on the support and zero elsewhere. Division by zero
//! never occurs: conditional values are zero wherever the conditioning
//! projection has no mass.

use crate::error::{FcfError, Result};
use crate::frame::{cond_independent, join2, refines, Frame};
use crate::probpot::ProbPotential;
use crate::setpot::SetPotential;

/// The indicator of a potential's support set: a 0/1 potential on the same
/// frame, idempotent under combination with itself.
#[derive(Clone, Debug)]
pub struct SupportIndicator {
    potential: ProbPotential,
}

impl SupportIndicator {
    pub fn potential(&self) -> &ProbPotential {
        &self.potential
    }

    pub fn into_potential(self) -> ProbPotential {
        self.potential
    }
}

/// The support indicator of `p`: one where `p` is positive, zero elsewhere.
pub fn support_indicator(p: &ProbPotential) -> SupportIndicator {
    let values = p
        .values()
        .iter()
        .map(|&v| if v > 0.0 { 1.0 } else { 0.0 })
        .collect();
    SupportIndicator {
        potential: ProbPotential::new(p.label().clone(), values)
            .expect("indicator values are 0/1"),
    }
}

/// The partial inverse of `p`: reciprocal on the support, zero elsewhere.
/// Combining `p` with its inverse yields the support indicator.
pub fn inverse(p: &ProbPotential) -> ProbPotential {
    let values = p
        .values()
        .iter()
        .map(|&v| if v > 0.0 { 1.0 / v } else { 0.0 })
        .collect();
    ProbPotential::new(p.label().clone(), values).expect("reciprocals of positives")
}

/// The conditional of `p` for `target` given `given`: the transport of `p`
/// to `target ∨ given` combined with the inverse of its transport to
/// `given`. Requires `target ∨ given` to be a coarsening of `d(p)`.
///
/// The continuation identity `π_Θ(p) = p_{Θ|Λ} · π_Λ(p)` holds for
/// `Λ ≤ Θ ≤ d(p)`.
pub fn conditional(p: &ProbPotential, target: &Frame, given: &Frame) -> Result<ProbPotential> {
    let joined = join2(target, given)?;
    if !refines(&joined, p.label())? {
        return Err(FcfError::FrameContainment(
            "target ∨ given must be a coarsening of the potential's frame".into(),
        ));
    }
    let numerator = p.transport(&joined)?;
    let denominator = inverse(&p.transport(given)?);
    numerator.combine(&denominator)
}

/// Conditions `p` on the evidence carried by a set potential: the
/// likelihood of `lift(p) · m`, normalized. Fails when the evidence
/// contradicts the potential (zero normalization constant).
pub fn condition_on_event(p: &ProbPotential, m: &SetPotential) -> Result<ProbPotential> {
    let combined = p.lift().combine(m)?;
    combined.likelihood().normalize().map_err(|_| {
        FcfError::Contradiction("evidence is contradictory with the potential".into())
    })
}

/// Conditional independence of two potentials given a frame, decided on
/// their labels: both labels must absorb `given` by join and be
/// conditionally independent given it. (Any witnessing decomposition
/// `d(qᵢ) = Θᵢ ∨ given` exists exactly under this label test, because the
/// independence relation is closed under joining the conditioner.)
pub fn cond_independent_potentials(
    q1: &ProbPotential,
    q2: &ProbPotential,
    given: &Frame,
) -> Result<bool> {
    if !refines(given, q1.label())? || !refines(given, q2.label())? {
        return Ok(false);
    }
    cond_independent(&[q1.label().clone(), q2.label().clone()], given)
}

/// The eight equivalent factorization statements evaluated numerically for
/// one potential. Existence statements are decided through their canonical
/// witnesses (the conditionals and projections of `p`), so all eight must
/// agree for any `p` satisfying the preconditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub statements: [bool; 8],
}

impl EquivalenceReport {
    pub fn all_true(&self) -> bool {
        self.statements.iter().all(|&b| b)
    }

    pub fn all_equal(&self) -> bool {
        self.statements.iter().all(|&b| b == self.statements[0])
    }
}

/// Evaluates the factorization equivalences of `p` over `t1 ⊥ t2 | given`.
///
/// Preconditions: the frames are conditionally independent given `given`
/// and `d(p) = t1 ∨ t2 ∨ given`.
pub fn factorization_equivalences(
    p: &ProbPotential,
    t1: &Frame,
    t2: &Frame,
    given: &Frame,
) -> Result<EquivalenceReport> {
    if !cond_independent(&[t1.clone(), t2.clone()], given)? {
        return Err(FcfError::Precondition(
            "frames are not conditionally independent given the conditioning frame".into(),
        ));
    }
    let t12 = join2(t1, t2)?;
    let full = join2(&t12, given)?;
    if p.label() != &full {
        return Err(FcfError::Precondition(
            "potential must live on the join of the three frames".into(),
        ));
    }
    let tl1 = join2(t1, given)?;
    let tl2 = join2(t2, given)?;

    let proj_given = p.transport(given)?;
    let proj_tl1 = p.transport(&tl1)?;
    let proj_tl2 = p.transport(&tl2)?;
    let cond_t1 = conditional(p, t1, given)?;
    let cond_t2 = conditional(p, t2, given)?;
    let cond_t12 = conditional(p, &t12, given)?;
    let cond_t1_t2l = conditional(p, t1, &tl2)?;
    let f_proj_tl2 = support_indicator(&proj_tl2).into_potential();

    // (1) p = q1 · q2 with labels t1∨given / t2∨given; canonical witnesses
    //     q1 = p_{t1|given}, q2 = π_{t2∨given}(p).
    let s1 = p.approx_eq(&cond_t1.combine(&proj_tl2)?);
    // (2) p = p_{t1|given} · p_{t2|given} · π_given(p)
    let s2 = p.approx_eq(&cond_t1.combine(&cond_t2)?.combine(&proj_given)?);
    // (3) p_{t1∨t2|given} = p_{t1|given} · p_{t2|given}
    let s3 = cond_t12.approx_eq(&cond_t1.combine(&cond_t2)?);
    // (4) p_{t1∨t2|given} = p1 · p2; canonical witnesses are the two
    //     conditionals, coinciding with (3).
    let s4 = s3;
    // (5) p · π_given(p) = π_{t1∨given}(p) · π_{t2∨given}(p)
    let s5 = p
        .combine(&proj_given)?
        .approx_eq(&proj_tl1.combine(&proj_tl2)?);
    // (6) p = p_{t1|given} · π_{t2∨given}(p)
    let s6 = s1;
    // (7) p_{t1|t2∨given} = p_{t1|given} · f_{π_{t2∨given}(p)}
    let s7 = cond_t1_t2l.approx_eq(&cond_t1.combine(&f_proj_tl2)?);
    // (8) same with any q of label t1∨given; canonical witness q =
    //     p_{t1|given}, coinciding with (7).
    let s8 = s7;

    Ok(EquivalenceReport {
        statements: [s1, s2, s3, s4, s5, s6, s7, s8],
    })
}
