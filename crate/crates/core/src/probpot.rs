//! Probability potentials: one nonnegative value per frame element.
//!
//! Combination multiplies the values at the unique projections of each
//! join element; transport sums over compatible elements and is exactly
//! the likelihood of the transported singleton lift. Transport to a
//! non-coarsening target can exceed the input's total mass; no implicit
//! renormalization happens anywhere.

use std::collections::BTreeSet;

use crate::approx::approx_eq;
use crate::error::{FcfError, Result};
use crate::frame::{is_commutative_pair, join2, meet, Frame};
use crate::setpot::SetPotential;

/// A frame label plus a dense value vector indexed by frame element.
#[derive(Clone, Debug)]
pub struct ProbPotential {
    label: Frame,
    values: Vec<f64>,
}

impl ProbPotential {
    pub fn new(label: Frame, values: Vec<f64>) -> Result<ProbPotential> {
        if values.len() != label.len() {
            return Err(FcfError::LengthMismatch {
                got: values.len(),
                want: label.len(),
            });
        }
        if let Some(index) = values.iter().position(|&v| v.is_nan() || v < 0.0) {
            return Err(FcfError::NegativeValue {
                index,
                value: values[index],
            });
        }
        Ok(ProbPotential { label, values })
    }

    pub(crate) fn new_unchecked(label: Frame, values: Vec<f64>) -> ProbPotential {
        ProbPotential { label, values }
    }

    /// The unit potential: value one everywhere.
    pub fn unit(label: Frame) -> ProbPotential {
        let values = vec![1.0; label.len()];
        ProbPotential { label, values }
    }

    /// The null potential: value zero everywhere.
    pub fn zero(label: Frame) -> ProbPotential {
        let values = vec![0.0; label.len()];
        ProbPotential { label, values }
    }

    pub fn label(&self) -> &Frame {
        &self.label
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, elem: u32) -> f64 {
        self.values[elem as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_null(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Combination on the join of the two labels: the value at a join
    /// element is the product of the values at its unique generators.
    pub fn combine(&self, other: &ProbPotential) -> Result<ProbPotential> {
        let joined = join2(&self.label, &other.label)?;
        let values = (0..joined.len() as u32)
            .map(|e| {
                let atom = joined.block(e)[0];
                self.values[self.label.element_of_atom(atom) as usize]
                    * other.values[other.label.element_of_atom(atom) as usize]
            })
            .collect();
        Ok(ProbPotential {
            label: joined,
            values,
        })
    }

    /// Transport to an arbitrary frame: the value at a target element is
    /// the sum over all compatible source elements. For a coarsening this
    /// is projection and preserves total mass.
    pub fn transport(&self, to: &Frame) -> Result<ProbPotential> {
        if !self.label.universe().same(to.universe()) {
            return Err(FcfError::UniverseMismatch);
        }
        // Compatible pairs realized by some atom, summed in element order.
        let mut pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
        for atom in 0..self.label.universe().len() as u32 {
            pairs.insert((to.element_of_atom(atom), self.label.element_of_atom(atom)));
        }
        let mut values = vec![0.0; to.len()];
        for (target, source) in pairs {
            values[target as usize] += self.values[source as usize];
        }
        Ok(ProbPotential {
            label: to.clone(),
            values,
        })
    }

    /// Rescales to total mass one. Fails on the null potential.
    pub fn normalize(&self) -> Result<ProbPotential> {
        let k = self.total();
        if k <= 0.0 {
            return Err(FcfError::Contradiction(
                "probability potential has zero total mass".into(),
            ));
        }
        Ok(ProbPotential {
            label: self.label.clone(),
            values: self.values.iter().map(|v| v / k).collect(),
        })
    }

    /// Transport for commutative pairs, computed as projection to the meet
    /// followed by vacuous extension; equals [`ProbPotential::transport`].
    pub fn project_commutative(&self, to: &Frame) -> Result<ProbPotential> {
        if !is_commutative_pair(&self.label, to)? {
            return Err(FcfError::NotCommutativePair);
        }
        let common = meet(&self.label, to)?;
        self.transport(&common)?.combine(&ProbPotential::unit(to.clone()))
    }

    /// The set potential carrying this potential's values on singletons.
    pub fn lift(&self) -> SetPotential {
        SetPotential::new(
            self.label.clone(),
            self.values
                .iter()
                .enumerate()
                .map(|(e, &v)| (std::iter::once(e as u32).collect(), v)),
        )
        .expect("nonnegative by construction")
    }

    /// Label equality plus valuewise agreement at the crate tolerance.
    pub fn approx_eq(&self, other: &ProbPotential) -> bool {
        self.label == other.label
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(&a, &b)| approx_eq(a, b))
    }
}
