//! Brute-force global computations on the join frame, used as the
//! reference for every local-computation result.
//!
//! The oracle deliberately uses only the potential primitives (combination
//! and transport), never the tree engine, so an engine bug cannot mask
//! itself; hand-computed fixtures anchor the primitives themselves.

use crate::approx::approx_eq;
use crate::error::{FcfError, Result};
use crate::frame::{join, ElemSet, Frame};
use crate::probpot::ProbPotential;

/// Default cap on the join-frame size the oracle will materialize.
pub const DEFAULT_CAP: usize = 1_000_000;

/// The exact product of a factor list on the join of their labels.
#[derive(Clone, Debug)]
pub struct GlobalProduct {
    product: ProbPotential,
}

impl GlobalProduct {
    pub fn potential(&self) -> &ProbPotential {
        &self.product
    }

    pub fn frame(&self) -> &Frame {
        self.product.label()
    }
}

/// Combines all factors on their join frame by repeated combination.
/// Fails when the join frame exceeds `cap` elements.
pub fn global_combine(factors: &[ProbPotential], cap: usize) -> Result<GlobalProduct> {
    if factors.is_empty() {
        return Err(FcfError::Precondition(
            "global combination needs at least one factor".into(),
        ));
    }
    let labels: Vec<Frame> = factors.iter().map(|f| f.label().clone()).collect();
    let joined = join(&labels)?;
    if joined.len() > cap {
        return Err(FcfError::OracleCapExceeded {
            size: joined.len(),
            cap,
        });
    }
    let mut product = factors[0].clone();
    for f in &factors[1..] {
        product = product.combine(f)?;
    }
    // combining with the unit pins the label to the full join even when a
    // prefix of the factors already covers it
    if product.label() != &joined {
        product = product.combine(&ProbPotential::unit(joined))?;
    }
    Ok(GlobalProduct { product })
}

/// The global marginal: plain transport of the product.
pub fn oracle_marginal(global: &GlobalProduct, to: &Frame) -> Result<ProbPotential> {
    global.product.transport(to)
}

/// Direct scan for the maximum and the full argmax set of the product.
pub fn oracle_mpe(global: &GlobalProduct) -> (f64, ElemSet) {
    let values = global.product.values();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let argmax = values
        .iter()
        .enumerate()
        .filter(|(_, &v)| approx_eq(v, max))
        .map(|(e, _)| e as u32)
        .collect();
    (max, argmax)
}
