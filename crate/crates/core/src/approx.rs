//! Floating-point comparison used throughout the crate.
//!
//! All potential arithmetic is plain f64; equality of values is always
//! judged at `REL_TOL` relative / `ABS_TOL` absolute tolerance.

/// Relative tolerance for value comparisons.
pub const REL_TOL: f64 = 1e-9;

/// Absolute tolerance floor for values near zero.
pub const ABS_TOL: f64 = 1e-12;

/// True when `a` and `b` agree within the crate-wide tolerance.
/// Non-finite values compare exactly.
pub fn approx_eq(a: f64, b: f64) -> bool {
    if !a.is_finite() || !b.is_finite() {
        return a == b;
    }
    let diff = (a - b).abs();
    diff <= ABS_TOL || diff <= REL_TOL * a.abs().max(b.abs())
}

/// Maximum pairwise deviation between two slices, `f64::INFINITY` on
/// length mismatch.
pub fn max_abs_deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_and_near_values() {
        assert!(approx_eq(1.0, 1.0));
        assert!(approx_eq(1.0, 1.0 + 1e-13));
        assert!(approx_eq(1e6, 1e6 * (1.0 + 1e-10)));
        assert!(!approx_eq(1.0, 1.0 + 1e-6));
        assert!(approx_eq(0.0, 0.0));
        assert!(approx_eq(0.0, 1e-13));
        assert!(!approx_eq(1.0, f64::NEG_INFINITY));
        assert!(!approx_eq(f64::NAN, f64::NAN));
    }
}
