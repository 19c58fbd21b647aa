//! Comparison tolerances shared by every inequality check.
//!
//! Piecewise sums and sorts are exact up to the last ulp; the only real
//! rounding comes from closed-form powers such as `t^(q/p)`.

/// Absolute slack for comparisons of computed norms.
pub const ABS: f64 = 1e-12;

/// Relative slack for comparisons of computed norms.
pub const REL: f64 = 1e-9;

/// Slack allowed when comparing against `reference`: the larger of the
/// absolute and relative tolerances.
pub fn slack(reference: f64) -> f64 {
    ABS.max(REL * reference.abs())
}

/// `lhs <= rhs` up to [`slack`].
pub fn le(lhs: f64, rhs: f64) -> bool {
    lhs <= rhs + slack(rhs)
}

/// `|a - b|` within [`slack`] of the larger magnitude.
pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= slack(a.abs().max(b.abs()))
}

/// Relative difference, with an absolute floor so zero compares cleanly.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
