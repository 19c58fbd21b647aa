//! Nonnegative piecewise-constant functions on a finite interval `(0, L)`.
//!
//! Every quantity here (distribution function, decreasing rearrangement,
//! maximal average, pairings) is a finite sum or sort over the pieces, so the
//! results carry no quadrature error. Pieces are half-open `[t_{i-1}, t_i)`;
//! the rearrangement is therefore right-continuous, matching
//! `f*(t) = inf{s >= 0 : λ_f(s) <= t}`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonnegative step function on `(0, length)` in canonical form.
///
/// Breakpoints `0 = t_0 < t_1 < ... < t_m = length` are stored without the
/// implicit `t_0`; `values[i]` is the value on `[t_i, t_{i+1})` (with
/// `t_0 = 0`). Adjacent equal values are always merged, so two step functions
/// are equal exactly when their representations are.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StepFnFile", into = "StepFnFile")]
pub struct StepFn {
    length: f64,
    ends: Vec<f64>,
    values: Vec<f64>,
}

/// On-disk JSON layout: `{"length": L, "breakpoints": [t1..tm], "values": [v1..vm]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepFnFile {
    pub length: f64,
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl TryFrom<StepFnFile> for StepFn {
    type Error = Error;

    fn try_from(file: StepFnFile) -> Result<Self> {
        StepFn::new(file.length, file.breakpoints, file.values)
    }
}

impl From<StepFn> for StepFnFile {
    fn from(f: StepFn) -> Self {
        StepFnFile {
            length: f.length,
            breakpoints: f.ends,
            values: f.values,
        }
    }
}

impl StepFn {
    /// Validates and canonicalizes a step function.
    pub fn new(length: f64, ends: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidStep(format!("length must be positive and finite, got {length}")));
        }
        if ends.is_empty() {
            return Err(Error::InvalidStep("at least one piece is required".into()));
        }
        if ends.len() != values.len() {
            return Err(Error::InvalidStep(format!(
                "{} breakpoints but {} values",
                ends.len(),
                values.len()
            )));
        }
        let mut prev = 0.0;
        for (i, &t) in ends.iter().enumerate() {
            if !t.is_finite() || t <= prev {
                return Err(Error::InvalidStep(format!(
                    "breakpoints must be strictly increasing from 0, breakpoint {i} is {t}"
                )));
            }
            prev = t;
        }
        if prev != length {
            return Err(Error::InvalidStep(format!(
                "last breakpoint {prev} must equal the length {length}"
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidStep(format!("value {i} is {v}; values must be finite and >= 0")));
        }
        Ok(Self::canonical(length, ends, values))
    }

    /// The constant function `c` on `(0, length)`.
    pub fn constant(length: f64, c: f64) -> Result<Self> {
        Self::new(length, vec![length], vec![c])
    }

    pub fn zero(length: f64) -> Result<Self> {
        Self::constant(length, 0.0)
    }

    /// `χ_(0,a)` on `(0, length)`; `a` is clamped to `[0, length]`.
    pub fn indicator(length: f64, a: f64) -> Result<Self> {
        let a = a.clamp(0.0, length);
        if a <= 0.0 {
            Self::zero(length)
        } else if a >= length {
            Self::constant(length, 1.0)
        } else {
            Self::new(length, vec![a, length], vec![1.0, 0.0])
        }
    }

    /// Uniform cells of width `1/N` on `(0, 1)`.
    pub fn from_cells(values: &[f64]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::InvalidStep("no cells".into()));
        }
        let ends = (1..=n).map(|i| i as f64 / n as f64).collect();
        Self::new(1.0, ends, values.to_vec())
    }

    /// Consecutive pieces given by `(width, value)`; the last breakpoint is
    /// pinned to `length` so cumulative rounding never shifts the domain.
    pub(crate) fn from_widths(length: f64, pieces: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut ends = Vec::new();
        let mut values = Vec::new();
        let mut acc = 0.0;
        for (w, v) in pieces {
            if w <= 0.0 {
                continue;
            }
            acc += w;
            ends.push(acc.min(length));
            values.push(v);
        }
        if let Some(last) = ends.last_mut() {
            *last = length;
        } else {
            ends.push(length);
            values.push(0.0);
        }
        Self::canonical(length, ends, values)
    }

    /// Builds from already-validated parts, dropping empty pieces and merging
    /// equal neighbours.
    pub(crate) fn canonical(length: f64, ends: Vec<f64>, values: Vec<f64>) -> Self {
        let mut out_ends: Vec<f64> = Vec::with_capacity(ends.len());
        let mut out_values: Vec<f64> = Vec::with_capacity(values.len());
        let mut prev = 0.0;
        for (t, v) in ends.into_iter().zip(values) {
            if t <= prev {
                continue;
            }
            prev = t;
            match out_values.last() {
                Some(&last) if last == v => *out_ends.last_mut().unwrap() = t,
                _ => {
                    out_ends.push(t);
                    out_values.push(v);
                }
            }
        }
        if out_ends.is_empty() {
            out_ends.push(length);
            out_values.push(0.0);
        }
        Self {
            length,
            ends: out_ends,
            values: out_values,
        }
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Right endpoints `t_1..t_m` of the pieces.
    pub fn ends(&self) -> &[f64] {
        &self.ends
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn piece_count(&self) -> usize {
        self.ends.len()
    }

    /// Iterates `(start, end, value)` over the pieces.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let starts = std::iter::once(0.0).chain(self.ends.iter().copied());
        starts
            .zip(self.ends.iter().copied())
            .zip(self.values.iter().copied())
            .map(|((a, b), v)| (a, b, v))
    }

    /// Value at `t`; zero outside `[0, length)`.
    pub fn eval(&self, t: f64) -> f64 {
        if !(0.0..self.length).contains(&t) {
            return 0.0;
        }
        let i = self.ends.partition_point(|&e| e <= t);
        self.values[i.min(self.values.len() - 1)]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn integral(&self) -> f64 {
        self.pieces().map(|(a, b, v)| v * (b - a)).sum()
    }

    /// `∫_0^t f`.
    pub fn integral_to(&self, t: f64) -> f64 {
        self.pieces()
            .take_while(|&(a, _, _)| a < t)
            .map(|(a, b, v)| v * (b.min(t) - a))
            .sum()
    }

    /// Measure of `{f > s}`.
    pub fn measure_above(&self, s: f64) -> f64 {
        self.pieces().filter(|&(_, _, v)| v > s).map(|(a, b, _)| b - a).sum()
    }

    /// Measure of the support `{f > 0}`.
    pub fn support_measure(&self) -> f64 {
        self.measure_above(0.0)
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] >= w[1])
    }

    /// `f·χ_(0,t)`.
    pub fn truncate(&self, t: f64) -> StepFn {
        if t >= self.length {
            return self.clone();
        }
        let t = t.max(0.0);
        let mut ends = Vec::new();
        let mut values = Vec::new();
        for (a, b, v) in self.pieces() {
            if a >= t {
                break;
            }
            ends.push(b.min(t));
            values.push(v);
        }
        ends.push(self.length);
        values.push(0.0);
        Self::canonical(self.length, ends, values)
    }

    /// Applies `op` to every value (the result must stay nonnegative).
    pub(crate) fn map_values(&self, op: impl Fn(f64) -> f64) -> StepFn {
        let values = self.values.iter().map(|&v| op(v)).collect();
        Self::canonical(self.length, self.ends.clone(), values)
    }

    /// `(f - c)_+`.
    pub fn excess_over(&self, c: f64) -> StepFn {
        self.map_values(|v| (v - c).max(0.0))
    }

    /// `min(f, c)`.
    pub fn clamp_to(&self, c: f64) -> StepFn {
        self.map_values(|v| v.min(c))
    }

    /// `c·f` for `c >= 0`.
    pub fn scale(&self, c: f64) -> Result<StepFn> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::Domain(format!("scale factor must be finite and >= 0, got {c}")));
        }
        Ok(self.map_values(|v| v * c))
    }

    /// Applies `op` on the common refinement of both partitions.
    fn combine(&self, other: &StepFn, op: impl Fn(f64, f64) -> f64) -> Result<StepFn> {
        self.same_length(other)?;
        let mut ends = Vec::with_capacity(self.ends.len() + other.ends.len());
        let mut values = Vec::with_capacity(ends.capacity());
        let (mut i, mut j) = (0, 0);
        while i < self.ends.len() && j < other.ends.len() {
            let (a, b) = (self.ends[i], other.ends[j]);
            values.push(op(self.values[i], other.values[j]));
            ends.push(a.min(b));
            if a <= b {
                i += 1;
            }
            if b <= a {
                j += 1;
            }
        }
        Ok(Self::canonical(self.length, ends, values))
    }

    /// Pointwise sum.
    pub fn add(&self, other: &StepFn) -> Result<StepFn> {
        self.combine(other, |a, b| a + b)
    }

    /// Pointwise minimum.
    pub fn min(&self, other: &StepFn) -> Result<StepFn> {
        self.combine(other, f64::min)
    }

    /// `∫ f g` over the common refinement.
    pub fn pairing(&self, other: &StepFn) -> Result<f64> {
        Ok(self.combine(other, |a, b| a * b)?.integral())
    }

    /// `f <= g` at every point.
    pub fn dominated_by(&self, other: &StepFn) -> Result<bool> {
        Ok(self.combine(other, |a, b| if a <= b { 0.0 } else { 1.0 })?.is_zero())
    }

    fn same_length(&self, other: &StepFn) -> Result<()> {
        if self.length != other.length {
            return Err(Error::Domain(format!(
                "step functions live on intervals of different length ({} vs {})",
                self.length, other.length
            )));
        }
        Ok(())
    }

    /// Decreasing rearrangement `f*` on `(0, length)`.
    ///
    /// Pieces are stably sorted by value, descending, and laid out from the
    /// origin with their original widths. An already nonincreasing input is
    /// returned unchanged so rearranging is exactly idempotent.
    pub fn rearrangement(&self) -> StepFn {
        if self.is_nonincreasing() {
            return self.clone();
        }
        let mut pieces: Vec<(f64, f64)> = self.pieces().map(|(a, b, v)| (b - a, v)).collect();
        pieces.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap_or(Ordering::Equal));
        Self::from_widths(self.length, pieces)
    }

    /// Distribution function `s ↦ λ_f(s) = |{f > s}|` as a step function of
    /// the level on `(0, max f + 1)`.
    ///
    /// The measures are read off the breakpoints of `f*`, so `f` and `f*` have
    /// identical distribution functions, not merely equal up to rounding.
    pub fn distribution(&self) -> StepFn {
        let fstar = self.rearrangement();
        let top = fstar.max();
        let domain = top + 1.0;
        // Positive levels of f* (strictly decreasing after canonicalization)
        // with the measure where f* is at least that level.
        let mut levels: Vec<(f64, f64)> = fstar
            .pieces()
            .filter(|&(_, _, v)| v > 0.0)
            .map(|(_, b, v)| (v, b))
            .collect();
        levels.reverse();
        let mut ends = Vec::with_capacity(levels.len() + 1);
        let mut values = Vec::with_capacity(levels.len() + 1);
        // On [w_j, w_{j+1}) the level set {f > s} is {f >= w_{j+1}}.
        for &(level, measure) in &levels {
            ends.push(level);
            values.push(measure);
        }
        ends.push(domain);
        values.push(0.0);
        Self::canonical(domain, ends, values)
    }

    /// Maximal average `f**(t) = t^{-1} ∫_0^t f*`.
    pub fn double_star(&self) -> PiecewiseHyperbolic {
        let fstar = self.rearrangement();
        let mut ends = Vec::with_capacity(fstar.piece_count());
        let mut coeffs = Vec::with_capacity(fstar.piece_count());
        let mut acc = 0.0;
        for (a, b, v) in fstar.pieces() {
            // ∫_0^t f* = acc + v (t - a) on [a, b).
            ends.push(b);
            coeffs.push((acc - v * a, v));
            acc += v * (b - a);
        }
        PiecewiseHyperbolic {
            length: self.length,
            ends,
            coeffs,
            total: acc,
        }
    }

    /// `t ↦ f(t^a)` on `(0, 1)` for a nonincreasing `f`.
    ///
    /// Breakpoints map `t_i ↦ t_i^{1/a}` and values are carried over.
    pub fn compose_power(&self, a: f64) -> Result<StepFn> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Domain(format!("exponent must be positive and finite, got {a}")));
        }
        if self.length != 1.0 {
            return Err(Error::Contract(format!(
                "power substitution needs the domain (0,1), got (0,{})",
                self.length
            )));
        }
        if !self.is_nonincreasing() {
            return Err(Error::Contract("power substitution needs a nonincreasing input".into()));
        }
        if a == 1.0 {
            return Ok(self.clone());
        }
        let inv = 1.0 / a;
        let ends = self
            .ends
            .iter()
            .map(|&t| if t == 1.0 { 1.0 } else { t.powf(inv) })
            .collect();
        Ok(Self::canonical(1.0, ends, self.values.clone()))
    }
}

/// `t ↦ a_i / t + b_i` on `[t_{i-1}, t_i)`: the exact shape of `f**` for a
/// step function `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseHyperbolic {
    length: f64,
    ends: Vec<f64>,
    coeffs: Vec<(f64, f64)>,
    total: f64,
}

impl PiecewiseHyperbolic {
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn ends(&self) -> &[f64] {
        &self.ends
    }

    /// `(a_i, b_i)` per piece.
    pub fn coefficients(&self) -> &[(f64, f64)] {
        &self.coeffs
    }

    /// Value at `t > 0`. Past the domain the function is extended by zero, so
    /// the average decays like `∫f / t`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.coeffs[0].1;
        }
        if t >= self.length {
            return self.total / t;
        }
        let i = self.ends.partition_point(|&e| e <= t);
        let (a, b) = self.coeffs[i.min(self.coeffs.len() - 1)];
        a / t + b
    }
}

/// Both sides of the Hardy–Littlewood inequality `∫ f g <= ∫ f* g*`.
pub fn hl_pairing_check(f: &StepFn, g: &StepFn) -> Result<(f64, f64)> {
    let lhs = f.pairing(g)?;
    let rhs = f.rearrangement().pairing(&g.rearrangement())?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(length: f64, ends: &[f64], values: &[f64]) -> StepFn {
        StepFn::new(length, ends.to_vec(), values.to_vec()).unwrap()
    }

    #[test]
    fn construction_rejects_bad_inputs() {
        assert!(StepFn::new(1.0, vec![0.5, 0.5, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(StepFn::new(1.0, vec![0.5, 0.9], vec![1.0, 2.0]).is_err());
        assert!(StepFn::new(1.0, vec![1.0], vec![-1.0]).is_err());
        assert!(StepFn::new(1.0, vec![1.0], vec![f64::NAN]).is_err());
        assert!(StepFn::new(0.0, vec![0.0], vec![1.0]).is_err());
        assert!(StepFn::new(1.0, vec![], vec![]).is_err());
    }

    #[test]
    fn canonical_form_merges_equal_neighbours() {
        let f = step(1.0, &[0.25, 0.5, 1.0], &[2.0, 2.0, 1.0]);
        assert_eq!(f.ends(), &[0.5, 1.0]);
        assert_eq!(f.values(), &[2.0, 1.0]);
    }

    #[test]
    fn distribution_of_half_indicator() {
        let f = StepFn::indicator(1.0, 0.5).unwrap();
        let lam = f.distribution();
        assert_eq!(lam.length(), 2.0);
        assert_eq!(lam.eval(0.0), 0.5);
        assert_eq!(lam.eval(0.999), 0.5);
        assert_eq!(lam.eval(1.0), 0.0);
    }

    #[test]
    fn distribution_of_zero_is_zero() {
        let lam = StepFn::zero(1.0).unwrap().distribution();
        assert!(lam.is_zero());
        assert_eq!(lam.length(), 1.0);
    }

    #[test]
    fn distribution_of_two_levels() {
        let f = step(1.0, &[0.25, 1.0], &[3.0, 1.0]);
        let lam = f.distribution();
        assert_eq!(lam.ends(), &[1.0, 3.0, 4.0]);
        assert_eq!(lam.values(), &[1.0, 0.25, 0.0]);
    }

    #[test]
    fn rearrangement_sorts_with_measures() {
        let f = StepFn::from_cells(&[1.0, 3.0, 2.0, 4.0]).unwrap();
        let r = f.rearrangement();
        assert_eq!(r.ends(), &[0.25, 0.5, 0.75, 1.0]);
        assert_eq!(r.values(), &[4.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn rearrangement_fixes_nonincreasing_and_translates_indicators() {
        let f = step(1.0, &[0.3, 1.0], &[2.0, 1.0]);
        assert_eq!(f.rearrangement(), f);
        let g = step(1.0, &[0.5, 1.0], &[0.0, 1.0]);
        assert_eq!(g.rearrangement(), StepFn::indicator(1.0, 0.5).unwrap());
    }

    #[test]
    fn double_star_closed_forms() {
        let f = StepFn::indicator(1.0, 0.5).unwrap();
        let fss = f.double_star();
        assert_eq!(fss.eval(0.25), 1.0);
        assert_eq!(fss.eval(0.5), 1.0);
        assert!((fss.eval(0.8) - 1.0 / 1.6).abs() < 1e-15);

        let c = StepFn::constant(1.0, 3.0).unwrap().double_star();
        assert_eq!(c.eval(0.1), 3.0);
        assert_eq!(c.eval(0.9), 3.0);

        let two = step(1.0, &[0.25, 1.0], &[2.0, 1.0]).double_star();
        assert!((two.eval(0.5) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn hardy_littlewood_examples() {
        let f = StepFn::indicator(1.0, 0.5).unwrap();
        let g = step(1.0, &[0.5, 1.0], &[0.0, 1.0]);
        assert_eq!(hl_pairing_check(&f, &g).unwrap(), (0.0, 0.5));
        let z = StepFn::zero(1.0).unwrap();
        assert_eq!(hl_pairing_check(&z, &g).unwrap(), (0.0, 0.0));
        let h = step(1.0, &[0.2, 0.7, 1.0], &[1.0, 5.0, 2.0]);
        let (l, r) = hl_pairing_check(&h, &h).unwrap();
        assert!((l - r).abs() < 1e-12);
        assert!(hl_pairing_check(&h, &StepFn::zero(2.0).unwrap()).is_err());
    }

    #[test]
    fn compose_power_examples() {
        let f = StepFn::indicator(1.0, 0.25).unwrap();
        assert_eq!(f.compose_power(2.0).unwrap(), StepFn::indicator(1.0, 0.5).unwrap());
        assert_eq!(f.compose_power(1.0).unwrap(), f);
        assert_eq!(f.compose_power(0.5).unwrap(), StepFn::indicator(1.0, 1.0 / 16.0).unwrap());
        let bumpy = step(1.0, &[0.5, 1.0], &[0.0, 1.0]);
        assert!(matches!(bumpy.compose_power(2.0), Err(Error::Contract(_))));
        assert!(matches!(f.compose_power(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn truncation_and_excess() {
        let f = step(1.0, &[0.25, 1.0], &[3.0, 1.0]);
        assert_eq!(f.truncate(0.5), step(1.0, &[0.25, 0.5, 1.0], &[3.0, 1.0, 0.0]));
        assert_eq!(f.excess_over(1.0), step(1.0, &[0.25, 1.0], &[2.0, 0.0]));
        assert_eq!(f.clamp_to(2.0), step(1.0, &[0.25, 1.0], &[2.0, 1.0]));
        assert_eq!(f.integral_to(0.5), 0.75 + 0.25);
    }

    #[test]
    fn json_round_trip_validates() {
        let f: StepFn = serde_json::from_str(r#"{"length":1,"breakpoints":[0.5,1],"values":[1,1]}"#).unwrap();
        assert_eq!(f, StepFn::constant(1.0, 1.0).unwrap());
        let bad: std::result::Result<StepFn, _> =
            serde_json::from_str(r#"{"length":1,"breakpoints":[0.5],"values":[1]}"#);
        assert!(bad.is_err());
    }
}
