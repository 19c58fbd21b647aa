//! Peetre K-functionals against `L^∞` and real interpolation norms.
//!
//! For a couple `(X₀, L^∞)` any decomposition `f = f₀ + f₁` with
//! `‖f₁‖_∞ = c` forces `|f₀| >= (|f| - c)_+`, so by monotonicity of `X₀`
//!
//! ```text
//! K(f, t) = min_{0 <= c <= max f} ‖(f - c)_+‖_{X₀} + t·c.
//! ```
//!
//! The objective is convex in `c`. For mixed norms `R(X, L^∞)` the
//! truncation commutes with the section maxima, so `‖(f-c)_+‖_{R(X,L^∞)} =
//! Σ_k ‖(ψ*_k - c)_+‖_X` and the same one-dimensional search applies.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixed::{mixed_norm, projection_rearrangements, GridFn, MixedSpaceSpec};
use crate::space::{fundamental_function, ri_norm, RiSpaceSpec};
use crate::step::StepFn;

/// A couple `(X₀, X₁)` of spaces on the cube.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "couple", rename_all = "snake_case")]
pub enum CoupleSpec {
    /// `(X, L^∞)`.
    RiLinf { x: RiSpaceSpec },
    /// `(R(X, L^∞), L^∞)`.
    MixedLinf { x: RiSpaceSpec },
    /// `(R(X, Y), R(L^∞, Y))`; only the lower-bound inequality is checkable.
    MixedPair { x: RiSpaceSpec, y: RiSpaceSpec },
}

impl std::fmt::Display for CoupleSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoupleSpec::RiLinf { x } => write!(f, "({x},Linf)"),
            CoupleSpec::MixedLinf { x } => write!(f, "(R({x},Linf),Linf)"),
            CoupleSpec::MixedPair { x, y } => write!(f, "(R({x},{y}),R(Linf,{y}))"),
        }
    }
}

/// A function the K-functional can be evaluated on.
#[derive(Debug, Clone, Copy)]
pub enum Sample<'a> {
    Step(&'a StepFn),
    Grid(&'a GridFn),
}

impl<'a> From<&'a StepFn> for Sample<'a> {
    fn from(f: &'a StepFn) -> Self {
        Sample::Step(f)
    }
}

impl<'a> From<&'a GridFn> for Sample<'a> {
    fn from(f: &'a GridFn) -> Self {
        Sample::Grid(f)
    }
}

/// The convex objective `c ↦ Σ_k ‖(P_k - c)_+‖_X + t·c` with its profiles
/// `P_k` precomputed. Reusable across `t`.
#[derive(Debug, Clone)]
pub struct TruncationObjective {
    x: RiSpaceSpec,
    profiles: Vec<StepFn>,
    nodes: Vec<f64>,
}

impl TruncationObjective {
    pub fn new(f: Sample<'_>, couple: &CoupleSpec) -> Result<Self> {
        let (x, profiles) = match (couple, f) {
            (CoupleSpec::RiLinf { x }, Sample::Step(s)) => (*x, vec![s.rearrangement()]),
            (CoupleSpec::RiLinf { x }, Sample::Grid(g)) => (*x, vec![g.rearrangement()]),
            (CoupleSpec::MixedLinf { x }, Sample::Grid(g)) => (*x, projection_rearrangements(g)?),
            (CoupleSpec::MixedLinf { .. }, Sample::Step(_)) => {
                return Err(Error::Domain("mixed norms need a grid function".into()))
            }
            (CoupleSpec::MixedPair { .. }, _) => {
                return Err(Error::Unsupported(
                    "exact K-functionals need L^∞ as the second space; \
                     use the lower-bound property check for (R(X,Y), R(L^∞,Y))"
                        .into(),
                ))
            }
        };
        let mut nodes: Vec<f64> = profiles.iter().flat_map(|p| p.values().iter().copied()).collect();
        nodes.push(0.0);
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        Ok(Self { x, profiles, nodes })
    }

    /// `max f`, the upper end of the search interval.
    pub fn top(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// `‖f‖_{X₀}`, the value of `K` for large `t`.
    pub fn source_norm(&self) -> f64 {
        self.remainder(0.0)
    }

    /// `Σ_k ‖(P_k - c)_+‖_X`.
    pub fn remainder(&self, c: f64) -> f64 {
        self.profiles.iter().map(|p| ri_norm(&self.x, &p.excess_over(c))).sum()
    }

    pub fn eval(&self, t: f64, c: f64) -> f64 {
        self.remainder(c) + t * c
    }

    /// `(K, c_opt)` at `t`.
    pub fn minimize(&self, t: f64) -> (f64, f64) {
        let nodes = &self.nodes;
        if nodes.len() == 1 {
            return (0.0, 0.0);
        }
        // Discrete convex minimization over the nodes: find the first node
        // after which the objective stops decreasing.
        let phi = |i: usize| self.eval(t, nodes[i]);
        let (mut lo, mut hi) = (0, nodes.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if phi(mid + 1) < phi(mid) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let i = lo;
        let mut best = (phi(i), nodes[i]);
        // Between nodes the objective is convex but not necessarily linear.
        let a = nodes[i.saturating_sub(1)];
        let b = nodes[(i + 1).min(nodes.len() - 1)];
        if b > a {
            let (c, v) = golden_section(|c| self.eval(t, c), a, b, 1e-12 * b.max(1e-300));
            if v < best.0 {
                best = (v, c);
            }
        }
        best
    }
}

/// Minimizes a unimodal `f` on `[a, b]`; returns `(argmin, min)`.
pub fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iterations = 0;
    while (b - a) > tol && iterations < 200 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iterations += 1;
    }
    let candidates = [(a, f(a)), (b, f(b)), (c, fc), (d, fd)];
    candidates
        .into_iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .unwrap()
}

/// `(K(f, t; couple), c_opt)` for couples whose second space is `L^∞`.
pub fn k_exact<'a>(f: impl Into<Sample<'a>>, t: f64, couple: &CoupleSpec) -> Result<(f64, f64)> {
    check_t(t)?;
    Ok(TruncationObjective::new(f.into(), couple)?.minimize(t))
}

fn check_t(t: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("t must be positive and finite, got {t}")));
    }
    Ok(())
}

/// `‖f*·χ_(0,t)‖_X`.
pub fn k_ri_formula(f: &StepFn, x: &RiSpaceSpec, t: f64) -> f64 {
    ri_norm(x, &f.rearrangement().truncate(t))
}

/// `Σ_k ‖ψ*_k(f, L^∞)·χ_(0,t)‖_X`.
pub fn k_mixed_formula(f: &GridFn, x: &RiSpaceSpec, t: f64) -> Result<f64> {
    Ok(projection_rearrangements(f)?
        .iter()
        .map(|p| ri_norm(x, &p.truncate(t)))
        .sum())
}

/// `f = F + G` with `G = min(f, α_t)`, `α_t = Σ_j ψ*_j(f, L^∞)(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationDecomposition {
    pub big: GridFn,
    pub small: GridFn,
    pub alpha: f64,
}

pub fn truncation_decomposition(f: &GridFn, t: f64) -> Result<TruncationDecomposition> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("t must lie in (0,1), got {t}")));
    }
    let alpha = projection_rearrangements(f)?.iter().map(|p| p.eval(t)).sum();
    Ok(TruncationDecomposition {
        big: f.excess_over(alpha),
        small: f.clamp_to(alpha),
        alpha,
    })
}

/// Both sides of one instance of a checked inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Check {
    pub lhs: f64,
    pub rhs: f64,
}

impl Check {
    pub fn holds(&self) -> bool {
        crate::tol::le(self.lhs, self.rhs)
    }
}

/// `Σ_k ‖ψ*_k(f,Y)χ_(0,t)‖_X <= n(‖f₀‖_{R(X,Y)} + φ_X(t)‖f₁‖_{R(L^∞,Y)})`.
pub fn k_lower_bound_property(
    f: &GridFn,
    f0: &GridFn,
    f1: &GridFn,
    x: &RiSpaceSpec,
    y: &RiSpaceSpec,
    t: f64,
) -> Result<Check> {
    check_t(t)?;
    let sum = f0.add(f1)?;
    let mismatch = f
        .values()
        .iter()
        .zip(sum.values())
        .any(|(&a, &b)| (a - b).abs() > 1e-12 * a.abs().max(1.0));
    if mismatch {
        return Err(Error::Domain("f0 + f1 does not reproduce f".into()));
    }
    let mut lhs = 0.0;
    for k in 0..f.dim() {
        lhs += ri_norm(x, &f.psi(k, y)?.rearrangement().truncate(t));
    }
    let n = f.dim() as f64;
    let r0 = mixed_norm(f0, &MixedSpaceSpec::symmetric(*x, *y))?;
    let r1 = mixed_norm(f1, &MixedSpaceSpec::symmetric(RiSpaceSpec::linf(), *y))?;
    let rhs = n * (r0 + fundamental_function(x).eval(t) * r1);
    Ok(Check { lhs, rhs })
}

/// Sampled `t ↦ K(f, t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KProfile {
    pub couple: CoupleSpec,
    pub samples: Vec<(f64, f64)>,
}

impl KProfile {
    /// Evaluates `K` at the given `t` values, sorted ascending.
    pub fn sample<'a>(f: impl Into<Sample<'a>>, couple: &CoupleSpec, ts: &[f64]) -> Result<Self> {
        for &t in ts {
            check_t(t)?;
        }
        let objective = TruncationObjective::new(f.into(), couple)?;
        let mut ts = ts.to_vec();
        ts.sort_by(f64::total_cmp);
        ts.dedup();
        let samples = ts.par_iter().map(|&t| (t, objective.minimize(t).0)).collect();
        Ok(Self {
            couple: *couple,
            samples,
        })
    }

    /// `count` log-spaced values between `lo` and `hi`, inclusive.
    pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
        if count == 1 {
            return vec![lo];
        }
        let (a, b) = (lo.ln(), hi.ln());
        (0..count)
            .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
            .collect()
    }

    /// `K` nondecreasing, concave, and `K(t)/t` nonincreasing on the samples.
    pub fn shape_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let s = &self.samples;
        for w in s.windows(2) {
            let ((t1, k1), (t2, k2)) = (w[0], w[1]);
            if k2 < k1 - 1e-9 * k1.max(1.0) {
                out.push(format!("K decreases between t = {t1} and t = {t2}"));
            }
            if k2 / t2 > k1 / t1 + 1e-9 * (k1 / t1).max(1.0) {
                out.push(format!("K(t)/t increases between t = {t1} and t = {t2}"));
            }
        }
        for w in s.windows(3) {
            let ((t1, k1), (t2, k2), (t3, k3)) = (w[0], w[1], w[2]);
            let chord = k1 + (k3 - k1) * (t2 - t1) / (t3 - t1);
            if k2 < chord - 1e-9 * chord.abs().max(1.0) {
                out.push(format!("K is not concave at t = {t2}"));
            }
        }
        out
    }
}

/// `(∫_0^∞ (t^{-θ} K(f,t))^q dt/t)^{1/q}` by Simpson's rule in `log t` with
/// exact tails.
///
/// Below `t_min` the optimum is `c = max f` and `K(t) = t·max f`; above
/// `t_max` it is `c = 0` and `K(t) = ‖f‖_{X₀}`. Both regimes are detected
/// rather than assumed, starting from the scale `‖f‖_{X₀}/‖f‖_∞`.
pub fn interp_norm<'a>(f: impl Into<Sample<'a>>, couple: &CoupleSpec, theta: f64, q: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::Domain(format!("θ must lie in (0,1), got {theta}")));
    }
    if q.is_nan() || q < 1.0 {
        return Err(Error::Domain(format!("q must lie in [1,∞], got {q}")));
    }
    let objective = TruncationObjective::new(f.into(), couple)?;
    let top = objective.top();
    if top == 0.0 {
        return Ok(0.0);
    }
    let k_inf = objective.source_norm();
    let k = |t: f64| objective.minimize(t).0;
    let scale = k_inf / top;

    let mut t_min = 1e-6 * scale;
    for _ in 0..40 {
        if (k(t_min) - t_min * top).abs() <= 1e-12 * t_min * top {
            break;
        }
        t_min /= 10.0;
    }
    let mut t_max = 1e3 * scale;
    for _ in 0..40 {
        if (k(t_max) - k_inf).abs() <= 1e-12 * k_inf {
            break;
        }
        t_max *= 10.0;
    }

    let integrand = |u: f64| {
        let t = u.exp();
        t.powf(-theta) * k(t)
    };
    let (u0, u1) = (t_min.ln(), t_max.ln());

    if q.is_infinite() {
        let mut intervals = 200;
        let mut prev = f64::NAN;
        loop {
            let h = (u1 - u0) / intervals as f64;
            let est = (0..=intervals)
                .into_par_iter()
                .map(|i| integrand(u0 + h * i as f64))
                .reduce(|| 0.0, f64::max);
            if (est - prev).abs() <= 1e-4 * est || intervals >= 200 << 8 {
                return Ok(est);
            }
            prev = est;
            intervals *= 2;
        }
    }

    let lower_tail = top.powf(q) * t_min.powf((1.0 - theta) * q) / ((1.0 - theta) * q);
    let upper_tail = k_inf.powf(q) * t_max.powf(-theta * q) / (theta * q);
    let g = |u: f64| integrand(u).powf(q);

    let mut intervals: usize = 200;
    let mut h = (u1 - u0) / intervals as f64;
    let mut nodes: Vec<f64> = (0..=intervals)
        .into_par_iter()
        .map(|i| g(u0 + h * i as f64))
        .collect();
    let simpson = |nodes: &[f64], h: f64| {
        let m = nodes.len() - 1;
        let mut s = nodes[0] + nodes[m];
        for (i, v) in nodes.iter().enumerate().take(m).skip(1) {
            s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        s * h / 3.0
    };
    let mut est = simpson(&nodes, h);
    loop {
        if intervals >= 200 << 8 {
            break;
        }
        let mids: Vec<f64> = (0..intervals)
            .into_par_iter()
            .map(|i| g(u0 + h * (i as f64 + 0.5)))
            .collect();
        let mut refined = Vec::with_capacity(2 * intervals + 1);
        for (i, m) in mids.iter().enumerate() {
            refined.push(nodes[i]);
            refined.push(*m);
        }
        refined.push(nodes[intervals]);
        nodes = refined;
        intervals *= 2;
        h /= 2.0;
        let next = simpson(&nodes, h);
        let converged = (next - est).abs() <= 1e-4 * next.abs();
        est = next;
        if converged {
            break;
        }
    }
    Ok((lower_tail + est + upper_tail).powf(1.0 / q))
}
