//! Embeddings between mixed norm spaces and into r.i. spaces.
//!
//! The optimal range and domain norms are substitution norms `‖f*(t^a)‖`,
//! evaluated exactly by moving breakpoints. Necessity directions are
//! demonstrated with the extremal constructions (witnesses) used in the
//! proofs: either sampled on a grid, or through their closed-form norms.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kfun::Check;
use crate::mixed::{mixed_norm, GridFn, MixedSpaceSpec};
use crate::space::{
    boyd_indices, conjugate, dilate, fundamental_function, ri_norm, subst_norm, RiSpaceSpec,
};
use crate::step::StepFn;

/// Lebesgue measure of the unit ball in `R^m`.
pub fn omega(m: usize) -> f64 {
    match m {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * std::f64::consts::PI / m as f64 * omega(m - 2),
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// `n' = n/(n-1)`.
pub fn dim_conjugate(n: usize) -> f64 {
    conjugate(n as f64)
}

/// `‖f*(t^{n'})‖_X`: the smallest r.i. range of `R(X, L^∞)`.
pub fn optimal_range_norm(x: &RiSpaceSpec, n: usize, f: &StepFn) -> Result<f64> {
    check_dim(n)?;
    subst_norm(x, f, dim_conjugate(n))
}

/// `‖f*(t^{(n-1)'})‖_X`: the smallest `Y` with `R(X,L^∞) ↪ R(Y,L¹)`, `n >= 3`.
pub fn range_for_l1_target(x: &RiSpaceSpec, n: usize, f: &StepFn) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "the optimal L¹-target range is characterized only for n >= 3, got n = {n}"
        )));
    }
    subst_norm(x, f, conjugate(n as f64 - 1.0))
}

/// `‖f*(t^{(p(n-1))'})‖_X`, the range paired with `L^{p,1}` sections.
pub fn tilde_xp_norm(x: &RiSpaceSpec, p: f64, n: usize, f: &StepFn) -> Result<f64> {
    check_dim(n)?;
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Domain(format!("p must satisfy 1 < p < ∞, got {p}")));
    }
    subst_norm(x, f, conjugate(p * (n as f64 - 1.0)))
}

/// `X̃_p` for `X = L^{p,1}` against the better range `L^{p(n-1)',∞}`.
///
/// `X̃_p = L^{p(p(n-1))',1}` up to the factor `1/(p(n-1))'`, and on `(0,1)`
/// `‖f‖_{L^{r,1}} <= ‖f‖_{L^{s,∞}} / (1/r - 1/s)` for `r < s`, so
/// `‖f‖_{X̃_p} <= C ‖f‖_{L^{p(n-1)',∞}}` with the returned `C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TildeComparison {
    pub tilde: f64,
    pub weak: f64,
    pub constant: f64,
}

impl TildeComparison {
    pub fn holds(&self) -> bool {
        crate::tol::le(self.tilde, self.constant * self.weak)
    }
}

pub fn tilde_vs_weak(p: f64, n: usize, f: &StepFn) -> Result<TildeComparison> {
    let x = RiSpaceSpec::lorentz(p, 1.0)?;
    let tilde = tilde_xp_norm(&x, p, n, f)?;
    let a = conjugate(p * (n as f64 - 1.0));
    let s = p * conjugate(n as f64 - 1.0);
    let r = p * a;
    let weak_space = if s.is_infinite() {
        RiSpaceSpec::linf()
    } else {
        RiSpaceSpec::lorentz(s, f64::INFINITY)?
    };
    let weak = ri_norm(&weak_space, f);
    let constant = (1.0 / a) / (1.0 / r - 1.0 / s);
    Ok(TildeComparison { tilde, weak, constant })
}

/// `‖s ↦ f**(s^{1/n'})‖_Z` enclosed between step minorants and majorants,
/// with the equivalent substitution norm `‖f*(t^{1/n'})‖_Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalDomain {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub equivalent: f64,
    pub ratio: f64,
    /// Upper Boyd index of `Z` below `1/n'`, the hypothesis under which
    /// `value` and `equivalent` are equivalent.
    pub boyd_reliable: bool,
    pub pieces: usize,
}

pub fn optimal_domain_norm(z: &RiSpaceSpec, n: usize, f: &StepFn) -> Result<OptimalDomain> {
    check_dim(n)?;
    let fstar = f.rearrangement();
    if fstar.length() != 1.0 {
        return Err(Error::Contract("the optimal domain norm lives on (0,1)".into()));
    }
    let inv = 1.0 / dim_conjugate(n);
    let equivalent = subst_norm(z, &fstar, inv)?;
    let boyd_reliable = boyd_indices(z).map(|(_, upper)| upper < inv).unwrap_or(false);
    let fss = fstar.double_star();
    let g = |s: f64| fss.eval(s.powf(inv));
    // Kinks of g sit at t_i^{n'}.
    let kinks: Vec<f64> = fstar.ends().iter().map(|&t| t.powf(1.0 / inv)).collect();

    let mut m = 256usize;
    loop {
        let mut ends: Vec<f64> = (1..=m).map(|i| i as f64 / m as f64).collect();
        ends.extend(kinks.iter().copied().filter(|&k| k > 0.0 && k < 1.0));
        ends.sort_by(f64::total_cmp);
        ends.dedup();
        *ends.last_mut().unwrap() = 1.0;
        let at: Vec<f64> = ends.par_iter().map(|&s| g(s)).collect();
        let top = fstar.max();
        // g is nonincreasing: on [s_{i-1}, s_i) it lies between g(s_i) and g(s_{i-1}).
        let upper_values: Vec<f64> = std::iter::once(top).chain(at[..at.len() - 1].iter().copied()).collect();
        let lower_fn = StepFn::canonical(1.0, ends.clone(), at);
        let upper_fn = StepFn::canonical(1.0, ends.clone(), upper_values);
        let lower = ri_norm(z, &lower_fn);
        let upper = ri_norm(z, &upper_fn);
        let width = upper - lower;
        if width <= 1e-6 * upper || m >= 1 << 24 {
            let value = 0.5 * (lower + upper);
            let ratio = if equivalent > 0.0 { value / equivalent } else { 0.0 };
            return Ok(OptimalDomain {
                value,
                lower,
                upper,
                equivalent,
                ratio,
                boyd_reliable,
                pieces: ends.len(),
            });
        }
        m *= 2;
    }
}

/// Outcome of an analytic embedding test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Which embedding the Lorentz indices describe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `L^{p1,q1} ↪ L^{p2,q2}` on a finite measure space.
    Space,
    /// `R(L^∞, L^{p1,q1}) ↪ R(X₂, L^{p2,q2})`.
    MixedLeftLinf,
    /// `R(L^{p1,q1}, Y) ↪ R(L^{p2,q2}, Y)`.
    MixedRightFixed,
}

fn valid_lorentz_pair(p: f64, q: f64) -> bool {
    if p == 1.0 {
        q == 1.0
    } else if p.is_infinite() {
        q.is_infinite()
    } else {
        p > 1.0 && q >= 1.0
    }
}

/// `L^{p1,q1} ↪ L^{p2,q2}` in the Lorentz scale over a finite measure:
/// a larger first index always wins, equal first indices compare `q`.
fn lorentz_scale_embeds(p1: f64, q1: f64, p2: f64, q2: f64) -> bool {
    p1 > p2 || (p1 == p2 && q1 <= q2)
}

pub fn lorentz_embedding_decider(p1: f64, q1: f64, p2: f64, q2: f64, relation: Relation) -> Verdict {
    let in_range = match relation {
        Relation::Space => valid_lorentz_pair(p1, q1) && valid_lorentz_pair(p2, q2),
        Relation::MixedLeftLinf | Relation::MixedRightFixed => {
            [p1, p2].iter().all(|&p| p > 1.0 && p.is_finite()) && [q1, q2].iter().all(|&q| q >= 1.0)
        }
    };
    if !in_range {
        return Verdict::Unknown;
    }
    if lorentz_scale_embeds(p1, q1, p2, q2) {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

fn space_verdict(a: &RiSpaceSpec, b: &RiSpaceSpec) -> Verdict {
    match (a.lorentz_indices(), b.lorentz_indices()) {
        (Some((p1, q1)), Some((p2, q2))) => lorentz_embedding_decider(p1, q1, p2, q2, Relation::Space),
        _ => Verdict::Unknown,
    }
}

/// The embedding families whose validity is characterized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Embedding {
    /// `R(L^∞, Y₁) ↪ R(X₂, Y₂)`.
    LeftLinf { y1: RiSpaceSpec, x2: RiSpaceSpec, y2: RiSpaceSpec },
    /// `R(X₁, L^∞) ↪ R(X₂, L^∞)`.
    RightLinf { x1: RiSpaceSpec, x2: RiSpaceSpec },
    /// `R(X₁, Y) ↪ R(X₂, Y)`.
    RightFixed { x1: RiSpaceSpec, x2: RiSpaceSpec, y: RiSpaceSpec },
    /// `R(X, L^∞) ↪ Z(Iⁿ)`.
    IntoRi { x: RiSpaceSpec, z: RiSpaceSpec, n: usize },
    /// `R(X₁, L^∞) ↪ R(X₂, L¹)`.
    IntoL1Target { x1: RiSpaceSpec, x2: RiSpaceSpec, n: usize },
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Embedding::LeftLinf { y1, x2, y2 } => write!(f, "R(Linf,{y1}) -> R({x2},{y2})"),
            Embedding::RightLinf { x1, x2 } => write!(f, "R({x1},Linf) -> R({x2},Linf)"),
            Embedding::RightFixed { x1, x2, y } => write!(f, "R({x1},{y}) -> R({x2},{y})"),
            Embedding::IntoRi { x, z, n } => write!(f, "R({x},Linf) -> {z} (n={n})"),
            Embedding::IntoL1Target { x1, x2, n } => write!(f, "R({x1},Linf) -> R({x2},L1) (n={n})"),
        }
    }
}

impl Embedding {
    /// Analytic verdict with the condition it reduces to.
    pub fn verdict(&self) -> (Verdict, String) {
        match self {
            Embedding::LeftLinf { y1, y2, .. } => (space_verdict(y1, y2), format!("{y1} -> {y2}")),
            Embedding::RightLinf { x1, x2 } => (space_verdict(x1, x2), format!("{x1} -> {x2}")),
            Embedding::RightFixed { x1, x2, y } => {
                let cond = format!("{x1} -> {x2}");
                if y.is_linf() {
                    return (space_verdict(x1, x2), cond);
                }
                match boyd_indices(x1) {
                    Ok((lower, _)) if lower > 0.0 => (space_verdict(x1, x2), format!("{cond}, lower Boyd index of {x1} > 0")),
                    _ => (
                        Verdict::Unknown,
                        format!("{cond} is necessary only when the lower Boyd index of {x1} is positive; open otherwise"),
                    ),
                }
            }
            Embedding::IntoRi { x, z, n } => {
                let np = dim_conjugate(*n);
                match (x.lorentz_indices(), z.lorentz_indices()) {
                    (Some((p, q)), Some((r, s))) => {
                        let target = r / np;
                        let v = if lorentz_scale_embeds(p, q, target, s) {
                            Verdict::Holds
                        } else {
                            Verdict::Fails
                        };
                        (v, format!("{x} -> L^({target},{s}) via ‖f*(t^(1/n'))‖_Z"))
                    }
                    _ => (Verdict::Unknown, "needs Lorentz-scale X and Z".into()),
                }
            }
            Embedding::IntoL1Target { x1, x2, n } => {
                if *n == 2 {
                    return (Verdict::Holds, "always true for n = 2".into());
                }
                let a = conjugate(*n as f64 - 1.0);
                match (x1.lorentz_indices(), x2.lorentz_indices()) {
                    (Some((p, q)), Some((p2, q2))) => {
                        let (po, qo) = (a * p, q);
                        let v = if lorentz_scale_embeds(po, qo, p2, q2) {
                            Verdict::Holds
                        } else {
                            Verdict::Fails
                        };
                        (v, format!("L^({po},{qo}) -> {x2}"))
                    }
                    _ => (Verdict::Unknown, "needs Lorentz-scale X1 and X2".into()),
                }
            }
        }
    }

    fn dim(&self) -> Option<usize> {
        match self {
            Embedding::IntoRi { n, .. } | Embedding::IntoL1Target { n, .. } => Some(*n),
            _ => None,
        }
    }

    /// Norm of `f` in the domain space.
    pub fn source_norm(&self, f: &GridFn) -> Result<f64> {
        self.check_grid(f)?;
        let linf = RiSpaceSpec::linf();
        let spec = match self {
            Embedding::LeftLinf { y1, .. } => MixedSpaceSpec::symmetric(linf, *y1),
            Embedding::RightLinf { x1, .. } => MixedSpaceSpec::symmetric(*x1, linf),
            Embedding::RightFixed { x1, y, .. } => MixedSpaceSpec::symmetric(*x1, *y),
            Embedding::IntoRi { x, .. } => MixedSpaceSpec::symmetric(*x, linf),
            Embedding::IntoL1Target { x1, .. } => MixedSpaceSpec::symmetric(*x1, linf),
        };
        mixed_norm(f, &spec)
    }

    /// Norm of `f` in the target space.
    pub fn target_norm(&self, f: &GridFn) -> Result<f64> {
        self.check_grid(f)?;
        let spec = match self {
            Embedding::LeftLinf { x2, y2, .. } => MixedSpaceSpec::symmetric(*x2, *y2),
            Embedding::RightLinf { x2, .. } => MixedSpaceSpec::symmetric(*x2, RiSpaceSpec::linf()),
            Embedding::RightFixed { x2, y, .. } => MixedSpaceSpec::symmetric(*x2, *y),
            Embedding::IntoRi { z, .. } => return Ok(ri_norm(z, &f.rearrangement())),
            Embedding::IntoL1Target { x2, .. } => MixedSpaceSpec::symmetric(*x2, RiSpaceSpec::l1()),
        };
        mixed_norm(f, &spec)
    }

    fn check_grid(&self, f: &GridFn) -> Result<()> {
        match self.dim() {
            Some(n) if n != f.dim() => Err(Error::Domain(format!(
                "embedding is stated for n = {n}, grid has n = {}",
                f.dim()
            ))),
            _ => Ok(()),
        }
    }
}

/// Extremal constructions from the necessity proofs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// `g*(2|Σ(x_i - ½)|)` on the cube `|x_i - ½| < r`.
    Diagonal,
    /// `f*(κ|x - c|^{n-1})` on the ball of radius `r`; `κ = ω_{n-1}` unless overridden.
    RadialSurface,
    /// `f*(ω_n |x - c|^n)` on the ball of radius `r`.
    RadialVolume,
    /// `f*(ω_{n-1}|x̂_n - ĉ|^{n-1})` on a cylinder along the last axis.
    Cylinder,
    /// `∫_{ω_{n-1}|x|^{n-1}}^{ω_{n-1}r^{n-1}} f*(t) / (t φ_Y(2(t/ω_{n-1})^{1/(n-1)})) dt`.
    Integral,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WitnessKind::Diagonal => "diagonal",
            WitnessKind::RadialSurface => "radial_surface",
            WitnessKind::RadialVolume => "radial_volume",
            WitnessKind::Cylinder => "cylinder",
            WitnessKind::Integral => "integral",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSpec {
    pub kind: WitnessKind,
    pub profile: StepFn,
    pub n: usize,
    pub cells: usize,
    pub r: f64,
    /// `κ` for [`WitnessKind::RadialSurface`]; `ω_n^{1/n'}` gives the
    /// construction used for embeddings into r.i. spaces.
    pub coefficient: Option<f64>,
    /// The section space `Y` for [`WitnessKind::Integral`].
    pub y: Option<RiSpaceSpec>,
}

impl WitnessSpec {
    pub fn new(kind: WitnessKind, profile: StepFn, n: usize, cells: usize, r: f64) -> Self {
        Self {
            kind,
            profile,
            n,
            cells,
            r,
            coefficient: None,
            y: None,
        }
    }

    fn surface_coefficient(&self) -> f64 {
        self.coefficient.unwrap_or_else(|| omega(self.n - 1))
    }

    /// Largest admissible `λ_g(0)` for the construction to fit.
    pub fn support_limit(&self) -> f64 {
        let n = self.n as f64;
        match self.kind {
            WitnessKind::Diagonal => 2.0 * self.r / n,
            WitnessKind::RadialSurface => self.surface_coefficient() * self.r.powf(n - 1.0),
            WitnessKind::RadialVolume => omega(self.n) * self.r.powf(n),
            WitnessKind::Cylinder | WitnessKind::Integral => omega(self.n - 1) * self.r.powf(n - 1.0),
        }
    }

    fn validate(&self) -> Result<StepFn> {
        check_dim(self.n)?;
        if !(self.r > 0.0 && self.r <= 0.5) {
            return Err(Error::Precondition(format!("radius must lie in (0, 1/2], got {}", self.r)));
        }
        let fstar = self.profile.rearrangement();
        let support = fstar.support_measure();
        let limit = self.support_limit();
        if support > limit * (1.0 + 1e-12) {
            let bound = match self.kind {
                WitnessKind::Diagonal => "2r/n",
                WitnessKind::RadialSurface => "κ r^(n-1)",
                WitnessKind::RadialVolume => "ω_n r^n",
                _ => "ω_(n-1) r^(n-1)",
            };
            return Err(Error::Precondition(format!(
                "{} witness needs λ_g(0) ≤ {bound} = {limit}, profile support is {support}",
                self.kind
            )));
        }
        if self.kind == WitnessKind::Integral && self.y.is_none() {
            return Err(Error::Precondition("the integral witness needs the section space Y".into()));
        }
        Ok(fstar)
    }
}

/// Samples the construction at cell centers, centered at `(½, …, ½)`.
pub fn witness_generate(spec: &WitnessSpec) -> Result<GridFn> {
    let fstar = spec.validate()?;
    let n = spec.n;
    let nf = n as f64;
    let r = spec.r;
    let h = 1.0 / spec.cells as f64;
    match spec.kind {
        WitnessKind::Diagonal => GridFn::from_fn(n, spec.cells, |x| {
            if x.iter().all(|&xi| (xi - 0.5).abs() < r) {
                let s: f64 = x.iter().map(|&xi| xi - 0.5).sum();
                fstar.eval(2.0 * s.abs())
            } else {
                0.0
            }
        }),
        WitnessKind::RadialSurface => {
            let kappa = spec.surface_coefficient();
            GridFn::from_fn(n, spec.cells, |x| {
                let rho = radius(x);
                if rho < r {
                    fstar.eval(kappa * rho.powf(nf - 1.0))
                } else {
                    0.0
                }
            })
        }
        WitnessKind::RadialVolume => {
            let w = omega(n);
            GridFn::from_fn(n, spec.cells, |x| {
                let rho = radius(x);
                if rho < r {
                    fstar.eval(w * rho.powf(nf))
                } else {
                    0.0
                }
            })
        }
        WitnessKind::Cylinder => {
            let w = omega(n - 1);
            GridFn::from_fn(n, spec.cells, |x| {
                let rho = radius(&x[..n - 1]);
                if rho < r {
                    fstar.eval(w * rho.powf(nf - 1.0))
                } else {
                    0.0
                }
            })
        }
        WitnessKind::Integral => {
            let w = omega(n - 1);
            let phi = fundamental_function(spec.y.as_ref().unwrap());
            let upper = w * r.powf(nf - 1.0);
            GridFn::from_fn(n, spec.cells, |x| {
                let rho = radius(x);
                if rho < r {
                    let lower = w * rho.max(0.25 * h).powf(nf - 1.0);
                    integral_profile(&fstar, phi.coef(), phi.exponent(), w, n, lower, upper)
                } else {
                    0.0
                }
            })
        }
    }
}

fn radius(x: &[f64]) -> f64 {
    x.iter().map(|&xi| (xi - 0.5) * (xi - 0.5)).sum::<f64>().sqrt()
}

/// `∫_a^b f*(t) / (t·c·(2(t/ω)^{1/(n-1)})^e) dt`, exactly per piece.
fn integral_profile(fstar: &StepFn, c: f64, e: f64, w: f64, n: usize, a: f64, b: f64) -> f64 {
    if a >= b || c == 0.0 {
        return 0.0;
    }
    let beta = e / (n as f64 - 1.0);
    let scale = 1.0 / (c * 2f64.powf(e) * w.powf(-beta));
    let mut total = 0.0;
    for (lo, hi, v) in fstar.pieces() {
        let (lo, hi) = (lo.max(a), hi.min(b));
        if lo >= hi || v == 0.0 {
            continue;
        }
        let part = if beta == 0.0 {
            (hi / lo).ln()
        } else {
            (lo.powf(-beta) - hi.powf(-beta)) / beta
        };
        total += v * part;
    }
    total * scale
}

/// Closed-form norms of the ideal (unsampled) radial witnesses.
///
/// Returns `(‖w‖_{R(X,L^∞)}, ‖w‖_Z)`.
pub fn ideal_radial_norms(spec: &WitnessSpec, x: &RiSpaceSpec, z: &RiSpaceSpec) -> Result<(f64, f64)> {
    let fstar = spec.validate()?;
    let n = spec.n;
    let nf = n as f64;
    let np = dim_conjugate(n);
    match spec.kind {
        WitnessKind::RadialSurface => {
            let kappa = spec.surface_coefficient();
            let mixed = nf * ri_norm(x, &dilate(&fstar, omega(n - 1) / kappa)?);
            let target = subst_norm(z, &dilate(&fstar, omega(n).powf(1.0 / np) / kappa)?, 1.0 / np)?;
            Ok((mixed, target))
        }
        WitnessKind::RadialVolume => {
            let c = omega(n) / omega(n - 1).powf(np);
            let mixed = nf * subst_norm(x, &dilate(&fstar, 1.0 / c)?, np)?;
            Ok((mixed, ri_norm(z, &fstar)))
        }
        _ => Err(Error::Unsupported(format!(
            "closed-form norms are available for radial witnesses only, not {}",
            spec.kind
        ))),
    }
}

/// `(‖f‖_{L^{n',1}}, ‖f‖_{R(L¹,L^∞)}, ratio)`; the ratio never exceeds `n'`.
pub fn fournier_check(f: &GridFn) -> Result<(f64, f64, f64)> {
    check_dim(f.dim())?;
    let np = dim_conjugate(f.dim());
    let lorentz = ri_norm(&RiSpaceSpec::lorentz(np, 1.0)?, &f.rearrangement());
    let mixed = mixed_norm(f, &MixedSpaceSpec::symmetric(RiSpaceSpec::l1(), RiSpaceSpec::linf()))?;
    let ratio = if mixed > 0.0 { lorentz / mixed } else { 0.0 };
    Ok((lorentz, mixed, ratio))
}

/// `‖f‖_{R(X,L¹)}` against `‖f‖_{R(L¹,X)}` for `n = 2`; the first is at most
/// twice the second.
pub fn fubini_check(f: &GridFn, x: &RiSpaceSpec) -> Result<Check> {
    if f.dim() != 2 {
        return Err(Error::Domain(format!("the comparison is established for n = 2, got n = {}", f.dim())));
    }
    let l1 = RiSpaceSpec::l1();
    let lhs = mixed_norm(f, &MixedSpaceSpec::symmetric(*x, l1))?;
    let rhs = mixed_norm(f, &MixedSpaceSpec::symmetric(l1, *x))?;
    Ok(Check { lhs, rhs: 2.0 * rhs })
}

/// One rung of a sweep ladder.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderPoint {
    pub param: f64,
    pub profile: StepFn,
}

/// One evaluated rung.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub param: f64,
    pub source_norm: f64,
    pub target_norm: f64,
    pub ratio: f64,
}

/// Result of testing an embedding on a family of functions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub id: String,
    pub verdict: Verdict,
    pub conditions: String,
    pub measured_constant: Option<f64>,
    pub witness: Option<String>,
    pub trajectory: Vec<SweepPoint>,
    /// What the numbers show, as opposed to what is proved: `diverging` or
    /// `bounded`.
    pub evidence: Option<String>,
}

impl EmbeddingReport {
    pub fn trajectory_increasing(&self) -> bool {
        self.trajectory.windows(2).all(|w| w[1].ratio > w[0].ratio)
    }

    /// Smallest ratio between consecutive rungs.
    pub fn min_growth(&self) -> f64 {
        self.trajectory
            .windows(2)
            .map(|w| w[1].ratio / w[0].ratio)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("param,source_norm,target_norm,ratio\n");
        for p in &self.trajectory {
            out.push_str(&format!(
                "{},{},{},{}\n",
                crate::format::num(p.param),
                crate::format::num(p.source_norm),
                crate::format::num(p.target_norm),
                crate::format::num(p.ratio)
            ));
        }
        out
    }
}

/// Sup of `‖f*(t^{1/n'})‖_Z / ‖f‖_X` over a family, with the analytic verdict.
pub fn embedding_condition_check(
    x: &RiSpaceSpec,
    z: &RiSpaceSpec,
    n: usize,
    family: &[StepFn],
) -> Result<EmbeddingReport> {
    check_dim(n)?;
    if family.is_empty() {
        return Err(Error::Domain("the test family is empty".into()));
    }
    let inv = 1.0 / dim_conjugate(n);
    let mut constant: f64 = 0.0;
    for f in family {
        let source = ri_norm(x, f);
        if source > 0.0 {
            constant = constant.max(subst_norm(z, f, inv)? / source);
        }
    }
    let embedding = Embedding::IntoRi { x: *x, z: *z, n };
    let (verdict, conditions) = embedding.verdict();
    Ok(EmbeddingReport {
        id: embedding.to_string(),
        verdict,
        conditions,
        measured_constant: Some(constant),
        witness: None,
        trajectory: Vec::new(),
        evidence: None,
    })
}

/// `‖g‖_Z <= n·C·‖g‖_{R(X,L^∞)}`, the sufficiency bound for constant `C`.
pub fn fournier_forward_check(g: &GridFn, x: &RiSpaceSpec, z: &RiSpaceSpec, c: f64) -> Result<Check> {
    let lhs = ri_norm(z, &g.rearrangement());
    let source = mixed_norm(g, &MixedSpaceSpec::symmetric(*x, RiSpaceSpec::linf()))?;
    Ok(Check {
        lhs,
        rhs: g.dim() as f64 * c * source,
    })
}

/// How a sweep evaluates the witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SweepMode {
    /// Closed-form norms (or proven bounds) of the ideal construction.
    Ideal,
    /// Norms of the construction sampled on a grid.
    Grid { cells: usize },
}

/// Ratios `target/source` along a ladder of witness profiles.
pub fn sharpness_sweep(
    embedding: &Embedding,
    kind: WitnessKind,
    ladder: &[LadderPoint],
    n: usize,
    r: f64,
    mode: SweepMode,
) -> Result<EmbeddingReport> {
    check_dim(n)?;
    if let Some(m) = embedding.dim() {
        if m != n {
            return Err(Error::Domain(format!("embedding is stated for n = {m}, sweep uses n = {n}")));
        }
    }
    let (verdict, conditions) = embedding.verdict();
    let trajectory = ladder
        .par_iter()
        .map(|point| sweep_point(embedding, kind, point, n, r, mode))
        .collect::<Result<Vec<_>>>()?;
    let mut report = EmbeddingReport {
        id: embedding.to_string(),
        verdict,
        conditions,
        measured_constant: None,
        witness: Some(format!("{kind}/{}", match mode {
            SweepMode::Ideal => "ideal".to_string(),
            SweepMode::Grid { cells } => format!("grid{cells}"),
        })),
        trajectory,
        evidence: None,
    };
    let increasing = report.trajectory.len() >= 2 && report.trajectory_increasing();
    report.evidence = Some(if increasing { "diverging" } else { "bounded" }.to_string());
    if verdict != Verdict::Fails {
        report.measured_constant = Some(report.trajectory.iter().map(|p| p.ratio).fold(0.0, f64::max));
    }
    Ok(report)
}

fn sweep_point(
    embedding: &Embedding,
    kind: WitnessKind,
    point: &LadderPoint,
    n: usize,
    r: f64,
    mode: SweepMode,
) -> Result<SweepPoint> {
    let mut spec = WitnessSpec::new(kind, point.profile.clone(), n, 1, r);
    if let (WitnessKind::RadialSurface, Embedding::IntoRi { .. }) = (kind, embedding) {
        spec.coefficient = Some(omega(n).powf(1.0 / dim_conjugate(n)));
    }
    if let (WitnessKind::Integral, Embedding::RightFixed { y, .. }) = (kind, embedding) {
        spec.y = Some(*y);
    }
    let (source, target) = match mode {
        SweepMode::Grid { cells } => {
            spec.cells = cells;
            let g = witness_generate(&spec)?;
            (embedding.source_norm(&g)?, embedding.target_norm(&g)?)
        }
        SweepMode::Ideal => ideal_pair(embedding, &spec)?,
    };
    let ratio = if source > 0.0 { target / source } else { 0.0 };
    Ok(SweepPoint {
        param: point.param,
        source_norm: source,
        target_norm: target,
        ratio,
    })
}

/// Source upper bound and target lower bound (or exact values) for the
/// ideal construction.
fn ideal_pair(embedding: &Embedding, spec: &WitnessSpec) -> Result<(f64, f64)> {
    let fstar = spec.validate()?;
    let nf = spec.n as f64;
    match (embedding, spec.kind) {
        (Embedding::LeftLinf { y1, x2, y2 }, WitnessKind::Diagonal) => {
            // Every section has rearrangement at most g*, and exactly g* over
            // a cube of side r/n.
            let source = nf * ri_norm(y1, &fstar);
            let side = (spec.r / nf).powf(nf - 1.0);
            let target = nf * ri_norm(y2, &fstar) * fundamental_function(x2).eval(side);
            Ok((source, target))
        }
        (Embedding::RightLinf { x1, x2 }, WitnessKind::RadialSurface) => {
            Ok((nf * ri_norm(x1, &fstar), nf * ri_norm(x2, &fstar)))
        }
        (Embedding::IntoRi { x, z, .. }, WitnessKind::RadialSurface | WitnessKind::RadialVolume) => {
            ideal_radial_norms(spec, x, z)
        }
        _ => Err(Error::Unsupported(format!(
            "no closed form for {} witnesses on {embedding}; use grid mode",
            spec.kind
        ))),
    }
}

/// Dyadic step approximations of `t^{-1/p}` with `J` pieces: the value
/// `2^{(j+1)/p}` on `[2^{-j-1}, 2^{-j})` and the cap `2^{J/p}` below
/// `2^{-J}`, compressed into `(0, support)`.
pub fn power_profile(p: f64, pieces: u32, support: f64) -> Result<StepFn> {
    let mut ends = Vec::with_capacity(pieces as usize + 1);
    let mut values = Vec::with_capacity(pieces as usize + 1);
    ends.push(2f64.powi(-(pieces as i32)));
    values.push(2f64.powf(pieces as f64 / p));
    for j in (0..pieces).rev() {
        ends.push(2f64.powi(-(j as i32)));
        values.push(2f64.powf((j as f64 + 1.0) / p));
    }
    let base = StepFn::new(1.0, ends, values)?;
    dilate(&base, support)
}

/// `power_profile` for each piece count.
pub fn power_ladder(p: f64, piece_counts: &[u32], support: f64) -> Result<Vec<LadderPoint>> {
    piece_counts
        .iter()
        .map(|&j| {
            Ok(LadderPoint {
                param: j as f64,
                profile: power_profile(p, j, support)?,
            })
        })
        .collect()
}

/// `χ_(0, a_0 2^{-j})` for `j = 0..steps`.
pub fn indicator_ladder(a0: f64, steps: u32) -> Result<Vec<LadderPoint>> {
    (0..=steps)
        .map(|j| {
            let a = a0 * 2f64.powi(-(j as i32));
            Ok(LadderPoint {
                param: a,
                profile: StepFn::indicator(1.0, a)?,
            })
        })
        .collect()
}
