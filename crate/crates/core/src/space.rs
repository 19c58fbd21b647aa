//! Supported rearrangement-invariant spaces and exact norm evaluation.
//!
//! Every norm acts on the decreasing rearrangement. Lorentz norms use the
//! normalization `‖f‖_{p,q} = (∫ (t^{1/p} f*(t))^q dt/t)^{1/q}`, which on a
//! step function is a finite sum of closed-form power differences.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::step::StepFn;

/// Conjugate exponent `p' = p/(p-1)`, with `1' = ∞` and `∞' = 1`.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `φ(t) = c·t^e` with `c >= 0` and `e ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalFn {
    coef: f64,
    exponent: f64,
}

impl FundamentalFn {
    pub fn new(coef: f64, exponent: f64) -> Result<Self> {
        if !(coef.is_finite() && coef >= 0.0) {
            return Err(Error::InvalidSpace(format!("coefficient must be finite and >= 0, got {coef}")));
        }
        if !(0.0..=1.0).contains(&exponent) {
            return Err(Error::InvalidSpace(format!(
                "exponent must lie in [0,1] so that φ is nondecreasing and concave, got {exponent}"
            )));
        }
        Ok(Self { coef, exponent })
    }

    pub fn coef(&self) -> f64 {
        self.coef
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// `φ(t)` for `t > 0`; `φ(0+)` at `t <= 0`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            self.at_zero()
        } else if self.exponent == 0.0 {
            self.coef
        } else if self.exponent == 1.0 {
            self.coef * t
        } else {
            self.coef * t.powf(self.exponent)
        }
    }

    /// `φ(0+)`: positive only for the constant function, i.e. for `L^∞`.
    pub fn at_zero(&self) -> f64 {
        if self.exponent == 0.0 {
            self.coef
        } else {
            0.0
        }
    }
}

impl fmt::Display for FundamentalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coef != 1.0 {
            write!(f, "{}*", self.coef)?;
        }
        match self.exponent {
            0.0 => f.write_str("const"),
            1.0 => f.write_str("id"),
            0.5 => f.write_str("sqrt"),
            e => write!(f, "pow:{e}"),
        }
    }
}

impl FromStr for FundamentalFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (coef, form) = match s.split_once('*') {
            Some((c, rest)) => (parse_real(c)?, rest),
            None => (1.0, s),
        };
        let exponent = match form.trim() {
            "const" => 0.0,
            "id" => 1.0,
            "sqrt" => 0.5,
            other => match other.strip_prefix("pow:") {
                Some(e) => parse_real(e)?,
                None => {
                    return Err(Error::Parse(format!(
                        "unknown fundamental function '{other}' (expected sqrt, id, const or pow:E)"
                    )))
                }
            },
        };
        Self::new(coef, exponent)
    }
}

/// The shape of a supported space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceKind {
    L1,
    Linf,
    Lebesgue { p: f64 },
    Lorentz { p: f64, q: f64 },
    Lambda(FundamentalFn),
}

/// A validated descriptor of one supported r.i. space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiSpaceSpec {
    kind: SpaceKind,
}

impl RiSpaceSpec {
    pub fn l1() -> Self {
        Self { kind: SpaceKind::L1 }
    }

    pub fn linf() -> Self {
        Self { kind: SpaceKind::Linf }
    }

    /// `L^p` for `1 < p < ∞`.
    pub fn lebesgue(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidSpace(format!(
                "L^p needs 1 < p < ∞, got p = {p} (use L1 or Linf for the endpoints)"
            )));
        }
        Ok(Self { kind: SpaceKind::Lebesgue { p } })
    }

    /// `L^{p,q}` for `1 < p < ∞`, `1 <= q <= ∞`.
    pub fn lorentz(p: f64, q: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidSpace(format!(
                "L^{{p,q}} needs 1 < p < ∞, got p = {p}; L^{{1,q}} with q ≠ 1 is not normable"
            )));
        }
        if q.is_nan() || q < 1.0 {
            return Err(Error::InvalidSpace(format!("L^{{p,q}} needs 1 <= q <= ∞, got q = {q}")));
        }
        Ok(Self { kind: SpaceKind::Lorentz { p, q } })
    }

    pub fn lambda(phi: FundamentalFn) -> Self {
        Self { kind: SpaceKind::Lambda(phi) }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn is_linf(&self) -> bool {
        matches!(self.kind, SpaceKind::Linf)
    }

    /// `(p, q)` for the members of the Lorentz scale; `L^p = L^{p,p}`,
    /// `L¹ = L^{1,1}`, `L^∞ = L^{∞,∞}`.
    pub fn lorentz_indices(&self) -> Option<(f64, f64)> {
        match self.kind {
            SpaceKind::L1 => Some((1.0, 1.0)),
            SpaceKind::Linf => Some((f64::INFINITY, f64::INFINITY)),
            SpaceKind::Lebesgue { p } => Some((p, p)),
            SpaceKind::Lorentz { p, q } => Some((p, q)),
            SpaceKind::Lambda(_) => None,
        }
    }

    /// True for `L^{p,∞}`.
    pub fn is_weak_type(&self) -> bool {
        matches!(self.kind, SpaceKind::Lorentz { q, .. } if q.is_infinite())
    }

    /// True when the Lorentz functional satisfies the triangle inequality as
    /// written (`q <= p`); `L^{p,q}` with `q > p` is only a quasi-norm.
    pub fn is_normed_as_written(&self) -> bool {
        match self.kind {
            SpaceKind::Lorentz { p, q } => q <= p,
            _ => true,
        }
    }
}

impl fmt::Display for RiSpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SpaceKind::L1 => f.write_str("L1"),
            SpaceKind::Linf => f.write_str("Linf"),
            SpaceKind::Lebesgue { p } => write!(f, "Lp:{p}"),
            SpaceKind::Lorentz { p, q } if q.is_infinite() => write!(f, "Lpq:{p},inf"),
            SpaceKind::Lorentz { p, q } => write!(f, "Lpq:{p},{q}"),
            SpaceKind::Lambda(phi) => write!(f, "Lambda:{phi}"),
        }
    }
}

fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    s.parse::<f64>()
        .map_err(|_| Error::Parse(format!("'{s}' is not a number")))
}

impl FromStr for RiSpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "L1" => return Ok(Self::l1()),
            "Linf" => return Ok(Self::linf()),
            _ => {}
        }
        let (head, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown space '{s}'")))?;
        match head {
            "Lp" => Self::lebesgue(parse_real(args)?),
            "Lpq" => {
                let (p, q) = args
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("expected Lpq:P,Q, got '{s}'")))?;
                Self::lorentz(parse_real(p)?, parse_real(q)?)
            }
            "Lambda" => Ok(Self::lambda(args.parse()?)),
            _ => Err(Error::Parse(format!(
                "unknown space '{s}' (expected L1, Linf, Lp:P, Lpq:P,Q or Lambda:PHI)"
            ))),
        }
    }
}

impl Serialize for RiSpaceSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RiSpaceSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `‖f‖_X`, evaluated on the rearrangement of `f`.
pub fn ri_norm(x: &RiSpaceSpec, f: &StepFn) -> f64 {
    let fstar = f.rearrangement();
    match x.kind {
        SpaceKind::L1 => fstar.integral(),
        SpaceKind::Linf => fstar.max(),
        SpaceKind::Lebesgue { p } => lorentz_norm(&fstar, p, p),
        SpaceKind::Lorentz { p, q } => lorentz_norm(&fstar, p, q),
        SpaceKind::Lambda(phi) => lambda_norm(&phi, &fstar),
    }
}

/// Closed-form `‖f*‖_{p,q}` for a nonincreasing step function.
fn lorentz_norm(fstar: &StepFn, p: f64, q: f64) -> f64 {
    let top = fstar.max();
    if top == 0.0 {
        return 0.0;
    }
    if q.is_infinite() {
        let inv = 1.0 / p;
        return fstar
            .pieces()
            .map(|(_, b, v)| v * b.powf(inv))
            .fold(0.0, f64::max);
    }
    // Values are normalized by the maximum so v^q neither overflows nor
    // underflows for large q.
    let r = q / p;
    let sum: f64 = fstar
        .pieces()
        .filter(|&(_, _, v)| v > 0.0)
        .map(|(a, b, v)| (v / top).powf(q) * (b.powf(r) - a.powf(r)))
        .sum();
    top * ((p / q) * sum).powf(1.0 / q)
}

/// `‖f‖_{Λ_φ} = φ(0+)·f*(0+) + Σ v_i (φ(t_i) - φ(t_{i-1}))`.
pub fn lambda_norm(phi: &FundamentalFn, f: &StepFn) -> f64 {
    let fstar = f.rearrangement();
    let mut total = fstar.values()[0] * phi.at_zero();
    for (a, b, v) in fstar.pieces() {
        if v > 0.0 {
            total += v * (phi.eval(b) - phi.eval(a));
        }
    }
    total
}

/// `φ_X(t) = ‖χ_(0,t)‖_X` in closed form.
pub fn fundamental_function(x: &RiSpaceSpec) -> FundamentalFn {
    let (coef, exponent) = match x.kind {
        SpaceKind::L1 => (1.0, 1.0),
        SpaceKind::Linf => (1.0, 0.0),
        SpaceKind::Lebesgue { p } => (1.0, 1.0 / p),
        SpaceKind::Lorentz { p, q } if q.is_infinite() => (1.0, 1.0 / p),
        SpaceKind::Lorentz { p, q } => ((p / q).powf(1.0 / q), 1.0 / p),
        SpaceKind::Lambda(phi) => return phi,
    };
    FundamentalFn { coef, exponent }
}

/// Köthe dual `X'` of a whitelisted space.
pub fn associate_space(x: &RiSpaceSpec) -> Result<RiSpaceSpec> {
    match x.kind {
        SpaceKind::L1 => Ok(RiSpaceSpec::linf()),
        SpaceKind::Linf => Ok(RiSpaceSpec::l1()),
        SpaceKind::Lebesgue { p } => RiSpaceSpec::lebesgue(conjugate(p)),
        SpaceKind::Lorentz { p, q } => RiSpaceSpec::lorentz(conjugate(p), conjugate(q)),
        SpaceKind::Lambda(_) => Err(Error::Unsupported(
            "the associate of a Λ_φ space is a Marcinkiewicz space, which is outside the supported family".into(),
        )),
    }
}

/// Constant `C` in `∫ f g <= C ‖f‖_X ‖g‖_{X'}` for the pair `(X, X')`.
///
/// With the `dt/t` normalization, Hölder's inequality gives `C = 1` across
/// the whole Lorentz scale.
pub fn duality_constant(x: &RiSpaceSpec) -> Result<f64> {
    associate_space(x).map(|_| 1.0)
}

/// Constant `C` in `∫ f <= C ‖f‖_X` on `(0, length)`.
///
/// For the Lorentz scale this is `φ_{X'}(length)`. For `Λ_φ` with concave
/// `φ` it is `length/φ(length)`, by Chebyshev's inequality for the two
/// nonincreasing functions `f*` and `φ'`.
pub fn integral_bound_constant(x: &RiSpaceSpec, length: f64) -> Result<f64> {
    match x.kind {
        SpaceKind::Lambda(phi) => {
            let at_end = phi.eval(length);
            if at_end <= 0.0 {
                return Err(Error::Domain("φ vanishes on the whole domain".into()));
            }
            Ok(length / at_end)
        }
        _ => Ok(fundamental_function(&associate_space(x)?).eval(length)),
    }
}

/// Analytic `(lower, upper)` Boyd indices.
pub fn boyd_indices(x: &RiSpaceSpec) -> Result<(f64, f64)> {
    match x.kind {
        SpaceKind::L1 => Ok((1.0, 1.0)),
        SpaceKind::Linf => Ok((0.0, 0.0)),
        SpaceKind::Lebesgue { p } | SpaceKind::Lorentz { p, .. } => Ok((1.0 / p, 1.0 / p)),
        SpaceKind::Lambda(_) => Err(Error::Unsupported(
            "Boyd indices are tabulated only for L1, Linf, L^p and L^{p,q}".into(),
        )),
    }
}

/// Dilation `E_t f(s) = f(s/t)` on `(0, L)`, zero past `min(L, tL)`.
pub fn dilate(f: &StepFn, t: f64) -> Result<StepFn> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("dilation factor must be positive and finite, got {t}")));
    }
    if t == 1.0 {
        return Ok(f.clone());
    }
    let length = f.length();
    let mut ends = Vec::with_capacity(f.piece_count() + 1);
    let mut values = Vec::with_capacity(f.piece_count() + 1);
    for (a, b, v) in f.pieces() {
        let start = a * t;
        if start >= length {
            break;
        }
        ends.push((b * t).min(length));
        values.push(v);
    }
    if *ends.last().unwrap() < length {
        ends.push(length);
        values.push(0.0);
    } else {
        *ends.last_mut().unwrap() = length;
    }
    Ok(StepFn::canonical(length, ends, values))
}

/// `‖t ↦ f*(t^a)‖_X` on `(0,1)`.
pub fn subst_norm(x: &RiSpaceSpec, f: &StepFn, a: f64) -> Result<f64> {
    let g = f.rearrangement().compose_power(a)?;
    Ok(ri_norm(x, &g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(a: f64) -> StepFn {
        StepFn::indicator(1.0, a).unwrap()
    }

    fn sp(s: &str) -> RiSpaceSpec {
        s.parse().unwrap()
    }

    #[test]
    fn lorentz_indicator_closed_form() {
        let v = ri_norm(&sp("Lpq:2,1"), &chi(0.5));
        assert!((v - 2.0 * 0.5f64.sqrt()).abs() < 1e-14);
        assert_eq!(ri_norm(&sp("Linf"), &chi(0.3)), 1.0);
        assert_eq!(ri_norm(&sp("L1"), &chi(0.3)), 0.3);
    }

    #[test]
    fn lebesgue_matches_power_integral() {
        let f = StepFn::from_cells(&[3.0, 1.0, 0.0, 2.0]).unwrap();
        let expected = ((27.0 + 1.0 + 8.0) / 4.0f64).powf(1.0 / 3.0);
        assert!((ri_norm(&sp("Lp:3"), &f) - expected).abs() < 1e-14);
        assert!((ri_norm(&sp("Lpq:3,3"), &f) - expected).abs() < 1e-14);
    }

    #[test]
    fn weak_type_is_supremum() {
        let f = StepFn::new(1.0, vec![0.25, 1.0], vec![4.0, 1.0]).unwrap();
        // max(4·(1/4)^{1/2}, 1·1) = 2
        assert!((ri_norm(&sp("Lpq:2,inf"), &f) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn fundamental_functions() {
        assert_eq!(fundamental_function(&sp("L1")).eval(0.3), 0.3);
        let phi = fundamental_function(&sp("Lpq:2,1"));
        assert!((phi.eval(0.25) - 1.0).abs() < 1e-15);
        let inf = fundamental_function(&sp("Linf"));
        assert_eq!(inf.eval(0.7), 1.0);
        assert_eq!(inf.at_zero(), 1.0);
        assert_eq!(fundamental_function(&sp("Lp:2")).at_zero(), 0.0);
        for s in ["L1", "Linf", "Lp:3", "Lpq:2,1", "Lpq:3,inf", "Lpq:1.5,4", "Lambda:sqrt"] {
            let x = sp(s);
            let phi = fundamental_function(&x);
            for t in [0.01, 0.2, 0.5, 0.99, 1.0] {
                assert!((phi.eval(t) - ri_norm(&x, &chi(t))).abs() < 1e-12, "{s} at {t}");
            }
        }
    }

    #[test]
    fn associates_and_boyd() {
        assert_eq!(associate_space(&sp("L1")).unwrap(), sp("Linf"));
        assert_eq!(associate_space(&sp("Lpq:2,1")).unwrap(), sp("Lpq:2,inf"));
        assert_eq!(associate_space(&sp("Lp:4")).unwrap(), RiSpaceSpec::lebesgue(4.0 / 3.0).unwrap());
        assert!(matches!(associate_space(&sp("Lambda:sqrt")), Err(Error::Unsupported(_))));
        assert_eq!(boyd_indices(&sp("Lpq:4,1")).unwrap(), (0.25, 0.25));
        assert_eq!(boyd_indices(&sp("Linf")).unwrap(), (0.0, 0.0));
        assert_eq!(boyd_indices(&sp("L1")).unwrap(), (1.0, 1.0));
        assert!(boyd_indices(&sp("Lambda:id")).is_err());
    }

    #[test]
    fn lambda_examples() {
        let sqrt: FundamentalFn = "sqrt".parse().unwrap();
        assert!((lambda_norm(&sqrt, &chi(0.25)) - 0.5).abs() < 1e-15);
        let f = StepFn::from_cells(&[3.0, 1.0, 0.5, 2.0]).unwrap();
        let id: FundamentalFn = "id".parse().unwrap();
        assert!((lambda_norm(&id, &f) - f.integral()).abs() < 1e-15);
        let one: FundamentalFn = "const".parse().unwrap();
        assert_eq!(lambda_norm(&one, &f), 3.0);
    }

    #[test]
    fn dilation_examples() {
        let f = chi(0.5);
        assert_eq!(dilate(&f, 1.0).unwrap(), f);
        assert_eq!(dilate(&f, 0.5).unwrap(), chi(0.25));
        assert_eq!(dilate(&f, 4.0).unwrap(), chi(1.0));
        assert!(matches!(dilate(&f, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn substitution_examples() {
        let x = sp("Lpq:2,1");
        assert!((subst_norm(&x, &chi(0.25), 0.5).unwrap() - 0.5).abs() < 1e-15);
        let f = StepFn::new(1.0, vec![0.1, 0.4, 1.0], vec![5.0, 2.0, 1.0]).unwrap();
        assert_eq!(subst_norm(&x, &f, 1.0).unwrap(), ri_norm(&x, &f));
        // n = 2: a = 1/2, r = 4, s = 1 → 2·‖f‖_{L^{2,1}}
        let lhs = subst_norm(&sp("Lpq:4,1"), &f, 0.5).unwrap();
        let rhs = 2.0 * ri_norm(&sp("Lpq:2,1"), &f);
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn parser_round_trip_and_rejections() {
        for s in ["L1", "Linf", "Lp:2", "Lpq:2,1", "Lpq:3,inf", "Lambda:sqrt", "Lambda:2*pow:0.25"] {
            assert_eq!(sp(s).to_string(), s);
        }
        for bad in ["Lp:1", "Lpq:1,2", "Lpq:2,0.5", "Lpq:inf,1", "Lambda:pow:2", "L3", "Lpq:2"] {
            assert!(bad.parse::<RiSpaceSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn integral_bound_constants() {
        assert_eq!(integral_bound_constant(&sp("L1"), 1.0).unwrap(), 1.0);
        assert_eq!(integral_bound_constant(&sp("Linf"), 1.0).unwrap(), 1.0);
        assert_eq!(integral_bound_constant(&sp("Lpq:2,inf"), 1.0).unwrap(), 2.0);
        assert_eq!(integral_bound_constant(&sp("Lambda:sqrt"), 1.0).unwrap(), 1.0);
    }
}
