//! Grid functions on the unit cube and Benedek–Panzone mixed norms.
//!
//! A [`GridFn`] is constant on the half-open cells of a uniform grid with `N`
//! cells per axis. Axes are numbered from 0 and values are stored row-major
//! with axis 0 slowest. A section through the grid along axis `k` is a
//! [`StepFn`] on `(0,1)`; `ψ_k(f, Y)` collects the `Y`-norms of all sections
//! into a grid function of one dimension less.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{ri_norm, RiSpaceSpec};
use crate::step::StepFn;

/// Largest supported dimension.
pub const MAX_DIM: usize = 4;

/// Largest number of cells a grid may hold.
pub const MAX_CELLS: usize = 1 << 24;

/// Nonnegative function constant on the cells of a uniform grid over `(0,1)^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridFnFile", into = "GridFnFile")]
pub struct GridFn {
    n: usize,
    cells: usize,
    values: Vec<f64>,
}

/// On-disk JSON layout: `{"n": 2, "cells_per_axis": 4, "values": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridFnFile {
    pub n: usize,
    pub cells_per_axis: usize,
    pub values: Vec<f64>,
}

impl TryFrom<GridFnFile> for GridFn {
    type Error = Error;

    fn try_from(file: GridFnFile) -> Result<Self> {
        GridFn::new(file.n, file.cells_per_axis, file.values)
    }
}

impl From<GridFn> for GridFnFile {
    fn from(g: GridFn) -> Self {
        GridFnFile {
            n: g.n,
            cells_per_axis: g.cells,
            values: g.values,
        }
    }
}

fn check_shape(n: usize, cells: usize) -> Result<usize> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::InvalidGrid(format!("dimension must be in 1..={MAX_DIM}, got {n}")));
    }
    if cells == 0 {
        return Err(Error::InvalidGrid("at least one cell per axis is required".into()));
    }
    let mut total: usize = 1;
    for _ in 0..n {
        total = total
            .checked_mul(cells)
            .filter(|&t| t <= MAX_CELLS)
            .ok_or_else(|| Error::InvalidGrid(format!("{cells}^{n} cells exceeds the limit of {MAX_CELLS}")))?;
    }
    Ok(total)
}

impl GridFn {
    pub fn new(n: usize, cells: usize, values: Vec<f64>) -> Result<Self> {
        let total = check_shape(n, cells)?;
        if values.len() != total {
            return Err(Error::InvalidGrid(format!(
                "expected {total} values for n = {n}, N = {cells}, got {}",
                values.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidGrid(format!("value {i} is {v}; values must be finite and >= 0")));
        }
        Ok(Self { n, cells, values })
    }

    pub fn constant(n: usize, cells: usize, c: f64) -> Result<Self> {
        let total = check_shape(n, cells)?;
        Self::new(n, cells, vec![c; total])
    }

    pub fn zero(n: usize, cells: usize) -> Result<Self> {
        Self::constant(n, cells, 0.0)
    }

    /// Samples `f` at the cell centers.
    pub fn from_fn(n: usize, cells: usize, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        let total = check_shape(n, cells)?;
        let h = 1.0 / cells as f64;
        let mut idx = vec![0usize; n];
        let mut x = vec![0.0; n];
        let mut values = Vec::with_capacity(total);
        for flat in 0..total {
            unflatten(flat, cells, &mut idx);
            for (xi, &i) in x.iter_mut().zip(&idx) {
                *xi = (i as f64 + 0.5) * h;
            }
            values.push(f(&x));
        }
        Self::new(n, cells, values)
    }

    /// Indicator of the axis-aligned box `∏ [lo_k, hi_k)` in cell indices.
    pub fn indicator_box(n: usize, cells: usize, lo: &[usize], hi: &[usize]) -> Result<Self> {
        let set = CellSet::axis_box(n, cells, lo, hi)?;
        Ok(set.indicator())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Measure of a single cell, `h^n`.
    pub fn cell_measure(&self) -> f64 {
        1.0 / self.values.len() as f64
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_measure()
    }

    /// Value at the multi-index `idx`.
    pub fn at(&self, idx: &[usize]) -> Result<f64> {
        Ok(self.values[self.flat_index(idx)?])
    }

    fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.n {
            return Err(Error::Domain(format!("expected {} indices, got {}", self.n, idx.len())));
        }
        let mut flat = 0;
        for (axis, &i) in idx.iter().enumerate() {
            if i >= self.cells {
                return Err(Error::Domain(format!(
                    "index {i} on axis {axis} out of range 0..{}",
                    self.cells
                )));
            }
            flat = flat * self.cells + i;
        }
        Ok(flat)
    }

    fn same_shape(&self, other: &GridFn) -> Result<()> {
        if self.n != other.n || self.cells != other.cells {
            return Err(Error::Domain(format!(
                "grid shapes differ: n = {}, N = {} vs n = {}, N = {}",
                self.n, self.cells, other.n, other.cells
            )));
        }
        Ok(())
    }

    pub(crate) fn map(&self, op: impl Fn(f64) -> f64) -> GridFn {
        GridFn {
            n: self.n,
            cells: self.cells,
            values: self.values.iter().map(|&v| op(v)).collect(),
        }
    }

    fn zip(&self, other: &GridFn, op: impl Fn(f64, f64) -> f64) -> Result<GridFn> {
        self.same_shape(other)?;
        Ok(GridFn {
            n: self.n,
            cells: self.cells,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &GridFn) -> Result<GridFn> {
        self.zip(other, |a, b| a + b)
    }

    /// `self - other`, which must stay nonnegative.
    pub fn sub(&self, other: &GridFn) -> Result<GridFn> {
        let out = self.zip(other, |a, b| a - b)?;
        if out.values.iter().any(|&v| v < 0.0) {
            return Err(Error::Domain("difference of grid functions is negative somewhere".into()));
        }
        Ok(out)
    }

    pub fn scale(&self, c: f64) -> Result<GridFn> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(Error::Domain(format!("scale factor must be finite and >= 0, got {c}")));
        }
        Ok(self.map(|v| v * c))
    }

    /// `(f - c)_+`.
    pub fn excess_over(&self, c: f64) -> GridFn {
        self.map(|v| (v - c).max(0.0))
    }

    /// `min(f, c)`.
    pub fn clamp_to(&self, c: f64) -> GridFn {
        self.map(|v| v.min(c))
    }

    /// `f <= g` in every cell.
    pub fn dominated_by(&self, other: &GridFn) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    /// The same function on a grid with `factor` times as many cells per axis.
    pub fn refine(&self, factor: usize) -> Result<GridFn> {
        if factor == 0 {
            return Err(Error::Domain("refinement factor must be positive".into()));
        }
        let fine = self.cells * factor;
        let total = check_shape(self.n, fine)?;
        let mut idx = vec![0usize; self.n];
        let mut values = Vec::with_capacity(total);
        for flat in 0..total {
            unflatten(flat, fine, &mut idx);
            let coarse = idx.iter().fold(0, |acc, &i| acc * self.cells + i / factor);
            values.push(self.values[coarse]);
        }
        Ok(GridFn {
            n: self.n,
            cells: fine,
            values,
        })
    }

    /// Decreasing rearrangement on `(0,1)`; every cell carries measure `h^n`.
    pub fn rearrangement(&self) -> StepFn {
        let mut sorted = self.values.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let total = sorted.len() as f64;
        let mut ends = Vec::new();
        let mut values = Vec::new();
        let mut i = 0;
        while i < sorted.len() {
            let v = sorted[i];
            let mut j = i;
            while j < sorted.len() && sorted[j] == v {
                j += 1;
            }
            ends.push(if j == sorted.len() { 1.0 } else { j as f64 / total });
            values.push(v);
            i = j;
        }
        StepFn::canonical(1.0, ends, values)
    }

    /// Strides of the axes in the flat layout.
    fn stride(&self, axis: usize) -> usize {
        self.cells.pow((self.n - 1 - axis) as u32)
    }

    fn check_axis(&self, k: usize) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Domain("sections need a grid of dimension at least 2".into()));
        }
        if k >= self.n {
            return Err(Error::Domain(format!("axis {k} out of range 0..{}", self.n)));
        }
        Ok(())
    }

    /// Flat offset of the first cell of the line through `jhat` along `k`.
    fn line_base(&self, k: usize, jhat: &[usize]) -> Result<usize> {
        if jhat.len() != self.n - 1 {
            return Err(Error::Domain(format!(
                "expected {} indices for the remaining axes, got {}",
                self.n - 1,
                jhat.len()
            )));
        }
        let mut base = 0;
        let mut rest = jhat.iter();
        for axis in 0..self.n {
            if axis == k {
                continue;
            }
            let &i = rest.next().unwrap();
            if i >= self.cells {
                return Err(Error::Domain(format!("index {i} out of range 0..{}", self.cells)));
            }
            base += i * self.stride(axis);
        }
        Ok(base)
    }

    fn line(&self, k: usize, base: usize) -> Vec<f64> {
        let stride = self.stride(k);
        (0..self.cells).map(|i| self.values[base + i * stride]).collect()
    }

    /// Flat base offsets of all lines along `k`, ordered row-major in the
    /// remaining axes.
    fn line_bases(&self, k: usize) -> Vec<usize> {
        let count = self.values.len() / self.cells;
        let mut jhat = vec![0usize; self.n - 1];
        (0..count)
            .map(|flat| {
                unflatten(flat, self.cells, &mut jhat);
                self.line_base(k, &jhat).unwrap()
            })
            .collect()
    }

    /// `f(x̂_k, ·)` as a step function on `(0,1)`, with `x_k` reinserted at
    /// position `k`.
    pub fn section(&self, k: usize, jhat: &[usize]) -> Result<StepFn> {
        self.check_axis(k)?;
        let base = self.line_base(k, jhat)?;
        StepFn::from_cells(&self.line(k, base))
    }

    /// `ψ_k(f, Y)(x̂_k) = ‖f(x̂_k, ·)‖_Y` as a grid function of dimension `n-1`.
    pub fn psi(&self, k: usize, y: &RiSpaceSpec) -> Result<GridFn> {
        self.check_axis(k)?;
        let values: Vec<f64> = self
            .line_bases(k)
            .into_par_iter()
            .map(|base| {
                let line = self.line(k, base);
                if y.is_linf() {
                    line.into_iter().fold(0.0, f64::max)
                } else {
                    ri_norm(y, &StepFn::from_cells(&line).expect("grid values are valid"))
                }
            })
            .collect();
        GridFn::new(self.n - 1, self.cells, values)
    }

    /// `‖f‖_{R_k(X,Y)} = ‖ψ_k(f,Y)‖_X`.
    pub fn bp_norm(&self, k: usize, x: &RiSpaceSpec, y: &RiSpaceSpec) -> Result<f64> {
        Ok(ri_norm(x, &self.psi(k, y)?.rearrangement()))
    }

    /// Cells where `f > alpha`.
    pub fn level_set(&self, alpha: f64) -> CellSet {
        CellSet {
            n: self.n,
            cells: self.cells,
            members: self.values.iter().map(|&v| v > alpha).collect(),
        }
    }

    /// Support `{f > 0}`.
    pub fn support(&self) -> CellSet {
        self.level_set(0.0)
    }

    /// Sorted distinct values, including 0.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.push(0.0);
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

/// Splits a flat row-major index into `idx.len()` coordinates.
fn unflatten(mut flat: usize, cells: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % cells;
        flat /= cells;
    }
}

/// Which Benedek–Panzone norms make up a mixed norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixedMode {
    /// `R_k(X,Y)` for one axis.
    Single(usize),
    /// `R(X,Y)`, the sum over all axes.
    Symmetric,
}

/// `R_k(X, Y)` or `R(X, Y)`: `X` acts on `I^{n-1}`, `Y` on the sections.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixedSpaceSpec {
    pub x: RiSpaceSpec,
    pub y: RiSpaceSpec,
    pub mode: MixedMode,
}

impl MixedSpaceSpec {
    pub fn symmetric(x: RiSpaceSpec, y: RiSpaceSpec) -> Self {
        Self {
            x,
            y,
            mode: MixedMode::Symmetric,
        }
    }

    pub fn single(x: RiSpaceSpec, y: RiSpaceSpec, k: usize) -> Self {
        Self {
            x,
            y,
            mode: MixedMode::Single(k),
        }
    }
}

impl fmt::Display for MixedSpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            MixedMode::Single(k) => write!(f, "R_{k}({},{})", self.x, self.y),
            MixedMode::Symmetric => write!(f, "R({},{})", self.x, self.y),
        }
    }
}

/// `‖f‖_{R_k(X,Y)}` or `Σ_k ‖f‖_{R_k(X,Y)}`, summed in axis order.
pub fn mixed_norm(f: &GridFn, spec: &MixedSpaceSpec) -> Result<f64> {
    match spec.mode {
        MixedMode::Single(k) => f.bp_norm(k, &spec.x, &spec.y),
        MixedMode::Symmetric => {
            let terms = (0..f.dim())
                .into_par_iter()
                .map(|k| f.bp_norm(k, &spec.x, &spec.y))
                .collect::<Result<Vec<_>>>()?;
            Ok(terms.iter().sum())
        }
    }
}

/// A set of grid cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSet {
    n: usize,
    cells: usize,
    members: Vec<bool>,
}

impl CellSet {
    pub fn empty(n: usize, cells: usize) -> Result<Self> {
        let total = check_shape(n, cells)?;
        Ok(Self {
            n,
            cells,
            members: vec![false; total],
        })
    }

    pub fn from_members(n: usize, cells: usize, members: Vec<bool>) -> Result<Self> {
        let total = check_shape(n, cells)?;
        if members.len() != total {
            return Err(Error::InvalidGrid(format!("expected {total} membership flags, got {}", members.len())));
        }
        Ok(Self { n, cells, members })
    }

    /// Cells with multi-index in `∏ [lo_k, hi_k)`.
    pub fn axis_box(n: usize, cells: usize, lo: &[usize], hi: &[usize]) -> Result<Self> {
        let mut set = Self::empty(n, cells)?;
        if lo.len() != n || hi.len() != n {
            return Err(Error::Domain(format!("box corners need {n} coordinates")));
        }
        if lo.iter().zip(hi).any(|(&a, &b)| a > b || b > cells) {
            return Err(Error::Domain("box corners out of range".into()));
        }
        let mut idx = vec![0usize; n];
        for (flat, m) in set.members.iter_mut().enumerate() {
            unflatten(flat, cells, &mut idx);
            *m = idx.iter().zip(lo.iter().zip(hi)).all(|(&i, (&a, &b))| a <= i && i < b);
        }
        Ok(set)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn measure(&self) -> f64 {
        self.count() as f64 / self.members.len() as f64
    }

    pub fn contains(&self, idx: &[usize]) -> bool {
        if idx.len() != self.n || idx.iter().any(|&i| i >= self.cells) {
            return false;
        }
        let flat = idx.iter().fold(0, |acc, &i| acc * self.cells + i);
        self.members[flat]
    }

    /// Sorted list of member multi-indices.
    pub fn indices(&self) -> Vec<Vec<usize>> {
        let mut idx = vec![0usize; self.n];
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(flat, _)| {
                unflatten(flat, self.cells, &mut idx);
                idx.clone()
            })
            .collect()
    }

    pub fn indicator(&self) -> GridFn {
        GridFn {
            n: self.n,
            cells: self.cells,
            values: self.members.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect(),
        }
    }

    /// `Π*_k E`: base points whose section along `k` meets `E`.
    pub fn essential_projection(&self, k: usize) -> Result<CellSet> {
        let g = self.indicator();
        let proj = g.psi(k, &RiSpaceSpec::linf())?;
        Ok(proj.level_set(0.0))
    }
}

impl Serialize for CellSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices().serialize(serializer)
    }
}

/// `(|E|, ∏_k |Π*_k E|^{1/(n-1)})`.
pub fn loomis_whitney_check(e: &CellSet) -> Result<(f64, f64)> {
    let n = e.dim();
    if n < 2 {
        return Err(Error::Domain("the projection inequality needs n >= 2".into()));
    }
    let mut rhs = 1.0;
    for k in 0..n {
        rhs *= e.essential_projection(k)?.measure();
    }
    Ok((e.measure(), rhs.powf(1.0 / (n as f64 - 1.0))))
}

/// `(λ_f(t), (∏_k λ_{ψ_k(f,L^∞)}(t))^{1/(n-1)})`.
pub fn distribution_product_check(f: &GridFn, t: f64) -> Result<(f64, f64)> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain(format!("level must be >= 0, got {t}")));
    }
    let n = f.dim();
    if n < 2 {
        return Err(Error::Domain("the product bound needs n >= 2".into()));
    }
    let lhs = f.rearrangement().measure_above(t);
    let mut rhs = 1.0;
    for k in 0..n {
        rhs *= f.psi(k, &RiSpaceSpec::linf())?.rearrangement().measure_above(t);
    }
    Ok((lhs, rhs.powf(1.0 / (n as f64 - 1.0))))
}

/// The `L^∞` projections `ψ*_k(f, L^∞)` for every axis.
pub fn projection_rearrangements(f: &GridFn) -> Result<Vec<StepFn>> {
    (0..f.dim())
        .map(|k| Ok(f.psi(k, &RiSpaceSpec::linf())?.rearrangement()))
        .collect()
}

/// `(f*(s), Σ_j ψ*_j(f,L^∞)(s^{1/n'}))` for `s ∈ (0,1)`.
pub fn pointwise_fournier_bound(f: &GridFn, s: f64) -> Result<(f64, f64)> {
    let projections = projection_rearrangements(f)?;
    pointwise_fournier_bound_with(f, &f.rearrangement(), &projections, s)
}

/// Same as [`pointwise_fournier_bound`] with the rearrangements precomputed.
pub fn pointwise_fournier_bound_with(
    f: &GridFn,
    fstar: &StepFn,
    projections: &[StepFn],
    s: f64,
) -> Result<(f64, f64)> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::Domain(format!("s must lie in (0,1), got {s}")));
    }
    let n = f.dim() as f64;
    let u = s.powf((n - 1.0) / n);
    let rhs = projections.iter().map(|p| p.eval(u)).sum();
    Ok((fstar.eval(s), rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> GridFn {
        GridFn::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap()
    }

    fn sp(s: &str) -> RiSpaceSpec {
        s.parse().unwrap()
    }

    #[test]
    fn rearrangement_of_example() {
        let r = example().rearrangement();
        assert_eq!(r.ends(), &[0.25, 0.5, 0.75, 1.0]);
        assert_eq!(r.values(), &[4.0, 3.0, 2.0, 1.0]);
    }

    #[test]
    fn sections_read_along_axis() {
        let f = example();
        // Varying the second coordinate with the first fixed at its first cell.
        assert_eq!(f.section(1, &[0]).unwrap().values(), &[1.0, 2.0]);
        assert_eq!(f.section(0, &[0]).unwrap().values(), &[1.0, 3.0]);
        let c = GridFn::constant(3, 4, 2.5).unwrap();
        assert_eq!(c.section(2, &[1, 3]).unwrap(), StepFn::constant(1.0, 2.5).unwrap());
        assert!(GridFn::zero(2, 3).unwrap().section(0, &[2]).unwrap().is_zero());
        assert!(f.section(2, &[0]).is_err());
        assert!(f.section(0, &[2]).is_err());
    }

    #[test]
    fn psi_examples() {
        let f = example();
        assert_eq!(f.psi(0, &sp("Linf")).unwrap().values(), &[3.0, 4.0]);
        assert_eq!(f.psi(1, &sp("L1")).unwrap().values(), &[1.5, 3.5]);
        let slab = GridFn::indicator_box(3, 4, &[0, 1, 0], &[4, 3, 4]).unwrap();
        let p = slab.psi(0, &sp("Linf")).unwrap();
        assert_eq!(p, GridFn::indicator_box(2, 4, &[1, 0], &[3, 4]).unwrap());
    }

    #[test]
    fn mixed_norm_examples() {
        let f = example();
        let l1 = sp("L1");
        let linf = sp("Linf");
        assert_eq!(f.bp_norm(0, &l1, &linf).unwrap(), 3.5);
        assert_eq!(mixed_norm(&f, &MixedSpaceSpec::symmetric(l1, linf)).unwrap(), 6.5);
        let sq = GridFn::indicator_box(2, 8, &[0, 0], &[3, 3]).unwrap();
        assert_eq!(sq.bp_norm(0, &l1, &linf).unwrap(), 3.0 / 8.0);
        assert_eq!(mixed_norm(&sq, &MixedSpaceSpec::symmetric(l1, linf)).unwrap(), 0.75);
        let c = GridFn::constant(3, 4, 2.0).unwrap();
        assert_eq!(mixed_norm(&c, &MixedSpaceSpec::symmetric(l1, linf)).unwrap(), 6.0);
        assert_eq!(GridFn::zero(2, 4).unwrap().bp_norm(1, &l1, &linf).unwrap(), 0.0);
    }

    #[test]
    fn level_sets_and_projections() {
        let f = example();
        assert_eq!(f.level_set(2.5).indices(), vec![vec![1, 0], vec![1, 1]]);
        assert_eq!(f.level_set(4.0).count(), 0);
        let sq = GridFn::indicator_box(2, 4, &[0, 0], &[2, 2]).unwrap();
        assert_eq!(sq.level_set(0.0), CellSet::axis_box(2, 4, &[0, 0], &[2, 2]).unwrap());

        let diag = CellSet::from_members(2, 2, vec![true, false, false, true]).unwrap();
        for k in 0..2 {
            assert_eq!(diag.essential_projection(k).unwrap().count(), 2);
        }
        let one = CellSet::axis_box(2, 3, &[1, 2], &[2, 3]).unwrap();
        assert_eq!(one.essential_projection(0).unwrap().indices(), vec![vec![2]]);
        assert_eq!(one.essential_projection(1).unwrap().indices(), vec![vec![1]]);
        assert_eq!(CellSet::empty(2, 3).unwrap().essential_projection(0).unwrap().count(), 0);
    }

    #[test]
    fn loomis_whitney_examples() {
        let b = CellSet::axis_box(3, 4, &[0, 1, 1], &[2, 4, 2]).unwrap();
        let (l, r) = loomis_whitney_check(&b).unwrap();
        assert!((l - r).abs() < 1e-12);
        let diag = CellSet::from_members(2, 2, vec![true, false, false, true]).unwrap();
        assert_eq!(loomis_whitney_check(&diag).unwrap(), (0.5, 1.0));
        assert_eq!(loomis_whitney_check(&CellSet::empty(2, 2).unwrap()).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn distribution_product_examples() {
        let sq = GridFn::indicator_box(2, 4, &[0, 0], &[2, 2]).unwrap();
        let (l, r) = distribution_product_check(&sq, 0.5).unwrap();
        assert_eq!((l, r), (0.25, 0.25));
        assert_eq!(distribution_product_check(&sq, 1.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn pointwise_fournier_examples() {
        let sq = GridFn::indicator_box(2, 4, &[0, 0], &[2, 2]).unwrap();
        assert_eq!(pointwise_fournier_bound(&sq, 0.125).unwrap(), (1.0, 2.0));
        assert_eq!(pointwise_fournier_bound(&sq, 0.5).unwrap().0, 0.0);
        assert!(pointwise_fournier_bound(&sq, 1.0).is_err());
    }

    #[test]
    fn refinement_preserves_norms() {
        let f = example().refine(3).unwrap();
        assert_eq!(f.cells_per_axis(), 6);
        let spec = MixedSpaceSpec::symmetric(sp("L1"), sp("Linf"));
        assert!((mixed_norm(&f, &spec).unwrap() - 6.5).abs() < 1e-12);
    }

    #[test]
    fn json_layout() {
        let g: GridFn = serde_json::from_str(r#"{"n":2,"cells_per_axis":2,"values":[1,2,3,4]}"#).unwrap();
        assert_eq!(g, example());
        assert!(serde_json::from_str::<GridFn>(r#"{"n":2,"cells_per_axis":2,"values":[1,2,3]}"#).is_err());
        assert!(serde_json::from_str::<GridFn>(r#"{"n":5,"cells_per_axis":1,"values":[1]}"#).is_err());
    }
}
