//! Brute-force oracles written from the definitions, independent of the
//! library's sweep-and-sort implementations.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rimix::mixed::GridFn;
use rimix::step::StepFn;

/// `(value, measure)` pairs of a nonincreasing step function, from the cells
/// of a grid: sort values descending, each cell carrying `h^n`.
pub fn cell_rearrangement(values: &[f64], cell: f64) -> Vec<(f64, f64)> {
    let mut v: Vec<f64> = values.iter().copied().filter(|&x| x > 0.0).collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v.into_iter().map(|x| (x, cell)).collect()
}

/// `(value, width)` pairs of a step function sorted by value descending.
pub fn piece_rearrangement(f: &StepFn) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = f.pieces().filter(|p| p.2 > 0.0).map(|(a, b, v)| (v, b - a)).collect();
    v.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    v
}

/// Lorentz `(p, q)` norm with the `dt/t` normalization of a nonincreasing
/// function given as consecutive `(value, width)` pieces starting at 0.
pub fn lorentz(pieces: &[(f64, f64)], p: f64, q: f64) -> f64 {
    let mut t = 0.0;
    if q.is_infinite() {
        let mut best: f64 = 0.0;
        for &(v, w) in pieces {
            t += w;
            best = best.max(v * t.powf(1.0 / p));
        }
        return best;
    }
    let mut sum = 0.0;
    for &(v, w) in pieces {
        let a = t;
        t += w;
        sum += v.powf(q) * (t.powf(q / p) - a.powf(q / p));
    }
    (p / q * sum).powf(1.0 / q)
}

pub fn l1(pieces: &[(f64, f64)]) -> f64 {
    pieces.iter().map(|&(v, w)| v * w).sum()
}

pub fn linf(pieces: &[(f64, f64)]) -> f64 {
    pieces.first().map_or(0.0, |p| p.0)
}

/// `∫_0^t` of a nonincreasing function given as pieces.
pub fn integral_to(pieces: &[(f64, f64)], t: f64) -> f64 {
    let mut acc = 0.0;
    let mut s = 0.0;
    for &(v, w) in pieces {
        if s >= t {
            break;
        }
        acc += v * w.min(t - s);
        s += w;
    }
    acc
}

/// Multi-index of a flat row-major offset.
pub fn index(flat: usize, n: usize, cells: usize) -> Vec<usize> {
    let mut idx = vec![0; n];
    let mut r = flat;
    for k in (0..n).rev() {
        idx[k] = r % cells;
        r /= cells;
    }
    idx
}

/// Lines along axis `k`: map from the remaining coordinates to the values
/// on that line.
pub fn lines(f: &GridFn, k: usize) -> BTreeMap<Vec<usize>, Vec<f64>> {
    let n = f.dim();
    let cells = f.cells_per_axis();
    let mut out: BTreeMap<Vec<usize>, Vec<f64>> = BTreeMap::new();
    for (flat, &v) in f.values().iter().enumerate() {
        let mut idx = index(flat, n, cells);
        idx.remove(k);
        out.entry(idx).or_default().push(v);
    }
    out
}

/// `ψ_k(f, L^∞)` as a map from base point to line maximum.
pub fn psi_max(f: &GridFn, k: usize) -> BTreeMap<Vec<usize>, f64> {
    lines(f, k)
        .into_iter()
        .map(|(j, vals)| (j, vals.into_iter().fold(0.0, f64::max)))
        .collect()
}

/// `ψ_k(f, Y)` with a section norm computed from `(value, width)` pieces.
pub fn psi_with(f: &GridFn, k: usize, norm: impl Fn(&[(f64, f64)]) -> f64) -> Vec<f64> {
    let h = 1.0 / f.cells_per_axis() as f64;
    lines(f, k)
        .into_values()
        .map(|vals| norm(&cell_rearrangement(&vals, h)))
        .collect()
}

/// `‖ψ‖_X` of a function of `n-1` variables given by its cell values.
pub fn outer(values: &[f64], n: usize, cells: usize, norm: impl Fn(&[(f64, f64)]) -> f64) -> f64 {
    let cell = (1.0 / cells as f64).powi(n as i32 - 1);
    norm(&cell_rearrangement(values, cell))
}

/// `Σ_k ‖ψ_k(f,Y)‖_X`.
pub fn mixed(
    f: &GridFn,
    outer_norm: impl Fn(&[(f64, f64)]) -> f64 + Copy,
    inner_norm: impl Fn(&[(f64, f64)]) -> f64 + Copy,
) -> f64 {
    (0..f.dim())
        .map(|k| outer(&psi_with(f, k, inner_norm), f.dim(), f.cells_per_axis(), outer_norm))
        .sum()
}

/// Rearrangements `ψ*_k(f, L^∞)` as pieces.
pub fn projection_pieces(f: &GridFn) -> Vec<Vec<(f64, f64)>> {
    let n = f.dim();
    let cell = (1.0 / f.cells_per_axis() as f64).powi(n as i32 - 1);
    (0..n)
        .map(|k| {
            let vals: Vec<f64> = psi_max(f, k).into_values().collect();
            cell_rearrangement(&vals, cell)
        })
        .collect()
}

/// Value of a nonincreasing piece list at `t` (right-continuous).
pub fn eval(pieces: &[(f64, f64)], t: f64) -> f64 {
    let mut s = 0.0;
    for &(v, w) in pieces {
        s += w;
        if t < s {
            return v;
        }
    }
    0.0
}

/// Piece list with running right endpoints, for evaluation by bisection.
pub struct Cumulative {
    ends: Vec<f64>,
    values: Vec<f64>,
}

impl Cumulative {
    pub fn new(pieces: &[(f64, f64)]) -> Self {
        let mut t = 0.0;
        let ends = pieces
            .iter()
            .map(|p| {
                t += p.1;
                t
            })
            .collect();
        Self {
            ends,
            values: pieces.iter().map(|p| p.0).collect(),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let i = self.ends.partition_point(|&e| e <= t);
        self.values.get(i).copied().unwrap_or(0.0)
    }
}

pub fn relative_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
