//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rimix::embed::{
    fournier_check, indicator_ladder, lorentz_embedding_decider, omega, optimal_range_norm, power_ladder,
    sharpness_sweep, Embedding, Relation, SweepMode, Verdict, WitnessKind,
};
use rimix::kfun::{interp_norm, k_exact, CoupleSpec, KProfile, TruncationObjective};
use rimix::mixed::GridFn;
use rimix::sample::Sampler;
use rimix::space::{conjugate, subst_norm, RiSpaceSpec};
use rimix::verify::{self, Counts, SuiteConfig};

type Outcome = Result<String, String>;

fn sp(s: &str) -> RiSpaceSpec {
    s.parse().unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, secs: u64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < secs as f64, || {
        format!("took {:.1}s, limit {secs}s", elapsed.as_secs_f64())
    })
}

fn random_grid(s: &mut Sampler, n: usize, max_cells: usize) -> GridFn {
    let sizes: Vec<usize> = [2usize, 3, 4, 5, 6, 8, 12, 16, 32].into_iter().filter(|&c| c <= max_cells).collect();
    s.grid_in(n, &sizes, 6).unwrap()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(101);
    let mut checks = 0u64;
    for i in 0..1000 {
        let n = 2 + i % 2;
        let cells = s.choose(&[2usize, 3, 4, 6, 8, 16, 32]);
        let e = s.cellset(n, cells).map_err(|e| e.to_string())?;
        // Projections by dropping one coordinate of every member.
        let h = 1.0 / cells as f64;
        let mut prod = 1.0;
        for k in 0..n {
            let proj: BTreeSet<Vec<usize>> = e
                .indices()
                .into_iter()
                .map(|mut idx| {
                    idx.remove(k);
                    idx
                })
                .collect();
            let lib = e.essential_projection(k).map_err(|e| e.to_string())?;
            ensure(lib.count() == proj.len(), || format!("projection count mismatch on sample {i}"))?;
            prod *= proj.len() as f64 * h.powi(n as i32 - 1);
        }
        let measure = e.count() as f64 * h.powi(n as i32);
        ensure(measure.powi(n as i32 - 1) <= prod * (1.0 + 1e-12), || {
            format!("Loomis–Whitney violated on sample {i}: {measure} vs {prod}")
        })?;
        checks += 1;

        let (lo, hi) = s.box_bounds(n, cells);
        let b = rimix::mixed::CellSet::axis_box(n, cells, &lo, &hi).unwrap();
        let (lhs, rhs) = rimix::mixed::loomis_whitney_check(&b).unwrap();
        let sides: f64 = lo.iter().zip(&hi).map(|(a, b)| (b - a) as f64 * h).product();
        ensure((lhs - sides).abs() <= 1e-12 && (lhs - rhs).abs() <= 1e-12, || {
            format!("box equality failed: {lhs} vs {rhs}")
        })?;

        let f = random_grid(&mut s, n, 32);
        for k in 0..n {
            let psi = psi_max(&f, k);
            let lib_psi = f.psi(k, &sp("Linf")).unwrap();
            let values: BTreeSet<u64> = f.values().iter().map(|v| v.to_bits()).collect();
            for bits in values {
                let alpha = f64::from_bits(bits);
                let lhs = f.level_set(alpha).essential_projection(k).unwrap();
                let oracle: Vec<bool> = psi.values().map(|&m| m > alpha).collect();
                ensure(lhs.members() == oracle.as_slice(), || format!("projection lemma, sample {i}, α = {alpha}"))?;
                ensure(lib_psi.level_set(alpha).members() == oracle.as_slice(), || "ψ level set".into())?;
                checks += 1;
            }
        }
    }
    let t = start.elapsed();
    within(t, 10)?;
    Ok(format!("{checks} checks, 0 violations, {:.2}s", t.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(202);
    let mut checks = 0u64;
    for i in 0..500 {
        let n = 2 + i % 2;
        let f = random_grid(&mut s, n, 32);
        let cells = f.cells_per_axis();
        let fstar = cell_rearrangement(f.values(), (1.0 / cells as f64).powi(n as i32));
        let proj = projection_pieces(&f);
        let lambda = |pieces: &[(f64, f64)], t: f64| -> f64 { pieces.iter().filter(|p| p.0 > t).map(|p| p.1).sum() };
        let levels: BTreeSet<u64> = f.values().iter().map(|v| v.to_bits()).collect();
        for bits in levels {
            let t = f64::from_bits(bits);
            let lhs = lambda(&fstar, t);
            let rhs: f64 = proj.iter().map(|p| lambda(p, t)).product::<f64>().powf(1.0 / (n as f64 - 1.0));
            ensure(lhs <= rhs * (1.0 + 1e-9) + 1e-12, || format!("distribution bound, sample {i}, t = {t}"))?;
            let (a, b) = rimix::mixed::distribution_product_check(&f, t).unwrap();
            ensure(relative_gap(a, lhs) < 1e-12 && relative_gap(b, rhs) < 1e-9, || "library disagrees".into())?;
            checks += 1;
        }
        // Breakpoints of f* are multiples of the cell measure.
        let cell = (1.0 / cells as f64).powi(n as i32);
        let lib_star = f.rearrangement();
        let lib_proj = rimix::mixed::projection_rearrangements(&f).unwrap();
        let star_at = Cumulative::new(&fstar);
        let proj_at: Vec<Cumulative> = proj.iter().map(|p| Cumulative::new(p)).collect();
        for m in 0..fstar.len() {
            let sval = m as f64 * cell;
            for at in [sval, sval + 0.5 * cell] {
                if at <= 0.0 || at >= 1.0 {
                    continue;
                }
                let u = at.powf((n as f64 - 1.0) / n as f64);
                let lhs = star_at.eval(at);
                let rhs: f64 = proj_at.iter().map(|p| p.eval(u)).sum();
                ensure(lhs <= rhs * (1.0 + 1e-9) + 1e-12, || format!("pointwise bound, sample {i}, s = {at}"))?;
                let (a, b) = rimix::mixed::pointwise_fournier_bound_with(&f, &lib_star, &lib_proj, at).unwrap();
                ensure(a <= b * (1.0 + 1e-9) + 1e-12, || format!("library pointwise bound, sample {i}, s = {at}"))?;
                checks += 1;
            }
        }
    }
    let t = start.elapsed();
    within(t, 20)?;
    Ok(format!("{checks} checks, 0 violations, {:.2}s", t.as_secs_f64()))
}

fn criterion_3() -> Outcome {
    let mut s = Sampler::new(202);
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let n = 2 + i % 2;
        let f = random_grid(&mut s, n, 32);
        let np = conjugate(n as f64);
        let cell = (1.0 / f.cells_per_axis() as f64).powi(n as i32);
        let lor = lorentz(&cell_rearrangement(f.values(), cell), np, 1.0);
        let mix = mixed(&f, l1, linf);
        let (a, b, _) = fournier_check(&f).map_err(|e| e.to_string())?;
        ensure(relative_gap(a, lor) < 1e-9 && relative_gap(b, mix) < 1e-9, || format!("oracle mismatch on {i}"))?;
        if mix > 0.0 {
            worst = worst.max(lor / mix);
            ensure(lor / mix <= np + 1e-9, || format!("ratio {} exceeds n' on sample {i}", lor / mix))?;
        }
    }
    let square = GridFn::indicator_box(2, 4, &[0, 0], &[2, 2]).unwrap();
    let (_, _, r) = fournier_check(&square).unwrap();
    ensure((r - 1.0).abs() <= 1e-12, || format!("square ratio {r}"))?;
    Ok(format!("max ratio {worst:.4} (bound n'), square ratio = {r}"))
}

fn criterion_4() -> Outcome {
    let mut s = Sampler::new(404);
    let ts = KProfile::log_spaced(1e-3, 0.999, 20);
    let couple = CoupleSpec::MixedLinf { x: sp("L1") };
    let mut checks = 0;
    for i in 0..200 {
        let n = 2 + i % 2;
        let f = random_grid(&mut s, n, 16);
        let proj = projection_pieces(&f);
        let objective = TruncationObjective::new((&f).into(), &couple).map_err(|e| e.to_string())?;
        let mut nodes: Vec<f64> = f.values().to_vec();
        nodes.push(0.0);
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        for &t in &ts {
            let kmf: f64 = proj.iter().map(|p| integral_to(p, t)).sum();
            // For X = L1 the objective is piecewise linear in c with kinks at
            // cell values, so its minimum sits on one of them.
            let brute = nodes
                .iter()
                .map(|&c| {
                    proj.iter()
                        .map(|p| p.iter().map(|&(v, w)| (v - c).max(0.0) * w).sum::<f64>())
                        .sum::<f64>()
                        + t * c
                })
                .fold(f64::INFINITY, f64::min);
            let (k, _) = objective.minimize(t);
            ensure(relative_gap(k, brute) < 1e-9 || (k - brute).abs() < 1e-12, || {
                format!("k_exact {k} vs brute force {brute} on sample {i}, t = {t}")
            })?;
            ensure(kmf / n as f64 <= k * (1.0 + 1e-9) + 1e-12 && k <= 2.0 * kmf * (1.0 + 1e-9) + 1e-12, || {
                format!("sandwich fails on sample {i}, t = {t}: kmf = {kmf}, K = {k}")
            })?;
            checks += 1;
        }
    }
    for (hi, cells) in [(1usize, 4usize), (2, 4), (3, 4), (5, 8)] {
        let f = GridFn::indicator_box(2, cells, &[0, 0], &[hi, hi]).unwrap();
        let a = hi as f64 / cells as f64;
        for t in KProfile::log_spaced(1e-3, 10.0, 20) {
            let (k, _) = k_exact(&f, t, &couple).unwrap();
            ensure((k - (2.0 * a).min(t)).abs() <= 1e-9, || format!("square a = {a}, t = {t}: K = {k}"))?;
        }
    }
    Ok(format!("{checks} sandwich checks; χ_(0,a)² reproduces min(2a,t)"))
}

fn criterion_5() -> Outcome {
    let mut s = Sampler::new(505);
    let ts = KProfile::log_spaced(1e-3, 1.0, 20);
    let couple = CoupleSpec::RiLinf { x: sp("L1") };
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let f = s.step();
        let pieces = piece_rearrangement(&f);
        for &t in &ts {
            let (k, _) = k_exact(&f, t, &couple).map_err(|e| e.to_string())?;
            let exact = integral_to(&pieces, t);
            let gap = if exact == 0.0 { k.abs() } else { relative_gap(k, exact) };
            worst = worst.max(gap);
            ensure(gap <= 1e-9, || format!("sample {i}, t = {t}: K = {k}, ∫f* = {exact}"))?;
        }
    }
    Ok(format!("max relative gap {worst:.2e}"))
}

fn criterion_6() -> Outcome {
    let mut s = Sampler::new(606);
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let f = s.step();
        let pieces = piece_rearrangement(&f);
        for n in [2usize, 3, 4] {
            let np = conjugate(n as f64);
            for (r, q) in [(2.5, 1.0), (3.0, 2.0), (4.0, 1.0), (6.0, 3.0)] {
                let lhs = subst_norm(&RiSpaceSpec::lorentz(r, q).unwrap(), &f, 1.0 / np).unwrap();
                let rhs = np.powf(1.0 / q) * lorentz(&pieces, r / np, q);
                worst = worst.max(relative_gap(lhs, rhs));
                ensure(relative_gap(lhs, rhs) <= 1e-9, || format!("subst, sample {i}, n = {n}, r = {r}"))?;
            }
            for (p, q) in [(1.5, 1.0), (2.0, 2.0), (3.0, 4.0)] {
                let lhs = optimal_range_norm(&RiSpaceSpec::lorentz(p, q).unwrap(), n, &f).unwrap();
                let rhs = (1.0 / np).powf(1.0 / q) * lorentz(&pieces, np * p, q);
                worst = worst.max(relative_gap(lhs, rhs));
                ensure(relative_gap(lhs, rhs) <= 1e-9, || format!("range, sample {i}, n = {n}, p = {p}"))?;
            }
        }
    }
    Ok(format!("max relative gap {worst:.2e}"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(707);
    let couple = CoupleSpec::MixedLinf { x: sp("L1") };
    let l2 = |p: &[(f64, f64)]| lorentz(p, 2.0, 2.0);
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    let mut count = 0;
    while count < 50 {
        let f = random_grid(&mut s, 2, 8);
        if f.is_zero() {
            continue;
        }
        let num = interp_norm(&f, &couple, 0.5, 2.0).map_err(|e| e.to_string())?;
        let den = mixed(&f, l2, linf);
        lo = lo.min(num / den);
        hi = hi.max(num / den);
        count += 1;
    }
    let t = start.elapsed();
    ensure(hi / lo <= 100.0, || format!("ratios span [{lo}, {hi}]"))?;
    within(t, 60)?;
    Ok(format!("ratios in [{lo:.4}, {hi:.4}], max/min = {:.4}, {:.2}s", hi / lo, t.as_secs_f64()))
}

fn criterion_8() -> Outcome {
    let mut s = Sampler::new(808);
    let spaces: [(RiSpaceSpec, f64, f64); 2] = [(sp("Lp:2"), 2.0, 2.0), (sp("Lpq:3,1"), 3.0, 1.0)];
    let mut worst: f64 = 0.0;
    for i in 0..300 {
        let f = random_grid(&mut s, 2, 64);
        for (x, p, q) in &spaces {
            let xn = |pieces: &[(f64, f64)]| lorentz(pieces, *p, *q);
            let lhs = mixed(&f, xn, l1);
            let rhs = mixed(&f, l1, xn);
            let c = rimix::embed::fubini_check(&f, x).unwrap();
            ensure(relative_gap(c.lhs, lhs) < 1e-9 && relative_gap(c.rhs, 2.0 * rhs) < 1e-9, || {
                format!("library disagrees with oracle on sample {i}")
            })?;
            if rhs > 0.0 {
                worst = worst.max(lhs / rhs);
            }
            ensure(lhs <= 2.0 * rhs * (1.0 + 1e-12), || format!("violation on sample {i} for {x}"))?;
        }
    }
    Ok(format!("max lhs/rhs = {worst:.4} (bound 2)"))
}

fn criterion_9() -> Outcome {
    let r = 0.25;
    // q-index reversal: R(L∞, L^{2,∞}) into R(L1, L^{2,1}).
    ensure(
        lorentz_embedding_decider(2.0, f64::INFINITY, 2.0, 1.0, Relation::MixedLeftLinf) == Verdict::Fails,
        || "decider accepts the q reversal".into(),
    )?;
    let e1 = Embedding::LeftLinf {
        y1: sp("Lpq:2,inf"),
        x2: sp("L1"),
        y2: sp("Lpq:2,1"),
    };
    let ladder = power_ladder(2.0, &[4, 8, 16, 32, 64], 2.0 * r / 2.0).unwrap();
    let rep1 = sharpness_sweep(&e1, WitnessKind::Diagonal, &ladder, 2, r, SweepMode::Ideal).map_err(|e| e.to_string())?;
    for (point, lp) in rep1.trajectory.iter().zip(&ladder) {
        let pieces = piece_rearrangement(&lp.profile);
        let oracle = 2.0 * lorentz(&pieces, 2.0, 1.0) * (r / 2.0) / (2.0 * lorentz(&pieces, 2.0, f64::INFINITY));
        ensure(relative_gap(point.ratio, oracle) < 1e-12, || format!("ratio {} vs oracle {oracle}", point.ratio))?;
    }
    // Fournier range with s = 8 > n' = 2.
    let e2 = Embedding::IntoRi {
        x: sp("L1"),
        z: sp("Lpq:8,1"),
        n: 2,
    };
    ensure(e2.verdict().0 == Verdict::Fails, || "decider accepts L^{8,1}".into())?;
    let halving = indicator_ladder(0.25, 4).unwrap();
    let rep2 = sharpness_sweep(&e2, WitnessKind::RadialSurface, &halving, 2, r, SweepMode::Ideal).map_err(|e| e.to_string())?;
    let kappa = omega(2).sqrt();
    for point in &rep2.trajectory {
        let a = point.param;
        let oracle = 8.0 * (a * a).powf(1.0 / 8.0) / (2.0 * (omega(1) / kappa) * a);
        ensure(relative_gap(point.ratio, oracle) < 1e-12, || format!("ratio {} vs oracle {oracle}", point.ratio))?;
    }
    let mut lines = Vec::new();
    for rep in [&rep1, &rep2] {
        ensure(rep.trajectory.len() == 5 && rep.trajectory_increasing(), || format!("{} not increasing", rep.id))?;
        ensure(rep.min_growth() >= 1.5, || format!("{} grows only {:.3}x per step", rep.id, rep.min_growth()))?;
        lines.push(format!("{:.3}x", rep.min_growth()));
    }
    Ok(format!("min growth per dyadic step: {}", lines.join(", ")))
}

fn criterion_10() -> Outcome {
    let config = SuiteConfig {
        only: vec!["space.axioms".into()],
        counts: Counts {
            axiom_samples: 500,
            ..Counts::default()
        },
        ..SuiteConfig::default()
    };
    let report = verify::run(&config).map_err(|e| e.to_string())?;
    let suite = report.suite("space.axioms").ok_or("suite missing")?;
    ensure(suite.passed && suite.violations == 0, || format!("{} violations", suite.violations))?;
    // The norms the suite exercised agree with the oracle.
    let mut s = Sampler::new(1010);
    for _ in 0..500 {
        let f = s.step();
        let pieces = piece_rearrangement(&f);
        for (x, p, q) in [("Lp:2", 2.0, 2.0), ("Lpq:2,1", 2.0, 1.0), ("Lpq:2,inf", 2.0, f64::INFINITY), ("Lpq:4,3", 4.0, 3.0)] {
            let lib = rimix::space::ri_norm(&sp(x), &f);
            ensure(relative_gap(lib, lorentz(&pieces, p, q)) < 1e-12, || format!("{x} norm disagrees"))?;
        }
    }
    Ok(format!("{} checks over {} samples, 0 violations", suite.checks, suite.samples))
}

fn criterion_11() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_rimix");
    let run = || -> Result<(Vec<u8>, Duration), String> {
        let start = Instant::now();
        let out = Command::new(exe)
            .args(["verify", "--seed", "7", "--format", "json"])
            .output()
            .map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure(out.status.code() == Some(0), || {
            format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
        Ok((out.stdout, elapsed))
    };
    let (a, ta) = run()?;
    let (b, tb) = run()?;
    ensure(a == b, || "reports differ between runs".into())?;
    within(ta.max(tb), 120)?;
    Ok(format!(
        "{} byte report identical across runs, {:.1}s / {:.1}s",
        a.len(),
        ta.as_secs_f64(),
        tb.as_secs_f64()
    ))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("geometric exactness", criterion_1),
        ("distribution product and pointwise bounds", criterion_2),
        ("Fournier constant", criterion_3),
        ("K-functional sandwich", criterion_4),
        ("classical K identity", criterion_5),
        ("substitution closed forms", criterion_6),
        ("interpolation equivalence", criterion_7),
        ("Fubini comparison", criterion_8),
        ("sharpness ladders", criterion_9),
        ("norm axioms", criterion_10),
        ("determinism and runtime", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{secs:.2}s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{secs:.2}s] {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
