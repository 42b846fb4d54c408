//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any
//! failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teamdyn::run::{RunOutcome, BOX_TOL, INVARIANT_TOL, RATIO_STEP_TOL};
use teamdyn::{
    chernoff_min_samples, montecarlo_positivity, scenario, simulate, ExperimentConfig,
    MonteCarloOptions,
};
use teamdyn_core::spectral::{
    classify_connectivity, left_dominant_eigenvector, workload_diffusion,
};
use teamdyn_core::{
    comparative_graph, integrate_reduced, lemma2_tau_threshold, nontransitive_triad_count,
    rhs_generalized_replicator, theorem4_bounds, AppraisalMatrix, ComparativeAppraisalGraph,
    EigenOptions, Matrix, ReducedState, TerminalStatus,
};

type Outcome = Result<String, String>;

fn config(text: &str, seed: u64) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::from_toml_str(text).expect("acceptance config parses");
    cfg.seed = seed;
    cfg
}

fn run(cfg: &ExperimentConfig) -> Result<RunOutcome, String> {
    simulate(cfg).map_err(|e| format!("seed {}: {e}", cfg.seed))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn max_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

const MANAGER: &str = r#"
n = 6
outputs = ["h1"]
[model]
kind = "manager"
[integrator]
t_end = 200.0
sample_every = 0.01
stop_on_convergence = false
"#;

fn manager_convergence() -> Outcome {
    let mut worst_gap: f64 = 0.0;
    let mut worst_rise = f64::NEG_INFINITY;
    for seed in 1..=50 {
        let out = run(&config(MANAGER, seed))?;
        let gap = max_abs(&out.trajectory.last().w, out.instance.x.as_slice());
        let kl = out
            .summary
            .bounds
            .lyapunov_kl_increase
            .clone()
            .expect("manager KL check");
        worst_gap = worst_gap.max(gap);
        worst_rise = worst_rise.max(kl.worst_excess);
        ensure(out.trajectory.last().t == 200.0, || {
            format!("seed {seed} stopped early")
        })?;
        ensure(gap < 1e-6, || {
            format!("seed {seed}: |w - x|_inf = {gap:.3e}")
        })?;
        ensure(!kl.violated, || {
            format!("seed {seed}: V rose by {:.3e} in one step", kl.worst_excess)
        })?;
    }
    Ok(format!(
        "50/50 runs, max |w(200) - x|_inf = {worst_gap:.2e}, max step increase of V = {worst_rise:.2e}"
    ))
}

const ASSIGN_APPRAISE: &str = r#"
n = 6
outputs = ["h1", "spread"]
[skills]
kind = "dirichlet_uniform"
min_entry = 0.05
[initial_appraisal]
kind = "dirichlet_rows"
min_entry = 1e-3
self_weight = 0.7
[observation]
kind = "strongly_connected_random"
density = 0.3
[model]
kind = "assign_appraise"
[integrator]
t_end = 100.0
sample_every = 0.1
"#;

fn assign_appraise_runs() -> Result<Vec<RunOutcome>, String> {
    (1..=25)
        .map(|seed| run(&config(ASSIGN_APPRAISE, seed)))
        .collect()
}

fn assign_appraise_learning(runs: &[RunOutcome]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut max_spread: f64 = 0.0;
    let mut failures = Vec::new();
    for out in runs {
        let h1 = out.summary.terminal_h1;
        worst = worst.max(h1);
        max_spread = max_spread.max(out.summary.consensus_spread.unwrap_or(0.0));
        if !(h1 < 1e-3) || out.trajectory.last().t > 100.0 + 1e-9 {
            failures.push(format!("seed {} H1 = {h1:.3e}", out.summary.seed));
        }
    }
    let line = format!(
        "{}/25 runs with H1 < 1e-3 by t = 100, worst H1 = {worst:.2e}, max spread = {max_spread:.2e}",
        25 - failures.len()
    );
    if failures.is_empty() {
        Ok(line)
    } else {
        Err(format!("{line}; failing: {}", failures.join(", ")))
    }
}

/// Relative drift of `a_ij / a_ik` against `A(0)`, with `k` the largest
/// off-diagonal entry of row `i`.
fn ratio_drift(a0: &Matrix, a: &Matrix) -> f64 {
    let n = a0.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let k = (0..n)
            .filter(|&j| j != i)
            .max_by(|&p, &q| a0[(i, p)].total_cmp(&a0[(i, q)]))
            .expect("n >= 2");
        for j in (0..n).filter(|&j| j != i && j != k && a0[(i, j)] > 0.0) {
            let r0 = a0[(i, j)] / a0[(i, k)];
            let r = a[(i, j)] / a[(i, k)];
            worst = worst.max((r / r0 - 1.0).abs());
        }
    }
    worst
}

fn structure_identity(runs: &[RunOutcome]) -> Outcome {
    let mut drift: f64 = 0.0;
    let mut mismatch: f64 = 0.0;
    for out in runs {
        let a0 = out.instance.a0.as_ref().expect("appraisal run");
        for s in &out.trajectory.samples {
            drift = drift.max(ratio_drift(
                a0.matrix(),
                s.appraisal.as_ref().expect("appraisal"),
            ));
        }
        let reduced = ReducedState::from_appraisal(a0).map_err(|e| e.to_string())?;
        let mut icfg = out.config.integrator.build().map_err(|e| e.to_string())?;
        icfg.sample_every = icfg.h;
        icfg.t_end = out.trajectory.last().t;
        let red = integrate_reduced(
            &reduced,
            &out.instance.x,
            &out.instance.spec.f,
            &out.instance.m,
            &icfg,
        )
        .map_err(|e| e.to_string())?;
        let mut matched = 0;
        for s in &out.trajectory.samples {
            if let Some(r) = red.iter().find(|r| (r.t - s.t).abs() < 1e-9) {
                let diag = s.appraisal.as_ref().expect("appraisal").diagonal();
                mismatch = mismatch.max(max_abs(&diag, &r.a));
                matched += 1;
            }
        }
        ensure(matched == out.trajectory.samples.len(), || {
            format!("seed {}: reduced run missed sample times", out.summary.seed)
        })?;
    }
    let line =
        format!("max ratio drift = {drift:.2e}, max reduced-vs-full diagonal gap = {mismatch:.2e}");
    ensure(drift < 1e-6 && mismatch < 1e-6, || line.clone())?;
    Ok(line)
}

fn invariant_set(runs: &[RunOutcome]) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for out in runs {
        let b = out
            .summary
            .bounds
            .invariant_set
            .clone()
            .expect("invariant check");
        ensure(b.tolerance == INVARIANT_TOL, || {
            "unexpected tolerance".into()
        })?;
        worst = worst.max(b.worst_excess);
        ensure(!b.violated, || {
            format!(
                "seed {}: a_i exceeded 1 - zeta_i by {:.3e}",
                out.summary.seed, b.worst_excess
            )
        })?;
    }
    Ok(format!(
        "25/25 runs, worst a_i(t) - (1 - zeta_i) = {worst:.2e}"
    ))
}

/// Largest gap between the central difference of the sampled assignment
/// and the generalized replicator field, for a run at step `h` sampled at
/// every step.
fn replicator_gap(base: &RunOutcome, h: f64, t_end: f64) -> Result<f64, String> {
    let mut cfg = base.config.clone();
    cfg.integrator.h = h;
    cfg.integrator.sample_every = h;
    cfg.integrator.t_end = t_end;
    cfg.integrator.stop_on_convergence = false;
    cfg.outputs = vec![];
    let out = run(&cfg)?;
    let inst = &out.instance;
    let s = &out.trajectory.samples;
    let mut worst: f64 = 0.0;
    for k in 1..s.len() - 1 {
        let dt = s[k + 1].t - s[k - 1].t;
        let fd: Vec<f64> = (0..s[k].w.len())
            .map(|i| (s[k + 1].w[i] - s[k - 1].w[i]) / dt)
            .collect();
        let diag = s[k].appraisal.as_ref().expect("appraisal").diagonal();
        let rhs = rhs_generalized_replicator(&s[k].w, &diag, &inst.x, &inst.spec.f, &inst.m)
            .map_err(|e| e.to_string())?;
        worst = worst.max(max_abs(&fd, &rhs));
    }
    Ok(worst)
}

fn generalized_replicator(runs: &[RunOutcome]) -> Outcome {
    let mut coarse: f64 = 0.0;
    let mut fine: f64 = 0.0;
    for out in runs {
        let e1 = replicator_gap(out, 0.01, 100.0)?;
        let e2 = replicator_gap(out, 0.005, 10.0)?;
        let e1_short = replicator_gap(out, 0.01, 10.0)?;
        coarse = coarse.max(e1);
        fine = fine.max(e2);
        ensure(e1 < 10.0 * 0.01, || {
            format!("seed {}: error {e1:.3e} at h = 0.01", out.summary.seed)
        })?;
        ensure(e2 < e1_short, || {
            format!(
                "seed {}: error did not shrink ({e1_short:.3e} at h = 0.01, {e2:.3e} at h = 0.005)",
                out.summary.seed
            )
        })?;
    }
    Ok(format!(
        "max error {coarse:.2e} at h = 0.01 (bound 1e-1), {fine:.2e} at h = 0.005"
    ))
}

const INFLUENCE: &str = r#"
n = 6
outputs = ["h1", "spread"]
[skills]
kind = "dirichlet_uniform"
min_entry = 0.05
[initial_appraisal]
kind = "dirichlet_rows"
min_entry = 1e-3
[observation]
kind = "single_sink_random"
density = 0.3
[model]
kind = "assign_appraise_influence"
tau_app = 0.1
[integrator]
t_end = 100.0
sample_every = 0.01
"#;

fn collective_learning() -> Outcome {
    let (mut h1, mut spread, mut box_excess, mut ratio_rise) =
        (0.0f64, 0.0f64, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for seed in 1..=25 {
        let out = run(&config(INFLUENCE, seed))?;
        let s = &out.summary;
        let spread_k = s.consensus_spread.expect("appraisal run");
        let b = s.bounds.xi0_box.clone().expect("box check");
        let r = s
            .bounds
            .lyapunov_ratio_increase
            .clone()
            .expect("ratio check");
        ensure(
            b.tolerance == BOX_TOL && r.tolerance == RATIO_STEP_TOL,
            || "unexpected tolerance".into(),
        )?;
        h1 = h1.max(s.terminal_h1);
        spread = spread.max(spread_k);
        box_excess = box_excess.max(b.worst_excess);
        ratio_rise = ratio_rise.max(r.worst_excess);
        ensure(s.terminal_h1 < 1e-3 && spread_k < 1e-3, || {
            format!(
                "seed {seed}: H1 = {:.3e}, spread = {spread_k:.3e}",
                s.terminal_h1
            )
        })?;
        ensure(!b.violated, || {
            format!("seed {seed}: box exceeded by {:.3e}", b.worst_excess)
        })?;
        ensure(!r.violated, || {
            format!("seed {seed}: ratio Lyapunov rose by {:.3e}", r.worst_excess)
        })?;
        ensure(!s.bounds.positivity_lost, || {
            format!("seed {seed}: positivity lost")
        })?;
    }
    Ok(format!(
        "25/25 runs, worst H1 = {h1:.2e}, worst spread = {spread:.2e}, box excess = {box_excess:.2e}, \
         ratio Lyapunov max step increase = {ratio_rise:.2e}"
    ))
}

fn scenario_run(name: &str) -> Result<RunOutcome, String> {
    let cfg = scenario(name, None).map_err(|e| e.to_string())?;
    run(&cfg).map_err(|e| format!("{name}: {e}"))
}

fn failure_modes() -> Outcome {
    let mut parts = Vec::new();
    for (label, name) in [("a", "fig5a"), ("b", "fig5b"), ("c", "fig7")] {
        let out = scenario_run(name)?;
        let s = &out.summary;
        ensure(out.trajectory.status == TerminalStatus::Converged, || {
            format!("({label}) {name} ended with status {}", s.status)
        })?;
        ensure(s.terminal_h1 > 0.05, || {
            format!("({label}) {name}: H1 = {:.3e}", s.terminal_h1)
        })?;
        parts.push(format!("({label}) {name} H1 = {:.3}", s.terminal_h1));
    }
    let without = scenario_run("fig4a")?;
    let with = scenario_run("fig4b")?;
    ensure(without.summary.seed == with.summary.seed, || {
        "(d) seeds differ".into()
    })?;
    ensure(
        without.instance.a0 == with.instance.a0 && without.instance.x == with.instance.x,
        || "(d) instances differ".into(),
    )?;
    let (h_without, h_with) = (without.summary.terminal_h1, with.summary.terminal_h1);
    ensure(h_without > 0.05 && h_with < 1e-3, || {
        format!("(d) in-degree H1 = {h_without:.3e} without influence, {h_with:.3e} with")
    })?;
    parts.push(format!(
        "(d) in-degree H1 = {h_without:.3} without / {h_with:.1e} with influence"
    ));
    Ok(parts.join(", "))
}

fn triads(out: &RunOutcome) -> Vec<(f64, f64)> {
    out.trajectory
        .metric_series("triads")
        .expect("triads recorded")
}

fn tms_metrics() -> Outcome {
    let learn = scenario_run("fig6")?;
    let series = triads(&learn);
    let t_end = learn.config.integrator.t_end;
    let first_zero = series.iter().find(|&&(_, v)| v == 0.0).map(|&(t, _)| t);
    let zero_at = first_zero.ok_or("fig6: triads never reach 0")?;
    ensure(
        zero_at < t_end && series.last().expect("samples").1 == 0.0,
        || {
            format!(
                "fig6: triads reach 0 at t = {zero_at} but end at {}",
                series.last().unwrap().1
            )
        },
    )?;
    ensure(series[0].1 > 0.0, || {
        "fig6: no non-transitive triads at t = 0".into()
    })?;
    ensure(learn.summary.terminal_h1 < 1e-3, || {
        format!("fig6: H1 = {:.3e}", learn.summary.terminal_h1)
    })?;
    let mut parts = vec![format!(
        "fig6 triads {} -> 0 at t = {zero_at}, H1 = {:.1e}",
        series[0].1, learn.summary.terminal_h1
    )];
    for name in ["fig6-assign-appraise", "random-baseline"] {
        let out = scenario_run(name)?;
        ensure(out.instance.a0 == learn.instance.a0, || {
            format!("{name}: A(0) differs from fig6")
        })?;
        let last = triads(&out).last().expect("samples").1;
        ensure(last > 0.0, || format!("{name}: triads vanished"))?;
        parts.push(format!("{name} ends with {last} triads"));
    }
    Ok(parts.join(", "))
}

const MONTE_CARLO: &str = r#"
n = 5
seed = 2024
[initial_appraisal]
kind = "dirichlet_rows"
min_entry = 1e-3
[observation]
kind = "strongly_connected_random"
density = 0.3
[model]
kind = "assign_appraise_influence"
[integrator]
method = "rk45"
"#;

fn monte_carlo() -> Outcome {
    let n_min = chernoff_min_samples(0.01, 0.01).map_err(|e| e.to_string())?;
    ensure(n_min == 26492, || {
        format!("chernoff_min_samples(0.01, 0.01) = {n_min}")
    })?;
    let bound = (2.0f64 / 0.01).ln() / (2.0 * 0.01 * 0.01);
    ensure(27000.0 >= bound, || "27000 misses the bound".into())?;
    let cfg = ExperimentConfig::from_toml_str(MONTE_CARLO).map_err(|e| e.to_string())?;
    let opts = MonteCarloOptions {
        runs: 1000,
        horizon: 100.0,
        ..Default::default()
    };
    let report = montecarlo_positivity(&cfg, &opts).map_err(|e| e.to_string())?;
    let p_hat = report.p_hat.unwrap_or(f64::NAN);
    ensure(report.n_runs == 1000 && p_hat == 1.0, || {
        format!("p_hat = {p_hat} ({} / {})", report.successes, report.n_runs)
    })?;
    let worst = report
        .runs
        .iter()
        .map(|r| r.min_entry / r.initial_min_entry)
        .fold(f64::INFINITY, f64::min);
    Ok(format!(
        "N_min(0.01, 0.01) = {n_min}, 27000 >= {bound:.1}; p_hat = 1 over N = 1000 (worst min A(t) / min A(0) = {worst:.3})"
    ))
}

const LEMMA2: &str = r#"
n = 5
outputs = ["min_entry"]
[initial_appraisal]
kind = "dirichlet_rows"
min_entry = 0.02
[observation]
kind = "strongly_connected_random"
density = 0.3
[model]
kind = "assign_appraise_influence"
[integrator]
t_end = 100.0
sample_every = 1.0
"#;

fn lemma2_consistency() -> Outcome {
    let mut worst_ratio = f64::INFINITY;
    let mut thresholds = Vec::new();
    for seed in 1..=10 {
        let mut cfg = config(LEMMA2, seed);
        let (inst, _) = teamdyn::check(&cfg).map_err(|e| e.to_string())?;
        let w0 = inst.w0.as_ref().ok_or("influence instance without w(0)")?;
        let (_, xi0) = theorem4_bounds(&inst.x, w0).map_err(|e| e.to_string())?;
        let thr =
            lemma2_tau_threshold(&inst.x, xi0, &inst.spec.f, cfg.n).map_err(|e| e.to_string())?;
        cfg.model.tau_ave = 1.0;
        cfg.model.tau_app = thr.max(1e-3);
        thresholds.push(thr);
        let out = run(&cfg)?;
        let a0_min = inst
            .a0
            .as_ref()
            .expect("appraisal run")
            .matrix()
            .min_entry();
        let ratio = out.trajectory.min_entry / a0_min;
        worst_ratio = worst_ratio.min(ratio);
        ensure(
            out.trajectory.status != TerminalStatus::PositivityLost,
            || format!("seed {seed}: positivity lost"),
        )?;
        ensure(ratio >= 0.5, || {
            format!("seed {seed}: min A(t) / min A(0) = {ratio:.3e}")
        })?;
    }
    let (lo, hi) = thresholds
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &t| (l.min(t), h.max(t)));
    Ok(format!(
        "10/10 configs at tau_app/tau_ave = threshold in [{lo:.3}, {hi:.3}], worst min A(t) / min A(0) = {worst_ratio:.3}"
    ))
}

fn random_primitive(rng: &mut ChaCha8Rng, n: usize) -> AppraisalMatrix {
    loop {
        let density = rng.random_range(0.3..1.0);
        let mut m = Matrix::from_fn(n, |_, _| {
            if rng.random_bool(density) {
                rng.random_range(0.01..1.0)
            } else {
                0.0
            }
        });
        let sums = m.row_sums();
        if sums.contains(&0.0) {
            continue;
        }
        for (i, s) in sums.iter().enumerate() {
            m.row_mut(i).iter_mut().for_each(|v| *v /= s);
        }
        if classify_connectivity(&m).expect("square").primitive {
            return AppraisalMatrix::new(m).expect("row-stochastic");
        }
    }
}

fn boolean_reach(adj: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut r: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i == j || adj[i][j]).collect())
        .collect();
    for _ in 0..n {
        r = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| r[i][j] || (0..n).any(|k| r[i][k] && adj[k][j]))
                    .collect()
            })
            .collect();
    }
    r
}

fn primitive_by_powers(adj: &[Vec<bool>]) -> bool {
    let n = adj.len();
    let mut p = adj.to_vec();
    for _ in 0..((n - 1) * (n - 1) + 1) {
        if p.iter().flatten().all(|&b| b) {
            return true;
        }
        p = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).any(|k| p[i][k] && adj[k][j]))
                    .collect()
            })
            .collect();
    }
    false
}

fn brute_force_triads(n: usize, edges: &BTreeSet<(usize, usize)>) -> usize {
    let e = |a: usize, b: usize| edges.contains(&(a, b));
    let mut bad = BTreeSet::new();
    for u in 0..n {
        for v in 0..n {
            for z in 0..n {
                if u != v && v != z && u != z && e(u, v) && e(v, z) && !e(u, z) {
                    let mut t = [u, v, z];
                    t.sort_unstable();
                    bad.insert(t);
                }
            }
        }
    }
    bad.len()
}

fn oracle_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut eig_gap: f64 = 0.0;
    for k in 0..200 {
        let a = random_primitive(&mut rng, 3 + k % 6);
        let w = left_dominant_eigenvector(&a, &EigenOptions::default(), None)
            .map_err(|e| e.to_string())?;
        eig_gap = eig_gap.max(max_abs(
            w.as_slice(),
            workload_diffusion(&a, 10_000).as_slice(),
        ));
    }
    ensure(eig_gap < 1e-8, || {
        format!("eigenvector vs diffusion gap {eig_gap:.3e}")
    })?;

    let mut patterns = 0usize;
    for n in 2..=4usize {
        for bits in 0..(1u32 << (n * n)) {
            let adj: Vec<Vec<bool>> = (0..n)
                .map(|i| (0..n).map(|j| bits >> (i * n + j) & 1 == 1).collect())
                .collect();
            let report =
                classify_connectivity(&Matrix::from_fn(n, |i, j| f64::from(u8::from(adj[i][j]))))
                    .map_err(|e| e.to_string())?;
            let r = boolean_reach(&adj);
            let strongly = r.iter().flatten().all(|&b| b);
            let reachable: BTreeSet<usize> = (0..n).filter(|&j| (0..n).all(|i| r[i][j])).collect();
            ensure(
                report.strongly_connected == strongly
                    && report.globally_reachable_nodes == reachable
                    && report.primitive == primitive_by_powers(&adj),
                || format!("connectivity mismatch on n = {n}, pattern {bits:b}"),
            )?;
            patterns += 1;
        }
    }

    let mut graphs = 0usize;
    for _ in 0..3000 {
        let n = rng.random_range(3..=6);
        let edges: BTreeSet<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j)
            .filter(|_| rng.random_bool(0.4))
            .collect();
        let expected = brute_force_triads(n, &edges);
        let got = nontransitive_triad_count(&ComparativeAppraisalGraph { n, edges })
            .map_err(|e| e.to_string())?;
        ensure(got == expected, || {
            format!("triad count {got} vs brute force {expected}")
        })?;
        graphs += 1;
    }
    let a = Matrix::from_fn(4, |i, j| if i == j { 0.4 } else { 0.2 });
    ensure(
        nontransitive_triad_count(&comparative_graph(&a)) == Ok(0),
        || "uniform-row census".into(),
    )?;
    Ok(format!(
        "eigenvector gap {eig_gap:.1e} over 200 matrices; {patterns} connectivity patterns (n <= 4); {graphs} triad censuses (n <= 6)"
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results: Vec<(&str, &str, Outcome)> = Vec::new();
    let mut report = |id: &'static str, title: &'static str, outcome: Outcome| {
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(d) => ("FAIL", d.as_str()),
        };
        println!("criterion {id:>2} [{title}]: {tag} - {detail}");
        results.push((id, title, outcome));
    };

    report("1", "manager convergence", manager_convergence());
    match assign_appraise_runs() {
        Ok(runs) => {
            report(
                "2",
                "assign/appraise learning",
                assign_appraise_learning(&runs),
            );
            report("3", "structure identity", structure_identity(&runs));
            report("4", "invariant set", invariant_set(&runs));
            report("5", "generalized replicator", generalized_replicator(&runs));
        }
        Err(e) => {
            for (id, title) in [
                ("2", "assign/appraise learning"),
                ("3", "structure identity"),
                ("4", "invariant set"),
                ("5", "generalized replicator"),
            ] {
                report(id, title, Err(e.clone()));
            }
        }
    }
    report(
        "6",
        "collective learning with influence",
        collective_learning(),
    );
    report("7", "failure modes", failure_modes());
    report("8", "TMS metrics", tms_metrics());
    report("9", "Monte Carlo positivity", monte_carlo());
    report("10", "Lemma 2 consistency", lemma2_consistency());
    report("11", "oracle suites", oracle_suites());

    let failed = results.iter().filter(|r| r.2.is_err()).count();
    println!(
        "acceptance: {}/{} criteria passed in {:.1} s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
