//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use gensel::dense;
use gensel::experiments::{
    default_observable, generate_dataset, mean, run_expressibility_trials, run_training_trials,
    select_for_trial, student_t_test, DatasetSpec, ExpressibilityConfig, SelectionSettings, TrialPlan,
};
use gensel::optimizer::SpsaConfig;
use gensel::pauli::double_commutator_norm_sq;
use gensel::seeds;
use gensel::selection::{build_pool, evaluate_selection, select, solve_exact, Method, SelectionProblem, SelectionRequest};
use gensel::simulator::{run_model, CircuitModel};
use gensel::theory::{dense_quantities, ObservableInAlgebra, Theory, MAX_DENSE_QUBITS};
use gensel::PauliString;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_string(n: usize, rng: &mut seeds::Rng) -> PauliString {
    PauliString::from_index(n, rng.gen_range(1..4u128.pow(n as u32))).unwrap()
}

fn random_anticommuting(o: &PauliString, rng: &mut seeds::Rng) -> PauliString {
    loop {
        let g = random_string(o.qubits(), rng);
        if g.anticommutes(o).unwrap() {
            return g;
        }
    }
}

fn double_commutator_exactness() -> Outcome {
    let start = Instant::now();
    let mut rng = seeds::rng(1);
    let (mut zeros, mut fulls) = (0, 0);
    for _ in 0..10_000 {
        let o = random_string(5, &mut rng);
        let gj = random_anticommuting(&o, &mut rng);
        let gk = random_anticommuting(&o, &mut rng);
        let v = double_commutator_norm_sq(&gk, &gj, &o).map_err(|e| e.to_string())?;
        if gk.anticommutes(&gj).unwrap() {
            ensure(v == 0, || format!("{gk} {gj} {o}: expected 0, got {v}"))?;
            zeros += 1;
        } else {
            ensure(v == 512, || format!("{gk} {gj} {o}: expected 512, got {v}"))?;
            fulls += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("{zeros} anticommuting pairs -> 0, {fulls} commuting pairs -> 512, {elapsed:.2?}"))
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 { 0.0 } else { (a - b).abs() / s }
}

fn casimir_identities() -> Outcome {
    let mut worst_dense = 0.0f64;
    let mut worst_identity = 0.0f64;
    let mut worst_slack = f64::INFINITY;
    let mut rng = seeds::rng(2);
    for n in 1..=MAX_DENSE_QUBITS {
        let theory = Theory::<f64>::new(n).map_err(|e| e.to_string())?;
        let c = *theory.casimir();
        if n == 1 {
            ensure((c - 4.0).abs() < 1e-12, || format!("c at n=1 is {c}"))?;
        }
        for _ in 0..20 {
            let o = ObservableInAlgebra::random_unit(n, &mut rng).map_err(|e| e.to_string())?;
            let t1 = theory.first_order(&o).map_err(|e| e.to_string())?;
            let l1 = theory.second_order(&o).map_err(|e| e.to_string())?;
            let h = theory.hessian_split(&o).map_err(|e| e.to_string())?;
            let dq = dense_quantities(&o).map_err(|e| e.to_string())?;
            for (s, d) in [
                (c, dq.casimir),
                (t1.lhs, dq.thm1_lhs),
                (l1.lhs, dq.lemma1_lhs),
                (h.diag_sum, dq.diag_sum),
                (h.offdiag_sum, dq.offdiag_sum),
            ] {
                worst_dense = worst_dense.max(rel(s, d));
            }
            worst_identity = worst_identity.max(rel(t1.lhs, t1.rhs)).max(rel(l1.lhs, l1.rhs));
            let scale = l1.rhs;
            worst_slack = worst_slack
                .min((h.diag_sum - h.lower_bound) / scale)
                .min((h.upper_bound - h.offdiag_sum) / scale);
        }
    }
    ensure(worst_dense < 1e-9, || format!("symbolic vs dense {worst_dense:e}"))?;
    ensure(worst_identity < 1e-9, || format!("identity error {worst_identity:e}"))?;
    ensure(worst_slack >= -1e-8, || format!("inequality slack {worst_slack:e}"))?;

    let start = Instant::now();
    let theory = Theory::<f64>::new(5).map_err(|e| e.to_string())?;
    let o = ObservableInAlgebra::basis_element(&"ZIIII".parse().unwrap(), 1.0).map_err(|e| e.to_string())?;
    let t1 = theory.first_order(&o).map_err(|e| e.to_string())?;
    let l1 = theory.second_order(&o).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(rel(t1.lhs, t1.rhs) < 1e-9 && rel(l1.lhs, l1.rhs) < 1e-9, || {
        format!("n=5: thm1 {} vs {}, lemma1 {} vs {}", t1.lhs, t1.rhs, l1.lhs, l1.rhs)
    })?;
    ensure(elapsed < Duration::from_secs(60), || format!("n=5 took {elapsed:?}"))?;
    Ok(format!(
        "dense rel err {worst_dense:.1e}, identity err {worst_identity:.1e}, min slack {worst_slack:.3}, n=5 c={} in {elapsed:.2?}",
        theory.casimir()
    ))
}

/// Best score and lexicographically first optimal index set by enumeration.
fn brute_force(cands: &[PauliString], budget: usize) -> (usize, Vec<usize>) {
    let m = cands.len();
    let mut best = (0usize, Vec::new());
    let mut found = false;
    let mut idx: Vec<usize> = (0..budget).collect();
    loop {
        let mut score = 0;
        for a in 0..budget {
            for b in a + 1..budget {
                if cands[idx[a]].anticommutes(&cands[idx[b]]).unwrap() {
                    score += 1;
                }
            }
        }
        if !found || score > best.0 {
            best = (score, idx.clone());
            found = true;
        }
        // Next combination in lexicographic order.
        let mut i = budget;
        while i > 0 && idx[i - 1] == m - budget + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return best;
        }
        idx[i - 1] += 1;
        for j in i..budget {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn selection_optimality() -> Outcome {
    let start = Instant::now();
    let observable: PauliString = "ZIIII".parse().unwrap();
    let r = select(Method::Exact, &SelectionRequest::new(observable, 5)).map_err(|e| e.to_string())?;
    let m = evaluate_selection(&r.chosen, &observable).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(r.score == 10, || format!("score {}", r.score))?;
    ensure((m.commute_with_observable, m.commuting_pairs) == (0, 0), || format!("{m:?}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;

    let mut rng = seeds::rng(3);
    for case in 0..100 {
        let n = rng.gen_range(2..=4);
        let o = random_string(n, &mut rng);
        let full = build_pool(&o, n, None).map_err(|e| e.to_string())?;
        let size = rng.gen_range(4..=15.min(full.len()));
        let pool = build_pool(&o, n, Some((size, rng.gen()))).map_err(|e| e.to_string())?;
        let budget = rng.gen_range(2..=size.min(7));
        let problem = SelectionProblem::new(o, pool.clone(), budget).map_err(|e| e.to_string())?;
        let got = solve_exact(&problem).map_err(|e| e.to_string())?;
        let (score, indices) = brute_force(&pool, budget);
        ensure(got.score == score && got.indices == indices, || {
            format!("case {case}: solver {} {:?}, enumeration {score} {indices:?}", got.score, got.indices)
        })?;
    }
    Ok(format!("score 10, (0, 0) in {elapsed:.2?}; 100 enumerated pools agree"))
}

fn random_baseline() -> Outcome {
    let o = default_observable(5).unwrap();
    let mut obs = Vec::new();
    let mut pairs = Vec::new();
    for t in 0..20 {
        let s = select_for_trial(Method::Random, t, 0, &o, 5, &SelectionSettings::default()).map_err(|e| e.to_string())?;
        obs.push(s.metrics.commute_with_observable as f64);
        pairs.push(s.metrics.commuting_pairs as f64);
    }
    let (mo, mp) = (mean(&obs), mean(&pairs));
    ensure((1.3..=3.4).contains(&mo), || format!("mean commuting with O {mo}"))?;
    ensure((3.6..=6.5).contains(&mp), || format!("mean commuting pairs {mp}"))?;
    Ok(format!("mean commuting with O {mo}, mean commuting pairs {mp}"))
}

fn expressibility() -> Outcome {
    let start = Instant::now();
    let cfg = ExpressibilityConfig::default();
    let trials = run_expressibility_trials(&TrialPlan::new(&[Method::Exact, Method::Random], 20, 5, 5, 0), &cfg)
        .map_err(|e| e.to_string())?;
    let h = |m: Method| mean(&trials.iter().filter(|t| t.selection.method == m).map(|t| t.hellinger).collect::<Vec<_>>());
    let (alg, rnd) = (h(Method::Exact), h(Method::Random));

    // Haar against itself: fidelities drawn by inversion of the Haar CDF.
    let d = 32.0;
    let q = gensel::experiments::haar_bin_probs(32, 50).unwrap();
    let mut rng = seeds::rng(5);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mut counts = vec![0u64; 50];
        for _ in 0..500 {
            let u: f64 = rng.gen();
            let f: f64 = 1.0 - u.powf(1.0 / (d - 1.0));
            counts[((f * 50.0) as usize).min(49)] += 1;
        }
        let p: Vec<f64> = counts.iter().map(|&c| c as f64 / 500.0).collect();
        worst = worst.max(gensel::experiments::hellinger_distance(&p, &q).unwrap());
    }
    let elapsed = start.elapsed();
    ensure((0.24..=0.34).contains(&alg), || format!("Algorithm mean {alg}"))?;
    ensure((0.26..=0.38).contains(&rnd), || format!("Random mean {rnd}"))?;
    ensure(worst < 0.15, || format!("Haar self-distance {worst}"))?;
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("Algorithm {alg:.4}, Random {rnd:.4}, Haar self-distance max {worst:.4}, {elapsed:.2?}"))
}

fn training_comparison() -> Outcome {
    let start = Instant::now();
    let spec = DatasetSpec::default();
    let (data, _) = generate_dataset(&spec).map_err(|e| e.to_string())?;
    let spsa = SpsaConfig::<f64>::default();
    let runs = run_training_trials(&TrialPlan::new(&[Method::Exact, Method::Random], 20, 5, 5, 0), &data, &spsa)
        .map_err(|e| e.to_string())?;
    let curve = |m: Method| {
        let traces: Vec<&Vec<f64>> = runs
            .iter()
            .filter(|r| r.selection.method == m)
            .map(|r| &r.record.normalized_trace)
            .collect();
        (0..=spsa.epochs)
            .map(|e| mean(&traces.iter().map(|t| t[e]).collect::<Vec<_>>()))
            .collect::<Vec<f64>>()
    };
    let (alg, rnd) = (curve(Method::Exact), curve(Method::Random));
    let below = (10..=150).filter(|&e| alg[e] <= rnd[e]).count();
    let fraction = below as f64 / 141.0;
    let finals = |m: Method| {
        runs.iter()
            .filter(|r| r.selection.method == m)
            .map(|r| *r.record.rmse_trace.last().unwrap())
            .collect::<Vec<_>>()
    };
    let t = student_t_test(&finals(Method::Exact), &finals(Method::Random)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let summary = format!(
        "Algorithm <= Random on {:.0}% of epochs 10..150, final means {:.4} / {:.4}, p = {:.4}, {elapsed:.2?}",
        100.0 * fraction,
        alg[spsa.epochs],
        rnd[spsa.epochs],
        t.p_value
    );
    ensure(fraction >= 0.6, || summary.clone())?;
    ensure(alg[spsa.epochs] < alg[0] && rnd[spsa.epochs] < rnd[0], || summary.clone())?;
    ensure(t.p_value > 0.01, || summary.clone())?;
    ensure(elapsed < Duration::from_secs(1800), || summary.clone())?;
    Ok(summary)
}

fn dense_output(gens: &[PauliString], o: &PauliString, theta: &[f64], x: f64) -> f64 {
    let n = o.qubits();
    let mut psi = dense::ry_layer(n, x) * dense::basis_state(n, 0);
    for (g, t) in gens.iter().zip(theta) {
        psi = dense::pauli_rotation(g, *t) * psi;
    }
    dense::expectation(&psi, &dense::pauli_matrix(o)).re
}

fn simulator() -> Outcome {
    let mut rng = seeds::rng(7);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=3);
        let depth = rng.gen_range(1..=6);
        let gens: Vec<PauliString> = (0..depth).map(|_| random_string(n, &mut rng)).collect();
        let o = random_string(n, &mut rng);
        let theta: Vec<f64> = (0..depth).map(|_| rng.gen_range(-3.2..3.2)).collect();
        let x = rng.gen_range(0.0..6.3);
        let model = CircuitModel::new(gens.clone(), o).map_err(|e| e.to_string())?;
        let got = run_model(&model, &theta, x).map_err(|e| e.to_string())?;
        worst = worst.max((got - dense_output(&gens, &o, &theta, x)).abs());
    }
    ensure(worst < 1e-10, || format!("max deviation {worst:e}"))?;

    let h = 1e-3;
    let mut worst_fd = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(2..=3);
        let o = random_string(n, &mut rng);
        let g1 = random_anticommuting(&o, &mut rng);
        let g2 = loop {
            let g = random_anticommuting(&o, &mut rng);
            if g != g1 && g.anticommutes(&g1).unwrap() {
                break g;
            }
        };
        let x = rng.gen_range(0.0..6.3);
        let model = CircuitModel::new(vec![g1, g2], o).map_err(|e| e.to_string())?;
        let f = |a: f64, b: f64| run_model(&model, &[a, b], x).unwrap();
        let fd = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
        let inner = dense::commutator(&dense::pauli_matrix(&g1), &dense::pauli_matrix(&o));
        let outer = dense::commutator(&dense::pauli_matrix(&g2), &inner);
        let psi = dense::ry_layer(n, x) * dense::basis_state(n, 0);
        let want = -dense::expectation(&psi, &outer).re;
        worst_fd = worst_fd.max((fd - want).abs());
    }
    ensure(worst_fd < 1e-5, || format!("mixed difference error {worst_fd:e}"))?;
    Ok(format!("200 configurations within {worst:.1e}; mixed difference error {worst_fd:.1e}"))
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_gensel"))
        .current_dir(dir)
        .env_remove("GENSEL_SEED")
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr).trim())
    })
}

fn cli_determinism() -> Outcome {
    let dirs = [tempfile::tempdir().map_err(|e| e.to_string())?, tempfile::tempdir().map_err(|e| e.to_string())?];
    let steps: [&[&str]; 6] = [
        &["--seed", "9", "select", "--n", "5", "--observable", "ZIIII", "--depth", "5", "--method", "genetic", "--out", "select.csv"],
        &["--seed", "9", "gen-data", "--samples", "30", "--out", "data.csv"],
        &["--seed", "9", "train", "--data", "data.csv", "--method", "exact,random", "--trials", "3", "--epochs", "4", "--out", "traces.csv"],
        &["--seed", "9", "expressibility", "--method", "exact,random,pair-only", "--trials", "3", "--samples", "100", "--bins", "20", "--out", "expr.csv"],
        &["--seed", "9", "verify-theory", "--n", "2", "--trials", "3", "--out", "theory.csv"],
        &["--seed", "9", "report", "--traces", "traces.csv", "--expr", "expr.csv", "--table", "table1.csv", "--svg", "curves.svg", "--deterministic"],
    ];
    for dir in &dirs {
        for step in steps {
            run_cli(dir.path(), step)?;
        }
    }
    let files = ["select.csv", "data.csv", "traces.csv", "expr.csv", "theory.csv", "table1.csv", "curves.svg"];
    for f in files {
        let a = std::fs::read(dirs[0].path().join(f)).map_err(|e| format!("{f}: {e}"))?;
        let b = std::fs::read(dirs[1].path().join(f)).map_err(|e| format!("{f}: {e}"))?;
        ensure(!a.is_empty() && a == b, || format!("{f} differs between runs"))?;
    }
    Ok(format!("{} outputs byte-identical across two runs", files.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("double-commutator norms are exactly 0 or 2^(n+4)", double_commutator_exactness),
        ("Casimir identities and Hessian bounds", casimir_identities),
        ("exact selection is optimal", selection_optimality),
        ("random baseline commutation statistics", random_baseline),
        ("expressibility Hellinger distances", expressibility),
        ("training comparison against random generators", training_comparison),
        ("simulator against dense oracle", simulator),
        ("CLI byte determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PRIMARY] {}. {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[PRIMARY] {}. {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
