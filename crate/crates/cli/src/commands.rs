use std::collections::BTreeMap;
use std::path::Path;

use gensel::experiments::{
    default_observable, final_epoch_t_test, generate_dataset, hellinger_summaries, mean,
    run_expressibility_trials, run_training_trials, sample_std, selection_summaries, trace_summaries,
    ExpressibilityTrial, MetricSummary, TrialPlan, TrialSelection, TTest,
};
use gensel::selection::{evaluate_selection, select, Method, SelectionRequest};
use gensel::theory::verify_random;
use gensel::PauliString;
use serde::Deserialize;

use crate::cli::{ExpressibilityArgs, GenDataArgs, ReportArgs, SelectArgs, TrainArgs, VerifyTheoryArgs};
use crate::config::{self, FileConfig, Provenance, SpsaFlags};
use crate::error::CliError;
use crate::output::{csv_buffer, emit, finish, float, read_csv, write_provenance};
use crate::svg;

const DEFAULT_TRIALS: usize = 20;
const DEFAULT_COMPARISON: [Method; 2] = [Method::Exact, Method::Random];

fn parse_observable(text: Option<&str>, n: usize) -> Result<PauliString, CliError> {
    match text {
        Some(t) => PauliString::parse_n(t, n).map_err(CliError::Pauli),
        None => default_observable(n).map_err(CliError::Core),
    }
}

fn join_generators(gens: &[PauliString]) -> String {
    gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn select_cmd(args: &SelectArgs, seed: Option<u64>, file: &FileConfig) -> Result<(), CliError> {
    let spec = config::dataset_spec(file, args.circuit.n, args.circuit.depth, None, None);
    let obs_text = args.observable.clone().or_else(|| file.selection.observable.clone());
    let observable = parse_observable(obs_text.as_deref(), spec.n)?;
    let method = match &args.method {
        Some(m) => m.parse::<Method>()?,
        None => config::methods(&[], file, &[Method::Exact])?[0],
    };
    let settings = config::selection_settings(file, args.pool_subsample);
    let seed = seed.or(file.seed);
    let mut request = SelectionRequest::new(observable, spec.depth);
    request.seed = seed;
    request.pool_subsample = settings.pool_subsample;
    request.genetic = settings.genetic.clone();
    let result = select(method, &request)?;
    let metrics = evaluate_selection(&result.chosen, &observable)?;

    let mut w = csv_buffer();
    let mut header = vec!["method".to_string(), "seed".to_string()];
    header.extend((1..=result.chosen.len()).map(|i| format!("generator_{i}")));
    header.extend(["score", "n_commute_obs", "n_commute_pairs"].map(String::from));
    w.write_record(&header)?;
    let mut row = vec![method.as_str().to_string(), seed.map(|s| s.to_string()).unwrap_or_default()];
    row.extend(result.chosen.iter().map(|g| g.to_string()));
    row.extend([
        result.score.to_string(),
        metrics.commute_with_observable.to_string(),
        metrics.commuting_pairs.to_string(),
    ]);
    w.write_record(&row)?;
    emit(args.out.as_deref(), &finish(w)?)?;

    let mut prov = Provenance::new("select", seed);
    prov.dataset = Some(config::DatasetSection {
        n: Some(spec.n),
        depth: Some(spec.depth),
        ..Default::default()
    });
    prov.selection = Some(config::selection_section(&[method], None, Some(observable.to_string()), &settings));
    write_provenance(args.out.as_deref(), &prov)
}

pub fn gen_data_cmd(args: &GenDataArgs, seed: Option<u64>, file: &FileConfig) -> Result<(), CliError> {
    let spec = config::dataset_spec(file, args.circuit.n, args.circuit.depth, args.samples, seed);
    let (data, _) = generate_dataset(&spec)?;
    let mut w = csv_buffer();
    w.write_record(["index", "x", "y"])?;
    for (i, (x, y)) in data.iter().enumerate() {
        w.write_record([i.to_string(), float(*x), float(*y)])?;
    }
    emit(args.out.as_deref(), &finish(w)?)?;
    let mut prov = Provenance::new("gen-data", Some(spec.teacher_seed));
    prov.dataset = Some(config::dataset_section(&spec));
    write_provenance(args.out.as_deref(), &prov)
}

#[derive(Deserialize)]
struct DataRow {
    #[allow(dead_code)]
    index: usize,
    x: f64,
    y: f64,
}

fn read_dataset(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let mut r = read_csv(path)?;
    let rows = r
        .deserialize::<DataRow>()
        .map(|row| row.map(|d| (d.x, d.y)).map_err(|e| CliError::Csv(format!("{}: {e}", path.display()))))
        .collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Err(CliError::Core(gensel::Error::EmptyDataset));
    }
    Ok(rows)
}

pub fn train_cmd(args: &TrainArgs, seed: Option<u64>, file: &FileConfig) -> Result<(), CliError> {
    let spec = config::dataset_spec(file, args.circuit.n, args.circuit.depth, None, None);
    let methods = config::methods(&args.method, file, &DEFAULT_COMPARISON)?;
    let trials = args.trials.or(file.selection.trials).unwrap_or(DEFAULT_TRIALS);
    let spsa = config::spsa_config(
        file,
        SpsaFlags {
            learning_rate: args.learning_rate,
            momentum: args.momentum,
            perturbation: args.perturbation,
            epochs: args.epochs,
            batch_size: args.batch_size,
        },
    );
    let settings = config::selection_settings(file, None);
    let master = seed.or(file.seed).unwrap_or(0);
    let data = read_dataset(&args.data)?;
    let plan = TrialPlan {
        selection: settings.clone(),
        ..TrialPlan::new(&methods, trials, spec.n, spec.depth, master)
    };
    let runs = run_training_trials(&plan, &data, &spsa)?;

    let mut w = csv_buffer();
    w.write_record(["method", "trial", "epoch", "rmse", "rmse_normalized"])?;
    for run in &runs {
        let sel = &run.selection;
        for (epoch, (raw, norm)) in run.record.rmse_trace.iter().zip(&run.record.normalized_trace).enumerate() {
            w.write_record([
                sel.method.as_str().to_string(),
                sel.trial.to_string(),
                epoch.to_string(),
                float(*raw),
                float(*norm),
            ])?;
        }
    }
    emit(args.out.as_deref(), &finish(w)?)?;

    let mut prov = Provenance::new("train", Some(master));
    prov.dataset = Some(config::DatasetSection {
        n: Some(spec.n),
        depth: Some(spec.depth),
        samples: Some(data.len()),
        ..Default::default()
    });
    prov.spsa = Some(config::spsa_section(&spsa));
    prov.selection = Some(config::selection_section(&methods, Some(trials), None, &settings));
    let mut inputs = toml::Table::new();
    inputs.insert("data".into(), args.data.display().to_string().into());
    prov.inputs = Some(inputs);
    write_provenance(args.out.as_deref(), &prov)
}

fn join_counts(counts: &[u64]) -> String {
    counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn expressibility_cmd(args: &ExpressibilityArgs, seed: Option<u64>, file: &FileConfig) -> Result<(), CliError> {
    let spec = config::dataset_spec(file, args.circuit.n, args.circuit.depth, None, None);
    let methods = config::methods(&args.method, file, &DEFAULT_COMPARISON)?;
    let trials = args.trials.or(file.selection.trials).unwrap_or(DEFAULT_TRIALS);
    let cfg = config::expressibility_config(file, args.samples, args.bins);
    let settings = config::selection_settings(file, None);
    let master = seed.or(file.seed).unwrap_or(0);
    let plan = TrialPlan {
        selection: settings.clone(),
        ..TrialPlan::new(&methods, trials, spec.n, spec.depth, master)
    };
    let runs = run_expressibility_trials(&plan, &cfg)?;

    let mut w = csv_buffer();
    w.write_record(["method", "trial", "seed", "generators", "counts", "hellinger"])?;
    for run in &runs {
        let sel = &run.selection;
        w.write_record([
            sel.method.as_str().to_string(),
            sel.trial.to_string(),
            sel.seed.to_string(),
            join_generators(&sel.generators),
            join_counts(&run.counts),
            float(run.hellinger),
        ])?;
    }
    emit(args.out.as_deref(), &finish(w)?)?;

    let mut prov = Provenance::new("expressibility", Some(master));
    prov.dataset = Some(config::DatasetSection {
        n: Some(spec.n),
        depth: Some(spec.depth),
        ..Default::default()
    });
    prov.expressibility = Some(config::expressibility_section(&cfg));
    prov.selection = Some(config::selection_section(&methods, Some(trials), None, &settings));
    write_provenance(args.out.as_deref(), &prov)
}

pub fn verify_theory_cmd(args: &VerifyTheoryArgs, seed: Option<u64>, file: &FileConfig) -> Result<(), CliError> {
    let master = seed.or(file.seed).unwrap_or(0);
    let rows = verify_random(args.n, args.trials, master)?;
    let mut w = csv_buffer();
    w.write_record([
        "n", "d", "c_measured", "thm1_lhs", "thm1_rhs", "lemma1_lhs", "lemma1_rhs", "diag_sum", "offdiag_sum",
        "lower_bound", "upper_bound", "max_rel_err",
    ])?;
    for r in &rows {
        w.write_record([
            r.n.to_string(),
            r.d.to_string(),
            float(r.c_measured),
            float(r.thm1_lhs),
            float(r.thm1_rhs),
            float(r.lemma1_lhs),
            float(r.lemma1_rhs),
            float(r.diag_sum),
            float(r.offdiag_sum),
            float(r.lower_bound),
            float(r.upper_bound),
            float(r.max_rel_err),
        ])?;
    }
    emit(args.out.as_deref(), &finish(w)?)?;
    let mut prov = Provenance::new("verify-theory", Some(master));
    let mut inputs = toml::Table::new();
    inputs.insert("n".into(), (args.n as i64).into());
    inputs.insert("trials".into(), (args.trials as i64).into());
    prov.inputs = Some(inputs);
    write_provenance(args.out.as_deref(), &prov)
}

#[derive(Deserialize)]
struct TraceRow {
    method: String,
    trial: usize,
    epoch: usize,
    rmse: f64,
    rmse_normalized: f64,
}

#[derive(Deserialize)]
struct ExprRow {
    method: String,
    trial: usize,
    seed: u64,
    generators: String,
    counts: String,
    hellinger: f64,
}

type Traces = BTreeMap<(Method, usize), Vec<(usize, f64, f64)>>;

fn read_traces(path: &Path) -> Result<Traces, CliError> {
    let mut traces: Traces = BTreeMap::new();
    for row in read_csv(path)?.deserialize::<TraceRow>() {
        let row = row.map_err(|e| CliError::Csv(format!("{}: {e}", path.display())))?;
        let method: Method = row.method.parse()?;
        traces
            .entry((method, row.trial))
            .or_default()
            .push((row.epoch, row.rmse, row.rmse_normalized));
    }
    for ((method, trial), rows) in traces.iter_mut() {
        rows.sort_by_key(|r| r.0);
        if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
            return Err(CliError::Csv(format!(
                "{}: epochs of {method} trial {trial} are not 0..{}",
                path.display(),
                rows.len()
            )));
        }
    }
    Ok(traces)
}

fn read_expressibility(path: &Path) -> Result<Vec<ExpressibilityTrial>, CliError> {
    let mut out = Vec::new();
    for row in read_csv(path)?.deserialize::<ExprRow>() {
        let row = row.map_err(|e| CliError::Csv(format!("{}: {e}", path.display())))?;
        let generators = row
            .generators
            .split_whitespace()
            .map(|g| g.parse::<PauliString>().map_err(CliError::Pauli))
            .collect::<Result<Vec<_>, _>>()?;
        let counts = row
            .counts
            .split_whitespace()
            .map(|c| c.parse::<u64>().map_err(|e| CliError::Csv(format!("{}: counts: {e}", path.display()))))
            .collect::<Result<Vec<_>, _>>()?;
        let n = generators.first().map(|g| g.qubits()).ok_or_else(|| {
            CliError::Csv(format!("{}: row without generators", path.display()))
        })?;
        let observable = default_observable(n)?;
        out.push(ExpressibilityTrial {
            selection: TrialSelection {
                method: row.method.parse()?,
                trial: row.trial,
                seed: row.seed,
                metrics: evaluate_selection(&generators, &observable)?,
                generators,
            },
            counts,
            hellinger: row.hellinger,
        });
    }
    Ok(out)
}

pub fn t_test_line(t: Option<TTest>) -> String {
    match t {
        Some(t) => format!(
            "t-test {} vs {} (final-epoch RMSE): t={} dof={} p={}",
            Method::Exact.as_str(),
            Method::Random.as_str(),
            t.statistic,
            t.dof,
            t.p_value
        ),
        None => format!(
            "t-test {} vs {} (final-epoch RMSE): unavailable (needs at least 2 trials of each)",
            Method::Exact.as_str(),
            Method::Random.as_str()
        ),
    }
}

pub fn report_cmd(args: &ReportArgs, seed: Option<u64>) -> Result<(), CliError> {
    let traces = read_traces(&args.traces)?;
    let normalized: Vec<(Method, Vec<f64>)> = traces
        .iter()
        .map(|((m, _), rows)| (*m, rows.iter().map(|r| r.2).collect()))
        .collect();
    let summaries = trace_summaries(normalized.iter().map(|(m, v)| (*m, v.as_slice())))?;
    let finals: Vec<(Method, f64)> = traces
        .iter()
        .filter_map(|((m, _), rows)| rows.last().map(|r| (*m, r.1)))
        .collect();
    let t_test = final_epoch_t_test(&finals, Method::Exact, Method::Random)?;

    let mut table: Vec<MetricSummary> = Vec::new();
    if let Some(expr) = &args.expr {
        let trials = read_expressibility(expr)?;
        let selections: Vec<TrialSelection> = trials.iter().map(|t| t.selection.clone()).collect();
        if let Some(first) = selections.first() {
            let observable = default_observable(first.generators[0].qubits())?;
            table.extend(selection_summaries(&selections, &observable)?);
        }
        table.extend(hellinger_summaries(&trials));
    }
    let mut by_method: BTreeMap<Method, Vec<f64>> = BTreeMap::new();
    for ((m, _), rows) in &traces {
        if let Some(last) = rows.last() {
            by_method.entry(*m).or_default().push(last.2);
        }
    }
    for (m, v) in by_method {
        table.push(MetricSummary {
            method: m,
            metric: "final_rmse_normalized".into(),
            mean: mean(&v),
            std: sample_std(&v),
        });
    }
    // Stable sort keeps each method's metric order.
    table.sort_by_key(|s| s.method);

    let mut w = csv_buffer();
    w.write_record(["method", "metric", "mean", "std"])?;
    for s in &table {
        w.write_record([s.method.as_str().to_string(), s.metric.clone(), float(s.mean), float(s.std)])?;
    }
    emit(Some(&args.table), &finish(w)?)?;

    let stamp = if args.deterministic {
        None
    } else {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs())
    };
    let svg_text = svg::render(&summaries, stamp);
    std::fs::write(&args.svg, svg_text).map_err(|e| CliError::io(&args.svg, e))?;
    println!("{}", t_test_line(t_test));

    let mut prov = Provenance::new("report", seed);
    let mut inputs = toml::Table::new();
    inputs.insert("traces".into(), args.traces.display().to_string().into());
    if let Some(e) = &args.expr {
        inputs.insert("expr".into(), e.display().to_string().into());
    }
    inputs.insert("svg".into(), args.svg.display().to_string().into());
    prov.inputs = Some(inputs);
    write_provenance(Some(&args.table), &prov)
}
