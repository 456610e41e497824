//! Teacher data, multi-seed comparison of selection methods, expressibility and
//! the final-epoch t-test.
//!
//! Every trial is keyed by `(method, trial)`; its seed is
//! `derive(master, stream_id(method.as_str()), trial)`. Selection, training and
//! expressibility for that trial all branch off this one seed, so separate runs
//! (training here, expressibility there) agree on the generators.

mod expressibility;
mod stats;

use std::f64::consts::PI;

use rand::distributions::{Distribution, Uniform};
use rand::seq::index::sample;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::optimizer::{train, Sample, SpsaConfig, TrialRecord};
use crate::pauli::PauliString;
use crate::seeds;
use crate::selection::{evaluate_selection, select, GeneticConfig, Method, SelectionMetrics, SelectionRequest};
use crate::simulator::{run_model, CircuitModel};

pub use expressibility::{
    expressibility_hellinger, fidelity_histogram, haar_bin_probs, hellinger_distance, hellinger_from_counts,
    ExpressibilityConfig,
};
pub use stats::{
    ln_gamma, mean, regularized_incomplete_beta, sample_std, student_t_pvalue, student_t_test, TTest,
};

/// `Z` on qubit 0, identity elsewhere.
pub fn default_observable(n: usize) -> Result<PauliString> {
    PauliString::single(n, 0, 'Z')
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSpec {
    pub n: usize,
    pub depth: usize,
    pub theta_range: (f64, f64),
    pub input_range: (f64, f64),
    pub samples: usize,
    pub teacher_seed: u64,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        Self {
            n: 5,
            depth: 5,
            theta_range: (-PI, PI),
            input_range: (0.0, 2.0 * PI),
            samples: 100,
            teacher_seed: 0,
        }
    }
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("theta_range", self.theta_range), ("input_range", self.input_range)] {
            if !lo.is_finite() || !hi.is_finite() || lo > hi {
                return Err(Error::InvalidConfig(format!("{name} [{lo}, {hi}]")));
            }
        }
        if self.samples == 0 {
            return Err(Error::InvalidConfig("samples = 0".into()));
        }
        if self.depth == 0 {
            return Err(Error::InvalidConfig("depth = 0".into()));
        }
        if self.n == 0 || self.n > 30 {
            return Err(Error::QubitCount(self.n));
        }
        Ok(())
    }
}

/// Teacher circuit behind a generated dataset.
#[derive(Clone, Debug)]
pub struct Teacher {
    pub model: CircuitModel,
    pub theta: Vec<f64>,
}

fn uniform(range: (f64, f64)) -> Uniform<f64> {
    Uniform::new_inclusive(range.0, range.1)
}

/// Draws `depth` distinct non-identity teacher generators, teacher angles and
/// inputs, and labels each input with the teacher's output.
pub fn generate_dataset(spec: &DatasetSpec) -> Result<(Vec<Sample<f64>>, Teacher)> {
    spec.validate()?;
    let n = spec.n;
    let available = (1u128 << (2 * n)) - 1;
    if spec.depth as u128 > available {
        return Err(Error::InfeasibleBudget {
            budget: spec.depth,
            available: available.min(usize::MAX as u128) as usize,
        });
    }
    let mut rng = seeds::rng(spec.teacher_seed);
    let generators = sample(&mut rng, available as usize, spec.depth)
        .into_iter()
        .map(|i| PauliString::from_index(n, i as u128 + 1))
        .collect::<Result<Vec<_>>>()?;
    let model = CircuitModel::new(generators, default_observable(n)?)?;
    let theta_dist = uniform(spec.theta_range);
    let theta: Vec<f64> = (0..spec.depth).map(|_| theta_dist.sample(&mut rng)).collect();
    let x_dist = uniform(spec.input_range);
    let xs: Vec<f64> = (0..spec.samples).map(|_| x_dist.sample(&mut rng)).collect();
    let data = xs
        .into_iter()
        .map(|x| Ok((x, run_model(&model, &theta, x)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((data, Teacher { model, theta }))
}

/// Seed for trial `trial` of `method`.
pub fn trial_seed(master: u64, method: Method, trial: usize) -> u64 {
    seeds::derive(master, seeds::stream_id(method.as_str()), trial as u64)
}

/// Selection knobs shared by every trial.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SelectionSettings {
    pub pool_subsample: Option<usize>,
    pub genetic: GeneticConfig,
}

/// Generators chosen for one trial, with their commutation counts.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialSelection {
    pub method: Method,
    pub trial: usize,
    pub seed: u64,
    pub generators: Vec<PauliString>,
    pub metrics: SelectionMetrics,
}

pub fn select_for_trial(
    method: Method,
    trial: usize,
    master: u64,
    observable: &PauliString,
    depth: usize,
    settings: &SelectionSettings,
) -> Result<TrialSelection> {
    let seed = trial_seed(master, method, trial);
    let mut request = SelectionRequest::new(*observable, depth).with_seed(seed);
    request.pool_subsample = settings.pool_subsample;
    request.genetic = settings.genetic.clone();
    let result = select(method, &request)?;
    let metrics = evaluate_selection(&result.chosen, observable)?;
    Ok(TrialSelection {
        method,
        trial,
        seed,
        generators: result.chosen,
        metrics,
    })
}

/// Which `(method, trial)` pairs to run, and on what circuit shape.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialPlan {
    pub methods: Vec<Method>,
    pub trials: usize,
    pub n: usize,
    pub depth: usize,
    pub master_seed: u64,
    pub selection: SelectionSettings,
}

impl TrialPlan {
    pub fn new(methods: &[Method], trials: usize, n: usize, depth: usize, master_seed: u64) -> Self {
        Self {
            methods: methods.to_vec(),
            trials,
            n,
            depth,
            master_seed,
            selection: SelectionSettings::default(),
        }
    }

    fn select(&self, method: Method, trial: usize, observable: &PauliString) -> Result<TrialSelection> {
        select_for_trial(method, trial, self.master_seed, observable, self.depth, &self.selection)
    }
}

fn jobs(methods: &[Method], trials: usize) -> Vec<(Method, usize)> {
    let mut methods = methods.to_vec();
    methods.sort();
    methods.dedup();
    methods
        .into_iter()
        .flat_map(|m| (0..trials).map(move |t| (m, t)))
        .collect()
}

/// One trained trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingTrial {
    pub selection: TrialSelection,
    pub record: TrialRecord<f64>,
}

/// Selects and trains every `(method, trial)` pair on a shared dataset. Output
/// is sorted by method, then trial.
pub fn run_training_trials(
    plan: &TrialPlan,
    dataset: &[Sample<f64>],
    spsa: &SpsaConfig<f64>,
) -> Result<Vec<TrainingTrial>> {
    spsa.validate()?;
    let observable = default_observable(plan.n)?;
    jobs(&plan.methods, plan.trials)
        .into_par_iter()
        .map(|(method, trial)| {
            let selection = plan.select(method, trial, &observable)?;
            let model = CircuitModel::new(selection.generators.clone(), observable)?;
            let cfg = SpsaConfig {
                seed: selection.seed,
                ..spsa.clone()
            };
            let record = train(&model, dataset, &cfg)?.with_method(method);
            Ok(TrainingTrial { selection, record })
        })
        .collect()
}

/// One expressibility estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpressibilityTrial {
    pub selection: TrialSelection,
    pub counts: Vec<u64>,
    pub hellinger: f64,
}

/// Expressibility of the generators each `(method, trial)` selects. The
/// sampling seed is derived from the trial seed; `config.seed` is ignored.
pub fn run_expressibility_trials(
    plan: &TrialPlan,
    config: &ExpressibilityConfig,
) -> Result<Vec<ExpressibilityTrial>> {
    config.validate()?;
    let n = plan.n;
    let observable = default_observable(n)?;
    jobs(&plan.methods, plan.trials)
        .into_par_iter()
        .map(|(method, trial)| {
            let selection = plan.select(method, trial, &observable)?;
            let model = CircuitModel::new(selection.generators.clone(), observable)?;
            let cfg = ExpressibilityConfig {
                seed: seeds::derive(selection.seed, seeds::stream_id("expressibility"), 0),
                ..config.clone()
            };
            let counts = fidelity_histogram(&model, &cfg)?;
            let hellinger = hellinger_from_counts(&counts, 1 << n)?;
            Ok(ExpressibilityTrial {
                selection,
                counts,
                hellinger,
            })
        })
        .collect()
}

/// Mean and sample standard deviation of one summary metric.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSummary {
    pub method: Method,
    pub metric: String,
    pub mean: f64,
    pub std: f64,
}

pub const METRIC_COMMUTE_OBS: &str = "n_commute_obs";
pub const METRIC_COMMUTE_PAIRS: &str = "n_commute_pairs";
pub const METRIC_HELLINGER: &str = "hellinger";

fn summarize(method: Method, metric: &str, values: &[f64]) -> MetricSummary {
    MetricSummary {
        method,
        metric: metric.to_string(),
        mean: mean(values),
        std: sample_std(values),
    }
}

fn group_by_method<X>(items: &[X], key: impl Fn(&X) -> Method) -> Vec<(Method, Vec<&X>)> {
    let mut out: Vec<(Method, Vec<&X>)> = Vec::new();
    for it in items {
        let m = key(it);
        match out.iter_mut().find(|(k, _)| *k == m) {
            Some((_, v)) => v.push(it),
            None => out.push((m, vec![it])),
        }
    }
    out.sort_by_key(|(m, _)| *m);
    out
}

/// Commutation counts per method, recomputed from the stored generators.
pub fn selection_summaries(selections: &[TrialSelection], observable: &PauliString) -> Result<Vec<MetricSummary>> {
    let mut out = Vec::new();
    for (method, group) in group_by_method(selections, |s| s.method) {
        let metrics = group
            .iter()
            .map(|s| evaluate_selection(&s.generators, observable))
            .collect::<Result<Vec<_>>>()?;
        let obs: Vec<f64> = metrics.iter().map(|m| m.commute_with_observable as f64).collect();
        let pairs: Vec<f64> = metrics.iter().map(|m| m.commuting_pairs as f64).collect();
        out.push(summarize(method, METRIC_COMMUTE_OBS, &obs));
        out.push(summarize(method, METRIC_COMMUTE_PAIRS, &pairs));
    }
    Ok(out)
}

pub fn hellinger_summaries(trials: &[ExpressibilityTrial]) -> Vec<MetricSummary> {
    group_by_method(trials, |t| t.selection.method)
        .into_iter()
        .map(|(method, group)| {
            let h: Vec<f64> = group.iter().map(|t| t.hellinger).collect();
            summarize(method, METRIC_HELLINGER, &h)
        })
        .collect()
}

/// Per-epoch mean and sample std of the normalized RMSE for one method.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceSummary {
    pub method: Method,
    pub trials: usize,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

/// Aggregates traces (normalized or raw) of equal length per method.
pub fn trace_summaries<'a>(traces: impl IntoIterator<Item = (Method, &'a [f64])>) -> Result<Vec<TraceSummary>> {
    let items: Vec<(Method, &[f64])> = traces.into_iter().collect();
    let mut out = Vec::new();
    for (method, group) in group_by_method(&items, |(m, _)| *m) {
        let len = group[0].1.len();
        if let Some((_, bad)) = group.iter().find(|(_, t)| t.len() != len) {
            return Err(Error::DimensionMismatch { left: len, right: bad.len() });
        }
        let column = |e: usize| group.iter().map(|(_, t)| t[e]).collect::<Vec<f64>>();
        out.push(TraceSummary {
            method,
            trials: group.len(),
            mean: (0..len).map(|e| mean(&column(e))).collect(),
            std: (0..len).map(|e| sample_std(&column(e))).collect(),
        });
    }
    Ok(out)
}

/// Final-epoch raw RMSE t-test between two methods; `None` when either side
/// has fewer than two trials.
pub fn final_epoch_t_test(
    finals: &[(Method, f64)],
    a: Method,
    b: Method,
) -> Result<Option<TTest>> {
    let pick = |m: Method| finals.iter().filter(|(k, _)| *k == m).map(|(_, v)| *v).collect::<Vec<_>>();
    let (xa, xb) = (pick(a), pick(b));
    if xa.len() < 2 || xb.len() < 2 {
        return Ok(None);
    }
    student_t_test(&xa, &xb).map(Some)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonConfig {
    pub methods: Vec<Method>,
    pub trials: usize,
    pub dataset: DatasetSpec,
    pub spsa: SpsaConfig<f64>,
    /// `None` skips the Hellinger row.
    pub expressibility: Option<ExpressibilityConfig>,
    pub selection: SelectionSettings,
    pub master_seed: u64,
}

impl Default for ComparisonConfig {
    fn default() -> Self {
        Self {
            methods: vec![Method::Exact, Method::Random],
            trials: 20,
            dataset: DatasetSpec::default(),
            spsa: SpsaConfig::default(),
            expressibility: Some(ExpressibilityConfig::default()),
            selection: SelectionSettings::default(),
            master_seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub metrics: Vec<MetricSummary>,
    pub traces: Vec<TraceSummary>,
    /// Algorithm (exact) against Random, final epoch, raw RMSE.
    pub t_test: Option<TTest>,
    pub training: Vec<TrainingTrial>,
    pub expressibility: Vec<ExpressibilityTrial>,
}

/// Full comparison on one shared teacher dataset.
pub fn run_comparison(config: &ComparisonConfig) -> Result<ExperimentReport> {
    let spec = &config.dataset;
    let (dataset, _) = generate_dataset(spec)?;
    let plan = TrialPlan {
        selection: config.selection.clone(),
        ..TrialPlan::new(&config.methods, config.trials, spec.n, spec.depth, config.master_seed)
    };
    let training = run_training_trials(&plan, &dataset, &config.spsa)?;
    let expressibility = match &config.expressibility {
        Some(cfg) => run_expressibility_trials(&plan, cfg)?,
        None => Vec::new(),
    };
    let observable = default_observable(spec.n)?;
    let selections: Vec<TrialSelection> = training.iter().map(|t| t.selection.clone()).collect();
    let mut metrics = selection_summaries(&selections, &observable)?;
    metrics.extend(hellinger_summaries(&expressibility));
    metrics.sort_by_key(|m| m.method);

    let traces = trace_summaries(
        training
            .iter()
            .map(|t| (t.selection.method, t.record.normalized_trace.as_slice())),
    )?;
    let finals: Vec<(Method, f64)> = training
        .iter()
        .map(|t| (t.selection.method, *t.record.rmse_trace.last().expect("trace holds epoch 0")))
        .collect();
    let t_test = final_epoch_t_test(&finals, Method::Exact, Method::Random)?;
    Ok(ExperimentReport {
        metrics,
        traces,
        t_test,
        training,
        expressibility,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::rmse_cost;

    fn small_spec() -> DatasetSpec {
        DatasetSpec {
            n: 3,
            depth: 3,
            samples: 12,
            teacher_seed: 4,
            ..Default::default()
        }
    }

    #[test]
    fn dataset_is_seeded_bounded_and_self_consistent() {
        let spec = DatasetSpec { teacher_seed: 11, ..Default::default() };
        let (data, teacher) = generate_dataset(&spec).unwrap();
        assert_eq!(data.len(), 100);
        assert!(data.iter().all(|(x, y)| (0.0..=2.0 * PI).contains(x) && (-1.0..=1.0).contains(y)));
        assert!(teacher.theta.iter().all(|t| (-PI..=PI).contains(t)));
        let mut gens = teacher.model.generators().to_vec();
        gens.sort();
        gens.dedup();
        assert_eq!(gens.len(), 5);
        assert!(gens.iter().all(|g| !g.is_identity()));
        assert_eq!(teacher.model.observable().to_string(), "ZIIII");
        assert_eq!(rmse_cost(&teacher.model, &teacher.theta, &data).unwrap(), 0.0);

        let (again, _) = generate_dataset(&spec).unwrap();
        assert_eq!(data, again);
        let (other, _) = generate_dataset(&DatasetSpec { teacher_seed: 12, ..spec }).unwrap();
        assert_ne!(data, other);
    }

    #[test]
    fn trial_seeds_differ_by_method_and_trial() {
        let a = trial_seed(1, Method::Exact, 0);
        assert_ne!(a, trial_seed(1, Method::Random, 0));
        assert_ne!(a, trial_seed(1, Method::Exact, 1));
        assert_ne!(a, trial_seed(2, Method::Exact, 0));
        assert_eq!(a, trial_seed(1, Method::Exact, 0));
    }

    #[test]
    fn degenerate_comparison_has_unit_traces_and_no_t_test() {
        let cfg = ComparisonConfig {
            trials: 1,
            dataset: small_spec(),
            spsa: SpsaConfig { epochs: 0, ..Default::default() },
            expressibility: None,
            ..Default::default()
        };
        let report = run_comparison(&cfg).unwrap();
        assert!(report.t_test.is_none());
        assert_eq!(report.traces.len(), 2);
        for t in &report.traces {
            assert_eq!(t.mean, vec![1.0]);
            assert_eq!(t.std, vec![0.0]);
        }
    }

    #[test]
    fn comparison_is_reproducible_and_consistent() {
        let cfg = ComparisonConfig {
            methods: vec![Method::Random, Method::Exact, Method::GradOnly],
            trials: 3,
            dataset: small_spec(),
            spsa: SpsaConfig { epochs: 3, ..Default::default() },
            expressibility: Some(ExpressibilityConfig { fidelity_samples: 60, bins: 10, ..Default::default() }),
            ..Default::default()
        };
        let a = run_comparison(&cfg).unwrap();
        assert_eq!(a, run_comparison(&cfg).unwrap());

        let order: Vec<_> = a.training.iter().map(|t| (t.selection.method, t.selection.trial)).collect();
        let mut sorted = order.clone();
        sorted.sort();
        assert_eq!(order, sorted);

        let p = a.t_test.unwrap().p_value;
        assert!((0.0..=1.0).contains(&p));
        assert!(a.metrics.iter().all(|m| m.std >= 0.0));
        for t in &a.training {
            assert_eq!(t.record.normalized_trace[0], 1.0);
            assert_eq!(t.record.rmse_trace.len(), 4);
        }
        // Training and expressibility agree on generators for each trial.
        for (t, e) in a.training.iter().zip(&a.expressibility) {
            assert_eq!(t.selection, e.selection);
        }
        let obs = default_observable(3).unwrap();
        for t in a.training.iter().filter(|t| t.selection.method == Method::Exact) {
            let m = evaluate_selection(&t.selection.generators, &obs).unwrap();
            assert_eq!((m.commute_with_observable, m.commuting_pairs), (0, 0));
            assert_eq!(m, t.selection.metrics);
        }
        let exact_obs = a
            .metrics
            .iter()
            .find(|m| m.method == Method::Exact && m.metric == METRIC_COMMUTE_OBS)
            .unwrap();
        assert_eq!((exact_obs.mean, exact_obs.std), (0.0, 0.0));
    }

    #[test]
    fn trace_summaries_reject_ragged_input() {
        let a = [1.0, 0.5];
        let b = [1.0];
        assert!(trace_summaries([(Method::Exact, &a[..]), (Method::Exact, &b[..])]).is_err());
        let s = trace_summaries([(Method::Exact, &a[..]), (Method::Exact, &[1.0, 0.7][..])]).unwrap();
        assert_eq!(s[0].mean, vec![1.0, 0.6]);
    }
}
