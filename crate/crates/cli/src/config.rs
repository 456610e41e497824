//! Config file sections and their resolution against flags and defaults.

use std::path::Path;

use gensel::experiments::{DatasetSpec, ExpressibilityConfig, SelectionSettings};
use gensel::optimizer::SpsaConfig;
use gensel::selection::{GeneticConfig, Method};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    #[serde(default)]
    pub dataset: DatasetSection,
    #[serde(default)]
    pub spsa: SpsaSection,
    #[serde(default)]
    pub expressibility: ExpressibilitySection,
    #[serde(default)]
    pub selection: SelectionSection,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DatasetSection {
    pub n: Option<usize>,
    pub depth: Option<usize>,
    pub theta_range: Option<[f64; 2]>,
    pub input_range: Option<[f64; 2]>,
    pub samples: Option<usize>,
    pub teacher_seed: Option<u64>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpsaSection {
    pub learning_rate: Option<f64>,
    pub momentum: Option<f64>,
    pub perturbation: Option<f64>,
    pub epochs: Option<usize>,
    pub init_range: Option<f64>,
    pub batch_size: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExpressibilitySection {
    pub fidelity_samples: Option<usize>,
    pub bins: Option<usize>,
    pub param_range: Option<[f64; 2]>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SelectionSection {
    pub methods: Option<Vec<String>>,
    pub trials: Option<usize>,
    pub observable: Option<String>,
    pub pool_subsample: Option<usize>,
    pub population: Option<usize>,
    pub generations: Option<usize>,
    pub mutation_rate: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {}", path.display(), e.message())))
    }
}

fn pick<T: Clone>(flag: Option<T>, file: &Option<T>, default: T) -> T {
    flag.or_else(|| file.clone()).unwrap_or(default)
}

fn range(r: [f64; 2]) -> (f64, f64) {
    (r[0], r[1])
}

pub fn dataset_spec(
    file: &FileConfig,
    n: Option<usize>,
    depth: Option<usize>,
    samples: Option<usize>,
    seed: Option<u64>,
) -> DatasetSpec {
    let d = DatasetSpec::default();
    let f = &file.dataset;
    DatasetSpec {
        n: pick(n, &f.n, d.n),
        depth: pick(depth, &f.depth, d.depth),
        theta_range: f.theta_range.map(range).unwrap_or(d.theta_range),
        input_range: f.input_range.map(range).unwrap_or(d.input_range),
        samples: pick(samples, &f.samples, d.samples),
        teacher_seed: seed.or(f.teacher_seed).or(file.seed).unwrap_or(d.teacher_seed),
    }
}

#[derive(Default)]
pub struct SpsaFlags {
    pub learning_rate: Option<f64>,
    pub momentum: Option<f64>,
    pub perturbation: Option<f64>,
    pub epochs: Option<usize>,
    pub batch_size: Option<usize>,
}

pub fn spsa_config(file: &FileConfig, flags: SpsaFlags) -> SpsaConfig<f64> {
    let d = SpsaConfig::<f64>::default();
    let f = &file.spsa;
    SpsaConfig {
        learning_rate: pick(flags.learning_rate, &f.learning_rate, d.learning_rate),
        momentum: pick(flags.momentum, &f.momentum, d.momentum),
        perturbation: pick(flags.perturbation, &f.perturbation, d.perturbation),
        epochs: pick(flags.epochs, &f.epochs, d.epochs),
        init_range: f.init_range.unwrap_or(d.init_range),
        batch_size: pick(flags.batch_size, &f.batch_size, d.batch_size),
        seed: d.seed,
    }
}

pub fn expressibility_config(file: &FileConfig, samples: Option<usize>, bins: Option<usize>) -> ExpressibilityConfig {
    let d = ExpressibilityConfig::default();
    let f = &file.expressibility;
    ExpressibilityConfig {
        fidelity_samples: pick(samples, &f.fidelity_samples, d.fidelity_samples),
        bins: pick(bins, &f.bins, d.bins),
        param_range: f.param_range.map(range).unwrap_or(d.param_range),
        seed: d.seed,
    }
}

pub fn selection_settings(file: &FileConfig, pool_subsample: Option<usize>) -> SelectionSettings {
    let d = GeneticConfig::default();
    let f = &file.selection;
    SelectionSettings {
        pool_subsample: pool_subsample.or(f.pool_subsample),
        genetic: GeneticConfig {
            population: f.population.unwrap_or(d.population),
            generations: f.generations.unwrap_or(d.generations),
            mutation_rate: f.mutation_rate.unwrap_or(d.mutation_rate),
        },
    }
}

pub fn methods(flag: &[String], file: &FileConfig, default: &[Method]) -> Result<Vec<Method>, CliError> {
    let names: Vec<String> = if !flag.is_empty() {
        flag.to_vec()
    } else if let Some(m) = &file.selection.methods {
        m.clone()
    } else {
        return Ok(default.to_vec());
    };
    names
        .iter()
        .map(|s| s.trim().parse::<Method>().map_err(CliError::Core))
        .collect()
}

/// Sections echoing every resolved value, written next to each output.
#[derive(Debug, Serialize)]
pub struct Provenance {
    pub command: String,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dataset: Option<DatasetSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spsa: Option<SpsaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expressibility: Option<ExpressibilitySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selection: Option<SelectionSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inputs: Option<toml::Table>,
}

impl Provenance {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            seed,
            dataset: None,
            spsa: None,
            expressibility: None,
            selection: None,
            inputs: None,
        }
    }
}

pub fn dataset_section(spec: &DatasetSpec) -> DatasetSection {
    DatasetSection {
        n: Some(spec.n),
        depth: Some(spec.depth),
        theta_range: Some([spec.theta_range.0, spec.theta_range.1]),
        input_range: Some([spec.input_range.0, spec.input_range.1]),
        samples: Some(spec.samples),
        teacher_seed: Some(spec.teacher_seed),
    }
}

pub fn spsa_section(cfg: &SpsaConfig<f64>) -> SpsaSection {
    SpsaSection {
        learning_rate: Some(cfg.learning_rate),
        momentum: Some(cfg.momentum),
        perturbation: Some(cfg.perturbation),
        epochs: Some(cfg.epochs),
        init_range: Some(cfg.init_range),
        batch_size: Some(cfg.batch_size),
    }
}

pub fn expressibility_section(cfg: &ExpressibilityConfig) -> ExpressibilitySection {
    ExpressibilitySection {
        fidelity_samples: Some(cfg.fidelity_samples),
        bins: Some(cfg.bins),
        param_range: Some([cfg.param_range.0, cfg.param_range.1]),
    }
}

pub fn selection_section(
    methods: &[Method],
    trials: Option<usize>,
    observable: Option<String>,
    settings: &SelectionSettings,
) -> SelectionSection {
    SelectionSection {
        methods: Some(methods.iter().map(|m| m.as_str().to_string()).collect()),
        trials,
        observable,
        pool_subsample: settings.pool_subsample,
        population: Some(settings.genetic.population),
        generations: Some(settings.genetic.generations),
        mutation_rate: Some(settings.genetic.mutation_rate),
    }
}
