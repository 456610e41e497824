//! SPSA with heavy-ball momentum on the RMSE training cost.
//!
//! One step draws a Rademacher direction `Δ ∈ {±1}^L`, estimates
//! `ĝ = (C(θ + cΔ) − C(θ − cΔ)) / 2c · Δ`, then updates `m ← βm + ĝ` and
//! `θ ← θ − a·m`.

use rand::distributions::{Distribution, Uniform};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::scalar::Real;
use crate::seeds;
use crate::selection::Method;
use crate::simulator::{CircuitModel, StateVector};

#[derive(Clone, Debug, PartialEq)]
pub struct SpsaConfig<T> {
    pub learning_rate: T,
    pub momentum: T,
    pub perturbation: T,
    pub epochs: usize,
    /// Initial parameters are drawn from `U[-init_range, init_range]`.
    pub init_range: T,
    /// Samples per SPSA step; `0` means one step per epoch on the full dataset.
    pub batch_size: usize,
    pub seed: u64,
}

impl<T: Real> Default for SpsaConfig<T> {
    fn default() -> Self {
        Self {
            learning_rate: T::lit(0.001),
            momentum: T::lit(0.5),
            perturbation: T::lit(0.01),
            epochs: 200,
            init_range: T::lit(0.1),
            batch_size: 1,
            seed: 0,
        }
    }
}

impl<T: Real> SpsaConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.learning_rate.is_nan() || self.learning_rate < T::zero() {
            return bad(format!("learning_rate must be non-negative, got {}", self.learning_rate));
        }
        if self.perturbation.is_nan() || self.perturbation <= T::zero() {
            return bad(format!("perturbation must be positive, got {}", self.perturbation));
        }
        if self.momentum.is_nan() || self.momentum < T::zero() || self.momentum >= T::one() {
            return bad(format!("momentum must lie in [0, 1), got {}", self.momentum));
        }
        if self.init_range.is_nan() || self.init_range < T::zero() {
            return bad(format!("init_range must be non-negative, got {}", self.init_range));
        }
        Ok(())
    }
}

/// A training example `(x, y)`.
pub type Sample<T> = (T, T);

/// `sqrt(mean((f(x_i) − y_i)²))`.
pub fn rmse_cost<T: Real>(model: &CircuitModel, theta: &[T], dataset: &[Sample<T>]) -> Result<T> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut sum = T::zero();
    for &(x, y) in dataset {
        let r = crate::simulator::run_model(model, theta, x)? - y;
        sum = sum + r * r;
    }
    Ok((sum / T::lit(dataset.len() as f64)).sqrt())
}

/// `(C(θ + cΔ) − C(θ − cΔ)) / 2c · Δ` (using `1/Δ_j = Δ_j`).
pub fn gradient_estimate<T: Real>(
    theta: &[T],
    delta: &[T],
    perturbation: T,
    mut cost: impl FnMut(&[T]) -> Result<T>,
) -> Result<Vec<T>> {
    let shifted = |sign: T| -> Vec<T> {
        theta
            .iter()
            .zip(delta)
            .map(|(&t, &d)| t + sign * perturbation * d)
            .collect()
    };
    let plus = cost(&shifted(T::one()))?;
    let minus = cost(&shifted(-T::one()))?;
    let scale = (plus - minus) / (T::lit(2.0) * perturbation);
    Ok(delta.iter().map(|&d| scale * d).collect())
}

/// Rademacher direction for step `step_index`, reproducible from the seed alone.
pub fn rademacher<T: Real>(len: usize, seed: u64, step_index: u64) -> Vec<T> {
    let mut rng = seeds::rng(seeds::derive(seed, seeds::stream_id("spsa-delta"), step_index));
    (0..len)
        .map(|_| if rng.gen::<bool>() { T::one() } else { -T::one() })
        .collect()
}

/// One SPSA-with-momentum update along an explicit direction `delta`.
pub fn spsa_update<T: Real>(
    theta: &[T],
    momentum: &[T],
    delta: &[T],
    config: &SpsaConfig<T>,
    cost: impl FnMut(&[T]) -> Result<T>,
) -> Result<(Vec<T>, Vec<T>)> {
    if theta.len() != momentum.len() || theta.len() != delta.len() {
        return Err(Error::ParameterLength {
            expected: theta.len(),
            found: momentum.len().min(delta.len()),
        });
    }
    let g = gradient_estimate(theta, delta, config.perturbation, cost)?;
    let m: Vec<T> = momentum
        .iter()
        .zip(&g)
        .map(|(&m, &g)| config.momentum * m + g)
        .collect();
    let th = theta
        .iter()
        .zip(&m)
        .map(|(&t, &m)| t - config.learning_rate * m)
        .collect();
    Ok((th, m))
}

/// One SPSA step with the direction drawn from `config.seed` and `step_index`.
pub fn spsa_step<T: Real>(
    theta: &[T],
    momentum: &[T],
    cost: impl FnMut(&[T]) -> Result<T>,
    config: &SpsaConfig<T>,
    step_index: u64,
) -> Result<(Vec<T>, Vec<T>)> {
    let delta = rademacher(theta.len(), config.seed, step_index);
    spsa_update(theta, momentum, &delta, config, cost)
}

/// One training run.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialRecord<T> {
    pub method: Option<Method>,
    pub seed: u64,
    pub generators: Vec<PauliString>,
    pub theta_final: Vec<T>,
    /// RMSE before training (index 0) and after each epoch.
    pub rmse_trace: Vec<T>,
    /// `rmse_trace / rmse_trace[0]`.
    pub normalized_trace: Vec<T>,
    /// Number of single-sample circuit executions.
    pub circuit_evaluations: u64,
}

impl<T: Real> TrialRecord<T> {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = Some(method);
        self
    }
}

/// Normalizes by the first entry. A zero initial RMSE maps to 1 where the trace
/// stays at zero and to infinity elsewhere.
pub fn normalize_trace<T: Real>(trace: &[T]) -> Vec<T> {
    let first = trace.first().copied().unwrap_or_else(T::one);
    trace
        .iter()
        .map(|&r| {
            if first > T::zero() {
                r / first
            } else if r == T::zero() {
                T::one()
            } else {
                T::infinity()
            }
        })
        .collect()
}

/// Dataset with every input's encoded state cached.
struct Encoded<'a, T> {
    model: &'a CircuitModel,
    states: Vec<StateVector<T>>,
    labels: Vec<T>,
    scratch: StateVector<T>,
    evaluations: u64,
}

impl<'a, T: Real> Encoded<'a, T> {
    fn new(model: &'a CircuitModel, dataset: &[Sample<T>]) -> Result<Self> {
        let states = dataset
            .iter()
            .map(|&(x, _)| model.encoded_state(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            model,
            states,
            labels: dataset.iter().map(|&(_, y)| y).collect(),
            scratch: StateVector::zero(model.qubits())?,
            evaluations: 0,
        })
    }

    fn rmse(&mut self, theta: &[T], subset: Option<&[usize]>) -> Result<T> {
        let mut sum = T::zero();
        let mut count = 0usize;
        let mut add = |i: usize, this: &mut Self| -> Result<()> {
            let f = this.model.output_from(&this.states[i], theta, &mut this.scratch)?;
            let r = f - this.labels[i];
            sum = sum + r * r;
            count += 1;
            Ok(())
        };
        match subset {
            Some(idx) => {
                for &i in idx {
                    add(i, self)?;
                }
            }
            None => {
                for i in 0..self.states.len() {
                    add(i, self)?;
                }
            }
        }
        self.evaluations += count as u64;
        Ok((sum / T::lit(count as f64)).sqrt())
    }
}

/// Trains `model` on `dataset` from a seeded `U[-init_range, init_range]` start.
///
/// With `batch_size = b > 0` each epoch shuffles the dataset and takes one SPSA
/// step per consecutive chunk of `b` samples; `b = 0` takes a single step on the
/// full dataset. Either way an epoch costs `2M` circuit runs for the updates and
/// `M` for the recorded RMSE.
pub fn train<T: Real>(
    model: &CircuitModel,
    dataset: &[Sample<T>],
    config: &SpsaConfig<T>,
) -> Result<TrialRecord<T>> {
    config.validate()?;
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let depth = model.depth();
    let mut init_rng = seeds::rng(seeds::derive(config.seed, seeds::stream_id("init"), 0));
    let mut theta: Vec<T> = if config.init_range > T::zero() {
        let dist = Uniform::new_inclusive(-config.init_range, config.init_range);
        (0..depth).map(|_| dist.sample(&mut init_rng)).collect()
    } else {
        vec![T::zero(); depth]
    };
    let mut momentum = vec![T::zero(); depth];
    let mut data = Encoded::new(model, dataset)?;

    let mut trace = Vec::with_capacity(config.epochs + 1);
    trace.push(data.rmse(&theta, None)?);
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    let mut step = 0u64;
    for epoch in 0..config.epochs {
        if config.batch_size == 0 {
            let (th, m) = spsa_step(&theta, &momentum, |t| data.rmse(t, None), config, step)?;
            theta = th;
            momentum = m;
            step += 1;
        } else {
            let mut rng = seeds::rng(seeds::derive(config.seed, seeds::stream_id("shuffle"), epoch as u64));
            order.shuffle(&mut rng);
            for batch in order.chunks(config.batch_size) {
                let (th, m) = spsa_step(&theta, &momentum, |t| data.rmse(t, Some(batch)), config, step)?;
                theta = th;
                momentum = m;
                step += 1;
            }
        }
        trace.push(data.rmse(&theta, None)?);
    }

    Ok(TrialRecord {
        method: None,
        seed: config.seed,
        generators: model.generators().to_vec(),
        theta_final: theta,
        normalized_trace: normalize_trace(&trace),
        rmse_trace: trace,
        circuit_evaluations: data.evaluations,
    })
}
