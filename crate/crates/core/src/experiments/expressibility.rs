use rand::distributions::{Distribution, Uniform};

use crate::error::{Error, Result};
use crate::seeds;
use crate::simulator::CircuitModel;

#[derive(Clone, Debug, PartialEq)]
pub struct ExpressibilityConfig {
    /// Independent `(θ, φ)` pairs.
    pub fidelity_samples: usize,
    pub bins: usize,
    pub param_range: (f64, f64),
    pub seed: u64,
}

impl Default for ExpressibilityConfig {
    fn default() -> Self {
        Self {
            fidelity_samples: 500,
            bins: 50,
            param_range: (-std::f64::consts::PI, std::f64::consts::PI),
            seed: 0,
        }
    }
}

impl ExpressibilityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bins < 2 {
            return Err(Error::InvalidConfig(format!("bins = {} (need at least 2)", self.bins)));
        }
        if self.fidelity_samples < self.bins {
            return Err(Error::InvalidConfig(format!(
                "fidelity_samples = {} below bins = {}",
                self.fidelity_samples, self.bins
            )));
        }
        let (lo, hi) = self.param_range;
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::InvalidConfig(format!("param_range [{lo}, {hi}]")));
        }
        Ok(())
    }
}

/// Bin masses of the Haar fidelity law `P(F) = (d−1)(1−F)^{d−2}` over `bins`
/// equal-width bins of `[0, 1]`.
pub fn haar_bin_probs(d: usize, bins: usize) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::InvalidConfig(format!("Hilbert dimension {d} (need at least 2)")));
    }
    if bins == 0 {
        return Err(Error::InvalidConfig("bins = 0".into()));
    }
    let tail = |f: f64| (1.0 - f).powi(d as i32 - 1);
    Ok((0..bins)
        .map(|i| {
            let lo = i as f64 / bins as f64;
            let hi = (i + 1) as f64 / bins as f64;
            tail(lo) - tail(hi)
        })
        .collect())
}

/// `sqrt(1 − Σ sqrt(p_i q_i))`. Empty bins contribute nothing.
pub fn hellinger_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch { left: p.len(), right: q.len() });
    }
    let bc: f64 = p.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
    Ok((1.0 - bc).max(0.0).sqrt())
}

/// Histogram of `F = |⟨ψ(θ)|ψ(φ)⟩|²` over independent uniform parameter pairs,
/// encoding angle held at 0.
pub fn fidelity_histogram(model: &CircuitModel, config: &ExpressibilityConfig) -> Result<Vec<u64>> {
    config.validate()?;
    let mut rng = seeds::rng(config.seed);
    let dist = Uniform::new(config.param_range.0, config.param_range.1);
    let depth = model.depth();
    let base = model.encoded_state(0.0f64)?;
    let mut counts = vec![0u64; config.bins];
    for _ in 0..config.fidelity_samples {
        let theta: Vec<f64> = (0..depth).map(|_| dist.sample(&mut rng)).collect();
        let phi: Vec<f64> = (0..depth).map(|_| dist.sample(&mut rng)).collect();
        let mut a = base.clone();
        model.evolve(&mut a, &theta)?;
        let mut b = base.clone();
        model.evolve(&mut b, &phi)?;
        let f = a.fidelity(&b)?.clamp(0.0, 1.0);
        counts[bin_of(f, config.bins)] += 1;
    }
    Ok(counts)
}

fn bin_of(f: f64, bins: usize) -> usize {
    ((f * bins as f64) as usize).min(bins - 1)
}

/// Hellinger distance between a fidelity histogram and the Haar law.
pub fn hellinger_from_counts(counts: &[u64], d: usize) -> Result<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::InsufficientSamples { needed: 1, found: 0 });
    }
    let p: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    hellinger_distance(&p, &haar_bin_probs(d, counts.len())?)
}

pub fn expressibility_hellinger(model: &CircuitModel, config: &ExpressibilityConfig) -> Result<f64> {
    let counts = fidelity_histogram(model, config)?;
    hellinger_from_counts(&counts, 1 << model.qubits())
}
