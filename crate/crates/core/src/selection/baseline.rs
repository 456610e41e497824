use rand::seq::index::sample;
use rand::seq::SliceRandom;

use super::exact::find_clique;
use super::{build_pool, score_matrix, Method, SelectionProblem, SelectionResult};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::seeds;

const CLIQUE_RESTARTS: usize = 1000;

/// Single-metric and random reference selections.
///
/// * `Random`: `L` distinct strings uniformly from all non-identity strings.
/// * `GradOnly`: `L` distinct strings uniformly from the anticommuting pool `S`.
/// * `PairOnly`: a mutually anticommuting `L`-set over all non-identity strings,
///   found by randomized greedy construction with restarts.
pub fn select_baseline(
    method: Method,
    n: usize,
    observable: &PauliString,
    budget: usize,
    seed: u64,
) -> Result<SelectionResult> {
    if observable.qubits() != n {
        return Err(Error::DimensionMismatch {
            left: observable.qubits(),
            right: n,
        });
    }
    let mut rng = seeds::rng(seed);
    let chosen = match method {
        Method::Random | Method::GradOnly => {
            let pool = if method == Method::Random {
                PauliString::all_non_identity(n)?
            } else {
                build_pool(observable, n, None)?
            };
            if budget == 0 || budget > pool.len() {
                return Err(Error::InfeasibleBudget {
                    budget,
                    available: pool.len(),
                });
            }
            let mut idx = sample(&mut rng, pool.len(), budget).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| pool[i]).collect()
        }
        Method::PairOnly => random_clique(n, budget, &mut rng)?,
        other => {
            return Err(Error::InvalidConfig(format!(
                "{other} is not a baseline method"
            )))
        }
    };
    let problem = SelectionProblem::new(*observable, chosen, budget)?;
    let all: Vec<usize> = (0..budget).collect();
    Ok(problem.result(all, method, false))
}

fn random_clique(n: usize, budget: usize, rng: &mut seeds::Rng) -> Result<Vec<PauliString>> {
    if budget == 0 || budget > 2 * n + 1 {
        return Err(Error::NoClique { size: budget });
    }
    let mut all = PauliString::all_non_identity(n)?;
    for _ in 0..CLIQUE_RESTARTS {
        all.shuffle(rng);
        let mut set: Vec<PauliString> = Vec::with_capacity(budget);
        for g in &all {
            if set.iter().all(|h| !g.commutes_unchecked(h)) {
                set.push(*g);
                if set.len() == budget {
                    set.sort();
                    return Ok(set);
                }
            }
        }
    }
    // Greedy restarts failed; fall back to an exhaustive search in shuffled order.
    all.shuffle(rng);
    let m = score_matrix(&all)?;
    let mut set: Vec<PauliString> = find_clique(&m, budget)
        .ok_or(Error::NoClique { size: budget })?
        .into_iter()
        .map(|i| all[i])
        .collect();
    set.sort();
    Ok(set)
}
