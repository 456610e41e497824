//! Observable-guided generator selection.
//!
//! Candidates are Pauli strings that anticommute with the observable `O`, so every
//! generator keeps a non-vanishing first-order term `[G, O]`. Among those, the
//! budget of `L` generators is spent on the subset with the most anticommuting
//! pairs, which zeroes the double commutators `[G_k, [G_j, O]]`. The pairwise
//! coefficient is `c_jk = 1` for anticommuting pairs and `0` otherwise, and the
//! objective is `max Σ_{j<k} c_jk x_j x_k` subject to `Σ_j x_j = L`.

mod baseline;
mod exact;
mod genetic;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::seeds;

pub use baseline::select_baseline;
pub use exact::{solve_exact, solve_greedy};
pub use genetic::{solve_genetic, GeneticConfig};

/// Selection method tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Exact,
    Greedy,
    Genetic,
    Random,
    GradOnly,
    PairOnly,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Exact,
        Method::Greedy,
        Method::Genetic,
        Method::Random,
        Method::GradOnly,
        Method::PairOnly,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Greedy => "greedy",
            Method::Genetic => "genetic",
            Method::Random => "random",
            Method::GradOnly => "grad-only",
            Method::PairOnly => "pair-only",
        }
    }

    /// Column label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            Method::Exact => "Algorithm",
            Method::Greedy => "Greedy",
            Method::Genetic => "Genetic",
            Method::Random => "Random",
            Method::GradOnly => "[G,O] only",
            Method::PairOnly => "[G,G] only",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        match norm.as_str() {
            "exact" | "algorithm" => Ok(Method::Exact),
            "greedy" => Ok(Method::Greedy),
            "genetic" => Ok(Method::Genetic),
            "random" => Ok(Method::Random),
            "grad-only" => Ok(Method::GradOnly),
            "pair-only" => Ok(Method::PairOnly),
            _ => Err(Error::UnknownMethod(s.to_string())),
        }
    }
}

/// Candidate set `S = {G ∈ P_n : {G, O} = 0}` in canonical order, optionally
/// subsampled uniformly (the subsample keeps canonical order).
pub fn build_pool(
    observable: &PauliString,
    n: usize,
    subsample: Option<(usize, u64)>,
) -> Result<Vec<PauliString>> {
    if observable.qubits() != n {
        return Err(Error::DimensionMismatch {
            left: observable.qubits(),
            right: n,
        });
    }
    if observable.is_identity() {
        return Err(Error::Identity("observable"));
    }
    let pool: Vec<PauliString> = PauliString::all_non_identity(n)?
        .into_iter()
        .filter(|g| !g.commutes_unchecked(observable))
        .collect();
    match subsample {
        None => Ok(pool),
        Some((size, _)) if size > pool.len() => Err(Error::SubsampleTooLarge {
            requested: size,
            available: pool.len(),
        }),
        Some((size, seed)) => {
            let mut rng = seeds::rng(seed);
            let mut idx = rand::seq::index::sample(&mut rng, pool.len(), size).into_vec();
            idx.sort_unstable();
            Ok(idx.into_iter().map(|i| pool[i]).collect())
        }
    }
}

/// Symmetric 0/1 anticommutation matrix with zero diagonal, stored as row bitsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreMatrix {
    size: usize,
    words: usize,
    rows: Vec<u64>,
}

impl ScoreMatrix {
    #[inline]
    pub fn len(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize) -> u8 {
        ((self.rows[j * self.words + k / 64] >> (k % 64)) & 1) as u8
    }

    #[inline]
    pub(crate) fn row(&self, j: usize) -> &[u64] {
        &self.rows[j * self.words..(j + 1) * self.words]
    }

    #[inline]
    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub fn row_sum(&self, j: usize) -> usize {
        self.row(j).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        (0..self.size)
            .map(|j| (0..self.size).map(|k| self.get(j, k)).collect())
            .collect()
    }

    /// `Σ_{j<k} c_jk` over `indices`.
    pub fn subset_score(&self, indices: &[usize]) -> usize {
        let mut s = 0;
        for (a, &j) in indices.iter().enumerate() {
            for &k in &indices[a + 1..] {
                s += self.get(j, k) as usize;
            }
        }
        s
    }
}

pub fn score_matrix(candidates: &[PauliString]) -> Result<ScoreMatrix> {
    if let Some(first) = candidates.first() {
        for c in candidates {
            if c.qubits() != first.qubits() {
                return Err(Error::DimensionMismatch {
                    left: first.qubits(),
                    right: c.qubits(),
                });
            }
        }
    }
    let mut seen = HashSet::with_capacity(candidates.len());
    for c in candidates {
        if !seen.insert(*c) {
            return Err(Error::DuplicateCandidate(c.to_string()));
        }
    }
    let size = candidates.len();
    let words = size.div_ceil(64).max(1);
    let mut rows = vec![0u64; size * words];
    for (j, a) in candidates.iter().enumerate() {
        for (k, b) in candidates.iter().enumerate() {
            if !a.commutes_unchecked(b) {
                rows[j * words + k / 64] |= 1 << (k % 64);
            }
        }
    }
    Ok(ScoreMatrix { size, words, rows })
}

#[derive(Clone, Debug)]
pub struct SelectionProblem {
    pub observable: PauliString,
    pub candidates: Vec<PauliString>,
    pub budget: usize,
    pub coefficients: ScoreMatrix,
}

impl SelectionProblem {
    pub fn new(observable: PauliString, candidates: Vec<PauliString>, budget: usize) -> Result<Self> {
        if budget > candidates.len() || budget == 0 {
            return Err(Error::InfeasibleBudget {
                budget,
                available: candidates.len(),
            });
        }
        for c in &candidates {
            if c.qubits() != observable.qubits() {
                return Err(Error::DimensionMismatch {
                    left: observable.qubits(),
                    right: c.qubits(),
                });
            }
        }
        let coefficients = score_matrix(&candidates)?;
        Ok(Self {
            observable,
            candidates,
            budget,
            coefficients,
        })
    }

    /// Problem over the full pool `S` of `observable`.
    pub fn from_observable(observable: PauliString, budget: usize) -> Result<Self> {
        let pool = build_pool(&observable, observable.qubits(), None)?;
        Self::new(observable, pool, budget)
    }

    /// Same problem with candidates reordered by a seeded shuffle. Solvers that
    /// break ties by candidate order then pick a seed-dependent optimum.
    pub fn shuffled(&self, seed: u64) -> Result<Self> {
        let mut candidates = self.candidates.clone();
        candidates.shuffle(&mut seeds::rng(seed));
        Self::new(self.observable, candidates, self.budget)
    }

    /// `L(L-1)/2`.
    pub fn max_score(&self) -> usize {
        self.budget * self.budget.saturating_sub(1) / 2
    }

    pub(crate) fn result(&self, mut indices: Vec<usize>, method: Method, optimal: bool) -> SelectionResult {
        indices.sort_unstable();
        let score = self.coefficients.subset_score(&indices);
        SelectionResult {
            chosen: indices.iter().map(|&i| self.candidates[i]).collect(),
            indices,
            score,
            method,
            optimal: optimal || score == self.max_score(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectionResult {
    pub chosen: Vec<PauliString>,
    /// Positions of `chosen` in the problem's candidate list (ascending).
    pub indices: Vec<usize>,
    pub score: usize,
    pub method: Method,
    /// Score is provably maximal.
    pub optimal: bool,
}

/// Table-style counts for a chosen generator set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SelectionMetrics {
    /// Generators `G_j` with `[G_j, O] = 0`.
    pub commute_with_observable: usize,
    /// Unordered pairs `j < k` with `[G_j, G_k] = 0`.
    pub commuting_pairs: usize,
}

pub fn evaluate_selection(chosen: &[PauliString], observable: &PauliString) -> Result<SelectionMetrics> {
    let mut m = SelectionMetrics::default();
    for (j, g) in chosen.iter().enumerate() {
        if g.commutes(observable)? {
            m.commute_with_observable += 1;
        }
        for h in &chosen[j + 1..] {
            if g.commutes(h)? {
                m.commuting_pairs += 1;
            }
        }
    }
    Ok(m)
}

/// Everything needed to run one selection.
#[derive(Clone, Debug)]
pub struct SelectionRequest {
    pub observable: PauliString,
    pub budget: usize,
    pub seed: Option<u64>,
    pub pool_subsample: Option<usize>,
    pub genetic: GeneticConfig,
}

impl SelectionRequest {
    pub fn new(observable: PauliString, budget: usize) -> Self {
        Self {
            observable,
            budget,
            seed: None,
            pool_subsample: None,
            genetic: GeneticConfig::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Runs `method` for `request`.
///
/// For the pool-based solvers (exact, greedy, genetic) a seed, when given,
/// subsamples the pool (if requested) and then shuffles candidate order, so that
/// repeated trials land on different optima of equal score.
pub fn select(method: Method, request: &SelectionRequest) -> Result<SelectionResult> {
    let n = request.observable.qubits();
    let seed = request.seed.unwrap_or(0);
    match method {
        Method::Random | Method::GradOnly | Method::PairOnly => {
            select_baseline(method, n, &request.observable, request.budget, seed)
        }
        Method::Exact | Method::Greedy | Method::Genetic => {
            let subsample = request
                .pool_subsample
                .map(|s| (s, seeds::derive(seed, seeds::stream_id("subsample"), 0)));
            let pool = build_pool(&request.observable, n, subsample)?;
            let mut problem = SelectionProblem::new(request.observable, pool, request.budget)?;
            if let Some(s) = request.seed {
                problem = problem.shuffled(seeds::derive(s, seeds::stream_id("order"), 0))?;
            }
            match method {
                Method::Exact => solve_exact(&problem),
                Method::Greedy => solve_greedy(&problem),
                _ => solve_genetic(&problem, &request.genetic, seed),
            }
        }
    }
}
