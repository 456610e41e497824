use super::{Method, ScoreMatrix, SelectionProblem, SelectionResult};
use crate::error::{Error, Result};

/// Exact maximizer of `Σ_{j<k} c_jk` over `L`-subsets.
///
/// First searches depth-first for an `L`-clique in the anticommutation graph; a
/// clique attains the trivial bound `L(L-1)/2` and ends the search. Otherwise runs
/// branch-and-bound over subsets. Both searches visit subsets in lexicographic
/// order of candidate index and only accept strict improvements, so the result is
/// the lexicographically smallest optimum.
pub fn solve_exact(problem: &SelectionProblem) -> Result<SelectionResult> {
    let budget = problem.budget;
    if budget < 2 || budget > problem.candidates.len() {
        return Err(Error::InfeasibleBudget {
            budget,
            available: problem.candidates.len(),
        });
    }
    let n = problem.observable.qubits();
    // Mutually anticommuting Pauli strings number at most 2n + 1.
    if budget <= 2 * n + 1 {
        if let Some(clique) = find_clique(&problem.coefficients, budget) {
            return Ok(problem.result(clique, Method::Exact, true));
        }
    }
    let best = branch_and_bound(&problem.coefficients, budget);
    Ok(problem.result(best, Method::Exact, true))
}

/// Lexicographically first `size`-clique, if any.
pub(crate) fn find_clique(m: &ScoreMatrix, size: usize) -> Option<Vec<usize>> {
    let words = m.words();
    let mut all = vec![0u64; words];
    for i in 0..m.len() {
        all[i / 64] |= 1 << (i % 64);
    }
    let mut chosen = Vec::with_capacity(size);
    if extend_clique(m, size, &mut chosen, &all) {
        Some(chosen)
    } else {
        None
    }
}

fn count(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

fn extend_clique(m: &ScoreMatrix, size: usize, chosen: &mut Vec<usize>, cand: &[u64]) -> bool {
    if chosen.len() == size {
        return true;
    }
    let mut rest = cand.to_vec();
    while let Some(v) = first_bit(&rest) {
        rest[v / 64] &= !(1 << (v % 64));
        if chosen.len() + 1 + count(&rest) < size {
            return false;
        }
        let next: Vec<u64> = rest.iter().zip(m.row(v)).map(|(a, b)| a & b).collect();
        if chosen.len() + 1 + count(&next) < size {
            continue;
        }
        chosen.push(v);
        if extend_clique(m, size, chosen, &next) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn first_bit(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

struct Search<'a> {
    m: &'a ScoreMatrix,
    budget: usize,
    best_score: Option<usize>,
    best: Vec<usize>,
    chosen: Vec<usize>,
    /// `gain[v]` = number of chosen vertices adjacent to `v`.
    gain: Vec<usize>,
    scratch: Vec<usize>,
}

fn branch_and_bound(m: &ScoreMatrix, budget: usize) -> Vec<usize> {
    let mut s = Search {
        m,
        budget,
        best_score: None,
        best: Vec::new(),
        chosen: Vec::with_capacity(budget),
        gain: vec![0; m.len()],
        scratch: Vec::with_capacity(m.len()),
    };
    s.descend(0, 0);
    s.best
}

impl Search<'_> {
    /// Upper bound: current score + the `r` largest gains among the remaining
    /// candidates + at most `r(r-1)/2` edges among the `r` newcomers.
    fn bound(&mut self, next: usize, score: usize) -> usize {
        let r = self.budget - self.chosen.len();
        self.scratch.clear();
        self.scratch.extend_from_slice(&self.gain[next..]);
        let top: usize = if r < self.scratch.len() {
            self.scratch.select_nth_unstable_by(r, |a, b| b.cmp(a));
            self.scratch[..r].iter().sum()
        } else {
            self.scratch.iter().sum()
        };
        score + top + r * r.saturating_sub(1) / 2
    }

    fn descend(&mut self, next: usize, score: usize) {
        if self.chosen.len() == self.budget {
            if self.best_score.map_or(true, |b| score > b) {
                self.best_score = Some(score);
                self.best = self.chosen.clone();
            }
            return;
        }
        let r = self.budget - self.chosen.len();
        let max_score = self.budget * (self.budget - 1) / 2;
        for v in next..=(self.m.len() - r) {
            if self.best_score == Some(max_score) {
                return;
            }
            if let Some(b) = self.best_score {
                if self.bound(v, score) <= b {
                    return;
                }
            }
            let added = self.gain[v];
            self.chosen.push(v);
            for u in 0..self.m.len() {
                self.gain[u] += self.m.get(v, u) as usize;
            }
            self.descend(v + 1, score + added);
            for u in 0..self.m.len() {
                self.gain[u] -= self.m.get(v, u) as usize;
            }
            self.chosen.pop();
        }
    }
}

/// Starts from the first candidate and repeatedly adds the candidate with the
/// largest score gain (lowest index on ties).
pub fn solve_greedy(problem: &SelectionProblem) -> Result<SelectionResult> {
    let m = &problem.coefficients;
    let budget = problem.budget;
    if budget > m.len() || budget == 0 {
        return Err(Error::InfeasibleBudget {
            budget,
            available: m.len(),
        });
    }
    let mut in_set = vec![false; m.len()];
    let mut gain = vec![0usize; m.len()];
    let mut chosen = Vec::with_capacity(budget);
    for _ in 0..budget {
        let v = (0..m.len())
            .filter(|&v| !in_set[v])
            .max_by(|&a, &b| gain[a].cmp(&gain[b]).then(b.cmp(&a)))
            .expect("budget checked");
        in_set[v] = true;
        chosen.push(v);
        for (u, g) in gain.iter_mut().enumerate() {
            *g += m.get(v, u) as usize;
        }
    }
    Ok(problem.result(chosen, Method::Greedy, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;
    use crate::selection::{evaluate_selection, SelectionMetrics};
    use crate::seeds;
    use rand::seq::index::sample;
    use rand::Rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    /// Exhaustive enumeration of every `L`-subset in lexicographic order.
    fn brute_force(m: &ScoreMatrix, budget: usize) -> (usize, Vec<usize>) {
        fn rec(m: &ScoreMatrix, budget: usize, start: usize, cur: &mut Vec<usize>, best: &mut Option<(usize, Vec<usize>)>) {
            if cur.len() == budget {
                let s = m.subset_score(cur);
                if best.as_ref().map_or(true, |(b, _)| s > *b) {
                    *best = Some((s, cur.clone()));
                }
                return;
            }
            for v in start..m.len() {
                cur.push(v);
                rec(m, budget, v + 1, cur, best);
                cur.pop();
            }
        }
        let mut best = None;
        rec(m, budget, 0, &mut Vec::new(), &mut best);
        best.unwrap()
    }

    #[test]
    fn full_pool_at_five_qubits() {
        let problem = SelectionProblem::from_observable(p("ZIIII"), 5).unwrap();
        let r = solve_exact(&problem).unwrap();
        assert_eq!(r.score, 10);
        assert!(r.optimal);
        assert_eq!(
            evaluate_selection(&r.chosen, &p("ZIIII")).unwrap(),
            SelectionMetrics::default()
        );
    }

    #[test]
    fn documented_quintuple_is_mutually_anticommuting() {
        let set: Vec<_> = ["XIIII", "YXIII", "YYIII", "YZXII", "YZYII"].iter().map(|s| p(s)).collect();
        let problem = SelectionProblem::new(p("ZIIII"), set.clone(), 5).unwrap();
        assert_eq!(problem.coefficients.subset_score(&[0, 1, 2, 3, 4]), 10);
        assert_eq!(evaluate_selection(&set, &p("ZIIII")).unwrap(), SelectionMetrics::default());
    }

    #[test]
    fn small_examples() {
        let r = solve_exact(&SelectionProblem::new(p("Z"), vec![p("X"), p("Y")], 2).unwrap()).unwrap();
        assert_eq!((r.score, r.chosen.clone()), (1, vec![p("X"), p("Y")]));

        let commuting = vec![p("XII"), p("IXI"), p("IIX"), p("XXI")];
        let r = solve_exact(&SelectionProblem::new(p("ZZZ"), commuting, 3).unwrap()).unwrap();
        assert_eq!(r.score, 0);
        assert!(r.optimal);
        assert_eq!(r.indices, vec![0, 1, 2]);

        assert!(matches!(
            solve_exact(&SelectionProblem::new(p("Z"), vec![p("X"), p("Y")], 1).unwrap()),
            Err(Error::InfeasibleBudget { .. })
        ));
        assert!(SelectionProblem::new(p("Z"), vec![p("X")], 2).is_err());
    }

    #[test]
    fn matches_exhaustive_enumeration_on_small_pools() {
        let mut rng = seeds::rng(2024);
        for _ in 0..100 {
            let n = rng.gen_range(2..=4);
            let all = PauliString::all_non_identity(n).unwrap();
            let size = rng.gen_range(4..=15.min(all.len()));
            let mut idx = sample(&mut rng, all.len(), size).into_vec();
            idx.sort_unstable();
            let candidates: Vec<_> = idx.iter().map(|&i| all[i]).collect();
            let budget = rng.gen_range(2..=size.min(7));
            let observable = all[rng.gen_range(0..all.len())];
            let problem = SelectionProblem::new(observable, candidates, budget).unwrap();
            let (score, subset) = brute_force(&problem.coefficients, budget);
            let r = solve_exact(&problem).unwrap();
            assert_eq!(r.score, score);
            assert_eq!(r.indices, subset, "tie-break must be lexicographic");
        }
    }

    #[test]
    fn branch_and_bound_alone_matches_enumeration() {
        let mut rng = seeds::rng(7);
        for _ in 0..50 {
            let all = PauliString::all_non_identity(3).unwrap();
            let mut idx = sample(&mut rng, all.len(), 12).into_vec();
            idx.sort_unstable();
            let candidates: Vec<_> = idx.iter().map(|&i| all[i]).collect();
            let m = crate::selection::score_matrix(&candidates).unwrap();
            let budget = rng.gen_range(2..=6);
            assert_eq!(branch_and_bound(&m, budget), brute_force(&m, budget).1);
        }
    }

    #[test]
    fn greedy_is_feasible_and_bounded_by_exact() {
        let problem = SelectionProblem::from_observable(p("ZIII"), 4).unwrap();
        let g = solve_greedy(&problem).unwrap();
        let e = solve_exact(&problem).unwrap();
        assert_eq!(g.chosen.len(), 4);
        assert!(g.score <= e.score);
    }
}
