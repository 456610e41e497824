use rand::seq::index::sample;
use rand::Rng;

use super::{Method, SelectionProblem, SelectionResult};
use crate::error::{Error, Result};
use crate::seeds;

#[derive(Clone, Debug, PartialEq)]
pub struct GeneticConfig {
    pub population: usize,
    pub generations: usize,
    pub mutation_rate: f64,
}

impl Default for GeneticConfig {
    fn default() -> Self {
        Self {
            population: 64,
            generations: 200,
            mutation_rate: 0.2,
        }
    }
}

/// Genetic search over `L`-subsets.
///
/// Chromosome: sorted index subset of size `L`. Parents are picked by binary
/// tournament; crossover takes the union of both parents and removes random
/// members until `L` remain; mutation swaps one chosen index for an unchosen one.
/// The best chromosome survives each generation unchanged.
pub fn solve_genetic(problem: &SelectionProblem, config: &GeneticConfig, seed: u64) -> Result<SelectionResult> {
    if config.population < 2 {
        return Err(Error::Population(config.population));
    }
    if !(0.0..=1.0).contains(&config.mutation_rate) {
        return Err(Error::InvalidConfig(format!(
            "mutation_rate {} outside [0, 1]",
            config.mutation_rate
        )));
    }
    let size = problem.candidates.len();
    let budget = problem.budget;
    if budget == 0 || budget > size {
        return Err(Error::InfeasibleBudget { budget, available: size });
    }
    let m = &problem.coefficients;
    let max_score = problem.max_score();
    let mut rng = seeds::rng(seed);

    let random_member = |rng: &mut seeds::Rng| {
        let mut c = sample(rng, size, budget).into_vec();
        c.sort_unstable();
        c
    };
    let mut population: Vec<(usize, Vec<usize>)> = (0..config.population)
        .map(|_| {
            let c = random_member(&mut rng);
            (m.subset_score(&c), c)
        })
        .collect();

    let best_of = |pop: &[(usize, Vec<usize>)]| {
        pop.iter()
            .fold(None::<&(usize, Vec<usize>)>, |acc, x| match acc {
                Some(a) if a.0 >= x.0 => Some(a),
                _ => Some(x),
            })
            .cloned()
            .expect("population is non-empty")
    };
    let mut best = best_of(&population);

    for _ in 0..config.generations {
        if best.0 == max_score {
            break;
        }
        let mut next = Vec::with_capacity(config.population);
        next.push(best.clone());
        while next.len() < config.population {
            let a = tournament(&population, &mut rng);
            let b = tournament(&population, &mut rng);
            let mut child = crossover(&population[a].1, &population[b].1, budget, &mut rng);
            if size > budget && rng.gen_bool(config.mutation_rate) {
                mutate(&mut child, size, &mut rng);
            }
            child.sort_unstable();
            next.push((m.subset_score(&child), child));
        }
        population = next;
        let gen_best = best_of(&population);
        if gen_best.0 > best.0 {
            best = gen_best;
        }
    }
    Ok(problem.result(best.1, Method::Genetic, false))
}

fn tournament(pop: &[(usize, Vec<usize>)], rng: &mut seeds::Rng) -> usize {
    let a = rng.gen_range(0..pop.len());
    let b = rng.gen_range(0..pop.len());
    if pop[b].0 > pop[a].0 {
        b
    } else {
        a
    }
}

fn crossover(a: &[usize], b: &[usize], budget: usize, rng: &mut seeds::Rng) -> Vec<usize> {
    let mut union: Vec<usize> = a.to_vec();
    for &x in b {
        if !union.contains(&x) {
            union.push(x);
        }
    }
    while union.len() > budget {
        let i = rng.gen_range(0..union.len());
        union.swap_remove(i);
    }
    union
}

fn mutate(chromosome: &mut [usize], size: usize, rng: &mut seeds::Rng) {
    let slot = rng.gen_range(0..chromosome.len());
    loop {
        let v = rng.gen_range(0..size);
        if !chromosome.contains(&v) {
            chromosome[slot] = v;
            return;
        }
    }
}
