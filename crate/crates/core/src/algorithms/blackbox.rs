//! Elitist (μ + λ) black-box skeleton: the caller supplies the offspring
//! sampler and the ranking; the driver owns initialisation, evaluation
//! accounting, truncation survival, and coverage bookkeeping. Survival
//! keeps the μ best of parents-then-offspring under the caller's ranking,
//! so parents win exact ties.

use crate::algorithms::nsgaii::tournament_offspring;
use crate::algorithms::ranking::{rank_population, survival_order, RankKey};
use crate::algorithms::{count_front_vectors, Individual, Population, RunOutcome, RunStats};
use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::objectives::{Fitness, ProblemInstance};
use crate::operators::{Crossover, Mutation};
use crate::RngStream;
use rand::Rng;

/// Shape of one (μ + λ) run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlackboxParams {
    /// Surviving population size.
    pub mu: usize,
    /// Offspring per generation; zero makes the run return the initial
    /// population untouched.
    pub lambda: usize,
    /// Total evaluation budget, counting the μ initial evaluations.
    pub budget: u64,
    /// Optional hard cap on generations.
    pub max_generations: Option<u64>,
}

/// Runs the skeleton until full front coverage, budget exhaustion, or the
/// generation cap. `sample_offspring` sees the population with its current
/// rank keys and must return exactly λ genomes; `ranking` must return one
/// key per individual. The same seed with the same callbacks reproduces
/// the run bit for bit.
pub fn elitist_blackbox_run(
    problem: &ProblemInstance,
    params: &BlackboxParams,
    mut sample_offspring: impl FnMut(&[Individual], &[RankKey], &mut RngStream) -> Vec<BitString>,
    mut ranking: impl FnMut(&[Individual]) -> Vec<RankKey>,
    rng: &mut RngStream,
) -> Result<RunOutcome> {
    let mu = params.mu;
    let lambda = params.lambda;
    if mu == 0 {
        return Err(Error::BadParameter("population size must be positive".into()));
    }
    if params.budget < mu as u64 {
        return Err(Error::BadParameter(format!(
            "budget {} cannot cover the initial population of {mu}",
            params.budget
        )));
    }

    let front_size = problem.front_size();
    let mut pop: Population = (0..mu)
        .map(|_| Individual::evaluate(problem, BitString::random(problem.n(), rng)))
        .collect();
    let mut evaluations = mu as u64;
    let mut generations: u64 = 0;

    let mut keys = ranking(&pop);
    assert_eq!(keys.len(), mu, "ranking must key every individual");
    let mut covered = count_front_vectors(&pop, problem);
    let mut first_hit = if covered > 0 { Some(evaluations) } else { None };

    if lambda > 0 {
        while covered < front_size
            && evaluations + lambda as u64 <= params.budget
            && params.max_generations.is_none_or(|cap| generations < cap)
        {
            let genomes = sample_offspring(&pop, &keys, rng);
            assert_eq!(
                genomes.len(),
                lambda,
                "sampler produced {} offspring, expected {lambda}",
                genomes.len()
            );
            let mut merged = std::mem::take(&mut pop);
            merged.extend(
                genomes
                    .into_iter()
                    .map(|g| Individual::evaluate(problem, g)),
            );
            evaluations += lambda as u64;

            let merged_keys = ranking(&merged);
            assert_eq!(merged_keys.len(), merged.len());
            let order = survival_order(&merged_keys);
            pop = order[..mu].iter().map(|&i| merged[i].clone()).collect();
            keys = order[..mu].iter().map(|&i| merged_keys[i]).collect();

            generations += 1;
            covered = count_front_vectors(&pop, problem);
            if covered > 0 && first_hit.is_none() {
                first_hit = Some(evaluations);
            }
        }
    }

    let stats = RunStats {
        evaluations,
        generations,
        first_pareto_hit_evals: first_hit,
        covered_vectors: covered,
        front_size,
        coverage_fraction: covered as f64 / front_size as f64,
        success: covered == front_size,
        invariant_checks: 0,
    };
    Ok(RunOutcome {
        stats,
        population: pop,
    })
}

/// Offspring sampler that reproduces the generational EMO's variation:
/// binary tournaments on the carried keys, pairwise recombination with
/// probability `pc`, then mutation of both children. Produces one
/// offspring per parent slot, so use it with λ = μ (even).
pub fn nsgaii_offspring_sampler(
    mutation: Mutation,
    crossover: Crossover,
    pc: f64,
) -> impl FnMut(&[Individual], &[RankKey], &mut RngStream) -> Vec<BitString> {
    move |pop, keys, rng| tournament_offspring(pop, keys, &mutation, crossover, pc, rng)
}

/// Ranking by nondominated layer with crowding-distance tie-breaking.
pub fn nsgaii_ranking() -> impl FnMut(&[Individual]) -> Vec<RankKey> {
    |pop| {
        let fits: Vec<Fitness> = pop.iter().map(|m| m.fitness).collect();
        rank_population(&fits).keys()
    }
}

/// Offspring sampler that ignores rank keys and draws each pair of parents
/// uniformly with replacement, recombining with probability `pc` and
/// mutating both children. `lambda` must be even.
pub fn uniform_parents_sampler(
    mutation: Mutation,
    crossover: Crossover,
    pc: f64,
    lambda: usize,
) -> impl FnMut(&[Individual], &[RankKey], &mut RngStream) -> Vec<BitString> {
    assert_eq!(lambda % 2, 0, "offspring count must be even");
    move |pop, _keys, rng| {
        let mut out = Vec::with_capacity(lambda);
        for _ in 0..lambda / 2 {
            let a = rng.random_range(0..pop.len());
            let b = rng.random_range(0..pop.len());
            let (x, y) = if pc > 0.0 && rng.random_bool(pc) {
                crossover.recombine(&pop[a].genome, &pop[b].genome, rng)
            } else {
                (pop[a].genome.clone(), pop[b].genome.clone())
            };
            out.push(mutation.apply(&x, rng));
            out.push(mutation.apply(&y, rng));
        }
        out
    }
}
