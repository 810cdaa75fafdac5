//! Generational EMO with nondominated-layer ranking, crowding-distance
//! tie-breaking, binary tournaments, and elitist (μ + μ) truncation.

use crate::algorithms::ranking::{
    binary_tournament, rank_population, survival_order, Layering, RankKey,
};
use crate::algorithms::{count_front_vectors, Individual, Population, RunOutcome, RunStats};
use crate::bitstring::BitString;
use crate::error::{Error, Result};
use crate::objectives::{Fitness, ProblemInstance};
use crate::operators::{Crossover, Mutation};
use crate::RngStream;
use rand::Rng;
use std::collections::HashSet;

/// Draws `pop.len() / 2` parent pairs by binary tournament on the carried
/// rank keys and produces one offspring pair each: with probability `pc`
/// the parents recombine (the coin is skipped entirely when `pc` is zero),
/// otherwise they pass through as copies; both children are then mutated.
pub(crate) fn tournament_offspring(
    pop: &[Individual],
    keys: &[RankKey],
    mutation: &Mutation,
    crossover: Crossover,
    pc: f64,
    rng: &mut RngStream,
) -> Vec<BitString> {
    debug_assert_eq!(pop.len(), keys.len());
    debug_assert_eq!(pop.len() % 2, 0);
    let mut out = Vec::with_capacity(pop.len());
    for _ in 0..pop.len() / 2 {
        let a = binary_tournament(keys, rng);
        let b = binary_tournament(keys, rng);
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

/// Crowding guarantee on the first layer of a ranking: at most four members
/// per distinct fitness vector can carry positive crowding distance.
fn assert_first_layer_crowding(layering: &Layering, fitnesses: &[Fitness]) -> usize {
    let layer0 = &layering.layers[0];
    let distinct: HashSet<Fitness> = layer0.iter().map(|&i| fitnesses[i]).collect();
    let positive = layer0
        .iter()
        .filter(|&&i| layering.cdist[i] > 0.0)
        .count();
    assert!(
        positive <= 4 * distinct.len(),
        "{positive} first-layer members with positive crowding exceed four \
         per distinct vector ({} vectors)",
        distinct.len()
    );
    distinct.len()
}

/// Runs until the whole Pareto front is covered or the next generation
/// would exceed the evaluation budget (which counts the initial μ
/// evaluations). Exactly μ offspring are evaluated per generation.
#[allow(clippy::too_many_arguments)]
pub fn nsgaii_run(
    problem: &ProblemInstance,
    mutation: &Mutation,
    crossover: Crossover,
    pc: f64,
    mu: usize,
    budget: u64,
    checks: bool,
    rng: &mut RngStream,
) -> Result<RunOutcome> {
    if mu < 2 || !mu.is_multiple_of(2) {
        return Err(Error::BadParameter(format!(
            "population size {mu} must be even and at least 2"
        )));
    }
    if budget < mu as u64 {
        return Err(Error::BadParameter(format!(
            "budget {budget} cannot cover the initial population of {mu}"
        )));
    }
    if !(0.0..=1.0).contains(&pc) {
        return Err(Error::BadParameter(format!(
            "crossover probability {pc} outside [0, 1]"
        )));
    }
    if pc > 0.0 && crossover == Crossover::None {
        return Err(Error::BadParameter(
            "positive crossover probability needs a crossover operator".into(),
        ));
    }
    mutation.validate(problem.n())?;

    let front_size = problem.front_size();
    let mut pop: Population = (0..mu)
        .map(|_| Individual::evaluate(problem, BitString::random(problem.n(), rng)))
        .collect();
    let mut evaluations = mu as u64;
    let mut generations: u64 = 0;
    let mut invariant_checks: u64 = 0;

    let fitness_of = |pop: &Population| -> Vec<Fitness> {
        pop.iter().map(|m| m.fitness).collect()
    };
    let mut keys = rank_population(&fitness_of(&pop)).keys();
    let mut covered = count_front_vectors(&pop, problem);
    let mut first_hit = if covered > 0 { Some(evaluations) } else { None };

    while covered < front_size && evaluations + mu as u64 <= budget {
        let genomes = tournament_offspring(&pop, &keys, mutation, crossover, pc, rng);
        let mut merged = std::mem::take(&mut pop);
        merged.extend(
            genomes
                .into_iter()
                .map(|g| Individual::evaluate(problem, g)),
        );
        evaluations += mu as u64;

        let merged_fits = fitness_of(&merged);
        let layering = rank_population(&merged_fits);
        let mut first_layer_vectors = 0;
        if checks {
            first_layer_vectors = assert_first_layer_crowding(&layering, &merged_fits);
            invariant_checks += 1;
        }
        let merged_keys = layering.keys();
        let order = survival_order(&merged_keys);
        pop = order[..mu].iter().map(|&i| merged[i].clone()).collect();
        keys = order[..mu].iter().map(|&i| merged_keys[i]).collect();
        if checks && mu >= 4 * first_layer_vectors {
            // With enough room, truncation may not drop any first-layer
            // fitness vector.
            let surviving: HashSet<Fitness> = pop.iter().map(|m| m.fitness).collect();
            for &i in &layering.layers[0] {
                assert!(
                    surviving.contains(&merged_fits[i]),
                    "first-layer vector {:?} was dropped although μ ≥ 4m",
                    merged_fits[i]
                );
            }
            invariant_checks += 1;
        }

        generations += 1;
        covered = count_front_vectors(&pop, problem);
        if covered > 0 && first_hit.is_none() {
            first_hit = Some(evaluations);
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
        invariant_checks,
    };
    Ok(RunOutcome {
        stats,
        population: pop,
    })
}
