//! Global simple EMO: one uniformly chosen parent per step, one offspring,
//! and a population that is always a dominance antichain with pairwise
//! distinct fitness vectors.

use crate::algorithms::{Individual, Population, RunOutcome, RunStats};
use crate::error::{Error, Result};
use crate::objectives::{
    compare, strictly_dominates, weakly_dominates, DominanceResult, Fitness, ProblemInstance,
};
use crate::bitstring::BitString;
use crate::operators::{pick_one_offspring, Crossover, Mutation};
use crate::RngStream;
use rand::Rng;

/// Inserts `offspring` unless some member strictly dominates it; on
/// insertion every member it weakly dominates is removed, so an offspring
/// with a fitness vector already present replaces the incumbent. Returns
/// whether the offspring was inserted.
pub fn gsemo_insert(pop: &mut Population, offspring: Individual) -> bool {
    if pop
        .iter()
        .any(|m| strictly_dominates(m.fitness, offspring.fitness))
    {
        return false;
    }
    pop.retain(|m| !weakly_dominates(offspring.fitness, m.fitness));
    pop.push(offspring);
    true
}

/// One iteration: select, vary, evaluate (exactly once), insert. Returns
/// the offspring fitness and whether it entered the population.
pub fn gsemo_step(
    pop: &mut Population,
    problem: &ProblemInstance,
    mutation: &Mutation,
    crossover: Crossover,
    pc: f64,
    rng: &mut RngStream,
) -> (Fitness, bool) {
    debug_assert!(!pop.is_empty());
    let first = rng.random_range(0..pop.len());
    // The recombination coin is drawn only for positive probability, so a
    // mutation-only configuration consumes no draw for it.
    let child = if pc > 0.0 && rng.random_bool(pc) {
        let second = rng.random_range(0..pop.len());
        let pair = crossover.recombine(&pop[first].genome, &pop[second].genome, rng);
        let mixed = pick_one_offspring(pair, rng);
        mutation.apply(&mixed, rng)
    } else {
        mutation.apply(&pop[first].genome, rng)
    };
    let offspring = Individual::evaluate(problem, child);
    let fitness = offspring.fitness;
    let inserted = gsemo_insert(pop, offspring);
    (fitness, inserted)
}

/// Monotone front coverage: a Pareto-optimal vector never leaves the
/// population once present, so observing insertions suffices.
struct CoverageTracker {
    covered: Vec<bool>,
    count: usize,
    first_hit: Option<u64>,
}

impl CoverageTracker {
    fn new(front_size: usize) -> Self {
        CoverageTracker {
            covered: vec![false; front_size],
            count: 0,
            first_hit: None,
        }
    }

    fn observe(&mut self, problem: &ProblemInstance, fitness: Fitness, evaluations: u64) {
        if let Some(i) = problem.front_vector_index(fitness) {
            if self.first_hit.is_none() {
                self.first_hit = Some(evaluations);
            }
            if !self.covered[i] {
                self.covered[i] = true;
                self.count += 1;
            }
        }
    }

    fn full(&self) -> bool {
        self.count == self.covered.len()
    }
}

/// Largest antichain the population may legally form, recomputed when the
/// population changes. Also asserts the structural facts the bound rests
/// on: members of a multi-member population all have positive fitness, and
/// on the one-point benchmark they share one ones-count.
fn antichain_size_bound(pop: &Population, problem: &ProblemInstance) -> usize {
    let n = problem.n();
    if pop.len() < 2 {
        return usize::MAX;
    }
    assert!(
        pop.iter().all(|m| m.fitness != (0, 0)),
        "a multi-member population may not hold a zero-fitness member"
    );
    if problem.is_rrrmo() {
        let k = pop[0].genome.count_ones();
        assert!(
            pop.iter().all(|m| m.genome.count_ones() == k),
            "non-dominated members must share one ones-count"
        );
        (n - k + 1).max(1)
    } else {
        n
    }
}

/// Asserts pairwise incomparability (which implies distinct vectors).
fn full_antichain_audit(pop: &Population) {
    for i in 0..pop.len() {
        for j in i + 1..pop.len() {
            assert_eq!(
                compare(pop[i].fitness, pop[j].fitness),
                DominanceResult::Incomparable,
                "population members {i} and {j} violate the antichain"
            );
        }
    }
}

/// Generations between full pairwise antichain audits; the cheap size-bound
/// check runs every generation.
const AUDIT_PERIOD: u64 = 8192;

/// Runs until the whole Pareto front is covered or the evaluation budget
/// (which counts the initial evaluation) is exhausted.
pub fn gsemo_run(
    problem: &ProblemInstance,
    mutation: &Mutation,
    crossover: Crossover,
    pc: f64,
    budget: u64,
    checks: bool,
    rng: &mut RngStream,
) -> Result<RunOutcome> {
    if budget == 0 {
        return Err(Error::BadParameter("evaluation budget must be positive".into()));
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

    let mut pop: Population = vec![Individual::evaluate(
        problem,
        BitString::random(problem.n(), rng),
    )];
    let mut evaluations: u64 = 1;
    let mut tracker = CoverageTracker::new(problem.front_size());
    tracker.observe(problem, pop[0].fitness, evaluations);

    let mut generations: u64 = 0;
    let mut invariant_checks: u64 = 0;
    let mut size_bound = antichain_size_bound(&pop, problem);
    while evaluations < budget && !tracker.full() {
        let (fitness, inserted) = gsemo_step(&mut pop, problem, mutation, crossover, pc, rng);
        evaluations += 1;
        generations += 1;
        if inserted {
            tracker.observe(problem, fitness, evaluations);
            if checks {
                size_bound = antichain_size_bound(&pop, problem);
            }
        }
        if checks {
            assert!(
                pop.len() <= size_bound,
                "population of {} exceeds the antichain bound {size_bound}",
                pop.len()
            );
            invariant_checks += 1;
            if generations.is_multiple_of(AUDIT_PERIOD) {
                full_antichain_audit(&pop);
                invariant_checks += 1;
            }
        }
    }
    if checks {
        full_antichain_audit(&pop);
        invariant_checks += 1;
    }

    let front_size = problem.front_size();
    let stats = RunStats {
        evaluations,
        generations,
        first_pareto_hit_evals: tracker.first_hit,
        covered_vectors: tracker.count,
        front_size,
        coverage_fraction: tracker.count as f64 / front_size as f64,
        success: tracker.full(),
        invariant_checks,
    };
    Ok(RunOutcome {
        stats,
        population: pop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn ind(text: &str, fitness: Fitness) -> Individual {
        Individual {
            genome: BitString::from_literal(text).unwrap(),
            fitness,
        }
    }

    #[test]
    fn insert_examples() {
        let mut pop = vec![ind("0111111110", (81, 81))];
        assert!(!gsemo_insert(&mut pop, ind("1011111110", (0, 0))));
        assert_eq!(pop.len(), 1);

        assert!(gsemo_insert(&mut pop, ind("1111111100", (82, 80))));
        assert_eq!(pop.len(), 2);

        // Equal fitness replaces the incumbent and keeps one representative.
        let replacement = ind("0111111110", (81, 81));
        assert!(gsemo_insert(&mut pop, replacement.clone()));
        assert_eq!(pop.len(), 2);
        assert_eq!(pop.iter().filter(|m| m.fitness == (81, 81)).count(), 1);
        assert!(pop.contains(&replacement));
    }

    #[test]
    fn insert_sweeps_out_everything_weakly_dominated() {
        let mut pop = vec![
            ind("100", (5, 1)),
            ind("010", (4, 2)),
            ind("001", (1, 5)),
        ];
        assert!(gsemo_insert(&mut pop, ind("110", (6, 3))));
        let fits: Vec<Fitness> = pop.iter().map(|m| m.fitness).collect();
        assert_eq!(fits, vec![(1, 5), (6, 3)]);
    }

    #[test]
    fn run_covers_small_front() {
        let problem = ProblemInstance::rrrmo(10).unwrap();
        let mut rng = RngStream::seed_from_u64(7);
        let out = gsemo_run(
            &problem,
            &Mutation::StandardBit,
            Crossover::OnePoint,
            0.5,
            1_000_000,
            true,
            &mut rng,
        )
        .unwrap();
        assert!(out.stats.success);
        assert_eq!(out.stats.coverage_fraction, 1.0);
        assert_eq!(out.stats.covered_vectors, 3);
        assert!(out.stats.first_pareto_hit_evals.unwrap() <= out.stats.evaluations);
        assert!(out.stats.invariant_checks > 0);
        assert!(out.population.len() <= 3);
    }

    #[test]
    fn run_covers_uniform_benchmark() {
        let problem = ProblemInstance::urrrmo(16).unwrap();
        let mut rng = RngStream::seed_from_u64(8);
        let out = gsemo_run(
            &problem,
            &Mutation::StandardBit,
            Crossover::Uniform,
            0.5,
            500_000,
            true,
            &mut rng,
        )
        .unwrap();
        assert!(out.stats.success, "{:?}", out.stats);
        assert_eq!(out.stats.covered_vectors, 9);
    }

    #[test]
    fn budget_is_respected_exactly() {
        let problem = ProblemInstance::rrrmo(20).unwrap();
        let mut rng = RngStream::seed_from_u64(9);
        let out = gsemo_run(
            &problem,
            &Mutation::StandardBit,
            Crossover::None,
            0.0,
            500,
            true,
            &mut rng,
        )
        .unwrap();
        assert!(!out.stats.success);
        assert_eq!(out.stats.evaluations, 500);
        assert_eq!(out.stats.generations, 499);
    }

    #[test]
    fn minimal_budget_reports_the_initial_point() {
        let problem = ProblemInstance::rrrmo(10).unwrap();
        let mut rng = RngStream::seed_from_u64(10);
        let out = gsemo_run(
            &problem,
            &Mutation::StandardBit,
            Crossover::None,
            0.0,
            1,
            true,
            &mut rng,
        )
        .unwrap();
        assert_eq!(out.stats.evaluations, 1);
        assert_eq!(out.stats.generations, 0);
        assert_eq!(out.population.len(), 1);
    }

    #[test]
    fn same_seed_reproduces_the_run() {
        let problem = ProblemInstance::rrrmo(15).unwrap();
        let run = || {
            let mut rng = RngStream::seed_from_u64(11);
            gsemo_run(
                &problem,
                &Mutation::StandardBit,
                Crossover::OnePoint,
                0.25,
                20_000,
                false,
                &mut rng,
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn checks_can_be_disabled() {
        let problem = ProblemInstance::rrrmo(10).unwrap();
        let mut rng = RngStream::seed_from_u64(12);
        let out = gsemo_run(
            &problem,
            &Mutation::StandardBit,
            Crossover::None,
            0.0,
            1000,
            false,
            &mut rng,
        )
        .unwrap();
        assert_eq!(out.stats.invariant_checks, 0);
    }

    #[test]
    fn configuration_is_validated() {
        let problem = ProblemInstance::rrrmo(10).unwrap();
        let mut rng = RngStream::seed_from_u64(13);
        let std = Mutation::StandardBit;
        assert!(gsemo_run(&problem, &std, Crossover::None, 0.0, 0, false, &mut rng).is_err());
        assert!(gsemo_run(&problem, &std, Crossover::OnePoint, 1.5, 10, false, &mut rng).is_err());
        assert!(gsemo_run(&problem, &std, Crossover::None, 0.5, 10, false, &mut rng).is_err());
        let too_wide = Mutation::UnaryUnbiased(crate::operators::RadiusDistribution::Point(11));
        assert!(gsemo_run(&problem, &too_wide, Crossover::None, 0.0, 10, false, &mut rng).is_err());
    }
}
