//! Evolutionary multi-objective algorithms: a global simple EMO loop with
//! one offspring per step, a generational dominance-sorted EMO with binary
//! tournaments and crowding, and a generic elitist (mu + lambda) driver that
//! the generational algorithm instantiates.
//!
//! All runs count evaluations identically: the initial population plus every
//! offspring created. A run succeeds when its population covers every
//! Pareto-optimal fitness vector simultaneously.

mod blackbox;
mod gsemo;
mod nsgaii;
mod ranking;

pub use blackbox::{
    elitist_blackbox_run, nsgaii_offspring_sampler, nsgaii_ranking, uniform_parents_sampler,
    BlackboxParams,
};
pub use gsemo::{gsemo_insert, gsemo_run, gsemo_step};
pub use nsgaii::nsgaii_run;
pub use ranking::{
    binary_tournament, crowding_distance, nondominated_sort, rank_population, survival_order,
    Layering, RankKey,
};

use crate::bitstring::BitString;
use crate::objectives::{Fitness, ProblemInstance};

/// A genome with its cached objective vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual {
    pub genome: BitString,
    pub fitness: Fitness,
}

impl Individual {
    pub fn evaluate(problem: &ProblemInstance, genome: BitString) -> Self {
        let fitness = problem.evaluate(&genome);
        Individual { genome, fitness }
    }
}

/// Ordered multiset of individuals; insertion order is meaningful because
/// survival sorting is stable.
pub type Population = Vec<Individual>;

/// Everything a finished run reports.
#[derive(Clone, Debug, PartialEq)]
pub struct RunStats {
    /// Initial population size plus offspring created.
    pub evaluations: u64,
    /// Completed offspring-producing iterations.
    pub generations: u64,
    /// Evaluation count when a Pareto-optimal vector first appeared in the
    /// population (survivors, not transient offspring).
    pub first_pareto_hit_evals: Option<u64>,
    /// Distinct Pareto-optimal vectors in the final population.
    pub covered_vectors: usize,
    pub front_size: usize,
    /// `covered_vectors / front_size` for the final population.
    pub coverage_fraction: f64,
    /// Whole front covered at once within budget.
    pub success: bool,
    /// Number of run-time invariant checks performed (each would have
    /// panicked on violation).
    pub invariant_checks: u64,
}

/// Final population plus statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub stats: RunStats,
    pub population: Population,
}

/// Fraction of the Pareto-optimal fitness vectors present in `pop`.
pub fn front_coverage(pop: &[Individual], problem: &ProblemInstance) -> f64 {
    count_front_vectors(pop, problem) as f64 / problem.front_size() as f64
}

/// Number of distinct Pareto-optimal fitness vectors present in `pop`.
pub fn count_front_vectors(pop: &[Individual], problem: &ProblemInstance) -> usize {
    let mut seen = vec![false; problem.front_size()];
    let mut count = 0;
    for ind in pop {
        if let Some(i) = problem.front_vector_index(ind.fitness) {
            if !seen[i] {
                seen[i] = true;
                count += 1;
            }
        }
    }
    count
}
