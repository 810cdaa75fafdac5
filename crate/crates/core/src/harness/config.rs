//! Experiment configuration and up-front validation.

use std::collections::HashSet;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::operators::Crossover;

use super::spec::{AlgoSpec, MutationSpec, ProblemSpec, SigmaSpec, ZSpec};

/// Everything a batch experiment needs: the problem, the optimiser, the
/// variation operators, the size grid, and the reproducibility anchors.
///
/// `validate` checks the whole configuration before any trial runs and
/// reports *every* violated constraint at once.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub algo: AlgoSpec,
    pub mutation: MutationSpec,
    pub crossover: Crossover,
    /// Probability of recombining before mutation.
    pub pc: f64,
    /// Population size; required by the population-based algorithms and
    /// rejected by the single-archive loop.
    pub mu: Option<usize>,
    /// Problem sizes, one grid column each, in the order given.
    pub ns: Vec<usize>,
    /// Evaluation budget per trial (initial population included).
    pub budget: u64,
    /// Independent repetitions per problem size.
    pub trials: u64,
    /// Anchor for all per-trial seed derivation.
    pub base_seed: u64,
    /// Where the CSV goes; `None` keeps records in memory (the runner never
    /// writes, callers decide).
    pub output: Option<PathBuf>,
    /// Run the optimisers' internal invariant checks during trials.
    pub checks: bool,
    /// Record wall-clock time per trial. Off by default because timing
    /// values differ between runs and would break byte-identical output.
    pub timing: bool,
}

impl ExperimentConfig {
    /// Convenience constructor covering the common fields; `mu` and
    /// `output` start unset, checks on, timing off.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        problem: ProblemSpec,
        algo: AlgoSpec,
        mutation: MutationSpec,
        crossover: Crossover,
        pc: f64,
        ns: Vec<usize>,
        budget: u64,
        trials: u64,
        base_seed: u64,
    ) -> Self {
        ExperimentConfig {
            problem,
            algo,
            mutation,
            crossover,
            pc,
            mu: None,
            ns,
            budget,
            trials,
            base_seed,
            output: None,
            checks: true,
            timing: false,
        }
    }

    pub fn with_mu(mut self, mu: usize) -> Self {
        self.mu = Some(mu);
        self
    }

    /// Checks every constraint and returns the full list of violations, so
    /// a user fixes a bad configuration in one round trip.
    pub fn validate(&self) -> Result<()> {
        let mut violations: Vec<String> = Vec::new();

        if !(self.pc >= 0.0 && self.pc <= 1.0) {
            violations.push(format!(
                "crossover probability {} is outside [0, 1]",
                self.pc
            ));
        }
        if self.pc > 0.0 && self.crossover == Crossover::None {
            violations.push(format!(
                "crossover probability {} is positive but the crossover operator is \"none\"",
                self.pc
            ));
        }

        if self.trials == 0 {
            violations.push("trials must be at least 1".into());
        }

        if self.ns.is_empty() {
            violations.push("the problem size list is empty".into());
        }
        let divisor = self.problem.divisor();
        let mut seen = HashSet::new();
        for &n in &self.ns {
            if n == 0 || n % divisor != 0 {
                violations.push(format!(
                    "problem size {n} is not a positive multiple of {divisor}"
                ));
            }
            if !seen.insert(n) {
                violations.push(format!("problem size {n} appears more than once"));
            }
        }

        match self.mutation.build() {
            Err(e) => violations.push(e.to_string()),
            Ok(mutation) => {
                for &n in &self.ns {
                    if let Err(e) = mutation.validate(n) {
                        violations.push(format!("for problem size {n}: {e}"));
                    }
                }
            }
        }

        if self.budget == 0 {
            violations.push("the evaluation budget must be positive".into());
        }
        match (self.algo.needs_mu(), self.mu) {
            (true, None) => {
                violations.push(format!("algorithm {} requires mu", self.algo));
            }
            (true, Some(mu)) => {
                if mu < 2 || mu % 2 != 0 {
                    violations.push(format!("mu {mu} must be an even number of at least 2"));
                } else if self.budget < mu as u64 {
                    violations.push(format!(
                        "budget {} cannot cover the initial population of {mu}",
                        self.budget
                    ));
                }
            }
            (false, Some(_)) => {
                violations.push(format!(
                    "mu does not apply to algorithm {}; leave it unset",
                    self.algo
                ));
            }
            (false, None) => {}
        }

        if let ProblemSpec::UrrrmoSigmaZ { sigma, z } = &self.problem {
            if let SigmaSpec::Explicit(_) = sigma {
                if self.ns.len() > 1 {
                    violations.push(format!(
                        "an explicit permutation applies to exactly one problem size, \
                         but {} sizes are configured",
                        self.ns.len()
                    ));
                }
            }
            for &n in &self.ns {
                if n == 0 || n % divisor != 0 {
                    continue; // already reported above
                }
                if let Err(e) = sigma.build(n) {
                    violations.push(format!("for problem size {n}: {e}"));
                }
            }
            if let ZSpec::Literal(bits) = z {
                for &n in &self.ns {
                    if bits.len() != n {
                        violations.push(format!(
                            "offset literal has {} bits but problem size {n} needs {n}",
                            bits.len()
                        ));
                    }
                }
            }
        }

        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidConfig(violations))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::spec::{BlackboxPreset, RadiusSpec};
    use super::*;
    use crate::bitstring::BitString;

    fn base() -> ExperimentConfig {
        ExperimentConfig::new(
            ProblemSpec::Rrrmo,
            AlgoSpec::Gsemo,
            MutationSpec::Std,
            Crossover::OnePoint,
            0.5,
            vec![10, 20],
            10_000,
            3,
            42,
        )
    }

    fn violations(config: &ExperimentConfig) -> Vec<String> {
        match config.validate() {
            Ok(()) => panic!("expected a validation error"),
            Err(Error::InvalidConfig(v)) => v,
            Err(other) => panic!("expected InvalidConfig, got {other}"),
        }
    }

    #[test]
    fn a_sound_configuration_passes() {
        base().validate().unwrap();

        let mut nsga = base();
        nsga.algo = AlgoSpec::Nsgaii;
        nsga.mu = Some(20);
        nsga.validate().unwrap();

        let mut bb = base();
        bb.algo = AlgoSpec::Blackbox(BlackboxPreset::UniformParents);
        bb.mu = Some(8);
        bb.validate().unwrap();

        let mut instance = base();
        instance.problem = ProblemSpec::UrrrmoSigmaZ {
            sigma: SigmaSpec::HypermutHard,
            z: ZSpec::Random,
        };
        instance.ns = vec![16, 32];
        instance.validate().unwrap();
    }

    #[test]
    fn every_violation_is_reported_at_once() {
        let mut config = base();
        config.pc = 1.5; // out of range
        config.crossover = Crossover::OnePoint;
        config.trials = 0; // no repetitions
        config.ns = vec![10, 12, 10]; // 12 not divisible, 10 duplicated
        config.mu = Some(8); // mu with the single-archive loop
        config.budget = 0; // empty budget
        let list = violations(&config);
        assert_eq!(list.len(), 6, "{list:?}");
        let all = list.join("\n");
        assert!(all.contains("outside [0, 1]"), "{all}");
        assert!(all.contains("trials"), "{all}");
        assert!(all.contains("budget must be positive"), "{all}");
        assert!(all.contains("size 12"), "{all}");
        assert!(all.contains("more than once"), "{all}");
        assert!(all.contains("mu does not apply"), "{all}");
        // The error formats as one violation per line.
        let err = config.validate().unwrap_err();
        assert!(err.to_string().contains("invalid configuration:\n"));
    }

    #[test]
    fn population_algorithms_demand_a_sound_mu() {
        let mut config = base();
        config.algo = AlgoSpec::Nsgaii;
        let list = violations(&config);
        assert!(list.iter().any(|v| v.contains("requires mu")), "{list:?}");

        config.mu = Some(7);
        let list = violations(&config);
        assert!(list.iter().any(|v| v.contains("even number")), "{list:?}");

        config.mu = Some(20_000);
        let list = violations(&config);
        assert!(
            list.iter().any(|v| v.contains("cannot cover")),
            "{list:?}"
        );
    }

    #[test]
    fn crossover_probability_needs_an_operator() {
        let mut config = base();
        config.crossover = Crossover::None;
        let list = violations(&config);
        assert!(list.iter().any(|v| v.contains("\"none\"")), "{list:?}");

        config.pc = 0.0;
        config.validate().unwrap(); // pc = 0 with no operator is fine
    }

    #[test]
    fn operator_constraints_are_checked_per_size() {
        let mut config = base();
        config.mutation = MutationSpec::Unbiased(RadiusSpec::Point(15));
        let list = violations(&config);
        // Radius 15 exceeds n = 10 but fits n = 20.
        assert_eq!(list.len(), 1, "{list:?}");
        assert!(list[0].contains("for problem size 10"), "{list:?}");

        let mut config = base();
        config.mutation = MutationSpec::Hyper(0.0);
        let list = violations(&config);
        assert!(list.iter().any(|v| v.contains("(0, 1]")), "{list:?}");
    }

    #[test]
    fn instance_selectors_must_fit_the_size_grid() {
        let mut config = base();
        config.problem = ProblemSpec::UrrrmoSigmaZ {
            sigma: SigmaSpec::Explicit((1..=16).rev().collect()),
            z: ZSpec::Literal(BitString::zeros(16)),
        };
        config.ns = vec![16, 32];
        let list = violations(&config);
        assert!(
            list.iter().any(|v| v.contains("exactly one problem size")),
            "{list:?}"
        );
        assert!(
            list.iter().any(|v| v.contains("lists 16 positions")),
            "{list:?}"
        );
        assert!(
            list.iter()
                .any(|v| v.contains("offset literal has 16 bits")),
            "{list:?}"
        );

        config.ns = vec![16];
        config.validate().unwrap();
    }
}
