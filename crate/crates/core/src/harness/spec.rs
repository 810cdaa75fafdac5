//! Parseable selectors for problems, algorithms, and operators.
//!
//! Every selector has a canonical string form, shared by the command line,
//! key-value config files, and CSV records. `Display` renders that form and
//! `FromStr` parses it back; the pair round-trips exactly.

use std::fmt;
use std::str::FromStr;

use crate::bitstring::{BitString, Permutation};
use crate::error::{Error, Result};
use crate::objectives::hypermutation_hard_sigma;
use crate::operators::{Crossover, Mutation, RadiusDistribution};

/// Which benchmark a run optimises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemSpec {
    /// One-point family: a single contiguous block of ones is rewarded.
    Rrrmo,
    /// Uniform family on the canonical instance (identity permutation,
    /// all-zero offset).
    Urrrmo,
    /// Uniform family on a permuted and xor-shifted instance.
    UrrrmoSigmaZ { sigma: SigmaSpec, z: ZSpec },
}

impl ProblemSpec {
    /// Assembles a problem from its selector string plus the separate
    /// permutation and offset selectors, rejecting inconsistent
    /// combinations. This is the entry point for command-line parsing,
    /// where the three values arrive as independent flags.
    pub fn from_parts(
        selector: &str,
        sigma: Option<SigmaSpec>,
        z: Option<ZSpec>,
    ) -> Result<ProblemSpec> {
        match selector {
            "rrrmo" | "urrrmo" => {
                if sigma.is_some() || z.is_some() {
                    return Err(Error::Parse(format!(
                        "sigma and z only apply to problem \"urrrmo-sigma-z\", not {selector:?}"
                    )));
                }
                Ok(if selector == "rrrmo" {
                    ProblemSpec::Rrrmo
                } else {
                    ProblemSpec::Urrrmo
                })
            }
            "urrrmo-sigma-z" => {
                let sigma = sigma.ok_or_else(|| {
                    Error::Parse("problem \"urrrmo-sigma-z\" requires a sigma selector".into())
                })?;
                let z = z.ok_or_else(|| {
                    Error::Parse("problem \"urrrmo-sigma-z\" requires a z selector".into())
                })?;
                Ok(ProblemSpec::UrrrmoSigmaZ { sigma, z })
            }
            other => Err(Error::Parse(format!(
                "unknown problem {other:?} (expected rrrmo, urrrmo, or urrrmo-sigma-z)"
            ))),
        }
    }

    /// The selector string recorded in CSV output.
    pub fn selector(&self) -> &'static str {
        match self {
            ProblemSpec::Rrrmo => "rrrmo",
            ProblemSpec::Urrrmo => "urrrmo",
            ProblemSpec::UrrrmoSigmaZ { .. } => "urrrmo-sigma-z",
        }
    }

    /// Divisibility constraint on problem sizes.
    pub fn divisor(&self) -> usize {
        match self {
            ProblemSpec::Rrrmo => 5,
            ProblemSpec::Urrrmo | ProblemSpec::UrrrmoSigmaZ { .. } => 16,
        }
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.selector())
    }
}

/// Permutation selector for instance problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaSpec {
    Identity,
    /// The block-interleaving permutation on which window mutation fails.
    HypermutHard,
    /// Explicit 1-based target list, e.g. "3,1,2" maps input bit 3 to
    /// output position 1.
    Explicit(Vec<usize>),
}

impl SigmaSpec {
    /// Concrete permutation for problem size `n`.
    pub fn build(&self, n: usize) -> Result<Permutation> {
        match self {
            SigmaSpec::Identity => Ok(Permutation::identity(n)),
            SigmaSpec::HypermutHard => hypermutation_hard_sigma(n),
            SigmaSpec::Explicit(targets) => {
                if targets.len() != n {
                    return Err(Error::BadParameter(format!(
                        "permutation lists {} positions but the problem size is {n}",
                        targets.len()
                    )));
                }
                Permutation::from_one_based(targets.clone())
            }
        }
    }
}

impl fmt::Display for SigmaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaSpec::Identity => f.write_str("identity"),
            SigmaSpec::HypermutHard => f.write_str("hypermut-hard"),
            SigmaSpec::Explicit(targets) => {
                let rendered: Vec<String> = targets.iter().map(|t| t.to_string()).collect();
                f.write_str(&rendered.join(","))
            }
        }
    }
}

impl FromStr for SigmaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(SigmaSpec::Identity),
            "hypermut-hard" => Ok(SigmaSpec::HypermutHard),
            other => {
                let targets: Vec<usize> = other
                    .split(',')
                    .map(|t| {
                        t.trim().parse::<usize>().map_err(|_| {
                            Error::Parse(format!(
                                "permutation entry {t:?} is not a positive integer \
                                 (expected identity, hypermut-hard, or a comma-separated \
                                 1-based mapping)"
                            ))
                        })
                    })
                    .collect::<Result<_>>()?;
                // Reject non-bijections at parse time; the length check
                // against n happens at build time.
                Permutation::from_one_based(targets.clone())?;
                Ok(SigmaSpec::Explicit(targets))
            }
        }
    }
}

/// Xor-offset selector for instance problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZSpec {
    /// Drawn once per problem size from the experiment's base seed, so all
    /// trials of a grid cell attack the same instance.
    Random,
    Literal(BitString),
}

impl fmt::Display for ZSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZSpec::Random => f.write_str("random"),
            ZSpec::Literal(bits) => write!(f, "{bits}"),
        }
    }
}

impl FromStr for ZSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "random" {
            return Ok(ZSpec::Random);
        }
        Ok(ZSpec::Literal(BitString::from_literal(s)?))
    }
}

/// Named radius presets for the radius-first mutation operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadiusSpec {
    /// All mass on one radius k.
    Point(usize),
    /// Uniform over 0..=n.
    Uniform,
    /// Binomial(n, 1/n): the radius law of standard bit mutation.
    BinomialOneOverN,
}

impl RadiusSpec {
    pub fn build(&self) -> RadiusDistribution {
        match self {
            RadiusSpec::Point(k) => RadiusDistribution::Point(*k),
            RadiusSpec::Uniform => RadiusDistribution::Uniform,
            RadiusSpec::BinomialOneOverN => RadiusDistribution::BinomialOneOverN,
        }
    }
}

impl fmt::Display for RadiusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiusSpec::Point(k) => write!(f, "point:{k}"),
            RadiusSpec::Uniform => f.write_str("uniform"),
            RadiusSpec::BinomialOneOverN => f.write_str("binomial-1-over-n"),
        }
    }
}

impl FromStr for RadiusSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(RadiusSpec::Uniform),
            "binomial-1-over-n" => Ok(RadiusSpec::BinomialOneOverN),
            other => {
                if let Some(rest) = other.strip_prefix("point:") {
                    let k = rest.trim().parse::<usize>().map_err(|_| {
                        Error::Parse(format!("radius {rest:?} is not a non-negative integer"))
                    })?;
                    return Ok(RadiusSpec::Point(k));
                }
                Err(Error::Parse(format!(
                    "unknown radius preset {other:?} (expected point:<k>, uniform, \
                     or binomial-1-over-n)"
                )))
            }
        }
    }
}

/// Mutation operator selector.
#[derive(Clone, Debug, PartialEq)]
pub enum MutationSpec {
    /// Independent per-bit flips with probability 1/n.
    Std,
    /// Radius drawn from a preset distribution, then a uniform point on
    /// that Hamming sphere.
    Unbiased(RadiusSpec),
    /// Contiguous circular window with per-bit flip probability r.
    Hyper(f64),
}

impl MutationSpec {
    pub fn build(&self) -> Result<Mutation> {
        match self {
            MutationSpec::Std => Ok(Mutation::StandardBit),
            MutationSpec::Unbiased(radius) => Ok(Mutation::UnaryUnbiased(radius.build())),
            MutationSpec::Hyper(r) => Mutation::hypermutation(*r),
        }
    }
}

impl fmt::Display for MutationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MutationSpec::Std => f.write_str("std"),
            MutationSpec::Unbiased(radius) => write!(f, "unbiased:{radius}"),
            MutationSpec::Hyper(r) => write!(f, "hyper:{r}"),
        }
    }
}

impl FromStr for MutationSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "std" {
            return Ok(MutationSpec::Std);
        }
        if let Some(rest) = s.strip_prefix("unbiased:") {
            return Ok(MutationSpec::Unbiased(rest.parse()?));
        }
        if let Some(rest) = s.strip_prefix("hyper:") {
            let r = rest.trim().parse::<f64>().map_err(|_| {
                Error::Parse(format!("window flip rate {rest:?} is not a number"))
            })?;
            // Range-check now so a bad rate fails at parse time, not at the
            // first trial.
            Mutation::hypermutation(r)?;
            return Ok(MutationSpec::Hyper(r));
        }
        Err(Error::Parse(format!(
            "unknown mutation {s:?} (expected std, unbiased:<radius>, or hyper:<r>)"
        )))
    }
}

impl fmt::Display for Crossover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Crossover::None => "none",
            Crossover::OnePoint => "onepoint",
            Crossover::Uniform => "uniform",
        })
    }
}

impl FromStr for Crossover {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Crossover::None),
            "onepoint" => Ok(Crossover::OnePoint),
            "uniform" => Ok(Crossover::Uniform),
            other => Err(Error::Parse(format!(
                "unknown crossover {other:?} (expected none, onepoint, or uniform)"
            ))),
        }
    }
}

/// Optimiser selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgoSpec {
    /// Single-archive loop: one offspring per step, dominated points swept
    /// out on insertion.
    Gsemo,
    /// Generational loop with dominance-layer sorting, crowding distance,
    /// and binary tournaments.
    Nsgaii,
    /// Generic elitist (mu + lambda) driver with a preset sampler/ranking
    /// pair; lambda = mu.
    Blackbox(BlackboxPreset),
}

impl AlgoSpec {
    /// Population-based algorithms require mu; the single-archive loop has
    /// no such parameter.
    pub fn needs_mu(&self) -> bool {
        !matches!(self, AlgoSpec::Gsemo)
    }
}

/// Sampler/ranking presets for the elitist (mu + lambda) driver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlackboxPreset {
    /// Binary tournaments on carried rank keys: replays the generational
    /// algorithm exactly.
    Nsgaii,
    /// Parent pairs drawn uniformly with replacement; same ranking.
    UniformParents,
}

impl fmt::Display for AlgoSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgoSpec::Gsemo => f.write_str("gsemo"),
            AlgoSpec::Nsgaii => f.write_str("nsgaii"),
            AlgoSpec::Blackbox(BlackboxPreset::Nsgaii) => f.write_str("blackbox:nsgaii"),
            AlgoSpec::Blackbox(BlackboxPreset::UniformParents) => {
                f.write_str("blackbox:uniform-parents")
            }
        }
    }
}

impl FromStr for AlgoSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gsemo" => Ok(AlgoSpec::Gsemo),
            "nsgaii" => Ok(AlgoSpec::Nsgaii),
            "blackbox:nsgaii" => Ok(AlgoSpec::Blackbox(BlackboxPreset::Nsgaii)),
            "blackbox:uniform-parents" => Ok(AlgoSpec::Blackbox(BlackboxPreset::UniformParents)),
            other => Err(Error::Parse(format!(
                "unknown algorithm {other:?} (expected gsemo, nsgaii, blackbox:nsgaii, \
                 or blackbox:uniform-parents)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selector_strings_round_trip() {
        let sigmas = [
            SigmaSpec::Identity,
            SigmaSpec::HypermutHard,
            SigmaSpec::Explicit(vec![3, 1, 2]),
        ];
        for s in &sigmas {
            assert_eq!(&s.to_string().parse::<SigmaSpec>().unwrap(), s);
        }
        assert_eq!(SigmaSpec::Explicit(vec![3, 1, 2]).to_string(), "3,1,2");

        let zs = [
            ZSpec::Random,
            ZSpec::Literal(BitString::from_literal("0110").unwrap()),
        ];
        for z in &zs {
            assert_eq!(&z.to_string().parse::<ZSpec>().unwrap(), z);
        }

        let mutations = [
            MutationSpec::Std,
            MutationSpec::Unbiased(RadiusSpec::Point(8)),
            MutationSpec::Unbiased(RadiusSpec::Uniform),
            MutationSpec::Unbiased(RadiusSpec::BinomialOneOverN),
            MutationSpec::Hyper(0.5),
            MutationSpec::Hyper(1.0),
        ];
        for m in &mutations {
            assert_eq!(&m.to_string().parse::<MutationSpec>().unwrap(), m);
        }
        assert_eq!(MutationSpec::Hyper(1.0).to_string(), "hyper:1");
        assert_eq!(
            MutationSpec::Unbiased(RadiusSpec::Point(8)).to_string(),
            "unbiased:point:8"
        );

        for c in [Crossover::None, Crossover::OnePoint, Crossover::Uniform] {
            assert_eq!(c.to_string().parse::<Crossover>().unwrap(), c);
        }

        let algos = [
            AlgoSpec::Gsemo,
            AlgoSpec::Nsgaii,
            AlgoSpec::Blackbox(BlackboxPreset::Nsgaii),
            AlgoSpec::Blackbox(BlackboxPreset::UniformParents),
        ];
        for a in &algos {
            assert_eq!(&a.to_string().parse::<AlgoSpec>().unwrap(), a);
        }
    }

    #[test]
    fn problems_assemble_from_parts() {
        assert_eq!(
            ProblemSpec::from_parts("rrrmo", None, None).unwrap(),
            ProblemSpec::Rrrmo
        );
        assert_eq!(
            ProblemSpec::from_parts("urrrmo", None, None).unwrap(),
            ProblemSpec::Urrrmo
        );
        let full = ProblemSpec::from_parts(
            "urrrmo-sigma-z",
            Some(SigmaSpec::HypermutHard),
            Some(ZSpec::Random),
        )
        .unwrap();
        assert_eq!(full.selector(), "urrrmo-sigma-z");
        assert_eq!(full.to_string(), "urrrmo-sigma-z");
        assert_eq!(full.divisor(), 16);
        assert_eq!(ProblemSpec::Rrrmo.divisor(), 5);

        // Missing or stray selectors are rejected with a pointed message.
        assert!(ProblemSpec::from_parts("urrrmo-sigma-z", None, Some(ZSpec::Random)).is_err());
        assert!(
            ProblemSpec::from_parts("urrrmo-sigma-z", Some(SigmaSpec::Identity), None).is_err()
        );
        assert!(
            ProblemSpec::from_parts("rrrmo", Some(SigmaSpec::Identity), None).is_err()
        );
        assert!(ProblemSpec::from_parts("urrrmo", None, Some(ZSpec::Random)).is_err());
        assert!(ProblemSpec::from_parts("lotz", None, None).is_err());
    }

    #[test]
    fn malformed_selectors_are_rejected() {
        assert!("1,1,2".parse::<SigmaSpec>().is_err());
        assert!("0,1,2".parse::<SigmaSpec>().is_err());
        assert!("a,b".parse::<SigmaSpec>().is_err());
        assert!("01x".parse::<ZSpec>().is_err());
        assert!("hyper:0".parse::<MutationSpec>().is_err());
        assert!("hyper:1.5".parse::<MutationSpec>().is_err());
        assert!("hyper:fast".parse::<MutationSpec>().is_err());
        assert!("unbiased:point:-1".parse::<MutationSpec>().is_err());
        assert!("unbiased:gaussian".parse::<MutationSpec>().is_err());
        assert!("flip".parse::<MutationSpec>().is_err());
        assert!("twopoint".parse::<Crossover>().is_err());
        assert!("blackbox".parse::<AlgoSpec>().is_err());
        assert!("blackbox:tournament".parse::<AlgoSpec>().is_err());
    }

    #[test]
    fn sigma_builds_concrete_permutations() {
        assert!(SigmaSpec::Identity.build(16).unwrap().is_identity());
        let hard = SigmaSpec::HypermutHard.build(16).unwrap();
        assert_eq!(hard.len(), 16);
        assert!(!hard.is_identity());
        // Explicit permutations must match the problem size exactly.
        let spec = SigmaSpec::Explicit(vec![2, 1]);
        assert_eq!(spec.build(2).unwrap().one_based(), vec![2, 1]);
        assert!(spec.build(4).is_err());
        // The hard permutation needs the divisibility the problem demands.
        assert!(SigmaSpec::HypermutHard.build(10).is_err());
    }
}
