//! Randomised structural properties: bit-string algebra, operator laws,
//! dominance laws, selector and CSV round-trips.

use proptest::prelude::*;
use rand::SeedableRng;

use emo_core::bitstring::{apply_permutation, BitString, Permutation};
use emo_core::harness::{
    csv_bytes, read_csv, trial_seed, MutationSpec, RadiusSpec, SigmaSpec, TrialRecord,
};
use emo_core::objectives::{
    compare, rrrmo_eval, rrrmo_membership, strictly_dominates, urrrmo_eval,
    urrrmo_instance_eval, weakly_dominates, DominanceResult, Fitness,
};
use emo_core::operators::{one_point_crossover, uniform_crossover, Crossover, Mutation, RadiusDistribution};
use emo_core::RngStream;

fn bits(len: usize) -> impl Strategy<Value = BitString> {
    prop::collection::vec(any::<bool>(), len).prop_map(|v| BitString::from_bits(&v))
}

fn sized_bits(max: usize) -> impl Strategy<Value = BitString> {
    (1..=max).prop_flat_map(bits)
}

fn bit_pair(max: usize) -> impl Strategy<Value = (BitString, BitString)> {
    (1..=max).prop_flat_map(|n| (bits(n), bits(n)))
}

fn permutation(len: usize) -> impl Strategy<Value = Permutation> {
    Just((0..len).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|targets| Permutation::from_zero_based(targets).unwrap())
}

fn fitness() -> impl Strategy<Value = Fitness> {
    // Small ranges force plenty of ties and actual dominance.
    (0u64..6, 0u64..6)
}

proptest! {
    #[test]
    fn literal_rendering_round_trips(x in sized_bits(200)) {
        let rendered = x.to_string();
        prop_assert_eq!(BitString::from_literal(&rendered).unwrap(), x.clone());
        prop_assert_eq!(rendered.chars().filter(|c| *c == '1').count(), x.count_ones());
    }

    #[test]
    fn xor_and_hamming_obey_group_laws((x, y) in bit_pair(200)) {
        let zero = BitString::zeros(x.len());
        prop_assert_eq!(x.xor(&x).unwrap(), zero.clone());
        prop_assert_eq!(x.xor(&zero).unwrap(), x.clone());
        let d = x.xor(&y).unwrap();
        prop_assert_eq!(d.xor(&y).unwrap(), x.clone());
        prop_assert_eq!(x.hamming(&y).unwrap(), d.count_ones());
        prop_assert_eq!(x.hamming(&y).unwrap(), y.hamming(&x).unwrap());
    }

    #[test]
    fn count_statistics_match_a_naive_scan(x in sized_bits(200)) {
        let text = x.to_string();
        let stats = x.count_statistics();
        prop_assert_eq!(stats.ones, text.matches('1').count());
        prop_assert_eq!(stats.zeros, text.matches('0').count());
        prop_assert_eq!(stats.leading_ones, text.chars().take_while(|c| *c == '1').count());
        prop_assert_eq!(stats.leading_zeros, text.chars().take_while(|c| *c == '0').count());
        let reversed: String = text.chars().rev().collect();
        prop_assert_eq!(stats.trailing_ones, reversed.chars().take_while(|c| *c == '1').count());
        prop_assert_eq!(stats.trailing_zeros, reversed.chars().take_while(|c| *c == '0').count());
    }

    #[test]
    fn subranges_agree_with_per_bit_reads(
        (x, start, len) in sized_bits(200).prop_flat_map(|x| {
            let n = x.len();
            (Just(x), 0..=n, Just(0usize)).prop_flat_map(move |(x, start, _)| {
                let room = n - start;
                (Just(x), Just(start), 0..=room)
            })
        })
    ) {
        let slice = x.subrange(start, len);
        prop_assert_eq!(slice.len(), len);
        for i in 0..len {
            prop_assert_eq!(slice.bit(i), x.bit(start + i));
        }
        let ones = (0..len).filter(|&i| x.bit(start + i)).count();
        prop_assert_eq!(x.ones_in_range(start, len), ones);
    }

    #[test]
    fn permutations_are_reversible(
        (x, sigma) in (1usize..=100).prop_flat_map(|n| (bits(n), permutation(n)))
    ) {
        let shuffled = apply_permutation(&x, &sigma).unwrap();
        prop_assert_eq!(shuffled.count_ones(), x.count_ones());
        let back = apply_permutation(&shuffled, &sigma.inverse()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn crossover_children_complement_each_other(
        (x, y) in bit_pair(200),
        seed in any::<u64>(),
        uniform in any::<bool>(),
    ) {
        let mut rng = RngStream::seed_from_u64(seed);
        let (a, b) = if uniform {
            uniform_crossover(&x, &y, &mut rng).unwrap()
        } else {
            one_point_crossover(&x, &y, &mut rng).unwrap()
        };
        // Exchanged blocks: what one child takes from x the other takes
        // from y, so the childrens' disagreement equals the parents'.
        prop_assert_eq!(a.xor(&b).unwrap(), x.xor(&y).unwrap());
        for i in 0..x.len() {
            prop_assert!(a.bit(i) == x.bit(i) || a.bit(i) == y.bit(i));
        }
    }

    #[test]
    fn operators_replay_from_equal_seeds(
        (x, mutation) in (2usize..=128).prop_flat_map(|n| (
            bits(n),
            prop_oneof![
                Just(Mutation::StandardBit),
                (0..=n).prop_map(|k| Mutation::UnaryUnbiased(RadiusDistribution::Point(k))),
                Just(Mutation::UnaryUnbiased(RadiusDistribution::Uniform)),
                Just(Mutation::UnaryUnbiased(RadiusDistribution::BinomialOneOverN)),
                (1u32..=100).prop_map(|p| Mutation::hypermutation(f64::from(p) / 100.0).unwrap()),
            ],
        )),
        seed in any::<u64>(),
    ) {
        let mut first = RngStream::seed_from_u64(seed);
        let mut second = RngStream::seed_from_u64(seed);
        prop_assert_eq!(mutation.apply(&x, &mut first), mutation.apply(&x, &mut second));
    }

    #[test]
    fn point_radius_lands_on_the_exact_sphere(
        (x, k) in (1usize..=128).prop_flat_map(|n| (bits(n), 0..=n)),
        seed in any::<u64>(),
    ) {
        let mutation = Mutation::UnaryUnbiased(RadiusDistribution::Point(k));
        let mut rng = RngStream::seed_from_u64(seed);
        let y = mutation.apply(&x, &mut rng);
        prop_assert_eq!(x.hamming(&y).unwrap(), k);
    }

    #[test]
    fn full_rate_window_flips_are_cyclically_contiguous(
        x in sized_bits(128),
        seed in any::<u64>(),
    ) {
        let mut rng = RngStream::seed_from_u64(seed);
        let y = Mutation::hypermutation(1.0).unwrap().apply(&x, &mut rng);
        let diff = x.xor(&y).unwrap();
        let n = x.len();
        let flips = diff.count_ones();
        if flips > 0 && flips < n {
            // One cyclic run has exactly one falling edge.
            let falling = (0..n)
                .filter(|&i| diff.bit(i) && !diff.bit((i + 1) % n))
                .count();
            prop_assert_eq!(falling, 1);
        }
    }

    #[test]
    fn dominance_is_a_partial_order_on_vectors(a in fitness(), b in fitness()) {
        prop_assert!(weakly_dominates(a, a));
        prop_assert!(!strictly_dominates(a, a));
        if strictly_dominates(a, b) {
            prop_assert!(weakly_dominates(a, b));
            prop_assert!(!weakly_dominates(b, a));
            prop_assert_eq!(compare(a, b), DominanceResult::Dominates);
            prop_assert_eq!(compare(b, a), DominanceResult::DominatedBy);
        }
        if a == b {
            prop_assert_eq!(compare(a, b), DominanceResult::Equal);
        }
        if compare(a, b) == DominanceResult::Incomparable {
            prop_assert_eq!(compare(b, a), DominanceResult::Incomparable);
            prop_assert!(!weakly_dominates(a, b) && !weakly_dominates(b, a));
        }
    }

    #[test]
    fn zero_fitness_marks_exactly_the_dominated_outside(x in bits(20)) {
        let fitness = rrrmo_eval(&x, 20);
        let membership = rrrmo_membership(&x, 20);
        prop_assert_eq!(fitness == (0, 0), !membership.in_g);
        if membership.in_f {
            // Pareto points score the block bonus on both objectives.
            let base = 20 * (4 * 20 / 5) as u64;
            prop_assert!(fitness.0 >= base && fitness.1 >= base);
        }
    }

    #[test]
    fn instance_evaluation_matches_the_manual_pipeline(
        x in bits(16),
        sigma in permutation(16),
        z in bits(16),
    ) {
        let manual = urrrmo_eval(&apply_permutation(&x, &sigma).unwrap().xor(&z).unwrap(), 16);
        prop_assert_eq!(urrrmo_instance_eval(&x, &sigma, &z), manual);
    }

    #[test]
    fn selector_strings_round_trip(
        k in 0usize..=10_000,
        rate_percent in 1u32..=100,
        sigma in permutation(16),
    ) {
        let rate = f64::from(rate_percent) / 100.0;
        let mutations = [
            MutationSpec::Std,
            MutationSpec::Unbiased(RadiusSpec::Point(k)),
            MutationSpec::Unbiased(RadiusSpec::Uniform),
            MutationSpec::Unbiased(RadiusSpec::BinomialOneOverN),
            MutationSpec::Hyper(rate),
        ];
        for m in &mutations {
            prop_assert_eq!(&m.to_string().parse::<MutationSpec>().unwrap(), m);
        }
        let explicit = SigmaSpec::Explicit(sigma.one_based());
        prop_assert_eq!(&explicit.to_string().parse::<SigmaSpec>().unwrap(), &explicit);
        for c in [Crossover::None, Crossover::OnePoint, Crossover::Uniform] {
            prop_assert_eq!(c.to_string().parse::<Crossover>().unwrap(), c);
        }
    }

    #[test]
    fn csv_round_trips_arbitrary_records(records in prop::collection::vec(record(), 0..8)) {
        let bytes = csv_bytes(&records).unwrap();
        prop_assert_eq!(read_csv(bytes.as_slice()).unwrap(), records);
    }

    #[test]
    fn seed_mixing_never_collides(base in any::<u64>(), a in any::<u64>(), b in any::<u64>()) {
        if a != b {
            prop_assert_ne!(trial_seed(base, a), trial_seed(base, b));
        }
        prop_assert_eq!(trial_seed(base, a), trial_seed(base, a));
    }
}

/// Arbitrary records that satisfy the structural invariants (success means
/// coverage 1.0; a front hit never postdates the evaluations used).
fn record() -> impl Strategy<Value = TrialRecord> {
    let identity = (
        any::<u64>(),
        any::<u64>(),
        prop_oneof!["rrrmo", "urrrmo", "urrrmo-sigma-z"].prop_map(String::from),
        1usize..=1024,
        prop_oneof!["gsemo", "nsgaii", "blackbox:nsgaii", "blackbox:uniform-parents"]
            .prop_map(String::from),
        prop_oneof![
            Just("std".to_string()),
            (0usize..100).prop_map(|k| format!("unbiased:point:{k}")),
            Just("hyper:0.5".to_string()),
        ],
        prop_oneof!["none", "onepoint", "uniform"].prop_map(String::from),
        0.0f64..=1.0,
        prop::option::of(1usize..10_000),
        any::<u32>(),
    );
    let outcome = (
        any::<u32>(),
        any::<u32>(),
        any::<bool>(),
        0.0f64..1.0,
        prop::option::of(0.0f64..=1.0),
        prop::option::of(any::<u32>()),
    );
    (identity, outcome).prop_map(
        |(
            (trial_id, seed, problem, n, algo, mutation, crossover, pc, mu, budget),
            (evaluations, generations, success, partial, hit_fraction, wall),
        )| {
            let evaluations_used = u64::from(evaluations) + 1;
            TrialRecord {
                trial_id,
                seed,
                problem,
                n,
                algo,
                mutation,
                crossover,
                pc,
                mu,
                budget: u64::from(budget),
                evaluations_used,
                generations: u64::from(generations),
                first_pareto_hit_evals: hit_fraction
                    .map(|f| (f * evaluations_used as f64) as u64),
                coverage_fraction: if success { 1.0 } else { partial },
                success,
                wall_time_ms: wall.map(u64::from),
            }
        },
    )
}
