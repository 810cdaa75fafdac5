//! Dominance layering, crowding distance, tournament selection, and the
//! stable survival order they induce.

use crate::objectives::{strictly_dominates, Fitness};
use rand::Rng;

/// Per-individual selection key: dominance layer index (lower is better)
/// and crowding distance (higher is better).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankKey {
    pub layer: usize,
    pub crowding: f64,
}

/// A population partitioned into dominance layers with crowding distances.
#[derive(Clone, Debug)]
pub struct Layering {
    /// Indices per layer: layer 0 holds the non-dominated individuals,
    /// layer i those non-dominated once earlier layers are removed.
    pub layers: Vec<Vec<usize>>,
    /// Layer index of each individual.
    pub layer_of: Vec<usize>,
    /// Crowding distance of each individual within its layer.
    pub cdist: Vec<f64>,
}

impl Layering {
    pub fn keys(&self) -> Vec<RankKey> {
        self.layer_of
            .iter()
            .zip(&self.cdist)
            .map(|(&layer, &crowding)| RankKey { layer, crowding })
            .collect()
    }
}

/// Peels a population into dominance layers.
///
/// Uses the bi-objective sweep: after sorting by (f1 desc, f2 desc), a point
/// can only be dominated by earlier points, and within a layer the member
/// with the highest f2 is the one added last. Scanning layer tops therefore
/// reproduces exactly the peeling order of repeated non-dominated removal,
/// in O(N log N + N * layers) instead of O(N^2).
pub fn nondominated_sort(fitnesses: &[Fitness]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..fitnesses.len()).collect();
    order.sort_by(|&a, &b| {
        let (fa, fb) = (fitnesses[a], fitnesses[b]);
        fb.0.cmp(&fa.0).then(fb.1.cmp(&fa.1)).then(a.cmp(&b))
    });
    let mut layers: Vec<Vec<usize>> = Vec::new();
    let mut tops: Vec<Fitness> = Vec::new();
    for i in order {
        let f = fitnesses[i];
        match tops.iter().position(|&top| !strictly_dominates(top, f)) {
            Some(l) => {
                layers[l].push(i);
                tops[l] = f;
            }
            None => {
                layers.push(vec![i]);
                tops.push(f);
            }
        }
    }
    layers
}

/// Crowding distances for the members of one layer, in input order.
///
/// Per objective the members are sorted descending (stable, so input order
/// breaks ties); the first and last get +inf and each middle member
/// accumulates its neighbor gap normalized by the objective's extent. A
/// zero extent contributes nothing to the middles.
pub fn crowding_distance(layer: &[Fitness]) -> Vec<f64> {
    let m = layer.len();
    let mut dist = vec![0.0f64; m];
    if m == 0 {
        return dist;
    }
    for objective in 0..2 {
        let value = |i: usize| -> u64 {
            if objective == 0 {
                layer[i].0
            } else {
                layer[i].1
            }
        };
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by_key(|&i| std::cmp::Reverse(value(i)));
        dist[idx[0]] = f64::INFINITY;
        dist[idx[m - 1]] = f64::INFINITY;
        let extent = value(idx[0]) - value(idx[m - 1]);
        if extent > 0 {
            for w in 1..m - 1 {
                let gap = (value(idx[w - 1]) - value(idx[w + 1])) as f64;
                dist[idx[w]] += gap / extent as f64;
            }
        }
    }
    dist
}

/// Layers a population and computes crowding distances per layer.
pub fn rank_population(fitnesses: &[Fitness]) -> Layering {
    let layers = nondominated_sort(fitnesses);
    let mut layer_of = vec![0usize; fitnesses.len()];
    let mut cdist = vec![0.0f64; fitnesses.len()];
    for (l, members) in layers.iter().enumerate() {
        let layer_fitnesses: Vec<Fitness> = members.iter().map(|&i| fitnesses[i]).collect();
        let d = crowding_distance(&layer_fitnesses);
        for (&i, &di) in members.iter().zip(&d) {
            layer_of[i] = l;
            cdist[i] = di;
        }
    }
    Layering {
        layers,
        layer_of,
        cdist,
    }
}

/// True when `a` is selected over `b`: lower layer first, then higher
/// crowding distance.
fn beats(a: RankKey, b: RankKey) -> bool {
    a.layer < b.layer || (a.layer == b.layer && a.crowding > b.crowding)
}

/// Binary tournament: two competitors drawn uniformly with replacement,
/// decided by layer then crowding; an exact tie falls to a fair coin.
/// Returns the winner's index.
pub fn binary_tournament(keys: &[RankKey], rng: &mut impl Rng) -> usize {
    let a = rng.random_range(0..keys.len());
    let b = rng.random_range(0..keys.len());
    if beats(keys[a], keys[b]) {
        a
    } else if beats(keys[b], keys[a]) {
        b
    } else if rng.random_bool(0.5) {
        a
    } else {
        b
    }
}

/// Indices 0..len sorted by (layer asc, crowding desc), stable, so earlier
/// insertion wins exact ties. Survival keeps a prefix of this order.
pub fn survival_order(keys: &[RankKey]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| {
        keys[a]
            .layer
            .cmp(&keys[b].layer)
            .then(keys[b].crowding.total_cmp(&keys[a].crowding))
    });
    order
}
