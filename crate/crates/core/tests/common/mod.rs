//! Random instance generators and independent bitmask oracles shared by the
//! integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempograph::temporal_graph::{NodeId, StaticGraph, TemporalGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi pairs on `0..n` with at least one edge.
pub fn random_pairs(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.gen::<f64>() < p {
                out.push((u, v));
            }
        }
    }
    if out.is_empty() {
        let u = rng.gen_range(0..n as NodeId - 1);
        out.push((u, rng.gen_range(u + 1..n as NodeId)));
    }
    out
}

pub fn random_static(rng: &mut ChaCha8Rng, n_max: usize) -> StaticGraph {
    let n = rng.gen_range(2..=n_max);
    let p = rng.gen_range(0.15..0.9);
    StaticGraph::from_pairs(random_pairs(rng, n, p))
}

/// Temporal graph on at most `n_max` nodes and exactly `r` timestamps, each
/// timestamp carrying 1–4 random edges.
pub fn random_temporal(rng: &mut ChaCha8Rng, n_max: usize, r: usize) -> TemporalGraph {
    let n = rng.gen_range(3..=n_max) as i64;
    let mut triples = Vec::new();
    for t in 1..=r as i64 {
        for _ in 0..rng.gen_range(1..=4) {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            triples.push((triples.len() + 1, u, v, t * 10));
        }
    }
    TemporalGraph::from_labeled(triples).expect("valid random graph")
}

/// Timeline of `r` timestamps, each a random graph on 3–6 nodes drawn from a
/// pool of `pool` labels with a random edge probability.
pub fn toy_timeline(rng: &mut ChaCha8Rng, r: usize, pool: i64) -> TemporalGraph {
    let labels: Vec<i64> = (0..pool).collect();
    let mut triples = Vec::new();
    for t in 1..=r as i64 {
        let size = rng.gen_range(3..=6);
        let nodes: Vec<i64> = labels.choose_multiple(rng, size).copied().collect();
        let p = rng.gen_range(0.2..=1.0);
        for (a, b) in random_pairs(rng, size, p) {
            triples.push((triples.len() + 1, nodes[a as usize], nodes[b as usize], t));
        }
    }
    TemporalGraph::from_labeled(triples).expect("valid toy graph")
}

/// Bitmask adjacency over local indices `0..n`.
pub fn masks(n: usize, pairs: &[(usize, usize)]) -> Vec<u32> {
    let mut adj = vec![0u32; n];
    for &(u, v) in pairs {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

pub fn edges_in(adj: &[u32], mask: u32) -> u32 {
    let mut twice = 0;
    for (v, a) in adj.iter().enumerate() {
        if mask & (1 << v) != 0 {
            twice += (a & mask).count_ones();
        }
    }
    twice / 2
}

/// `max_S |E(S)|/|S| + λ Σ_{v∈S} δ_v` by enumeration.
pub fn oracle_generalized(adj: &[u32], delta: &[f64], lambda: f64) -> f64 {
    let n = adj.len();
    let mut best = 0.0f64;
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as f64;
        let gain: f64 = (0..n)
            .filter(|&v| mask & (1 << v) != 0)
            .map(|v| delta[v])
            .sum();
        best = best.max(edges_in(adj, mask) as f64 / size + lambda * gain);
    }
    best
}

pub fn oracle_density(adj: &[u32]) -> f64 {
    let n = adj.len();
    (1u32..(1 << n))
        .map(|m| edges_in(adj, m) as f64 / m.count_ones() as f64)
        .fold(0.0, f64::max)
}

/// Local-index view of a static graph.
pub fn local_masks(h: &StaticGraph) -> Vec<u32> {
    let pairs: Vec<(usize, usize)> = h.local_edges().to_vec();
    masks(h.node_count(), &pairs)
}

pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
