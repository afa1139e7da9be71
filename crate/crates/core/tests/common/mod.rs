#![allow(dead_code)]

use flagcert::density::{step_graphon_of, StepGraphon};
use flagcert::graph::{HostGraph, LabeledGraph};
use flagcert::rational::{ratio, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random edges on `n` vertices, the first `k` labeled.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, k: usize) -> LabeledGraph {
    let mut g = LabeledGraph::empty(n, k).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(0.5) {
                g = g.with_edge(u, v, true);
            }
        }
    }
    g
}

/// `g` with its labeled part replaced by `sigma`'s edges.
pub fn with_type(g: LabeledGraph, sigma: &LabeledGraph) -> LabeledGraph {
    let k = sigma.n();
    let mut g = g;
    for u in 0..k {
        for v in u + 1..k {
            g = g.with_edge(u, v, sigma.has_edge(u, v));
        }
    }
    g
}

pub fn random_host(rng: &mut ChaCha8Rng, n: usize) -> HostGraph {
    let mut g = HostGraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            g.set_edge(u, v, rng.random_bool(0.5));
        }
    }
    g
}

/// `w_G` for a random graph on `1..=max_n` vertices.
pub fn random_graph_graphon(rng: &mut ChaCha8Rng, max_n: usize) -> StepGraphon {
    let n = rng.random_range(1..=max_n);
    step_graphon_of(&random_host(rng, n))
}

/// A step graphon with up to `max_parts` parts, random rational weights and
/// values in `[0, 1]`.
pub fn random_step_graphon(rng: &mut ChaCha8Rng, max_parts: usize) -> StepGraphon {
    let p = rng.random_range(1..=max_parts);
    let raw: Vec<i64> = (0..p).map(|_| rng.random_range(1..=5)).collect();
    let total: i64 = raw.iter().sum();
    let weights = raw.iter().map(|&r| ratio(r, total)).collect();
    let mut values = vec![vec![ratio(0, 1); p]; p];
    for i in 0..p {
        for j in i..p {
            let v = ratio(rng.random_range(0..=6), 6);
            values[i][j] = v.clone();
            values[j][i] = v;
        }
    }
    StepGraphon::new(weights, values).unwrap()
}

pub fn random_rational(rng: &mut ChaCha8Rng, span: i64) -> Rational {
    ratio(rng.random_range(-span..=span), rng.random_range(1..=6))
}
