//! Maintain an approximate densest subgraph while edges arrive one by one.
//!
//! The stream is a sparse random background into which a clique is slowly
//! inserted. The reported best never decreases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempograph::prelude::*;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut edges = Vec::new();
    for _ in 0..400 {
        let u = rng.gen_range(0..200u32);
        let v = rng.gen_range(0..200u32);
        if u != v {
            edges.push((u, v));
        }
    }
    let clique: Vec<(u32, u32)> = (200..215u32)
        .flat_map(|u| (u + 1..215).map(move |v| (u, v)))
        .collect();
    for (i, e) in clique.into_iter().enumerate() {
        edges.insert(40 + 3 * i, e);
    }

    let eps = 0.1;
    let mut inc = IncrementalDensest::new(eps, None);
    for (i, &(u, v)) in edges.iter().enumerate() {
        inc.insert(u, v);
        if (i + 1) % 100 == 0 {
            let best = inc.best();
            println!(
                "after {:>4} edges: best density {:.3} on {:>3} nodes, {} rebuilds",
                i + 1,
                best.density,
                best.nodes.len(),
                inc.rebuilds()
            );
        }
    }

    let h = inc.static_graph();
    let exact = exact_densest(&h);
    println!(
        "\nexact density {:.3}; maintained {:.3} (guarantee: within 2(1+ε) = {:.1}x)",
        exact.density,
        inc.best().density,
        2.0 * (1.0 + eps)
    );

    // same thing through the convenience wrapper
    let trace = update_stream(edges.iter().copied(), eps, None);
    assert!(trace.windows(2).all(|w| w[0].score <= w[1].score));
}
