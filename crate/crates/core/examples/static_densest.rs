//! Compare the static densest-subgraph solvers on a random graph with a
//! planted dense block.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempograph::incremental::find_densest;
use tempograph::prelude::*;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut pairs = Vec::new();
    for u in 0..60u32 {
        for v in u + 1..60 {
            let p = if u < 12 && v < 12 { 0.7 } else { 0.05 };
            if rng.gen_bool(p) {
                pairs.push((u, v));
            }
        }
    }
    let h = StaticGraph::from_pairs(pairs);

    let exact = exact_densest(&h);
    let peel = charikar_peel(&h);
    let fd = find_densest(&h, 1.0, 0.1, None);
    println!("nodes {}, edges {}", h.node_count(), h.edge_count());
    println!("exact     density {:.4} on {} nodes", exact.density, exact.nodes.len());
    println!("peeling   density {:.4} on {} nodes", peel.density, peel.nodes.len());
    println!(
        "threshold density {:.4} on {} nodes (β = {:.3})",
        fd.result.density,
        fd.result.nodes.len(),
        fd.beta
    );
}
