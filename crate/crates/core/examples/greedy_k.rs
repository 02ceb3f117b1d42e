//! Pick several dense subgraphs from one static graph, trading density for
//! node coverage with `λ`.

use tempograph::prelude::*;

fn main() -> tempograph::Result<()> {
    // a 6-clique, a 5-clique and a 5-cycle
    let mut pairs = Vec::new();
    for block in [0u32..6, 10..15] {
        let nodes: Vec<u32> = block.collect();
        for (i, &u) in nodes.iter().enumerate() {
            for &v in &nodes[i + 1..] {
                pairs.push((u, v));
            }
        }
    }
    pairs.extend([(20, 21), (21, 22), (22, 23), (23, 24), (24, 20)]);
    let h = StaticGraph::from_pairs(pairs);

    for lambda in [0.0, 0.05, 0.5] {
        let picks = greedy_k_static(&h, 3, lambda, &CoverFn::Indicator, InnerSolver::StaticGreedy)?;
        println!("λ = {lambda}");
        for p in &picks {
            println!("  density {:.3}  nodes {:?}", p.density, p.nodes);
        }
    }
    Ok(())
}
