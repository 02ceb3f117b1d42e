//! Segment a small two-burst timeline with every solver and print the episodes.
//!
//! ```bash
//! cargo run -p tempograph --example segment_two_bursts
//! ```

use tempograph::prelude::*;

const EDGES: &str = "\
# u v t
1 2 1
2 3 1
1 3 2
4 5 7
5 6 7
4 6 8
4 7 8
5 7 8
6 7 8
";

fn show(g: &TemporalGraph, name: &str, seg: &Segmentation) {
    println!("{name}: total {:.3}", seg.total_profit);
    for e in &seg.episodes {
        let nodes: Vec<i64> = e.nodes.iter().map(|&v| g.label(v)).collect();
        println!(
            "  [{}, {}] density {:.3} nodes {nodes:?}",
            g.raw_time(e.interval.lo),
            g.raw_time(e.interval.hi),
            e.density
        );
    }
}

fn main() -> tempograph::Result<()> {
    let g = TemporalGraph::parse_edge_list(EDGES)?;
    println!("{} nodes, {} edges, {} timestamps\n", g.n(), g.m(), g.r());

    let k = 2;
    show(&g, "optimal", &exact_dp_segment(&g, k, DensestMode::Exact)?);
    show(&g, "kgoptdp", &exact_dp_segment(&g, k, DensestMode::Incremental(0.1))?);
    show(&g, "kgoptds", &approx_dp_segment(&g, k, 0.1, DensestMode::Exact)?);

    let apx = approx_dp_segment(&g, k, 0.1, DensestMode::Incremental(0.1))?;
    show(&g, "kgapprox", &apx);
    // swap each episode's subgraph for the exact densest one of its interval
    show(&g, "kgapprox + post-processing", &post_process(&g, &apx));
    Ok(())
}
