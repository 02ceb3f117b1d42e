//! Coverage-aware segmentation: raising `λ` spreads the episodes over more
//! distinct nodes at some cost in density.

use tempograph::coverage::SketchParams;
use tempograph::prelude::*;

fn main() -> tempograph::Result<()> {
    // one hot core that stays active, plus a different side group per phase
    let mut text = String::new();
    for t in 1..=30 {
        for u in 0..5 {
            for v in u + 1..5 {
                text.push_str(&format!("{u} {v} {t}\n"));
            }
        }
        let side = 10 + 10 * ((t - 1) / 10);
        for u in side..side + 4 {
            for v in u + 1..side + 4 {
                text.push_str(&format!("{u} {v} {t}\n"));
            }
        }
    }
    let g = TemporalGraph::parse_edge_list(&text)?;

    for lambda in [0.0, 0.2, 1.0] {
        let cfg = CoverConfig::new(CoverFn::Indicator, lambda);
        let (_, report) = kgcvr_segment(&g, 3, 0.1, 0.1, &cfg)?;
        println!(
            "λ = {lambda:<4} mean density {:.3}  cover {:>4.1}  mean Jaccard {:.3}",
            report.mean_density, report.cover, report.mean_jaccard
        );
    }

    // counts held in a count-min sketch instead of a table
    let cfg = CoverConfig {
        sketch: Some(SketchParams { width: 272, depth: 5, seed: 1 }),
        ..CoverConfig::new(CoverFn::Sqrt, 1.0)
    };
    let (seg, report) = kgcvr_segment(&g, 3, 0.1, 0.1, &cfg)?;
    println!("\nsketched, sqrt cover: objective {:.3}", report.objective);
    for e in &seg.episodes {
        let nodes: Vec<i64> = e.nodes.iter().map(|&v| g.label(v)).collect();
        println!("  [{}, {}] {nodes:?}", g.raw_time(e.interval.lo), g.raw_time(e.interval.hi));
    }
    Ok(())
}
