//! Profit and running time of the approximate segmentation against the
//! exact DP as `k` grows.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempograph::prelude::*;

fn main() -> tempograph::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut text = String::new();
    for t in 1..=40 {
        let base = 6 * (t / 8);
        for u in base..base + 6 {
            for v in u + 1..base + 6 {
                if rng.gen_bool(0.5) {
                    text.push_str(&format!("{u} {v} {t}\n"));
                }
            }
        }
    }
    let g = TemporalGraph::parse_edge_list(&text)?;

    println!(" k   optimal  kgapprox   ratio   opt ms  apx ms");
    for k in [2, 4, 6, 8] {
        let t0 = Instant::now();
        let opt = exact_dp_segment(&g, k, DensestMode::Exact)?;
        let t_opt = t0.elapsed().as_secs_f64() * 1e3;
        let t0 = Instant::now();
        let apx = approx_dp_segment(&g, k, 0.1, DensestMode::Incremental(0.1))?;
        let t_apx = t0.elapsed().as_secs_f64() * 1e3;
        println!(
            "{k:>2}  {:>8.3}  {:>8.3}  {:>6.3}  {t_opt:>7.1} {t_apx:>7.1}",
            opt.total_profit,
            apx.total_profit,
            apx.total_profit / opt.total_profit
        );
    }
    Ok(())
}
