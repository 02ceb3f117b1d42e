//! Plant communities in a noisy background and measure how well the
//! segmentation recovers them as the planted degree drops.

use tempograph::prelude::*;

fn main() -> tempograph::Result<()> {
    println!("planted degree  mean F");
    for planted in [7.0, 5.0, 3.0] {
        let mut total = 0.0;
        let seeds = 5;
        for seed in 0..seeds {
            let spec = SyntheticSpec::synthetic2(planted, seed);
            let (g, truth) = generate(&spec)?;
            let seg = approx_dp_segment(&g, spec.communities, 0.1, DensestMode::Incremental(0.1))?;
            let seg = post_process(&g, &seg);
            total += evaluate(&found_episodes(&g, &seg), &truth).mean_f;
        }
        println!("{planted:>14.1}  {:.3}", total / seeds as f64);
    }
    Ok(())
}
