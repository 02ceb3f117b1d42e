//! Count-min sketch over a skewed stream: estimates never undercount and
//! rarely overshoot by more than `ε · total`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use tempograph::prelude::*;

fn main() -> tempograph::Result<()> {
    let (eps, delta) = (0.01, 0.01);
    let mut sketch = CountMinSketch::new(eps, delta, 42)?;
    println!("width {} depth {}", sketch.width(), sketch.depth());

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut truth: HashMap<u32, u64> = HashMap::new();
    for _ in 0..100_000 {
        // roughly Zipfian over 10^4 ids
        let v = (10_000f64.powf(rng.gen::<f64>()) as u32).saturating_sub(1);
        sketch.update(v);
        *truth.entry(v).or_default() += 1;
    }

    let slack = eps * sketch.total() as f64;
    let within = truth
        .iter()
        .filter(|(&v, &c)| (sketch.query(v) - c) as f64 <= slack)
        .count();
    println!(
        "{} distinct ids, {:.4} within ε·total of the truth",
        truth.len(),
        within as f64 / truth.len() as f64
    );
    for v in [0, 1, 10, 100, 1000] {
        println!("  id {v:>4}: true {:>6}  estimate {:>6}", truth.get(&v).copied().unwrap_or(0), sketch.query(v));
    }
    Ok(())
}
