// Recovering a planted clique as the densest subgraph.

use std::error::Error;

use dense_streams::generators::planted_clique;
use dense_streams::optimizers::{densest_brute, densest_dense, DenseRunConfig, Solution};
use dense_streams::universe::BitIter;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let (g, clique) = planted_clique(10, 6, 0.3, 11)?;
    let (_, best) = densest_brute(&g)?;
    println!(
        "planted {:?}, best density {best:.3}",
        BitIter(clique).collect::<Vec<_>>()
    );

    let res = densest_dense(&g, &DenseRunConfig::new(0.25, 0.2, 3)?)?;
    if let Solution::Subset { mask, .. } = res.solution {
        let found = g.density(mask);
        println!(
            "sketch picks {:?}, density {found:.3}",
            BitIter(mask).collect::<Vec<_>>()
        );
        assert!(found >= 0.75 * best);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
