// Fraction of distinct elements that occur exactly `k` times.

use std::error::Error;

use dense_streams::generators::{exact_rarity, multiplicity_profile};
use dense_streams::simrare::RareWindow;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let universe = 10_007;
    let stream = multiplicity_profile(universe, 4_500, 4, 8)?;
    for k in 1..=4 {
        let mut rare = RareWindow::new(universe, k, 0.15, 0.4, u64::from(k))?;
        for &w in &stream {
            rare.insert(w)?;
        }
        let (xk, x) = rare.counts();
        println!(
            "k = {k}: {xk}/{x} = {:.3}, truth {:.3}",
            rare.estimate()?,
            exact_rarity(&stream, k).unwrap_or(0.0)
        );
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
