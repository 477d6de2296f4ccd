// Jaccard similarity by three distinct-count sketches and by a hashed window.

use std::error::Error;

use dense_streams::generators::{exact_jaccard, jaccard_pair};
use dense_streams::simrare::{similarity_f0, SimWindow};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let universe = 10_007;
    let (a, b) = jaccard_pair(universe, 4_000, 0.4, 1)?;
    let truth = exact_jaccard(&a, &b).ok_or("empty sets")?;

    let via_f0 = similarity_f0(&a, &b, universe, 0.15, 2)?;

    let mut window = SimWindow::new(universe, 0.15, 0.4, 2)?;
    for &w in &a {
        window.insert_a(w)?;
    }
    for &w in &b {
        window.insert_b(w)?;
    }
    let (inter, union) = window.counts();
    println!("truth {truth:.3}");
    println!("f0 sketches {via_f0:.3}");
    println!(
        "window t = {} of p = {}: {inter}/{union} = {:.3}",
        window.window(),
        window.modulus(),
        window.estimate()?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
