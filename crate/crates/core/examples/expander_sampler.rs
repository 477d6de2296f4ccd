// Estimating a mean over a turnstile stream from an expander walk.

use std::error::Error;

use dense_streams::sampler::{ExpanderGraph, Update, WalkSample};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let universe = 400;
    let graph = ExpanderGraph::build(universe, 0.02)?;
    println!(
        "expander on {} vertices, power {}, lambda <= {:.4}",
        graph.vertices(),
        graph.power(),
        graph.lambda_bound()
    );

    let mut walk = WalkSample::new(graph, 4000, 17)?;
    // Insert 0..300, then delete 200..300.
    for x in 0..300 {
        walk.push(Update::insert(x))?;
    }
    for x in 200..300 {
        walk.push(Update::delete(x))?;
    }
    let sigma = walk.finish()?;
    let below_100 = sigma.estimate(|x| f64::from(u8::from(x < 100)))?;
    println!(
        "sigma keeps {} copies of {} elements",
        sigma.size(),
        sigma.copies().len()
    );
    println!("fraction below 100: estimate {below_100:.3}, truth 0.500");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
