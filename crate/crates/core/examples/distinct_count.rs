// Distinct counting: estimates, serialization and offline unions.

use std::error::Error;

use dense_streams::f0::{F0Params, F0Sketch};
use dense_streams::generators::distinct_stream;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = F0Params::new(0.1, 1.0 / 9.0, 1 << 32)?;
    let mut sketch = F0Sketch::new(params, 42);
    for x in distinct_stream(1000, 1 << 32, 2.0, 3)? {
        sketch.insert(x)?;
    }
    println!(
        "capacity {} x {} repetitions, estimate {:.1} (truth 1000)",
        params.capacity(),
        params.repetitions(),
        sketch.estimate()
    );

    let restored = F0Sketch::from_bytes(&sketch.to_bytes())?;
    assert_eq!(restored.estimate(), sketch.estimate());

    let extra: Vec<u64> = (0..500).map(|i| (1 << 31) + i).collect();
    println!(
        "with 500 more offline: {:.1}",
        sketch.estimate_union(extra)?
    );

    // Small streams stay exact.
    let mut small = F0Sketch::new(params, 1);
    for x in [4, 8, 15, 16, 23, 42, 4, 8] {
        small.insert(x)?;
    }
    println!(
        "small stream exact: {}, count {}",
        small.is_exact(),
        small.estimate()
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
