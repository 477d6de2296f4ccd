// Dense Max-2-CSP, plus the embedding of Max-Cut as a CSP.

use std::error::Error;

use dense_streams::generators::{csp_dense_random, erdos_renyi};
use dense_streams::optimizers::{csp_brute, csp_dense, DenseRunConfig, Solution};
use dense_streams::universe::{CspInstance, XOR_TABLE};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let phi = csp_dense_random(6, 2, 2, 0.6, 5)?;
    let (_, opt) = csp_brute(&phi)?;
    let res = csp_dense(&phi, &DenseRunConfig::new(0.3, 0.2, 9)?)?;
    let Solution::Assignment { values, .. } = &res.solution else {
        return Err("expected an assignment".into());
    };
    let value = phi.value(values)?;
    println!(
        "{} constraints, optimum {opt:.3}, found {values:?} with value {value:.3}",
        phi.constraints().len()
    );

    // Each edge becomes an XOR constraint on its endpoints.
    let g = erdos_renyi(6, 0.6, 2)?;
    let cut_csp = CspInstance::from_graph(&g)?;
    assert!(cut_csp.constraints().iter().all(|c| c.table == XOR_TABLE));
    println!(
        "graph with {} edges as {} XOR constraints",
        g.edges().len(),
        cut_csp.constraints().len()
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
