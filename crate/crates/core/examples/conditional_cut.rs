// Conditional Max-Cut on a random biregular bipartite graph, the shared-good
// test for two such graphs, and the sink gadgets that turn conditional
// questions into plain weighted Max-Cut.

use std::error::Error;

use dense_streams::hardlab::{
    check_shared_good, closs, copt, gadget_det, grr_sample, optimal_right, random_regular_graph,
    spins_to_mask, weighted_maxcut_brute, WeightedGraph,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g1 = grr_sample(10, 3, 1)?;
    let g2 = grr_sample(10, 3, 2)?;
    let x: Vec<i8> = (0..10).map(|i| if i % 3 == 0 { -1 } else { 1 }).collect();

    let y = optimal_right(&g1, &x)?;
    println!(
        "copt = {}, loss at the optimum = {}",
        copt(&g1, &x)?,
        closs(&g1, &x, &y)?
    );

    for tau in [0.0, 2.0, 5.0] {
        let shared = check_shared_good(&g1, &g2, &x, tau)?;
        println!(
            "tau = {tau}: shared good assignment {}, min total loss {}",
            if shared.exists() { "exists" } else { "absent" },
            shared.min_total_loss
        );
    }

    // Heavy sinks pin every vertex to the side opposite its spin's sink.
    let a = WeightedGraph::from_graph(&random_regular_graph(6, 3, 4)?)?;
    let spins = [1, -1, 1, 1, -1, -1];
    let (_, opt) = weighted_maxcut_brute(&gadget_det(&a, &spins)?)?;
    let n = 6u64;
    let k = 3u64;
    let cut = a.cut_weight(spins_to_mask(&spins));
    println!("gadget optimum {opt} = 5000Nk + 100Nk + {cut}");
    assert_eq!(opt, 5000 * n * k + 100 * n * k + cut);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
