// Max-Cut on a dense edge stream, with both sketch back ends checked
// against exhaustive search.
//
// ```bash
// cargo run --example maxcut_stream
// ```

use std::error::Error;

use dense_streams::generators::erdos_renyi;
use dense_streams::optimizers::{
    maxcut_brute, maxcut_dense, DenseRunConfig, SamplerOverrides, Solution, Variant,
};
use dense_streams::universe::Cut;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = erdos_renyi(12, 0.5, 7)?;
    let (best, opt) = maxcut_brute(&g)?;
    println!(
        "n = {}, m = {}, optimum {opt:.4} at {:#x}",
        g.n(),
        g.edges().len(),
        best.mask()
    );

    let cfg = DenseRunConfig::new(0.2, 0.2, 1)?;
    let res = maxcut_dense(&g, &cfg)?;
    let Solution::Cut(cut) = res.solution else {
        return Err("expected a cut".into());
    };
    let value = g.cut_value(cut)?;
    println!(
        "f0 sketch: cut {:#x}, estimate {:.4}, true value {value:.4}",
        cut.mask(),
        res.estimate
    );
    assert!(value >= 0.8 * opt);

    // Exhaustive walk: the sampler sees every expander vertex once.
    let cfg = cfg
        .with_variant(Variant::Sampler)
        .with_sampler(SamplerOverrides {
            exhaustive: true,
            ..SamplerOverrides::default()
        });
    let res = maxcut_dense(&g, &cfg)?;
    let cut: Cut = match res.solution {
        Solution::Cut(c) => c,
        _ => return Err("expected a cut".into()),
    };
    println!(
        "sampler:   cut {:#x}, estimate {:.4}",
        cut.mask(),
        res.estimate
    );
    for w in &res.warnings {
        println!("  warning: {w}");
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
