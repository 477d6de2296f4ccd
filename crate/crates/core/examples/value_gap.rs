// Two biregular graphs that disagree on some cut by order `m / √k`, and the
// anti-concentration bound behind it.

use std::error::Error;

use dense_streams::hardlab::{
    matching_union_sample, rademacher_min_mean, value_gap_experiment, RADEMACHER_SEP,
};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a1 = matching_union_sample(16, 4, 10)?;
    let a2 = matching_union_sample(16, 4, 11)?;
    let report = value_gap_experiment(&a1, &a2, 32, 0)?;
    println!(
        "m = {}, first gap {}, best of {} = {} (|x'By| = {}, ||By||_1 = {})",
        report.m,
        report.first.gap,
        report.restarts,
        report.best.gap,
        report.best.xby,
        report.best.by_l1
    );
    println!("floor on E||By||_1: {:.2}", report.floor);

    for m in [16, 256] {
        let mean = rademacher_min_mean(m, 20_000, 5);
        println!(
            "m = {m}: E min(|X|,|Y|) ~ {mean:.2} >= {:.3}",
            RADEMACHER_SEP * (m as f64).sqrt()
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
