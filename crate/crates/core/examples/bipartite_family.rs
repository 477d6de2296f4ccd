// Complete bipartite instances indexed by a far-apart family of bit strings.

use std::error::Error;

use dense_streams::hardlab::{
    bip_cut_value_formula, bip_instance, entropy_bound, hamming_ball_size, hamming_family,
};
use dense_streams::universe::Cut;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let n = 10;
    let s = 0b00_0001_1111;
    let g = bip_instance(n, s)?;
    for t in [s, 0b00_0000_0111, 0b11_1000_0011] {
        let closed = bip_cut_value_formula(n, s, t)?;
        let direct = g.cut_value(Cut::from_mask(n, t)?)?;
        println!("T = {t:#012b}: formula {closed} = {direct:.4}");
    }

    let fam = hamming_family(24, 0.1, 2000, 3)?;
    println!(
        "n = 24, radius {}: kept {} of {} samples ({} too unbalanced, {} too close)",
        fam.radius,
        fam.strings.len(),
        fam.sampled,
        fam.weight_rejected,
        fam.collision_rejected
    );
    println!(
        "ball size {} <= 2^(H(0.1) n) = {:.0}",
        hamming_ball_size(24, fam.radius),
        entropy_bound(24, 0.1)
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
