// Affine permutation hashes over a prime field.

use std::error::Error;

use dense_streams::hashing::{next_prime, sample_perm_hash, PermHash};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p = next_prime(1000);
    let h = sample_perm_hash(p, 9)?;
    println!(
        "p = {p}, h(x) = {} x + {} mod p",
        h.multiplier(),
        h.offset()
    );
    for x in [0, 1, 500] {
        let y = h.eval(x);
        assert_eq!(h.invert(y), x);
        println!("h({x}) = {y}");
    }

    // Every pair of distinct inputs lands on every pair of distinct outputs
    // exactly once across the family.
    let p = 5;
    let mut hits = [[0u32; 5]; 5];
    for c in 1..p {
        for d in 0..p {
            let h = PermHash::new(p, c, d)?;
            hits[h.eval(1) as usize][h.eval(3) as usize] += 1;
        }
    }
    println!("output pairs for inputs (1, 3) over all 20 hashes mod 5: {hits:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
