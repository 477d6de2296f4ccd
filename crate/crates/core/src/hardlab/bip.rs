//! Complete bipartite instances `K_{S, S̄}` and well-separated string families
//! for the Hamming-ball packing.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::universe::{full_mask, Graph};

fn check_side(n: usize, s: u64) -> Result<u64> {
    if n == 0 || n > 64 {
        return Err(Error::param("n", format!("{n} is outside 1..=64")));
    }
    let full = full_mask(n);
    if s & !full != 0 {
        return Err(Error::InvalidInput(format!(
            "set {s:#x} has members outside 0..{n}"
        )));
    }
    if s == 0 || s == full {
        return Err(Error::InvalidInput(
            "complete bipartite side must be nonempty and proper".into(),
        ));
    }
    Ok(full)
}

/// `K_{S, S̄}` on `n` vertices, `S` given as a bit mask.
pub fn bip_instance(n: usize, s: u64) -> Result<Graph> {
    let full = check_side(n, s)?;
    let outside = full & !s;
    let mut g = Graph::empty(n)?;
    for u in 0..n {
        if s >> u & 1 == 1 {
            for v in (0..n).filter(|&v| outside >> v & 1 == 1) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// Cut value of `T` on `K_{S, S̄}` as the exact fraction
/// `1 - ((1-p) q + p (1-q))` with `p = |S ∩ T̄| / |S|`, `q = |S̄ ∩ T| / |S̄|`.
pub fn bip_cut_value_formula(n: usize, s: u64, t: u64) -> Result<Ratio<u64>> {
    let full = check_side(n, s)?;
    if t & !full != 0 {
        return Err(Error::InvalidInput(format!(
            "cut {t:#x} has members outside 0..{n}"
        )));
    }
    let size_s = u64::from(s.count_ones());
    let size_c = n as u64 - size_s;
    let a = u64::from((s & !t).count_ones());
    let b = u64::from((!s & full & t).count_ones());
    // |S||S̄| (1 - ...) expanded so every term stays nonnegative
    let crossing = (size_s - a) * (size_c - b) + a * b;
    Ok(Ratio::new(crossing, size_s * size_c))
}

/// `H(p) = -p log2 p - (1-p) log2 (1-p)`, with `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// `Σ_{i ≤ r} C(n, i)`.
pub fn hamming_ball_size(n: usize, r: usize) -> u128 {
    let mut term: u128 = 1;
    let mut total: u128 = 1;
    for i in 1..=r.min(n) {
        term = term * (n - i + 1) as u128 / i as u128;
        total += term;
    }
    total
}

/// `2^{n H(δ)}`, the upper bound on a ball of radius `⌊δ n⌋` for `δ ≤ 1/2`.
pub fn entropy_bound(n: usize, delta: f64) -> f64 {
    (n as f64 * binary_entropy(delta)).exp2()
}

/// Whether the radius-`r` balls around `{x, x̄}` and `{x', x̄'}` meet, i.e.
/// `d(x, x') ≤ 2r` or `n - d(x, x') ≤ 2r`.
pub fn balls_collide(x: u64, y: u64, n: usize, r: usize) -> bool {
    let d = (x ^ y).count_ones() as usize;
    d <= 2 * r || n - d <= 2 * r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HammingFamily {
    pub n: usize,
    pub radius: usize,
    /// Kept strings, bit `i` is coordinate `i`.
    pub strings: Vec<u64>,
    pub sampled: usize,
    /// Rejected for weight outside `[n/3, 2n/3]`.
    pub weight_rejected: usize,
    /// Rejected for a ball collision with an earlier kept string.
    pub collision_rejected: usize,
}

/// Samples `trials` uniform strings of length `n` and greedily keeps those of
/// weight in `[n/3, 2n/3]` whose `±` balls of radius `⌊δ n⌋` miss every kept
/// string's balls.
pub fn hamming_family(n: usize, delta: f64, trials: usize, seed: u64) -> Result<HammingFamily> {
    if n == 0 || n > 64 {
        return Err(Error::param("n", format!("{n} is outside 1..=64")));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::param(
            "delta",
            format!("{delta} is outside (0, 1/2)"),
        ));
    }
    let radius = (delta * n as f64).floor() as usize;
    let full = full_mask(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut family = HammingFamily {
        n,
        radius,
        strings: Vec::new(),
        sampled: trials,
        weight_rejected: 0,
        collision_rejected: 0,
    };
    for _ in 0..trials {
        let x = rng.random::<u64>() & full;
        let w = x.count_ones() as usize;
        if 3 * w < n || 3 * w > 2 * n {
            family.weight_rejected += 1;
        } else if family
            .strings
            .iter()
            .any(|&y| balls_collide(x, y, n, radius))
        {
            family.collision_rejected += 1;
        } else {
            family.strings.push(x);
        }
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_examples() {
        let s = 0b0011;
        assert_eq!(
            bip_cut_value_formula(4, s, s).unwrap(),
            Ratio::from_integer(1)
        );
        assert_eq!(
            bip_cut_value_formula(4, s, 0b1100).unwrap(),
            Ratio::from_integer(1)
        );
        assert_eq!(
            bip_cut_value_formula(4, s, 0b0101).unwrap(),
            Ratio::new(1, 2)
        );
        assert!(bip_instance(4, 0).is_err());
        assert!(bip_instance(4, 0b1111).is_err());
    }

    #[test]
    fn ball_sizes() {
        assert_eq!(hamming_ball_size(20, 2), 211);
        assert_eq!(hamming_ball_size(5, 9), 32);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
        assert!(211.0 <= entropy_bound(20, 0.1));
    }

    #[test]
    fn family_is_weight_balanced() {
        let f = hamming_family(24, 0.1, 500, 3).unwrap();
        assert_eq!(f.radius, 2);
        assert_eq!(
            f.strings.len() + f.weight_rejected + f.collision_rejected,
            500
        );
        for &x in &f.strings {
            let w = x.count_ones() as usize;
            assert!(3 * w >= 24 && 3 * w <= 48);
        }
    }
}
