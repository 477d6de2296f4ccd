//! The value-gap experiment on two `k`-biregular bipartite graphs and the
//! Rademacher separation floor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_spins, sign, BipartiteInstance, HalfInt};
use crate::error::{Error, Result};

/// Khintchine constant for `p = 1`: `E|Σ a_i ε_i| ≥ c ‖a‖_2` with
/// `c = 1/√2` (Szarek).
pub const KHINTCHINE_L1: f64 = std::f64::consts::FRAC_1_SQRT_2;
/// `E[min(|X|, |Y|)] ≥ (9/512) √m` for independent Rademacher sums of length
/// at least `m`.
pub const RADEMACHER_SEP: f64 = 9.0 / 512.0;
/// Largest `|R|` for [`value_gap_exhaustive`].
const EXHAUSTIVE_RIGHT_CAP: usize = 24;

/// `B_uv = mult_{A1}(u, v) - mult_{A2}(u, v)`, rows indexed by left vertices.
/// Both graphs must be `k`-biregular on equal sides for the same `k`.
pub fn signed_matrix(
    a1: &BipartiteInstance,
    a2: &BipartiteInstance,
) -> Result<(Vec<Vec<i64>>, usize)> {
    let n = a1.n_left();
    if a1.n_right() != n || a2.n_left() != n || a2.n_right() != n {
        return Err(Error::InvalidInput(
            "value gap needs |L| = |R| equal for both graphs".into(),
        ));
    }
    let k = a1.edge_count() / n.max(1);
    if !a1.is_biregular(k) || !a2.is_biregular(k) {
        return Err(Error::InvalidInput(
            "value gap needs both graphs k-regular on both sides for one k".into(),
        ));
    }
    let mut b = vec![vec![0i64; n]; n];
    for &(u, v) in a1.edges() {
        b[u][v] += 1;
    }
    for &(u, v) in a2.edges() {
        b[u][v] -= 1;
    }
    Ok((b, k))
}

/// One choice of `y` with `x = sign(B y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapTrial {
    pub x: Vec<i8>,
    pub y: Vec<i8>,
    pub xby: i64,
    pub by_l1: i64,
    /// `|x^T B y| / 2 = |val_1(z) - val_2(z)|` for `z = (x, y)`.
    pub gap: HalfInt,
}

fn trial_for(b: &[Vec<i64>], y: Vec<i8>) -> GapTrial {
    let by: Vec<i64> = b
        .iter()
        .map(|row| row.iter().zip(&y).map(|(&w, &s)| w * i64::from(s)).sum())
        .collect();
    let x: Vec<i8> = by.iter().map(|&z| sign(z)).collect();
    let xby = by
        .iter()
        .zip(&x)
        .map(|(&z, &s)| z * i64::from(s))
        .sum::<i64>();
    let by_l1 = by.iter().map(|z| z.abs()).sum();
    GapTrial {
        x,
        y,
        xby,
        by_l1,
        gap: HalfInt::from_twice(xby.abs()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValueGapReport {
    pub n: usize,
    pub k: usize,
    /// `Σ |B_uv|`, the size of the multiset symmetric difference.
    pub m: i64,
    pub first: GapTrial,
    pub best: GapTrial,
    pub restarts: usize,
    /// Lower bound on `E ‖B y‖_1`: `c m / √(2k)` with `c =` [`KHINTCHINE_L1`].
    pub floor: f64,
}

fn report(n: usize, k: usize, b: &[Vec<i64>], trials: Vec<GapTrial>) -> ValueGapReport {
    let m = b.iter().flatten().map(|w| w.abs()).sum::<i64>();
    let first = trials[0].clone();
    let restarts = trials.len();
    let best = trials
        .into_iter()
        .reduce(|a, t| if t.gap > a.gap { t } else { a })
        .expect("at least one trial");
    let floor = if k == 0 {
        0.0
    } else {
        KHINTCHINE_L1 * m as f64 / (2.0 * k as f64).sqrt()
    };
    ValueGapReport {
        n,
        k,
        m,
        first,
        best,
        restarts,
        floor,
    }
}

/// Samples `restarts` uniform `y`, sets `x = sign(B y)` and reports the first
/// and the best achieved gap.
pub fn value_gap_experiment(
    a1: &BipartiteInstance,
    a2: &BipartiteInstance,
    restarts: usize,
    seed: u64,
) -> Result<ValueGapReport> {
    if restarts == 0 {
        return Err(Error::param("restarts", "must be at least 1"));
    }
    let (b, k) = signed_matrix(a1, a2)?;
    let n = b.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials = (0..restarts)
        .map(|_| {
            let y = (0..n)
                .map(|_| if rng.random::<bool>() { 1 } else { -1 })
                .collect();
            trial_for(&b, y)
        })
        .collect();
    Ok(report(n, k, &b, trials))
}

/// Runs every `y ∈ {±1}^R` in index order (bit `v` set means `y_v = -1`).
pub fn value_gap_exhaustive(
    a1: &BipartiteInstance,
    a2: &BipartiteInstance,
) -> Result<ValueGapReport> {
    let (b, k) = signed_matrix(a1, a2)?;
    let n = b.len();
    if n > EXHAUSTIVE_RIGHT_CAP {
        return Err(Error::CapExceeded {
            what: "right side size",
            got: n as u64,
            cap: EXHAUSTIVE_RIGHT_CAP as u64,
        });
    }
    let trials = (0u64..1 << n)
        .map(|mask| {
            let y = (0..n)
                .map(|v| if mask >> v & 1 == 1 { -1 } else { 1 })
                .collect();
            trial_for(&b, y)
        })
        .collect();
    Ok(report(n, k, &b, trials))
}

/// Unnormalized cut count of `(x, y)` in `a`: edges with `x_u ≠ y_v`,
/// counted with multiplicity.
pub fn bipartite_cut_count(a: &BipartiteInstance, x: &[i8], y: &[i8]) -> Result<u64> {
    check_spins(x, a.n_left(), "left")?;
    check_spins(y, a.n_right(), "right")?;
    Ok(a.edges().iter().filter(|&&(u, v)| x[u] != y[v]).count() as u64)
}

/// Monte-Carlo `E[min(|X|, |Y|)]` for independent Rademacher sums of length `m`.
pub fn rademacher_min_mean(m: usize, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sum_of = |rng: &mut ChaCha8Rng| -> i64 {
        let mut s = 0i64;
        let mut left = m;
        while left > 0 {
            let take = left.min(64);
            let bits = rng.random::<u64>()
                & if take == 64 {
                    u64::MAX
                } else {
                    (1 << take) - 1
                };
            s += 2 * i64::from(bits.count_ones()) - take as i64;
            left -= take;
        }
        s
    };
    let total: i64 = (0..samples)
        .map(|_| {
            let x = sum_of(&mut rng).abs();
            let y = sum_of(&mut rng).abs();
            x.min(y)
        })
        .sum();
    total as f64 / samples.max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matching(perm: &[usize]) -> BipartiteInstance {
        BipartiteInstance::new(
            perm.len(),
            perm.len(),
            perm.iter().copied().enumerate().collect(),
        )
        .unwrap()
    }

    #[test]
    fn equal_graphs_have_no_gap() {
        let a = matching(&[1, 2, 3, 0]);
        let r = value_gap_experiment(&a, &a, 5, 1).unwrap();
        assert_eq!(r.best.gap, HalfInt::default());
        assert_eq!(r.m, 0);
    }

    #[test]
    fn sign_choice_attains_l1() {
        let a1 = matching(&[0, 1, 2, 3]);
        let a2 = matching(&[1, 2, 3, 0]);
        let r = value_gap_exhaustive(&a1, &a2).unwrap();
        assert_eq!(r.m, 8);
        assert_eq!(r.restarts, 16);
        assert_eq!(r.best.xby, r.best.by_l1);
    }

    #[test]
    fn rejects_irregular() {
        let a1 = matching(&[0, 1, 2]);
        let a2 = BipartiteInstance::new(3, 3, vec![(0, 0), (0, 1), (2, 2)]).unwrap();
        assert!(value_gap_experiment(&a1, &a2, 1, 0).is_err());
    }
}
