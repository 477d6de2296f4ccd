//! Small-scale, executable versions of the lower-bound constructions:
//! conditional Max-Cut and the slack calculus, random hard families,
//! sink gadgets, complete-bipartite and Hamming-ball instances, and the
//! value-gap experiment on unions of matchings.
//!
//! Assignments are `±1` spins stored as `i8`. Wherever a sign of a possibly
//! zero quantity is taken, `sign(0) = +1`.

mod bip;
mod conditional;
mod family;
mod gadget;
mod gap;
pub mod harness;

pub use bip::{
    balls_collide, binary_entropy, bip_cut_value_formula, bip_instance, entropy_bound,
    hamming_ball_size, hamming_family, HammingFamily,
};
pub use conditional::{
    advantage, check_shared_good, closs, copt, copt_brute, cval, disc, optimal_right,
    shared_good_brute, slack, slack_real, total_advantage, BipartiteInstance, SharedGood,
    BRUTE_RIGHT_CAP, SHARED_GOOD_CROSSCHECK,
};
pub use family::{
    edge_overlap, grr_sample, hard_family_filter, k_for_eps, matching_union_sample,
    random_regular_graph, FamilyFilter, HardFamilyParams,
};
pub use gadget::{
    gadget_cond, gadget_det, spins_to_mask, weighted_maxcut_brute, WeightedGraph,
    SINK_MINUS_OFFSET, SINK_PLUS_OFFSET, WEIGHTED_BRUTE_CAP,
};
pub use gap::{
    bipartite_cut_count, rademacher_min_mean, signed_matrix, value_gap_exhaustive,
    value_gap_experiment, GapTrial, ValueGapReport, KHINTCHINE_L1, RADEMACHER_SEP,
};

use std::fmt;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};

/// `sign` with `sign(0) = +1`.
pub fn sign(v: i64) -> i8 {
    if v < 0 {
        -1
    } else {
        1
    }
}

pub(crate) fn check_spins(x: &[i8], len: usize, what: &str) -> Result<()> {
    if x.len() != len {
        return Err(Error::InvalidInput(format!(
            "{what} assignment has {} entries, expected {len}",
            x.len()
        )));
    }
    if let Some(bad) = x.iter().find(|&&s| s != 1 && s != -1) {
        return Err(Error::InvalidInput(format!(
            "{what} assignment entry {bad} is not ±1"
        )));
    }
    Ok(())
}

/// An element of `½ℤ`, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub fn from_int(v: i64) -> Self {
        HalfInt(2 * v)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;

    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;

    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_ints() {
        let a = HalfInt::from_twice(3);
        assert_eq!(a.to_f64(), 1.5);
        assert_eq!((a + HalfInt::from_int(1)).twice(), 5);
        assert_eq!(HalfInt::from_twice(-3).to_string(), "-1.5");
        assert_eq!(HalfInt::from_int(4).to_string(), "4");
    }

    #[test]
    fn sign_of_zero_is_plus() {
        assert_eq!(sign(0), 1);
        assert_eq!(sign(-4), -1);
        assert_eq!(sign(9), 1);
    }
}
