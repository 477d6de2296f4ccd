//! Distinct-elements (F0) estimation with clone-and-feed union queries.
//!
//! The sketch keeps `r` independent bottom-k samples of seeded 64-bit hashes
//! and reports the median of their k-minimum-values estimates. While the
//! number of distinct elements seen is at most the sample capacity `k`, an
//! exact set is kept alongside and the estimate is the true count.
//!
//! Sizing, for a target relative error `ε` and failure probability `δ`:
//!
//! * `k = ⌈4/ε²⌉ + 2`. The estimator `(k-1)/U_(k)` is unbiased with relative
//!   variance at most `1/(k-2)`, so by Chebyshev one repetition misses the
//!   `(1 ± ε)` band with probability at most `1/4`.
//! * `r = ⌈8 ln(1/δ)⌉`, rounded up to odd. The median fails only if more than
//!   half of the repetitions fail, which Hoeffding bounds by `exp(-r/8) <= δ`.
//!
//! # Snapshot layout
//!
//! [`F0Sketch::to_bytes`] writes little-endian fields:
//!
//! ```text
//! magic "F0SK" | version u16 (=1) | eps f64 | delta f64 | universe u64 | seed u64
//! exact-flag u8 | [if 1: count u64, sorted elements u64 * count]
//! reps u32 | per rep: len u32, sorted hashes u64 * len
//! ```

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::hashing::mix64;

const MAGIC: &[u8; 4] = b"F0SK";
const VERSION: u16 = 1;

/// Accuracy contract of an [`F0Sketch`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F0Params {
    eps_rel: f64,
    delta: f64,
    universe_size: u64,
}

impl F0Params {
    pub fn new(eps_rel: f64, delta: f64, universe_size: u64) -> Result<Self> {
        if !(eps_rel > 0.0 && eps_rel < 1.0) {
            return Err(Error::param("eps_rel", format!("{eps_rel} not in (0, 1)")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::param("delta", format!("{delta} not in (0, 1)")));
        }
        Ok(F0Params {
            eps_rel,
            delta,
            universe_size,
        })
    }

    pub fn eps_rel(&self) -> f64 {
        self.eps_rel
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn universe_size(&self) -> u64 {
        self.universe_size
    }

    /// Bottom-k sample size, also the exact-mode threshold.
    pub fn capacity(&self) -> usize {
        (4.0 / (self.eps_rel * self.eps_rel)).ceil() as usize + 2
    }

    pub fn repetitions(&self) -> usize {
        let r = (8.0 * (1.0 / self.delta).ln()).ceil().max(1.0) as usize;
        r | 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct BottomK {
    seed: u64,
    k: usize,
    hashes: BTreeSet<u64>,
}

impl BottomK {
    fn new(seed: u64, k: usize) -> Self {
        BottomK {
            seed,
            k,
            hashes: BTreeSet::new(),
        }
    }

    #[inline]
    fn insert(&mut self, element: u64) {
        let h = mix64(element, self.seed);
        if self.hashes.len() < self.k {
            self.hashes.insert(h);
        } else if let Some(&largest) = self.hashes.last() {
            if h < largest && self.hashes.insert(h) {
                self.hashes.pop_last();
            }
        }
    }

    fn estimate(&self) -> f64 {
        if self.hashes.len() < self.k {
            return self.hashes.len() as f64;
        }
        let kth = *self.hashes.last().expect("k >= 1") as f64;
        let u = (kth + 1.0) / 18_446_744_073_709_551_616.0;
        (self.k - 1) as f64 / u
    }
}

/// Duplicate- and order-insensitive distinct-elements estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct F0Sketch {
    params: F0Params,
    seed: u64,
    exact: Option<HashSet<u64>>,
    reps: Vec<BottomK>,
}

impl F0Sketch {
    pub fn new(params: F0Params, seed: u64) -> Self {
        let k = params.capacity();
        let reps = (0..params.repetitions())
            .map(|i| BottomK::new(mix64(i as u64, seed), k))
            .collect();
        F0Sketch {
            params,
            seed,
            exact: Some(HashSet::new()),
            reps,
        }
    }

    pub fn params(&self) -> &F0Params {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Whether the estimate is currently the exact distinct count.
    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn insert(&mut self, element: u64) -> Result<()> {
        self.check(element)?;
        self.insert_unchecked(element);
        Ok(())
    }

    fn check(&self, element: u64) -> Result<()> {
        if element >= self.params.universe_size {
            return Err(Error::OutOfUniverse {
                element,
                size: self.params.universe_size,
            });
        }
        Ok(())
    }

    fn insert_unchecked(&mut self, element: u64) {
        if let Some(set) = &mut self.exact {
            set.insert(element);
            if set.len() > self.params.capacity() {
                self.exact = None;
            }
        }
        for rep in &mut self.reps {
            rep.insert(element);
        }
    }

    pub fn estimate(&self) -> f64 {
        if let Some(set) = &self.exact {
            return set.len() as f64;
        }
        let mut ests: Vec<f64> = self.reps.iter().map(BottomK::estimate).collect();
        ests.sort_by(f64::total_cmp);
        ests[ests.len() / 2]
    }

    /// Returns a copy of this sketch with `offline` fed in. `self` is untouched.
    pub fn union_sketch<I>(&self, offline: I) -> Result<F0Sketch>
    where
        I: IntoIterator<Item = u64>,
    {
        self.clone().feed(offline.into_iter())
    }

    fn feed<I: Iterator<Item = u64>>(mut self, offline: I) -> Result<F0Sketch> {
        for e in offline {
            self.check(e)?;
            self.insert_unchecked(e);
        }
        Ok(self)
    }

    /// `(1 ± ε)` estimate of `|inserted ∪ offline|`; `offline` is consumed in one pass.
    pub fn estimate_union<I>(&self, offline: I) -> Result<f64>
    where
        I: IntoIterator<Item = u64>,
    {
        let mut offline = offline.into_iter();
        let Some(base) = &self.exact else {
            return Ok(self.union_sketch(offline)?.estimate());
        };
        // stay in the exact set until it overflows, then replay it into the samples
        let mut set = base.clone();
        while let Some(e) = offline.next() {
            self.check(e)?;
            set.insert(e);
            if set.len() > self.params.capacity() {
                let mut fed = self.clone();
                fed.exact = None;
                for &x in &set {
                    for rep in &mut fed.reps {
                        rep.insert(x);
                    }
                }
                return Ok(fed.feed(offline)?.estimate());
            }
        }
        Ok(set.len() as f64)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.params.eps_rel.to_le_bytes());
        out.extend_from_slice(&self.params.delta.to_le_bytes());
        out.extend_from_slice(&self.params.universe_size.to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        match &self.exact {
            Some(set) => {
                out.push(1);
                let mut sorted: Vec<_> = set.iter().copied().collect();
                sorted.sort_unstable();
                out.extend_from_slice(&(sorted.len() as u64).to_le_bytes());
                for e in sorted {
                    out.extend_from_slice(&e.to_le_bytes());
                }
            }
            None => out.push(0),
        }
        out.extend_from_slice(&(self.reps.len() as u32).to_le_bytes());
        for rep in &self.reps {
            out.extend_from_slice(&(rep.hashes.len() as u32).to_le_bytes());
            for h in &rep.hashes {
                out.extend_from_slice(&h.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::InvalidInput("not an F0 sketch snapshot".into()));
        }
        let version = u16::from_le_bytes(r.array()?);
        if version != VERSION {
            return Err(Error::InvalidInput(format!(
                "unsupported snapshot version {version}"
            )));
        }
        let eps = f64::from_le_bytes(r.array()?);
        let delta = f64::from_le_bytes(r.array()?);
        let universe = r.u64()?;
        let seed = r.u64()?;
        let params = F0Params::new(eps, delta, universe)?;
        let mut sketch = F0Sketch::new(params, seed);
        sketch.exact = match r.take(1)?[0] {
            1 => {
                let count = r.u64()?;
                let mut set = HashSet::new();
                for _ in 0..count {
                    set.insert(r.u64()?);
                }
                Some(set)
            }
            0 => None,
            flag => {
                return Err(Error::InvalidInput(format!("bad exact-mode flag {flag}")));
            }
        };
        let reps = u32::from_le_bytes(r.array()?) as usize;
        if reps != sketch.reps.len() {
            return Err(Error::InvalidInput(format!(
                "snapshot has {reps} repetitions, parameters imply {}",
                sketch.reps.len()
            )));
        }
        for rep in &mut sketch.reps {
            let len = u32::from_le_bytes(r.array()?) as usize;
            if len > rep.k {
                return Err(Error::InvalidInput(format!(
                    "repetition holds {len} hashes, capacity is {}",
                    rep.k
                )));
            }
            for _ in 0..len {
                rep.hashes.insert(r.u64()?);
            }
        }
        if r.pos != bytes.len() {
            return Err(Error::InvalidInput("trailing bytes after snapshot".into()));
        }
        Ok(sketch)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        if end > self.bytes.len() {
            return Err(Error::InvalidInput("truncated snapshot".into()));
        }
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array()?))
    }
}

/// Inclusion-exclusion: `|A ∩ B| = |A| + |B| - |A ∪ B|`. May be negative on
/// noisy inputs; callers clamp as their error budget allows.
pub fn f0_intersection_via_ie(count_a: f64, count_b: f64, union_estimate: f64) -> f64 {
    count_a + count_b - union_estimate
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(eps: f64) -> F0Params {
        F0Params::new(eps, 1.0 / 9.0, 1_000_000).unwrap()
    }

    #[test]
    fn rejects_bad_params() {
        assert!(F0Params::new(0.0, 0.1, 10).is_err());
        assert!(F0Params::new(0.1, 1.0, 10).is_err());
        assert!(F0Params::new(1.5, 0.1, 10).is_err());
    }

    #[test]
    fn sizing_for_eps_tenth() {
        let p = params(0.1);
        // capacity >= c / eps^2 with c = 4
        assert!(p.capacity() as f64 >= 4.0 / 0.01);
        assert_eq!(p.capacity(), 402);
        assert_eq!(p.repetitions() % 2, 1);
        assert!((-(p.repetitions() as f64) / 8.0).exp() <= p.delta());
    }

    #[test]
    fn empty_and_duplicates() {
        let mut sk = F0Sketch::new(params(0.1), 1);
        assert_eq!(sk.estimate(), 0.0);
        for _ in 0..10 {
            sk.insert(7).unwrap();
        }
        assert_eq!(sk.estimate(), 1.0);
    }

    #[test]
    fn exact_below_capacity() {
        let mut sk = F0Sketch::new(params(0.1), 1);
        for e in 1..=300 {
            sk.insert(e).unwrap();
        }
        assert!(sk.is_exact());
        assert_eq!(sk.estimate(), 300.0);
    }

    #[test]
    fn out_of_universe_rejected() {
        let mut sk = F0Sketch::new(F0Params::new(0.1, 0.1, 10).unwrap(), 0);
        assert!(matches!(sk.insert(10), Err(Error::OutOfUniverse { .. })));
        assert!(sk.estimate_union([3, 11]).is_err());
    }

    #[test]
    fn union_in_exact_mode() {
        let mut sk = F0Sketch::new(params(0.1), 3);
        sk.insert(1).unwrap();
        sk.insert(2).unwrap();
        assert_eq!(sk.estimate_union([2, 3]).unwrap(), 3.0);
        assert_eq!(sk.estimate_union([]).unwrap(), sk.estimate());
        assert_eq!(sk.estimate(), 2.0);
    }

    #[test]
    fn union_overflowing_exact_mode_matches_direct_insert() {
        let p = F0Params::new(0.5, 0.2, 100_000).unwrap();
        let mut base = F0Sketch::new(p, 11);
        for e in 0..10 {
            base.insert(e).unwrap();
        }
        assert!(base.is_exact());
        let offline: Vec<u64> = (5..500).collect();
        let fed = base.union_sketch(offline.iter().copied()).unwrap();
        assert!(!fed.is_exact());
        assert_eq!(
            base.estimate_union(offline.iter().copied()).unwrap(),
            fed.estimate()
        );
        assert_eq!(base.estimate(), 10.0);
    }

    #[test]
    fn intersection_arithmetic() {
        assert_eq!(f0_intersection_via_ie(3.0, 3.0, 4.0), 2.0);
        assert_eq!(f0_intersection_via_ie(10.0, 6.0, 16.0), 0.0);
        let mut a = F0Sketch::new(params(0.1), 5);
        let mut b = F0Sketch::new(params(0.1), 6);
        for e in [1, 2, 3] {
            a.insert(e).unwrap();
        }
        for e in [2, 3, 4] {
            b.insert(e).unwrap();
        }
        let union = a.estimate_union([2, 3, 4]).unwrap();
        assert_eq!(
            f0_intersection_via_ie(a.estimate(), b.estimate(), union),
            2.0
        );
    }

    #[test]
    fn snapshot_roundtrip_both_modes() {
        let p = F0Params::new(0.3, 0.05, 1 << 20).unwrap();
        let mut sk = F0Sketch::new(p, 99);
        for e in 0..20 {
            sk.insert(e * 7).unwrap();
        }
        assert!(sk.is_exact());
        assert_eq!(F0Sketch::from_bytes(&sk.to_bytes()).unwrap(), sk);
        for e in 0..2000 {
            sk.insert(e * 13).unwrap();
        }
        assert!(!sk.is_exact());
        let back = F0Sketch::from_bytes(&sk.to_bytes()).unwrap();
        assert_eq!(back, sk);
        assert_eq!(back.estimate(), sk.estimate());
    }

    #[test]
    fn snapshot_rejects_garbage() {
        assert!(F0Sketch::from_bytes(b"nope").is_err());
        let sk = F0Sketch::new(params(0.2), 1);
        let mut bytes = sk.to_bytes();
        bytes.push(0);
        assert!(F0Sketch::from_bytes(&bytes).is_err());
        assert!(F0Sketch::from_bytes(&bytes[..10]).is_err());
    }
}
