//! Affine permutation hashes `x -> c x + d (mod p)`, the pairwise bucket hash
//! used to batch sampler updates, and prime utilities.
//!
//! Hash values live in `[0, p)`. A "sample window" of size `t` is the set of
//! elements `w` with `h(w) < t`, which holds exactly `t` hash values.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Mersenne prime `2^61 - 1`, the modulus of [`BucketHash`].
pub const MERSENNE_61: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (u128::from(a) * u128::from(b) % u128::from(m)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut p = n.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Smallest prime `p >= n` with `p ≡ 1 (mod 4)`; such a prime lies in `[n, 2n]`.
pub fn next_prime_1mod4(n: u64) -> Result<u64> {
    if n < 7 {
        return Err(Error::param("n", format!("{n} < 7")));
    }
    let mut p = n;
    while !(p % 4 == 1 && is_prime(p)) {
        p += 1;
    }
    debug_assert!(p <= 2 * n);
    Ok(p)
}

/// A member `h_{c,d}` of the 2-wise independent permutation family on `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PermHash {
    p: u64,
    c: u64,
    d: u64,
}

impl PermHash {
    /// `p` must be prime, `c` in `[1, p)`, `d` in `[0, p)`.
    pub fn new(p: u64, c: u64, d: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::param("p", format!("{p} is not prime")));
        }
        if c == 0 || c >= p {
            return Err(Error::param("c", format!("{c} not in [1, {p})")));
        }
        if d >= p {
            return Err(Error::param("d", format!("{d} not in [0, {p})")));
        }
        Ok(PermHash { p, c, d })
    }

    /// Samples `c ~ U[1, p)` and `d ~ U[0, p)`.
    pub fn sample<R: Rng + ?Sized>(p: u64, rng: &mut R) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::param("p", format!("{p} is not prime")));
        }
        let c = rng.random_range(1..p);
        let d = rng.random_range(0..p);
        Ok(PermHash { p, c, d })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn multiplier(&self) -> u64 {
        self.c
    }

    pub fn offset(&self) -> u64 {
        self.d
    }

    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        debug_assert!(x < self.p);
        (mul_mod(self.c, x, self.p) + self.d) % self.p
    }

    /// `h^{-1}(y)`; exists for every `y` since `h` is a bijection.
    pub fn invert(&self, y: u64) -> u64 {
        let c_inv = pow_mod(self.c, self.p - 2, self.p);
        mul_mod((y + self.p - self.d) % self.p, c_inv, self.p)
    }
}

/// Seeded form of [`PermHash::sample`].
pub fn sample_perm_hash(p: u64, seed: u64) -> Result<PermHash> {
    PermHash::sample(p, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Pairwise-independent hash into `buckets` slots: `((a x + b) mod 2^61-1) mod buckets`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BucketHash {
    a: u64,
    b: u64,
    buckets: usize,
}

impl BucketHash {
    pub fn sample<R: Rng + ?Sized>(buckets: usize, rng: &mut R) -> Self {
        assert!(buckets > 0, "bucket count must be positive");
        BucketHash {
            a: rng.random_range(1..MERSENNE_61),
            b: rng.random_range(0..MERSENNE_61),
            buckets,
        }
    }

    pub fn buckets(&self) -> usize {
        self.buckets
    }

    #[inline]
    pub fn bucket(&self, x: u64) -> usize {
        let x = x % MERSENNE_61;
        let h = (mul_mod(self.a, x, MERSENNE_61) + self.b) % MERSENNE_61;
        (h % self.buckets as u64) as usize
    }
}

/// SplitMix64 finalizer keyed by `seed`; a bijection on `u64` for each seed.
#[inline]
pub fn mix64(x: u64, seed: u64) -> u64 {
    let mut z = x.wrapping_add(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slow_is_prime(n: u64) -> bool {
        n >= 2
            && (2..n)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000 {
            assert_eq!(is_prime(n), slow_is_prime(n), "n = {n}");
        }
        assert!(is_prime(MERSENNE_61));
        assert!(!is_prime(MERSENNE_61 - 2));
    }

    #[test]
    fn primes_one_mod_four() {
        // 7..=12 contain no prime congruent to 1 mod 4
        assert!((7..13).all(|n| !(n % 4 == 1 && slow_is_prime(n))));
        assert_eq!(next_prime_1mod4(7).unwrap(), 13);
        assert_eq!(next_prime_1mod4(13).unwrap(), 13);
        assert_eq!(next_prime_1mod4(14).unwrap(), 17);
        assert!(next_prime_1mod4(6).is_err());
        for n in 7..3000 {
            let p = next_prime_1mod4(n).unwrap();
            assert!(p <= 2 * n);
        }
    }

    #[test]
    fn perm_hash_examples() {
        let h = PermHash::new(5, 2, 3).unwrap();
        let image: Vec<_> = (0..5).map(|x| h.eval(x)).collect();
        assert_eq!(image, vec![3, 0, 2, 4, 1]);
        let id = PermHash::new(7, 1, 0).unwrap();
        assert!((0..7).all(|x| id.eval(x) == x));
        assert!(PermHash::new(7, 0, 0).is_err());
        assert!(PermHash::new(8, 1, 0).is_err());
    }

    #[test]
    fn inverse_undoes_eval() {
        let h = PermHash::new(101, 37, 5).unwrap();
        for x in 0..101 {
            assert_eq!(h.invert(h.eval(x)), x);
        }
    }

    #[test]
    fn bijective_for_every_seed() {
        for p in (2..=101).filter(|&p| is_prime(p)) {
            for c in 1..p {
                for d in 0..p {
                    let h = PermHash::new(p, c, d).unwrap();
                    let mut seen = vec![false; p as usize];
                    for x in 0..p {
                        seen[h.eval(x) as usize] = true;
                    }
                    assert!(seen.iter().all(|&s| s), "p={p} c={c} d={d}");
                }
            }
        }
    }

    #[test]
    fn pairwise_uniform_p7() {
        let (x1, x2) = (2, 5);
        let mut counts = std::collections::HashMap::new();
        for c in 1..7 {
            for d in 0..7 {
                let h = PermHash::new(7, c, d).unwrap();
                *counts.entry((h.eval(x1), h.eval(x2))).or_insert(0) += 1;
            }
        }
        assert_eq!(counts.len(), 42);
        assert!(counts.values().all(|&v| v == 1));
        assert!(counts.keys().all(|(a, b)| a != b));
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let a = sample_perm_hash(101, 9).unwrap();
        assert_eq!(a, sample_perm_hash(101, 9).unwrap());
        for seed in 0..500 {
            assert_ne!(sample_perm_hash(101, seed).unwrap().multiplier(), 0);
        }
    }

    #[test]
    fn bucket_hash_stays_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = BucketHash::sample(10, &mut rng);
        assert!((0..10_000).all(|x| h.bucket(x) < 10));
    }

    #[test]
    fn mix64_is_injective_on_a_range() {
        let mut v: Vec<_> = (0..100_000u64).map(|x| mix64(x, 17)).collect();
        v.sort_unstable();
        v.dedup();
        assert_eq!(v.len(), 100_000);
    }
}
