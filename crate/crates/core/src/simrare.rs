//! Jaccard similarity and `k`-rarity.
//!
//! [`SimF0`] runs three distinct-count sketches and combines them by
//! inclusion-exclusion; it needs no density assumption. [`SimWindow`] and
//! [`RareWindow`] hash the padded prime universe with a random affine
//! permutation and keep exact state for the elements landing in the window
//! `h(w) < t`, which is accurate when the stream touches an `α` fraction of
//! the universe.

use crate::error::{Error, Result};
use crate::f0::{F0Params, F0Sketch};
use crate::hashing::{mix64, next_prime, sample_perm_hash, PermHash};

/// Failure probability of each of the three sketches in [`SimF0`].
pub const SIM_F0_DELTA: f64 = 1.0 / 9.0;

/// Three sketches over `A`, `B` and `A ∪ B`, each at relative error `ε/4`.
#[derive(Debug, Clone)]
pub struct SimF0 {
    a: F0Sketch,
    b: F0Sketch,
    union: F0Sketch,
}

impl SimF0 {
    pub fn new(universe: u64, eps: f64, seed: u64) -> Result<Self> {
        let params = F0Params::new(eps / 4.0, SIM_F0_DELTA, universe)?;
        Ok(SimF0 {
            a: F0Sketch::new(params, mix64(1, seed)),
            b: F0Sketch::new(params, mix64(2, seed)),
            union: F0Sketch::new(params, mix64(3, seed)),
        })
    }

    pub fn insert_a(&mut self, w: u64) -> Result<()> {
        self.a.insert(w)?;
        self.union.insert(w)
    }

    pub fn insert_b(&mut self, w: u64) -> Result<()> {
        self.b.insert(w)?;
        self.union.insert(w)
    }

    /// `(F̂_A + F̂_B - F̂_{A∪B}) / F̂_{A∪B}`.
    pub fn estimate(&self) -> Result<f64> {
        let u = self.union.estimate();
        if u <= 0.0 {
            return Err(Error::Undefined("similarity of two empty sets".into()));
        }
        Ok((self.a.estimate() + self.b.estimate() - u) / u)
    }

    /// Whether all three sketches still hold exact distinct counts.
    pub fn is_exact(&self) -> bool {
        self.a.is_exact() && self.b.is_exact() && self.union.is_exact()
    }
}

/// One-shot [`SimF0`] over two element lists.
pub fn similarity_f0(a: &[u64], b: &[u64], universe: u64, eps: f64, seed: u64) -> Result<f64> {
    let mut sim = SimF0::new(universe, eps, seed)?;
    for &w in a {
        sim.insert_a(w)?;
    }
    for &w in b {
        sim.insert_b(w)?;
    }
    sim.estimate()
}

fn check_eps_alpha(eps: f64, alpha: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param("eps", format!("{eps} is outside (0, 1)")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::param("alpha", format!("{alpha} is outside (0, 1]")));
    }
    Ok(())
}

/// Window size `⌈1 / (10 δ² α)⌉` with `δ = ε/3`.
pub fn window_size(eps: f64, alpha: f64) -> Result<u64> {
    check_eps_alpha(eps, alpha)?;
    let delta = eps / 3.0;
    let t = 1.0 / (10.0 * delta * delta * alpha);
    // absorb rounding so that exact integers are not pushed up by one
    Ok((t * (1.0 - 1e-12)).ceil() as u64)
}

/// Hash and window shared by both window algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Window {
    universe: u64,
    hash: PermHash,
    t: u64,
}

impl Window {
    fn new(universe: u64, t: u64, seed: u64) -> Result<Self> {
        if universe == 0 {
            return Err(Error::param("universe", "must be positive"));
        }
        if t == 0 {
            return Err(Error::param("t", "window must be nonempty"));
        }
        let p = next_prime(universe.max(2));
        let hash = sample_perm_hash(p, seed)?;
        Ok(Window {
            universe,
            hash,
            t: t.min(p),
        })
    }

    fn slot(&self, w: u64) -> Result<Option<usize>> {
        if w >= self.universe {
            return Err(Error::OutOfUniverse {
                element: w,
                size: self.universe,
            });
        }
        let y = self.hash.eval(w);
        Ok((y < self.t).then_some(y as usize))
    }
}

/// Bit arrays `a`, `b` over the window `[0, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimWindow {
    window: Window,
    a: Vec<bool>,
    b: Vec<bool>,
}

impl SimWindow {
    pub fn new(universe: u64, eps: f64, alpha: f64, seed: u64) -> Result<Self> {
        Self::with_window(universe, window_size(eps, alpha)?, seed)
    }

    /// Explicit window size, clamped to the padded prime. `t = u64::MAX`
    /// covers the whole universe.
    pub fn with_window(universe: u64, t: u64, seed: u64) -> Result<Self> {
        let window = Window::new(universe, t, seed)?;
        let len = window.t as usize;
        Ok(SimWindow {
            window,
            a: vec![false; len],
            b: vec![false; len],
        })
    }

    pub fn modulus(&self) -> u64 {
        self.window.hash.modulus()
    }

    pub fn window(&self) -> u64 {
        self.window.t
    }

    pub fn hash(&self) -> PermHash {
        self.window.hash
    }

    pub fn insert_a(&mut self, w: u64) -> Result<()> {
        if let Some(i) = self.window.slot(w)? {
            self.a[i] = true;
        }
        Ok(())
    }

    pub fn insert_b(&mut self, w: u64) -> Result<()> {
        if let Some(i) = self.window.slot(w)? {
            self.b[i] = true;
        }
        Ok(())
    }

    /// `(X_∩, X_∪)`.
    pub fn counts(&self) -> (u64, u64) {
        self.a.iter().zip(&self.b).fold((0, 0), |(i, u), (&x, &y)| {
            (i + u64::from(x && y), u + u64::from(x || y))
        })
    }

    /// `X_∩ / X_∪`.
    pub fn estimate(&self) -> Result<f64> {
        let (inter, union) = self.counts();
        if union == 0 {
            return Err(Error::Undefined(
                "no element of A ∪ B landed in the window".into(),
            ));
        }
        Ok(inter as f64 / union as f64)
    }
}

/// One-shot [`SimWindow`] over two element lists.
pub fn similarity_perm(
    a: &[u64],
    b: &[u64],
    universe: u64,
    eps: f64,
    alpha: f64,
    seed: u64,
) -> Result<f64> {
    let mut sim = SimWindow::new(universe, eps, alpha, seed)?;
    for &w in a {
        sim.insert_a(w)?;
    }
    for &w in b {
        sim.insert_b(w)?;
    }
    sim.estimate()
}

/// Counters `a_i ∈ [0, k+1]` saturating at `k + 1`, and presence bits `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RareWindow {
    window: Window,
    k: u32,
    counters: Vec<u32>,
    present: Vec<bool>,
}

impl RareWindow {
    pub fn new(universe: u64, k: u32, eps: f64, alpha: f64, seed: u64) -> Result<Self> {
        Self::with_window(universe, k, window_size(eps, alpha)?, seed)
    }

    pub fn with_window(universe: u64, k: u32, t: u64, seed: u64) -> Result<Self> {
        if k == 0 || k == u32::MAX {
            return Err(Error::param("k", format!("{k} is outside [1, 2^32 - 2]")));
        }
        let window = Window::new(universe, t, seed)?;
        let len = window.t as usize;
        Ok(RareWindow {
            window,
            k,
            counters: vec![0; len],
            present: vec![false; len],
        })
    }

    pub fn modulus(&self) -> u64 {
        self.window.hash.modulus()
    }

    pub fn window(&self) -> u64 {
        self.window.t
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn insert(&mut self, w: u64) -> Result<()> {
        if let Some(i) = self.window.slot(w)? {
            if self.counters[i] <= self.k {
                self.counters[i] += 1;
            }
            self.present[i] = true;
        }
        Ok(())
    }

    /// `(X_k, X)`.
    pub fn counts(&self) -> (u64, u64) {
        let xk = self.counters.iter().filter(|&&c| c == self.k).count() as u64;
        let x = self.present.iter().filter(|&&b| b).count() as u64;
        (xk, x)
    }

    /// `X_k / X`.
    pub fn estimate(&self) -> Result<f64> {
        let (xk, x) = self.counts();
        if x == 0 {
            return Err(Error::Undefined(
                "no stream element landed in the window".into(),
            ));
        }
        Ok(xk as f64 / x as f64)
    }
}

/// One-shot [`RareWindow`] over an element stream.
pub fn rarity_perm(
    stream: &[u64],
    universe: u64,
    k: u32,
    eps: f64,
    alpha: f64,
    seed: u64,
) -> Result<f64> {
    let mut rare = RareWindow::new(universe, k, eps, alpha, seed)?;
    for &w in stream {
        rare.insert(w)?;
    }
    rare.estimate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sketch_similarity_examples() {
        assert_eq!(
            similarity_f0(&[1, 2, 3], &[2, 3, 4], 10, 0.1, 0).unwrap(),
            0.5
        );
        assert_eq!(similarity_f0(&[1, 2], &[1, 2], 10, 0.1, 0).unwrap(), 1.0);
        assert_eq!(similarity_f0(&[1, 2], &[3], 10, 0.1, 0).unwrap(), 0.0);
        assert!(similarity_f0(&[], &[], 10, 0.1, 0).is_err());
    }

    #[test]
    fn full_window_is_exact() {
        for seed in 0..10 {
            let mut sim = SimWindow::with_window(20, u64::MAX, seed).unwrap();
            assert_eq!(sim.modulus(), 23);
            assert_eq!(sim.window(), 23);
            for w in [1, 2, 3, 3] {
                sim.insert_a(w).unwrap();
            }
            for w in [2, 3, 4] {
                sim.insert_b(w).unwrap();
            }
            assert_eq!(sim.estimate().unwrap(), 0.5);
        }
    }

    #[test]
    fn rarity_examples() {
        let stream = [1, 1, 2, 3, 3, 3];
        let mut r = RareWindow::with_window(10, 2, u64::MAX, 7).unwrap();
        for w in stream {
            r.insert(w).unwrap();
        }
        assert_eq!(r.counts(), (1, 3));
        let mut r = RareWindow::with_window(10, 9, u64::MAX, 7).unwrap();
        for w in stream {
            r.insert(w).unwrap();
        }
        assert_eq!(r.estimate().unwrap(), 0.0);
    }

    #[test]
    fn saturated_counters_do_not_count() {
        let mut r = RareWindow::with_window(5, 2, u64::MAX, 1).unwrap();
        for _ in 0..7 {
            r.insert(4).unwrap();
        }
        assert_eq!(r.counts(), (0, 1));
    }

    #[test]
    fn window_sizes() {
        // δ = 0.05, t = 1 / (10 · 0.0025 · 0.5) = 80
        assert_eq!(window_size(0.15, 0.5).unwrap(), 80);
        assert!(window_size(0.0, 0.5).is_err());
    }
}
