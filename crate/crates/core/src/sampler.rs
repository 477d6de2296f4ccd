//! Expander-walk subsampling of dense streams.
//!
//! Before the stream, a random walk `w_1, ..., w_t` is drawn on a strongly
//! explicit expander whose vertices cover the element universe. During the
//! stream every walk position keeps the net multiplicity of its vertex;
//! updates are processed in chunks of `z = ⌈t / log2 M⌉`, hashed into `2z`
//! buckets (insertions and deletions separately) so each chunk costs one scan
//! of the walk. After the stream, `σ` holds `max(c_j, 0)` copies of each `w_j`
//! and the mean of any `f : [N] -> [0,1]` over the stream multiset is
//! estimated as `M / (t |stream|) * Σ_{i ∈ σ} f(i)`.
//!
//! The expander is the Margulis-Gabber-Galil graph on `Z_s × Z_s`: vertex
//! `(x, y)` is adjacent to `(x ± 2y, y)`, `(x ± (2y+1), y)`, `(x, y ± 2x)` and
//! `(x, y ± (2x+1))`. It is 8-regular with every nontrivial normalized
//! eigenvalue at most `5√2/8` in absolute value. A target bound `λ` is reached
//! by powering: one logical step is `r` base steps with `(5√2/8)^r <= λ`.
//! The universe `[N]` is padded to `M = s²` vertices; padded vertices never
//! occur in a stream, and the estimator uses `M` so that walk uniformity and
//! the normalization agree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hashing::BucketHash;

/// Proven spectral bound of the base 8-regular graph.
pub const BASE_LAMBDA: f64 = 0.883_883_476_483_184_4; // 5 * sqrt(2) / 8
pub const BASE_DEGREE: usize = 8;
/// Default multiplicity cap `B` (one byte per counter).
pub const DEFAULT_MULTIPLICITY_CAP: i64 = 255;
/// Largest walk kept in memory (two words per position).
pub const MAX_WALK_LEN: usize = 1 << 27;

/// Strongly explicit `(M, 8^r, λ0^r)` graph over a padded element universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpanderGraph {
    universe: u64,
    side: u64,
    power: usize,
}

impl ExpanderGraph {
    /// Smallest square `M = s² >= N`, powered until `λ0^r <= lambda`.
    pub fn build(universe: u64, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::param("lambda", format!("{lambda} not in (0, 1)")));
        }
        if universe == 0 {
            return Err(Error::param("universe", "must be nonempty"));
        }
        let mut power = 1;
        while BASE_LAMBDA.powi(power as i32) > lambda {
            power += 1;
        }
        Ok(ExpanderGraph {
            universe,
            side: ceil_sqrt(universe),
            power,
        })
    }

    /// The unpowered base graph over `N` elements.
    pub fn base(universe: u64) -> Result<Self> {
        Self::build(universe, BASE_LAMBDA)
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    /// Padded vertex count `M`.
    pub fn vertices(&self) -> u64 {
        self.side * self.side
    }

    pub fn power(&self) -> usize {
        self.power
    }

    /// Degree of one logical step, `8^r`, when it fits in a `u128`.
    pub fn degree(&self) -> Option<u128> {
        (BASE_DEGREE as u128).checked_pow(self.power as u32)
    }

    /// Documented spectral bound `λ0^r`.
    pub fn lambda_bound(&self) -> f64 {
        BASE_LAMBDA.powi(self.power as i32)
    }

    /// `i`-th neighbor of `v` in the base graph, `i < 8`.
    #[inline]
    pub fn base_neighbor(&self, v: u64, i: u8) -> u64 {
        let s = self.side;
        let (x, y) = (v / s, v % s);
        let (tx, ty) = ((2 * x) % s, (2 * y) % s);
        let (nx, ny) = match i {
            0 => ((x + ty) % s, y),
            1 => ((x + s - ty) % s, y),
            2 => ((x + ty + 1) % s, y),
            3 => ((x + 2 * s - ty - 1) % s, y),
            4 => (x, (y + tx) % s),
            5 => (x, (y + s - tx) % s),
            6 => (x, (y + tx + 1) % s),
            7 => (x, (y + 2 * s - tx - 1) % s),
            _ => panic!("base neighbor index {i} out of range"),
        };
        nx * s + ny
    }

    /// Neighbor of `v` along one logical step given as `r` base-8 digits.
    pub fn neighbor(&self, v: u64, digits: &[u8]) -> u64 {
        debug_assert_eq!(digits.len(), self.power);
        digits.iter().fold(v, |w, &d| self.base_neighbor(w, d))
    }

    /// Power-iteration estimate of the largest nontrivial normalized eigenvalue
    /// magnitude of the base graph.
    pub fn base_second_eigenvalue(&self, iterations: usize, seed: u64) -> f64 {
        let m = self.vertices() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<f64> = (0..m).map(|_| rng.random::<f64>() - 0.5).collect();
        let apply = |x: &[f64]| -> Vec<f64> {
            (0..m)
                .map(|u| {
                    (0..8u8)
                        .map(|i| x[self.base_neighbor(u as u64, i) as usize])
                        .sum::<f64>()
                        / 8.0
                })
                .collect()
        };
        let center = |x: &mut [f64]| {
            let mean = x.iter().sum::<f64>() / x.len() as f64;
            x.iter_mut().for_each(|a| *a -= mean);
        };
        let norm = |x: &[f64]| x.iter().map(|a| a * a).sum::<f64>().sqrt();
        let mut estimate = 0.0;
        for _ in 0..iterations {
            center(&mut v);
            let nv = norm(&v);
            if nv == 0.0 {
                return 0.0;
            }
            v.iter_mut().for_each(|a| *a /= nv);
            // the operator is symmetric, so iterate its square to capture ±λ
            let av = apply(&v);
            estimate = norm(&av);
            v = apply(&av);
        }
        estimate
    }
}

fn ceil_sqrt(n: u64) -> u64 {
    let mut s = (n as f64).sqrt() as u64;
    while s * s < n {
        s += 1;
    }
    while s > 1 && (s - 1) * (s - 1) >= n {
        s -= 1;
    }
    s.max(1)
}

/// A signed stream update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Update {
    pub element: u64,
    pub insert: bool,
}

impl Update {
    pub fn insert(element: u64) -> Self {
        Update {
            element,
            insert: true,
        }
    }

    pub fn delete(element: u64) -> Self {
        Update {
            element,
            insert: false,
        }
    }
}

/// Walk plus per-position counters, updated during the stream.
#[derive(Debug, Clone)]
pub struct WalkSample {
    graph: ExpanderGraph,
    seed: Option<u64>,
    positions: Vec<u64>,
    counters: Vec<i64>,
    stream_size: i64,
    cap: i64,
    chunk: usize,
    pending: Vec<Update>,
    insert_hash: BucketHash,
    delete_hash: BucketHash,
}

impl WalkSample {
    /// Uniform start vertex and `t - 1` uniform logical steps, all from `seed`.
    pub fn new(graph: ExpanderGraph, t: usize, seed: u64) -> Result<Self> {
        if t == 0 {
            return Err(Error::param("t", "walk length must be at least 1"));
        }
        if t > MAX_WALK_LEN {
            return Err(Error::CapExceeded {
                what: "walk length t",
                got: t as u64,
                cap: MAX_WALK_LEN as u64,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = rng.random_range(0..graph.vertices());
        let mut positions = Vec::with_capacity(t);
        positions.push(v);
        for _ in 1..t {
            for _ in 0..graph.power {
                v = graph.base_neighbor(v, rng.random_range(0..BASE_DEGREE as u8));
            }
            positions.push(v);
        }
        Ok(Self::with_positions(graph, Some(seed), positions, &mut rng))
    }

    /// Visits every vertex once (`t = M`). Used to check the estimator without
    /// sampling error.
    pub fn exhaustive(graph: ExpanderGraph) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let positions: Vec<u64> = (0..graph.vertices()).collect();
        Self::with_positions(graph, None, positions, &mut rng)
    }

    fn with_positions(
        graph: ExpanderGraph,
        seed: Option<u64>,
        positions: Vec<u64>,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let t = positions.len();
        let log_m = (graph.vertices() as f64).log2().max(1.0);
        let chunk = ((t as f64 / log_m).ceil() as usize).max(1);
        WalkSample {
            graph,
            seed,
            counters: vec![0; t],
            positions,
            stream_size: 0,
            cap: DEFAULT_MULTIPLICITY_CAP,
            chunk,
            pending: Vec::with_capacity(chunk),
            insert_hash: BucketHash::sample(2 * chunk, rng),
            delete_hash: BucketHash::sample(2 * chunk, rng),
        }
    }

    pub fn with_multiplicity_cap(mut self, cap: i64) -> Self {
        self.cap = cap;
        self
    }

    pub fn graph(&self) -> &ExpanderGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn start(&self) -> u64 {
        self.positions[0]
    }

    /// The implicit representation: `t - 1` logical steps of `r` base digits
    /// each, replayed from the seed. Empty for an exhaustive sample.
    pub fn steps(&self) -> Vec<Vec<u8>> {
        let Some(seed) = self.seed else {
            return Vec::new();
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let _start: u64 = rng.random_range(0..self.graph.vertices());
        (1..self.positions.len())
            .map(|_| {
                (0..self.graph.power)
                    .map(|_| rng.random_range(0..BASE_DEGREE as u8))
                    .collect()
            })
            .collect()
    }

    pub fn positions(&self) -> &[u64] {
        &self.positions
    }

    pub fn counters(&self) -> &[i64] {
        &self.counters
    }

    /// Net stream size `c_s` (insertions minus deletions).
    pub fn stream_size(&self) -> i64 {
        self.stream_size
    }

    pub fn chunk_size(&self) -> usize {
        self.chunk
    }

    /// Buffers one update, flushing a full chunk.
    pub fn push(&mut self, update: Update) -> Result<()> {
        self.check(update.element)?;
        self.pending.push(update);
        if self.pending.len() >= self.chunk {
            let chunk = std::mem::take(&mut self.pending);
            self.apply_chunk(&chunk)?;
            self.pending = chunk;
            self.pending.clear();
        }
        Ok(())
    }

    fn check(&self, element: u64) -> Result<()> {
        if element >= self.graph.universe {
            return Err(Error::OutOfUniverse {
                element,
                size: self.graph.universe,
            });
        }
        Ok(())
    }

    /// Applies a batch of updates: every walk position's counter moves by the
    /// net multiplicity of its vertex in the batch.
    pub fn process_chunk(&mut self, updates: &[Update]) -> Result<()> {
        for u in updates {
            self.check(u.element)?;
        }
        self.apply_chunk(updates)
    }

    fn apply_chunk(&mut self, updates: &[Update]) -> Result<()> {
        if updates.is_empty() {
            return Ok(());
        }
        let buckets = self.insert_hash.buckets();
        let mut inserted: Vec<Vec<u64>> = vec![Vec::new(); buckets];
        let mut deleted: Vec<Vec<u64>> = vec![Vec::new(); buckets];
        for u in updates {
            if u.insert {
                self.stream_size += 1;
                inserted[self.insert_hash.bucket(u.element)].push(u.element);
            } else {
                self.stream_size -= 1;
                deleted[self.delete_hash.bucket(u.element)].push(u.element);
            }
        }
        for (j, &w) in self.positions.iter().enumerate() {
            let added = inserted[self.insert_hash.bucket(w)]
                .iter()
                .filter(|&&e| e == w)
                .count() as i64;
            let removed = deleted[self.delete_hash.bucket(w)]
                .iter()
                .filter(|&&e| e == w)
                .count() as i64;
            let c = self.counters[j] + added - removed;
            if c > self.cap {
                return Err(Error::MultiplicityExceeded {
                    element: w,
                    count: c,
                    cap: self.cap,
                });
            }
            self.counters[j] = c;
        }
        Ok(())
    }

    /// Flushes buffered updates and freezes the sample.
    pub fn finish(mut self) -> Result<Sigma> {
        let chunk = std::mem::take(&mut self.pending);
        self.apply_chunk(&chunk)?;
        let mut merged = std::collections::BTreeMap::new();
        for (&w, &c) in self.positions.iter().zip(&self.counters) {
            if c > 0 {
                *merged.entry(w).or_insert(0u64) += c as u64;
            }
        }
        let copies = merged.into_iter().collect();
        Ok(Sigma {
            copies,
            walk_len: self.positions.len(),
            stream_size: self.stream_size,
            vertices: self.graph.vertices(),
        })
    }
}

/// Frozen sample `σ`: `(element, copies)` pairs with positive counts, sorted by element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sigma {
    copies: Vec<(u64, u64)>,
    walk_len: usize,
    stream_size: i64,
    vertices: u64,
}

impl Sigma {
    pub fn copies(&self) -> &[(u64, u64)] {
        &self.copies
    }

    pub fn size(&self) -> u64 {
        self.copies.iter().map(|&(_, c)| c).sum()
    }

    pub fn stream_size(&self) -> i64 {
        self.stream_size
    }

    pub fn walk_len(&self) -> usize {
        self.walk_len
    }

    /// Weight `M / (t |stream|)` carried by each copy in `σ`.
    pub fn copy_weight(&self) -> Result<f64> {
        if self.stream_size <= 0 {
            return Err(Error::Undefined("mean over an empty stream".into()));
        }
        Ok(self.vertices as f64 / (self.walk_len as f64 * self.stream_size as f64))
    }

    /// `μ̂(f) = M / (t |stream|) * Σ_{i ∈ σ} f(i)`.
    pub fn estimate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(u64) -> f64,
    {
        let weight = self.copy_weight()?;
        let total: f64 = self.copies.iter().map(|&(w, c)| c as f64 * f(w)).sum();
        Ok(weight * total)
    }
}

/// Builds the expander for `(N, λ)`, draws a length-`t` walk, and feeds `stream`.
pub fn subsample_stream<I>(
    universe: u64,
    t: usize,
    lambda: f64,
    seed: u64,
    stream: I,
) -> Result<Sigma>
where
    I: IntoIterator<Item = Update>,
{
    let graph = ExpanderGraph::build(universe, lambda)?;
    let mut walk = WalkSample::new(graph, t, seed)?;
    for u in stream {
        walk.push(u)?;
    }
    walk.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_examples() {
        let g = ExpanderGraph::build(10, BASE_LAMBDA).unwrap();
        assert_eq!(g.power(), 1);
        assert_eq!(g.degree(), Some(8));
        assert_eq!(g.vertices(), 16);
        assert_eq!(ExpanderGraph::build(16, 0.5).unwrap().vertices(), 16);
        assert_eq!(ExpanderGraph::build(17, 0.5).unwrap().vertices(), 25);
        assert!(ExpanderGraph::build(10, 0.0).is_err());
        assert!(ExpanderGraph::build(10, 1.0).is_err());
        let g = ExpanderGraph::build(400, 0.02).unwrap();
        assert!(g.lambda_bound() <= 0.02);
        assert!(BASE_LAMBDA.powi(g.power() as i32 - 1) > 0.02);
    }

    #[test]
    fn base_lambda_constant() {
        assert!((BASE_LAMBDA - 5.0 * 2f64.sqrt() / 8.0).abs() < 1e-15);
    }

    #[test]
    fn neighbors_are_symmetric() {
        // maps come in inverse pairs (0,1), (2,3), (4,5), (6,7)
        let g = ExpanderGraph::base(49).unwrap();
        for v in 0..g.vertices() {
            for i in 0..8u8 {
                let w = g.base_neighbor(v, i);
                assert!(w < g.vertices());
                assert_eq!(g.base_neighbor(w, i ^ 1), v);
            }
        }
    }

    #[test]
    fn single_vertex_walk() {
        let g = ExpanderGraph::base(16).unwrap();
        let w = WalkSample::new(g, 1, 3).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w.steps().is_empty());
        assert!(WalkSample::new(g, 0, 3).is_err());
    }

    #[test]
    fn walk_stays_in_range_and_replays() {
        let g = ExpanderGraph::build(100, 0.3).unwrap();
        let w = WalkSample::new(g, 500, 8).unwrap();
        assert!(w.positions().iter().all(|&p| p < g.vertices()));
        let mut v = w.start();
        for (step, &p) in w.steps().iter().zip(&w.positions()[1..]) {
            v = g.neighbor(v, step);
            assert_eq!(v, p);
        }
        assert_eq!(
            w.positions(),
            WalkSample::new(g, 500, 8).unwrap().positions()
        );
    }

    #[test]
    fn chunk_without_walk_vertices_is_noop() {
        let g = ExpanderGraph::base(10_000).unwrap();
        let mut w = WalkSample::new(g, 20, 5).unwrap();
        let absent = (0..10_000).find(|e| !w.positions().contains(e)).unwrap();
        w.process_chunk(&[Update::insert(absent), Update::insert(absent)])
            .unwrap();
        assert!(w.counters().iter().all(|&c| c == 0));
        assert_eq!(w.stream_size(), 2);
    }

    #[test]
    fn repeated_walk_vertex_counts_multiplicity() {
        let g = ExpanderGraph::base(10_000).unwrap();
        let mut w = WalkSample::new(g, 20, 5).unwrap();
        let w3 = w.positions()[2];
        let before = w.counters()[2];
        w.process_chunk(&[Update::insert(w3), Update::insert(w3)])
            .unwrap();
        assert_eq!(w.counters()[2], before + 2);
        w.process_chunk(&[Update::delete(w3)]).unwrap();
        assert_eq!(w.counters()[2], before + 1);
    }

    #[test]
    fn multiplicity_cap_enforced() {
        let g = ExpanderGraph::base(16).unwrap();
        let mut w = WalkSample::new(g, 4, 1).unwrap().with_multiplicity_cap(2);
        let v = w.positions()[0];
        let err = w.process_chunk(&[Update::insert(v); 3]).unwrap_err();
        assert!(matches!(err, Error::MultiplicityExceeded { .. }));
    }

    #[test]
    fn out_of_universe_rejected() {
        let g = ExpanderGraph::base(10).unwrap();
        let mut w = WalkSample::new(g, 4, 1).unwrap();
        // 12 is a padded vertex, not an element
        assert!(w.push(Update::insert(12)).is_err());
    }

    #[test]
    fn estimator_edge_cases() {
        let g = ExpanderGraph::base(16).unwrap();
        let mut w = WalkSample::exhaustive(g);
        for e in 0..16 {
            w.push(Update::insert(e)).unwrap();
        }
        let sigma = w.finish().unwrap();
        assert_eq!(sigma.estimate(|_| 0.0).unwrap(), 0.0);
        assert_eq!(sigma.estimate(|_| 1.0).unwrap(), 1.0);

        let empty = WalkSample::new(g, 10, 2).unwrap().finish().unwrap();
        assert!(matches!(empty.estimate(|_| 1.0), Err(Error::Undefined(_))));
    }
}
