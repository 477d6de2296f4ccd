//! Random hard families: `G_RR(n, k)`, unions of random perfect matchings,
//! random `k`-regular graphs, and the deletion-method filter.

use std::collections::HashMap;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::BipartiteInstance;
use crate::error::{Error, Result};
use crate::universe::Graph;

/// Constants of the hard-family construction at a given `(n, k)`.
///
/// `c_size`, `c_stretch` and `eps0` are existence constants without finite
/// values in the construction; their defaults are placeholders for
/// experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardFamilyParams {
    pub n: usize,
    pub k: usize,
    pub eta_near: f64,
    pub eta_tail: f64,
    pub c_deg: f64,
    pub c_size: f64,
    pub c_stretch: f64,
    /// Slack threshold `τ`, by default `n √k / 2000`.
    pub tau: f64,
    pub c_den: f64,
    pub rho: f64,
    pub eps0: f64,
}

impl HardFamilyParams {
    pub fn new(n: usize, k: usize) -> Self {
        HardFamilyParams {
            n,
            k,
            eta_near: 1e-8,
            eta_tail: 1.0 / 8000.0,
            c_deg: 10.0,
            c_size: 0.01,
            c_stretch: 1.0,
            tau: n as f64 * (k as f64).sqrt() / 2000.0,
            c_den: 1e6,
            rho: 1e-6,
            eps0: 1e-12,
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    /// `n >= C_stretch · k`.
    pub fn in_regime(&self) -> bool {
        self.n as f64 >= self.c_stretch * self.k as f64
    }
}

/// Regularity parameter `k = ⌊1 / (10^5 C_den ε)^2⌋`.
pub fn k_for_eps(eps: f64, c_den: f64) -> u64 {
    let r = 1.0 / (1e5 * c_den * eps);
    (r * r).floor() as u64
}

/// `G_RR(n, k)`: every right vertex independently picks a uniform `k`-subset
/// of the `n` left vertices.
pub fn grr_sample(n: usize, k: usize, seed: u64) -> Result<BipartiteInstance> {
    if k > n {
        return Err(Error::param("k", format!("{k} exceeds n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(n * k);
    for v in 0..n {
        let mut chosen = index::sample(&mut rng, n, k).into_vec();
        chosen.sort_unstable();
        edges.extend(chosen.into_iter().map(|u| (u, v)));
    }
    BipartiteInstance::new(n, n, edges)
}

/// Union of `k` independent uniform perfect matchings between two sides of
/// size `n`, kept as a multigraph.
pub fn matching_union_sample(n: usize, k: usize, seed: u64) -> Result<BipartiteInstance> {
    if k > n {
        return Err(Error::param("k", format!("{k} exceeds n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    let mut edges = Vec::with_capacity(n * k);
    for _ in 0..k {
        perm.shuffle(&mut rng);
        edges.extend(perm.iter().enumerate().map(|(u, &v)| (u, v)));
    }
    BipartiteInstance::new(n, n, edges)
}

/// Uniform simple `k`-regular graph on `n` vertices by the pairing model with
/// rejection of loops and repeated pairs.
pub fn random_regular_graph(n: usize, k: usize, seed: u64) -> Result<Graph> {
    if k >= n || (n * k) % 2 == 1 {
        return Err(Error::param(
            "k",
            format!("no simple {k}-regular graph on {n} vertices"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    'attempt: for _ in 0..100_000 {
        points.shuffle(&mut rng);
        let mut g = Graph::empty(n)?;
        for pair in points.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || g.has_edge(u, v) {
                continue 'attempt;
            }
            g.add_edge(u, v)?;
        }
        return Ok(g);
    }
    Err(Error::Undefined(format!(
        "pairing model found no simple {k}-regular graph on {n} vertices"
    )))
}

/// `|E(G1) ∩ E(G2)|` as multisets.
pub fn edge_overlap(g1: &BipartiteInstance, g2: &BipartiteInstance) -> usize {
    let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
    for &e in g1.edges() {
        *counts.entry(e).or_default() += 1;
    }
    g2.edges()
        .iter()
        .filter(|e| match counts.get_mut(e) {
            Some(c) if *c > 0 => {
                *c -= 1;
                true
            }
            _ => false,
        })
        .count()
}

fn sum_sq_left_degree(g: &BipartiteInstance) -> f64 {
    g.left_degrees().iter().map(|&d| (d * d) as f64).sum()
}

fn tail_degree(g: &BipartiteInstance, threshold: usize) -> usize {
    g.left_degrees().iter().filter(|&&d| d > threshold).sum()
}

/// Survivors and violation counts of the deletion method.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FamilyFilter {
    /// Indices into the candidate list that satisfy every property.
    pub survivors: Vec<usize>,
    pub not_right_regular: Vec<usize>,
    pub degree_violations: Vec<usize>,
    pub tail_violations: Vec<usize>,
    /// Pairs among the individually valid graphs whose overlap is too large.
    pub overlap_pairs: usize,
    /// One graph removed per violating pair still alive.
    pub overlap_removed: Vec<usize>,
}

/// Drops graphs that are not `k`-right-regular, have `Σ deg_L² > C_deg n k²`
/// or `TailDeg(2k) > η_tail n √k`, then removes one graph of each pair with
/// overlap above `η_near n k`.
pub fn hard_family_filter(
    candidates: &[BipartiteInstance],
    params: &HardFamilyParams,
) -> FamilyFilter {
    let (n, k) = (params.n as f64, params.k as f64);
    let mut report = FamilyFilter::default();
    let mut alive = Vec::new();
    for (i, g) in candidates.iter().enumerate() {
        if !g.is_right_regular(params.k) {
            report.not_right_regular.push(i);
        } else if sum_sq_left_degree(g) > params.c_deg * n * k * k {
            report.degree_violations.push(i);
        } else if tail_degree(g, 2 * params.k) as f64 > params.eta_tail * n * k.sqrt() {
            report.tail_violations.push(i);
        } else {
            alive.push(i);
        }
    }
    let limit = params.eta_near * n * k;
    let mut removed = vec![false; candidates.len()];
    for a in 0..alive.len() {
        for b in a + 1..alive.len() {
            let (i, j) = (alive[a], alive[b]);
            if edge_overlap(&candidates[i], &candidates[j]) as f64 > limit {
                report.overlap_pairs += 1;
                if !removed[i] && !removed[j] {
                    removed[j] = true;
                    report.overlap_removed.push(j);
                }
            }
        }
    }
    report.survivors = alive.into_iter().filter(|&i| !removed[i]).collect();
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grr_is_right_regular_and_simple() {
        for seed in 0..20 {
            let g = grr_sample(12, 4, seed).unwrap();
            assert!(g.is_right_regular(4));
            assert!(g.is_simple());
            assert_eq!(g.edge_count(), 48);
        }
        assert!(grr_sample(3, 4, 0).is_err());
    }

    #[test]
    fn matching_unions_are_biregular() {
        let g = matching_union_sample(9, 1, 4).unwrap();
        assert!(g.is_biregular(1));
        assert!(g.is_simple());
        for seed in 0..20 {
            assert!(matching_union_sample(16, 4, seed).unwrap().is_biregular(4));
        }
    }

    #[test]
    fn regular_graphs() {
        for seed in 0..10 {
            let g = random_regular_graph(8, 3, seed).unwrap();
            assert_eq!(g.m_distinct(), 12);
            assert!((0..8).all(|v| g.neighbors(v).count_ones() == 3));
        }
        assert!(random_regular_graph(5, 3, 0).is_err());
    }

    #[test]
    fn overlap_counts_multiplicity() {
        let a = BipartiteInstance::new(2, 2, vec![(0, 0), (0, 0), (1, 1)]).unwrap();
        let b = BipartiteInstance::new(2, 2, vec![(0, 0), (1, 0)]).unwrap();
        assert_eq!(edge_overlap(&a, &b), 1);
        assert_eq!(edge_overlap(&a, &a), 3);
    }

    #[test]
    fn filter_removes_duplicates() {
        let g = grr_sample(40, 3, 1).unwrap();
        let params = HardFamilyParams {
            eta_tail: 1.0,
            ..HardFamilyParams::new(40, 3)
        };
        let report = hard_family_filter(
            &[g.clone(), g.clone(), grr_sample(40, 3, 2).unwrap()],
            &params,
        );
        assert!(report.overlap_pairs >= 1);
        assert!(report.overlap_removed.contains(&1));
        assert!(!report.survivors.contains(&1));
    }

    #[test]
    fn k_from_eps() {
        assert_eq!(k_for_eps(1e-12, 1e6), 100);
    }
}
