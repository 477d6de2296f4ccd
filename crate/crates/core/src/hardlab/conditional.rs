//! Conditional Max-Cut on a bipartite graph `L ⊔ R` with the left side fixed.

use super::{check_spins, sign, HalfInt};
use crate::error::{Error, Result};
use crate::universe::Graph;

/// Largest `|R|` for exhaustive right-assignment search.
pub const BRUTE_RIGHT_CAP: usize = 20;
/// [`check_shared_good`] also runs the exhaustive search up to this `|R|`.
pub const SHARED_GOOD_CROSSCHECK: usize = 12;
/// Largest knapsack table (conflict vertices × capacity) for the exact decision.
const KNAPSACK_CAP: u64 = 1 << 28;

/// Bipartite (multi)graph with left vertices `0..n_left` and right vertices
/// `0..n_right`; edges are `(left, right)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteInstance {
    n_left: usize,
    n_right: usize,
    edges: Vec<(usize, usize)>,
    right_nbrs: Vec<Vec<usize>>,
    left_deg: Vec<usize>,
}

impl BipartiteInstance {
    pub fn new(n_left: usize, n_right: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut right_nbrs = vec![Vec::new(); n_right];
        let mut left_deg = vec![0; n_left];
        for &(u, v) in &edges {
            if u >= n_left {
                return Err(Error::VertexOutOfRange {
                    vertex: u,
                    n: n_left,
                });
            }
            if v >= n_right {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: n_right,
                });
            }
            right_nbrs[v].push(u);
            left_deg[u] += 1;
        }
        Ok(BipartiteInstance {
            n_left,
            n_right,
            edges,
            right_nbrs,
            left_deg,
        })
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Left neighbors of right vertex `v`, with multiplicity.
    pub fn right_neighbors(&self, v: usize) -> &[usize] {
        &self.right_nbrs[v]
    }

    pub fn right_degree(&self, v: usize) -> usize {
        self.right_nbrs[v].len()
    }

    pub fn left_degrees(&self) -> &[usize] {
        &self.left_deg
    }

    pub fn is_simple(&self) -> bool {
        self.right_nbrs.iter().all(|nb| {
            let mut s = nb.clone();
            s.sort_unstable();
            s.windows(2).all(|w| w[0] != w[1])
        })
    }

    pub fn is_right_regular(&self, k: usize) -> bool {
        self.right_nbrs.iter().all(|nb| nb.len() == k)
    }

    /// Every vertex on both sides has degree `k`.
    pub fn is_biregular(&self, k: usize) -> bool {
        self.is_right_regular(k) && self.left_deg.iter().all(|&d| d == k)
    }

    /// The graph on `n_left + n_right` vertices, right vertex `v` renumbered
    /// to `n_left + v`.
    pub fn to_graph(&self) -> Result<Graph> {
        Graph::from_edges(
            self.n_left + self.n_right,
            self.edges.iter().map(|&(u, v)| (u, self.n_left + v)),
        )
    }
}

fn check_right(g: &BipartiteInstance, v: usize) -> Result<()> {
    if v >= g.n_right {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            n: g.n_right,
        });
    }
    Ok(())
}

/// `Disc(v) = Σ_{u ∈ N(v)} x_u`.
pub fn disc(g: &BipartiteInstance, x: &[i8], v: usize) -> Result<i64> {
    check_spins(x, g.n_left, "left")?;
    check_right(g, v)?;
    Ok(g.right_nbrs[v].iter().map(|&u| i64::from(x[u])).sum())
}

fn discs(g: &BipartiteInstance, x: &[i8]) -> Vec<i64> {
    g.right_nbrs
        .iter()
        .map(|nb| nb.iter().map(|&u| i64::from(x[u])).sum())
        .collect()
}

/// `|E|/2 - ½ Σ_v y_v Disc(v)`.
pub fn cval(g: &BipartiteInstance, x: &[i8], y: &[i8]) -> Result<HalfInt> {
    check_spins(x, g.n_left, "left")?;
    check_spins(y, g.n_right, "right")?;
    let signed: i64 = discs(g, x)
        .iter()
        .zip(y)
        .map(|(&d, &s)| i64::from(s) * d)
        .sum();
    Ok(HalfInt::from_twice(g.edges.len() as i64 - signed))
}

/// `|E|/2 + ½ Σ_v |Disc(v)|`.
pub fn copt(g: &BipartiteInstance, x: &[i8]) -> Result<HalfInt> {
    check_spins(x, g.n_left, "left")?;
    let total: i64 = discs(g, x).iter().map(|d| d.abs()).sum();
    Ok(HalfInt::from_twice(g.edges.len() as i64 + total))
}

/// `½ Σ_v (|Disc(v)| + y_v Disc(v))`, which is `copt - cval`.
pub fn closs(g: &BipartiteInstance, x: &[i8], y: &[i8]) -> Result<HalfInt> {
    check_spins(x, g.n_left, "left")?;
    check_spins(y, g.n_right, "right")?;
    let twice: i64 = discs(g, x)
        .iter()
        .zip(y)
        .map(|(&d, &s)| d.abs() + i64::from(s) * d)
        .sum();
    Ok(HalfInt::from_twice(twice))
}

/// `y_v = -sign(Disc(v))`, a conditional optimum.
pub fn optimal_right(g: &BipartiteInstance, x: &[i8]) -> Result<Vec<i8>> {
    check_spins(x, g.n_left, "left")?;
    Ok(discs(g, x).iter().map(|&d| -sign(d)).collect())
}

/// Edge-by-edge value `½ Σ_{(u,v)} (1 - x_u y_v)`, doubled.
fn cval_by_edges(g: &BipartiteInstance, x: &[i8], y: &[i8]) -> i64 {
    g.edges
        .iter()
        .map(|&(u, v)| 1 - i64::from(x[u]) * i64::from(y[v]))
        .sum()
}

fn spins_from_bits(bits: u64, len: usize) -> Vec<i8> {
    (0..len)
        .map(|i| if bits >> i & 1 == 1 { -1 } else { 1 })
        .collect()
}

fn check_brute_cap(n_right: usize, cap: usize) -> Result<()> {
    if n_right > cap {
        return Err(Error::CapExceeded {
            what: "right side size",
            got: n_right as u64,
            cap: cap as u64,
        });
    }
    Ok(())
}

/// Maximum of the edge-by-edge value over all `2^|R|` right assignments;
/// ties keep the first one in enumeration order.
pub fn copt_brute(g: &BipartiteInstance, x: &[i8]) -> Result<(HalfInt, Vec<i8>)> {
    check_spins(x, g.n_left, "left")?;
    check_brute_cap(g.n_right, BRUTE_RIGHT_CAP)?;
    let (best, bits) = (0u64..1 << g.n_right)
        .map(|bits| (cval_by_edges(g, x, &spins_from_bits(bits, g.n_right)), bits))
        .fold((i64::MIN, 0), |acc, c| if c.0 > acc.0 { c } else { acc });
    Ok((HalfInt::from_twice(best), spins_from_bits(bits, g.n_right)))
}

/// `|a| + |b| - |a + b|`.
pub fn slack(a: i64, b: i64) -> i64 {
    a.abs() + b.abs() - (a + b).abs()
}

pub fn slack_real(a: f64, b: f64) -> f64 {
    a.abs() + b.abs() - (a + b).abs()
}

fn check_pair(g1: &BipartiteInstance, g2: &BipartiteInstance) -> Result<()> {
    if g1.n_left != g2.n_left || g1.n_right != g2.n_right {
        return Err(Error::InvalidInput(format!(
            "graphs on different vertex sets: {}+{} vs {}+{}",
            g1.n_left, g1.n_right, g2.n_left, g2.n_right
        )));
    }
    Ok(())
}

/// `slack(Disc_{G1}(v), Disc_{G2}(v))`.
pub fn advantage(
    g1: &BipartiteInstance,
    g2: &BipartiteInstance,
    x: &[i8],
    v: usize,
) -> Result<i64> {
    check_pair(g1, g2)?;
    Ok(slack(disc(g1, x, v)?, disc(g2, x, v)?))
}

pub fn total_advantage(g1: &BipartiteInstance, g2: &BipartiteInstance, x: &[i8]) -> Result<i64> {
    check_pair(g1, g2)?;
    check_spins(x, g1.n_left, "left")?;
    Ok(discs(g1, x)
        .iter()
        .zip(discs(g2, x))
        .map(|(&a, b)| slack(a, b))
        .sum())
}

/// Outcome of the shared-good-assignment decision for one `(G1, G2, x, τ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedGood {
    /// A right assignment with both losses at most `τ`, if one exists.
    pub witness: Option<Vec<i8>>,
    /// `min_y (closs_1 + closs_2) = ½ Σ_v advantage(v)`.
    pub min_total_loss: HalfInt,
    pub total_advantage: i64,
    /// The exhaustive decision, when `|R|` is small enough to run it.
    pub brute: Option<bool>,
}

impl SharedGood {
    pub fn exists(&self) -> bool {
        self.witness.is_some()
    }
}

/// Decides whether `Cgood(G1, x, τ) ∩ Cgood(G2, x, τ)` is nonempty.
///
/// Right vertices whose discrepancies agree in sign (or vanish) cost nothing
/// in either graph at `y_v = -sign(Disc_1 + Disc_2)`. Each remaining vertex
/// charges `|Disc_1|` to the first loss or `|Disc_2|` to the second, so the
/// question is a two-bin partition, solved exactly by a knapsack over the
/// integer capacity `⌊τ⌋`.
pub fn check_shared_good(
    g1: &BipartiteInstance,
    g2: &BipartiteInstance,
    x: &[i8],
    tau: f64,
) -> Result<SharedGood> {
    check_pair(g1, g2)?;
    check_spins(x, g1.n_left, "left")?;
    let d1 = discs(g1, x);
    let d2 = discs(g2, x);
    let adv: i64 = d1.iter().zip(&d2).map(|(&a, &b)| slack(a, b)).sum();

    let mut y: Vec<i8> = d1.iter().zip(&d2).map(|(&a, &b)| -sign(a + b)).collect();
    // conflicting vertices: (v, cost to loss 1, cost to loss 2)
    let conflicts: Vec<(usize, i64, i64)> = (0..g1.n_right)
        .filter(|&v| d1[v] * d2[v] < 0)
        .map(|v| (v, d1[v].abs(), d2[v].abs()))
        .collect();

    let witness = if tau < 0.0 {
        None
    } else {
        let total1: i64 = conflicts.iter().map(|c| c.1).sum();
        let cap = (tau.floor() as i64).min(total1).max(0) as usize;
        let cells = conflicts.len() as u64 * (cap as u64 + 1);
        if cells > KNAPSACK_CAP {
            return Err(Error::CapExceeded {
                what: "shared-good knapsack cells",
                got: cells,
                cap: KNAPSACK_CAP,
            });
        }
        // best[c] = max loss-2 cost moved onto loss 1 using loss-1 budget c
        let mut best = vec![0i64; cap + 1];
        let mut take = vec![vec![false; cap + 1]; conflicts.len()];
        for (i, &(_, w1, w2)) in conflicts.iter().enumerate() {
            let w1 = w1 as usize;
            for c in (w1..=cap).rev() {
                let cand = best[c - w1] + w2;
                if cand > best[c] {
                    best[c] = cand;
                    take[i][c] = true;
                }
            }
        }
        let total2: i64 = conflicts.iter().map(|c| c.2).sum();
        if (total2 - best[cap]) as f64 <= tau {
            let mut c = cap;
            for (i, &(v, w1, _)) in conflicts.iter().enumerate().rev() {
                if take[i][c] {
                    // pay in the first graph: y_v = sign(Disc_1)
                    y[v] = sign(d1[v]);
                    c -= w1 as usize;
                } else {
                    y[v] = -sign(d1[v]);
                }
            }
            Some(y)
        } else {
            None
        }
    };

    let brute = if g1.n_right <= SHARED_GOOD_CROSSCHECK {
        Some(shared_good_brute(g1, g2, x, tau)?.is_some())
    } else {
        None
    };
    Ok(SharedGood {
        witness,
        min_total_loss: HalfInt::from_twice(adv),
        total_advantage: adv,
        brute,
    })
}

/// Exhaustive search for a shared `τ`-good right assignment, losses computed
/// edge by edge against the exhaustive conditional optimum.
pub fn shared_good_brute(
    g1: &BipartiteInstance,
    g2: &BipartiteInstance,
    x: &[i8],
    tau: f64,
) -> Result<Option<Vec<i8>>> {
    check_pair(g1, g2)?;
    check_spins(x, g1.n_left, "left")?;
    check_brute_cap(g1.n_right, BRUTE_RIGHT_CAP)?;
    let n = g1.n_right;
    let all: Vec<Vec<i8>> = (0u64..1 << n).map(|b| spins_from_bits(b, n)).collect();
    let vals1: Vec<i64> = all.iter().map(|y| cval_by_edges(g1, x, y)).collect();
    let vals2: Vec<i64> = all.iter().map(|y| cval_by_edges(g2, x, y)).collect();
    let opt1 = *vals1.iter().max().expect("nonempty");
    let opt2 = *vals2.iter().max().expect("nonempty");
    let twice_tau = 2.0 * tau;
    Ok((0..all.len())
        .find(|&i| (opt1 - vals1[i]) as f64 <= twice_tau && (opt2 - vals2[i]) as f64 <= twice_tau)
        .map(|i| all[i].clone()))
}
