//! Integer-weighted graphs, the sink gadgets, and an exhaustive weighted
//! Max-Cut oracle.
//!
//! Both gadgets append two sinks after the original vertices: `s_{+1}` at
//! index `n + SINK_PLUS_OFFSET` and `s_{-1}` at `n + SINK_MINUS_OFFSET`.
//! Spin `+1` is cut side 0 and spin `-1` is cut side 1.

use super::{check_spins, BipartiteInstance, HardFamilyParams};
use crate::error::{Error, Result};
use crate::universe::Graph;

pub const SINK_PLUS_OFFSET: usize = 0;
pub const SINK_MINUS_OFFSET: usize = 1;
/// Largest vertex count for [`weighted_maxcut_brute`].
pub const WEIGHTED_BRUTE_CAP: usize = 22;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, u64)>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: u64) -> Result<()> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: x,
                    n: self.n,
                });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if w == 0 {
            return Err(Error::InvalidInput(format!("edge ({u}, {v}) has weight 0")));
        }
        self.edges.push((u, v, w));
        Ok(())
    }

    /// Each stream edge with weight 1; repeated edges stay separate.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let mut w = WeightedGraph::new(g.n());
        for &e in g.edges() {
            let (u, v) = g.universe().decode(e)?;
            w.add_edge(u, v, 1)?;
        }
        Ok(w)
    }

    /// Left `u` stays `u`; right `v` becomes `n_left + v`.
    pub fn from_bipartite(g: &BipartiteInstance) -> Result<Self> {
        let mut w = WeightedGraph::new(g.n_left() + g.n_right());
        for &(u, v) in g.edges() {
            w.add_edge(u, g.n_left() + v, 1)?;
        }
        Ok(w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn total_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn weighted_degree(&self, v: usize) -> u64 {
        self.edges
            .iter()
            .filter(|&&(a, b, _)| a == v || b == v)
            .map(|e| e.2)
            .sum()
    }

    pub fn max_weighted_degree(&self) -> u64 {
        (0..self.n)
            .map(|v| self.weighted_degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Total weight of edges with endpoints on different sides of `mask`.
    pub fn cut_weight(&self, mask: u64) -> u64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| (mask >> u ^ mask >> v) & 1 == 1)
            .map(|e| e.2)
            .sum()
    }
}

/// Cut mask with bit `i` set iff `z_i = -1`.
pub fn spins_to_mask(z: &[i8]) -> u64 {
    z.iter()
        .enumerate()
        .filter(|(_, &s)| s == -1)
        .fold(0, |m, (i, _)| m | 1 << i)
}

fn sink_for(n: usize, spin: i8) -> usize {
    if spin == 1 {
        n + SINK_PLUS_OFFSET
    } else {
        n + SINK_MINUS_OFFSET
    }
}

/// `G ∪ H_x` for conditional Max-Cut: sink-sink weight `10^5 n k` and, for
/// every left `u`, weight `2k` between `u` and `s_{-x_u}`. `n` and `k` come
/// from `params`.
pub fn gadget_cond(
    g: &BipartiteInstance,
    x: &[i8],
    params: &HardFamilyParams,
) -> Result<WeightedGraph> {
    check_spins(x, g.n_left(), "left")?;
    let mut w = WeightedGraph::from_bipartite(g)?;
    let base = w.n;
    w.n += 2;
    let nk = (params.n * params.k) as u64;
    w.add_edge(
        base + SINK_PLUS_OFFSET,
        base + SINK_MINUS_OFFSET,
        100_000 * nk,
    )?;
    for (u, &s) in x.iter().enumerate() {
        w.add_edge(u, sink_for(base, -s), 2 * params.k as u64)?;
    }
    Ok(w)
}

/// `A ∪ H_x` for value queries: sink-sink weight `5000 N k` and weight `100k`
/// between every vertex `w` and `s_{-x_w}`, where `N = |V(A)|` and `k` is the
/// largest weighted degree of `A` (its degree when `A` is `k`-regular).
pub fn gadget_det(a: &WeightedGraph, x: &[i8]) -> Result<WeightedGraph> {
    check_spins(x, a.n, "vertex")?;
    let k = a.max_weighted_degree().max(1);
    let n = a.n as u64;
    let mut w = a.clone();
    w.n += 2;
    w.add_edge(
        a.n + SINK_PLUS_OFFSET,
        a.n + SINK_MINUS_OFFSET,
        5000 * n * k,
    )?;
    for (v, &s) in x.iter().enumerate() {
        w.add_edge(v, sink_for(a.n, -s), 100 * k)?;
    }
    Ok(w)
}

/// Exact weighted Max-Cut. Walks the masks with the last vertex on side 0 in
/// Gray-code order, updating the cut weight one flip at a time; ties keep the
/// smallest mask.
pub fn weighted_maxcut_brute(w: &WeightedGraph) -> Result<(u64, u64)> {
    let n = w.n;
    if n > WEIGHTED_BRUTE_CAP {
        return Err(Error::CapExceeded {
            what: "weighted graph vertices",
            got: n as u64,
            cap: WEIGHTED_BRUTE_CAP as u64,
        });
    }
    if n < 2 {
        return Ok((0, 0));
    }
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
    for &(u, v, wt) in &w.edges {
        adj[u].push((v, wt as i64));
        adj[v].push((u, wt as i64));
    }
    let free = n - 1;
    let mut mask = 0u64;
    let mut value = 0i64;
    let mut best = (0i64, 0u64);
    for step in 1u64..1 << free {
        let v = step.trailing_zeros() as usize;
        // flipping v: edges to its side become cut, cut edges become uncut
        let side = mask >> v & 1;
        let delta: i64 = adj[v]
            .iter()
            .map(|&(u, wt)| if mask >> u & 1 == side { wt } else { -wt })
            .sum();
        mask ^= 1 << v;
        value += delta;
        if value > best.0 || (value == best.0 && mask < best.1) {
            best = (value, mask);
        }
    }
    Ok((best.1, best.0 as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_small_cases() {
        let mut w = WeightedGraph::new(2);
        w.add_edge(0, 1, 7).unwrap();
        assert_eq!(weighted_maxcut_brute(&w).unwrap(), (1, 7));
        let mut t = WeightedGraph::new(3);
        for (u, v) in [(0, 1), (1, 2), (0, 2)] {
            t.add_edge(u, v, 1).unwrap();
        }
        assert_eq!(weighted_maxcut_brute(&t).unwrap().1, 2);
    }

    #[test]
    fn rejects_bad_edges() {
        let mut w = WeightedGraph::new(3);
        assert!(w.add_edge(0, 0, 1).is_err());
        assert!(w.add_edge(0, 1, 0).is_err());
        assert!(w.add_edge(0, 3, 1).is_err());
    }

    #[test]
    fn cond_gadget_edge_count() {
        let g = BipartiteInstance::new(3, 2, vec![(0, 0), (1, 0), (2, 1)]).unwrap();
        let params = HardFamilyParams::new(3, 1);
        let w = gadget_cond(&g, &[1, -1, 1], &params).unwrap();
        assert_eq!(w.edges().len(), g.edge_count() + 3 + 1);
        assert_eq!(w.n(), 7);
        // x_0 = +1 attaches to s_{-1}
        assert!(w.edges().contains(&(0, 5 + SINK_MINUS_OFFSET, 2)));
        assert!(w.edges().contains(&(1, 5 + SINK_PLUS_OFFSET, 2)));
    }

    #[test]
    fn spins_and_masks() {
        assert_eq!(spins_to_mask(&[1, -1, -1, 1]), 0b0110);
    }
}
