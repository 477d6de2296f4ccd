//! Reference oracles written against plain edge lists and truth tables, with
//! no calls into the optimizers they check.

#![allow(dead_code)]

use dense_streams::universe::{CspInstance, Graph};

pub fn edge_list(g: &Graph) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&e| g.universe().decode(e).unwrap())
        .collect();
    edges.sort_unstable();
    edges.dedup();
    edges
}

pub fn crossing(edges: &[(usize, usize)], mask: u64) -> u64 {
    edges
        .iter()
        .filter(|&&(u, v)| (mask >> u & 1) != (mask >> v & 1))
        .count() as u64
}

/// Best crossing count over all cuts.
pub fn max_crossing(n: usize, edges: &[(usize, usize)]) -> u64 {
    (0..1u64 << n)
        .map(|m| crossing(edges, m))
        .max()
        .unwrap_or(0)
}

pub fn inside(edges: &[(usize, usize)], mask: u64) -> u64 {
    edges
        .iter()
        .filter(|&&(u, v)| mask >> u & 1 == 1 && mask >> v & 1 == 1)
        .count() as u64
}

/// `max_S |E(S)|/|S|` as a float, from exact fraction comparison.
pub fn max_density(n: usize, edges: &[(usize, usize)]) -> f64 {
    let (mut best_e, mut best_s) = (0u64, 1u64);
    for mask in 1..1u64 << n {
        let (e, s) = (inside(edges, mask), u64::from(mask.count_ones()));
        if e * best_s > best_e * s {
            best_e = e;
            best_s = s;
        }
    }
    best_e as f64 / best_s as f64
}

/// Number of distinct constraints satisfied by `x`, read straight off the
/// truth tables (first scope variable is the most significant digit).
pub fn csp_satisfied(phi: &CspInstance, x: &[u32]) -> u64 {
    let q = phi.shape().q as u64;
    let mut seen = std::collections::HashSet::new();
    let mut count = 0;
    for c in phi.constraints() {
        if !seen.insert((c.vars.clone(), c.table)) {
            continue;
        }
        let mut row = 0u64;
        for &v in &c.vars {
            row = row * q + u64::from(x[v]);
        }
        if c.table >> row & 1 == 1 {
            count += 1;
        }
    }
    count
}

pub fn distinct_constraints(phi: &CspInstance) -> usize {
    phi.constraints()
        .iter()
        .map(|c| (c.vars.clone(), c.table))
        .collect::<std::collections::HashSet<_>>()
        .len()
}

pub fn all_assignments(n: usize, q: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (q as u64).pow(n as u32);
    (0..total).map(move |mut i| {
        (0..n)
            .map(|_| {
                let d = (i % q as u64) as u32;
                i /= q as u64;
                d
            })
            .collect()
    })
}

pub fn max_csp(phi: &CspInstance) -> f64 {
    let shape = phi.shape();
    let best = all_assignments(shape.n, shape.q as u32)
        .map(|x| csp_satisfied(phi, &x))
        .max()
        .unwrap_or(0);
    best as f64 / distinct_constraints(phi) as f64
}

/// `Σ_{i ≤ r} C(n, i)` by Pascal's triangle.
pub fn binomial_prefix(n: usize, r: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![1u128; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.iter().take(r + 1).sum()
}
