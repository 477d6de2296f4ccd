//! Seeded instance generators for graphs, CSPs and element streams.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::universe::{full_mask, Constraint, CspInstance, CspShape, Graph};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_prob(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", format!("{p} is outside [0, 1]")));
    }
    Ok(())
}

/// `G(n, p)`: each pair independently, emitted in pair order.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_prob(p)?;
    let mut rng = rng(seed);
    let mut g = Graph::empty(n)?;
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// `G(n, p)` with a clique on a uniform `size`-subset; returns the clique mask.
pub fn planted_clique(n: usize, size: usize, p: f64, seed: u64) -> Result<(Graph, u64)> {
    check_prob(p)?;
    if size > n {
        return Err(Error::param("clique", format!("{size} exceeds n = {n}")));
    }
    let mut rng = rng(seed);
    let clique = index::sample(&mut rng, n, size)
        .into_iter()
        .fold(0u64, |m, v| m | 1 << v);
    let mut g = Graph::empty(n)?;
    for u in 0..n {
        for v in u + 1..n {
            let inside = clique >> u & 1 == 1 && clique >> v & 1 == 1;
            if inside || rng.random_bool(p) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok((g, clique))
}

/// Clique on `S` plus `n - |S|` isolated vertices.
pub fn clique_on(n: usize, s: u64) -> Result<Graph> {
    let mut g = Graph::empty(n)?;
    for u in 0..n {
        for v in u + 1..n {
            if s >> u & 1 == 1 && s >> v & 1 == 1 {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// First `size` vertices as the mask of a complete-bipartite side.
pub fn prefix_side(n: usize, size: usize) -> Result<u64> {
    if size == 0 || size >= n {
        return Err(Error::param(
            "s",
            format!("side size {size} must be in [1, {n})"),
        ));
    }
    Ok(full_mask(size))
}

/// `m` constraints with uniform distinct-variable scopes and uniform
/// predicate tables.
pub fn csp_random(n: usize, k: usize, q: usize, m: usize, seed: u64) -> Result<CspInstance> {
    let shape = CspShape::new(n, k, q)?;
    let mut rng = rng(seed);
    let table_mask = if shape.table_len() == 64 {
        u64::MAX
    } else {
        (1u64 << shape.table_len()) - 1
    };
    let constraints = (0..m)
        .map(|_| {
            let vars = index::sample(&mut rng, n, k).into_vec();
            Constraint::new(vars, rng.random::<u64>() & table_mask)
        })
        .collect();
    CspInstance::new(shape, constraints)
}

/// A dense instance: every ordered scope in rank order with probability `p`, each
/// with a uniform table.
pub fn csp_dense_random(n: usize, k: usize, q: usize, p: f64, seed: u64) -> Result<CspInstance> {
    check_prob(p)?;
    let shape = CspShape::new(n, k, q)?;
    let mut rng = rng(seed);
    let table_mask = if shape.table_len() == 64 {
        u64::MAX
    } else {
        (1u64 << shape.table_len()) - 1
    };
    let mut constraints = Vec::new();
    for scope in shape.scopes() {
        if rng.random_bool(p) {
            constraints.push(Constraint::new(scope, rng.random::<u64>() & table_mask));
        }
    }
    CspInstance::new(shape, constraints)
}

/// `distinct` uniform elements of `[0, universe)`, each repeated
/// `1 + Geometric`-many times (mean `1 + dup`), in shuffled order.
pub fn distinct_stream(distinct: usize, universe: u64, dup: f64, seed: u64) -> Result<Vec<u64>> {
    if distinct as u64 > universe {
        return Err(Error::param(
            "distinct",
            format!("{distinct} exceeds the universe {universe}"),
        ));
    }
    let mut rng = rng(seed);
    let elements = sample_elements(&mut rng, universe, distinct);
    let stay = 1.0 / (1.0 + dup.max(0.0));
    let mut stream = Vec::new();
    for e in elements {
        stream.push(e);
        while !rng.random_bool(stay) {
            stream.push(e);
        }
    }
    stream.shuffle(&mut rng);
    Ok(stream)
}

fn sample_elements(rng: &mut ChaCha8Rng, universe: u64, count: usize) -> Vec<u64> {
    if universe <= usize::MAX as u64 && (universe as usize) <= 1 << 26 {
        return index::sample(rng, universe as usize, count)
            .into_iter()
            .map(|e| e as u64)
            .collect();
    }
    let mut seen = std::collections::HashSet::with_capacity(count);
    while seen.len() < count {
        seen.insert(rng.random_range(0..universe));
    }
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_unstable();
    out.shuffle(rng);
    out
}

/// `distinct` elements of `[0, universe)` with multiplicities uniform in
/// `1..=max_mult`, in shuffled order.
pub fn multiplicity_profile(
    universe: u64,
    distinct: usize,
    max_mult: u32,
    seed: u64,
) -> Result<Vec<u64>> {
    if distinct as u64 > universe {
        return Err(Error::param(
            "distinct",
            format!("{distinct} exceeds the universe {universe}"),
        ));
    }
    if max_mult == 0 {
        return Err(Error::param("max_mult", "must be at least 1"));
    }
    let mut rng = rng(seed);
    let elements = sample_elements(&mut rng, universe, distinct);
    let mut stream = Vec::new();
    for e in elements {
        let mult = rng.random_range(1..=max_mult);
        stream.extend(std::iter::repeat_n(e, mult as usize));
    }
    stream.shuffle(&mut rng);
    Ok(stream)
}

/// Sets `A`, `B ⊆ [0, universe)` with `|A ∪ B| = union` and
/// `|A ∩ B| = round(jaccard · union)`; the rest of the union is split
/// evenly between `A \ B` and `B \ A`.
pub fn jaccard_pair(
    universe: u64,
    union: usize,
    jaccard: f64,
    seed: u64,
) -> Result<(Vec<u64>, Vec<u64>)> {
    check_prob(jaccard)?;
    if union as u64 > universe {
        return Err(Error::param(
            "union",
            format!("{union} exceeds the universe {universe}"),
        ));
    }
    let mut rng = rng(seed);
    let elements = sample_elements(&mut rng, universe, union);
    let both = (jaccard * union as f64).round() as usize;
    let only_a = (union - both) / 2;
    let a: Vec<u64> = elements[..both + only_a].to_vec();
    let mut b: Vec<u64> = elements[..both].to_vec();
    b.extend_from_slice(&elements[both + only_a..]);
    Ok((a, b))
}

/// Exact `|A ∩ B| / |A ∪ B|`.
pub fn exact_jaccard(a: &[u64], b: &[u64]) -> Option<f64> {
    use std::collections::HashSet;
    let sa: HashSet<u64> = a.iter().copied().collect();
    let sb: HashSet<u64> = b.iter().copied().collect();
    let union = sa.union(&sb).count();
    (union > 0).then(|| sa.intersection(&sb).count() as f64 / union as f64)
}

/// Exact `S_k / D`: the fraction of distinct elements occurring exactly `k` times.
pub fn exact_rarity(stream: &[u64], k: u32) -> Option<f64> {
    let mut counts = std::collections::HashMap::new();
    for &e in stream {
        *counts.entry(e).or_insert(0u64) += 1;
    }
    let rare = counts.values().filter(|&&c| c == u64::from(k)).count();
    (!counts.is_empty()).then(|| rare as f64 / counts.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_is_seeded() {
        let a = erdos_renyi(10, 0.5, 3).unwrap();
        assert_eq!(a, erdos_renyi(10, 0.5, 3).unwrap());
        assert_eq!(erdos_renyi(6, 1.0, 0).unwrap().m_distinct(), 15);
        assert_eq!(erdos_renyi(6, 0.0, 0).unwrap().m_distinct(), 0);
    }

    #[test]
    fn planted_clique_is_complete_inside() {
        let (g, s) = planted_clique(12, 5, 0.2, 1).unwrap();
        assert_eq!(s.count_ones(), 5);
        assert_eq!(g.induced_count(s), 10);
    }

    #[test]
    fn jaccard_pair_sizes() {
        let (a, b) = jaccard_pair(1000, 100, 0.4, 2).unwrap();
        assert_eq!(exact_jaccard(&a, &b), Some(0.4));
        assert_eq!(a.len() + b.len(), 140);
    }

    #[test]
    fn profiles() {
        let s = multiplicity_profile(100, 30, 4, 5).unwrap();
        let mut d = s.clone();
        d.sort_unstable();
        d.dedup();
        assert_eq!(d.len(), 30);
        assert_eq!(exact_rarity(&[1, 1, 2, 3, 3, 3], 2), Some(1.0 / 3.0));
        let st = distinct_stream(50, 1 << 40, 1.0, 1).unwrap();
        let mut d = st.clone();
        d.sort_unstable();
        d.dedup();
        assert_eq!(d.len(), 50);
    }

    #[test]
    fn dense_csp_has_every_scope_at_p_one() {
        let phi = csp_dense_random(5, 2, 2, 1.0, 0).unwrap();
        assert_eq!(phi.constraints().len(), 20);
    }
}
