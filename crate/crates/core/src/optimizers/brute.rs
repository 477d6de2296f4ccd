use std::cmp::Ordering;

use rayon::prelude::*;

use super::{MAX_BRUTE_SUBSET_VERTICES, MAX_CSP_BRUTE_ASSIGNMENTS, MAX_ENUM_VERTICES};
use crate::error::{Error, Result};
use crate::universe::{assignment_from_index, CspInstance, Cut, Graph};

/// Exact maximum cut. Scans masks with `x_{n-1} = 0` (one per complementary
/// pair) and keeps the smallest mask among ties.
pub fn maxcut_brute(g: &Graph) -> Result<(Cut, f64)> {
    let n = g.n();
    if n > MAX_ENUM_VERTICES {
        return Err(Error::CapExceeded {
            what: "vertex count n",
            got: n as u64,
            cap: MAX_ENUM_VERTICES as u64,
        });
    }
    if g.m_distinct() == 0 {
        return Err(Error::Undefined("max-cut of a graph with no edges".into()));
    }
    let half = 1u64 << n.saturating_sub(1);
    let (count, mask) = (0..half)
        .into_par_iter()
        .map(|mask| (g.crossing_count(mask), mask))
        .reduce(
            || (0, u64::MAX),
            |a, b| match a.0.cmp(&b.0) {
                Ordering::Greater => a,
                Ordering::Less => b,
                Ordering::Equal => (a.0, a.1.min(b.1)),
            },
        );
    Ok((
        Cut::from_mask(n, mask)?,
        count as f64 / g.m_distinct() as f64,
    ))
}

/// Exact densest subgraph `max_S |E(S)| / |S|` over nonempty `S`. Densities
/// are compared as exact fractions; ties keep the smallest mask.
pub fn densest_brute(g: &Graph) -> Result<(u64, f64)> {
    let n = g.n();
    if n > MAX_BRUTE_SUBSET_VERTICES {
        return Err(Error::CapExceeded {
            what: "vertex count n",
            got: n as u64,
            cap: MAX_BRUTE_SUBSET_VERTICES as u64,
        });
    }
    if n == 0 {
        return Err(Error::Undefined(
            "densest subgraph of a graph with no vertices".into(),
        ));
    }
    // (edges, size, mask); a/b > c/d  <=>  a d > c b
    let (edges, size, mask) = (1u64..1 << n)
        .into_par_iter()
        .map(|mask| (g.induced_count(mask), u64::from(mask.count_ones()), mask))
        .reduce(
            || (0, 1, u64::MAX),
            |a, b| match (a.0 * b.1).cmp(&(b.0 * a.1)) {
                Ordering::Greater => a,
                Ordering::Less => b,
                Ordering::Equal => {
                    if a.2 <= b.2 {
                        a
                    } else {
                        b
                    }
                }
            },
        );
    Ok((mask, edges as f64 / size as f64))
}

/// Exact Max-CSP optimum over all `q^n` assignments; ties keep the smallest
/// assignment index.
pub fn csp_brute(phi: &CspInstance) -> Result<(Vec<u32>, f64)> {
    let shape = phi.shape();
    let count = (shape.q as u64)
        .checked_pow(shape.n as u32)
        .filter(|&c| c <= MAX_CSP_BRUTE_ASSIGNMENTS)
        .ok_or(Error::CapExceeded {
            what: "assignment count q^n",
            got: (shape.q as f64).powi(shape.n as i32).min(u64::MAX as f64) as u64,
            cap: MAX_CSP_BRUTE_ASSIGNMENTS,
        })?;
    if phi.distinct().is_empty() {
        return Err(Error::Undefined(
            "max-CSP of an instance with no constraints".into(),
        ));
    }
    let (sat, index) = (0..count)
        .into_par_iter()
        .map(|i| {
            (
                phi.satisfied_count(&assignment_from_index(i, shape.n, shape.q)),
                i,
            )
        })
        .reduce(
            || (0, u64::MAX),
            |a, b| match a.0.cmp(&b.0) {
                Ordering::Greater => a,
                Ordering::Less => b,
                Ordering::Equal => (a.0, a.1.min(b.1)),
            },
        );
    Ok((
        assignment_from_index(index, shape.n, shape.q),
        sat as f64 / phi.distinct().len() as f64,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_maxcut_values() {
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let (cut, v) = maxcut_brute(&k3).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(cut.mask(), 1);
        let edge = Graph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(maxcut_brute(&edge).unwrap().1, 1.0);
        assert!(maxcut_brute(&Graph::empty(4).unwrap()).is_err());
    }

    #[test]
    fn small_densest_values() {
        let star = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(densest_brute(&star).unwrap(), (0b1111, 0.75));
        let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(densest_brute(&k4).unwrap(), (0b1111, 1.5));
        assert_eq!(densest_brute(&Graph::empty(5).unwrap()).unwrap(), (1, 0.0));
    }
}
