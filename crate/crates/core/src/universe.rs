//! Integer encodings for edges, cuts, vertex subsets and CSP constraints, plus
//! the exact value functions every sketch is checked against.
//!
//! Edges of the complete graph on `n` vertices are ranked lexicographically on
//! `(min, max)`: `(0,1), (0,2), ..., (0,n-1), (1,2), ...`. Constraints are
//! ranked as `injection_rank * 2^(q^k) + truth_table`, with injections of
//! `[k]` into `[n]` ranked lexicographically.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest vertex count a [`Cut`] or [`Graph`] can represent (one bit per vertex).
pub const MAX_CUT_VERTICES: usize = 64;

/// Bijection between unordered pairs of `[n]` and `[0, n(n-1)/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeUniverse {
    n: usize,
}

impl EdgeUniverse {
    pub fn new(n: usize) -> Self {
        EdgeUniverse { n }
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    /// Number of possible edges, `n(n-1)/2`.
    pub fn size(&self) -> u64 {
        let n = self.n as u64;
        n * n.saturating_sub(1) / 2
    }

    /// Index of the first edge whose smaller endpoint is `u`.
    fn row_start(&self, u: u64) -> u64 {
        let n = self.n as u64;
        u * (2 * n - u - 1) / 2
    }

    pub fn encode(&self, u: usize, v: usize) -> Result<u64> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: w,
                    n: self.n,
                });
            }
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        Ok(self.row_start(a as u64) + (b - a - 1) as u64)
    }

    /// Inverse of [`encode`](Self::encode); always returns `(min, max)`.
    pub fn decode(&self, index: u64) -> Result<(usize, usize)> {
        if index >= self.size() {
            return Err(Error::OutOfUniverse {
                element: index,
                size: self.size(),
            });
        }
        // largest u with row_start(u) <= index
        let (mut lo, mut hi) = (0u64, self.n as u64 - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.row_start(mid) <= index {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u = if self.row_start(hi) <= index { hi } else { lo };
        let v = u + 1 + (index - self.row_start(u));
        Ok((u as usize, v as usize))
    }

    /// All pairs in index order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| (u + 1..self.n).map(move |v| (u, v)))
    }
}

/// A two-sided vertex partition; bit `i` of the mask is the side of vertex `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cut {
    n: usize,
    mask: u64,
}

impl Cut {
    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        check_cut_size(n)?;
        if n < 64 && mask >> n != 0 {
            return Err(Error::InvalidInput(format!(
                "cut mask {mask:#x} has bits beyond vertex {}",
                n - 1
            )));
        }
        Ok(Cut { n, mask })
    }

    pub fn from_sides(sides: &[bool]) -> Result<Self> {
        check_cut_size(sides.len())?;
        let mask = sides
            .iter()
            .enumerate()
            .fold(0u64, |m, (i, &s)| if s { m | 1 << i } else { m });
        Ok(Cut {
            n: sides.len(),
            mask,
        })
    }

    /// The indicator cut `1_T` of a vertex set.
    pub fn indicator(n: usize, members: &[usize]) -> Result<Self> {
        check_cut_size(n)?;
        let mut mask = 0u64;
        for &v in members {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            mask |= 1 << v;
        }
        Ok(Cut { n, mask })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn side(&self, v: usize) -> bool {
        self.mask >> v & 1 == 1
    }

    pub fn popcount(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn complement(&self) -> Cut {
        Cut {
            n: self.n,
            mask: !self.mask & full_mask(self.n),
        }
    }
}

impl fmt::Display for Cut {
    /// Written `x_0 x_1 ... x_{n-1}`, so `1000` puts vertex 0 alone on side 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in 0..self.n {
            f.write_str(if self.side(v) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn check_cut_size(n: usize) -> Result<()> {
    if n > MAX_CUT_VERTICES {
        return Err(Error::CapExceeded {
            what: "vertex count",
            got: n as u64,
            cap: MAX_CUT_VERTICES as u64,
        });
    }
    Ok(())
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Edges of the complete graph crossing `x`, streamed in increasing index order.
///
/// Yields exactly `s * (n - s)` indices where `s = x.popcount()`.
pub fn crossing_set(x: Cut, universe: EdgeUniverse) -> impl Iterator<Item = u64> {
    assert_eq!(x.n(), universe.vertices(), "cut and universe disagree on n");
    let n = x.n;
    let all = full_mask(n);
    (0..n).flat_map(move |u| {
        let above = all & !full_mask(u + 1);
        let opposite = if x.side(u) { !x.mask } else { x.mask } & above;
        BitIter(opposite).map(move |v| universe.row_start(u as u64) + (v - u - 1) as u64)
    })
}

/// All pairs inside the vertex set `mask`, streamed in increasing index order.
pub fn induced_pairs(mask: u64, universe: EdgeUniverse) -> impl Iterator<Item = u64> {
    BitIter(mask & full_mask(universe.vertices())).flat_map(move |u| {
        let above = mask & !full_mask(u + 1);
        BitIter(above).map(move |v| universe.row_start(u as u64) + (v - u - 1) as u64)
    })
}

/// Iterates the set bit positions of a word, lowest first.
#[derive(Debug, Clone, Copy)]
pub struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// An undirected graph on at most 64 vertices, kept both as the raw edge
/// multiset (stream order) and as a deduplicated adjacency bitmap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    universe: EdgeUniverse,
    edges: Vec<u64>,
    adjacency: Vec<u64>,
    distinct: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        check_cut_size(n)?;
        Ok(Graph {
            universe: EdgeUniverse::new(n),
            edges: Vec::new(),
            adjacency: vec![0; n],
            distinct: 0,
        })
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<u64> {
        let index = self.universe.encode(u, v)?;
        self.edges.push(index);
        if self.adjacency[u] >> v & 1 == 0 {
            self.adjacency[u] |= 1 << v;
            self.adjacency[v] |= 1 << u;
            self.distinct += 1;
        }
        Ok(index)
    }

    pub fn add_encoded(&mut self, index: u64) -> Result<()> {
        let (u, v) = self.universe.decode(index)?;
        self.add_edge(u, v).map(|_| ())
    }

    pub fn n(&self) -> usize {
        self.universe.vertices()
    }

    pub fn universe(&self) -> EdgeUniverse {
        self.universe
    }

    /// The edge multiset in insertion order.
    pub fn edges(&self) -> &[u64] {
        &self.edges
    }

    pub fn m_distinct(&self) -> usize {
        self.distinct
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adjacency[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, u: usize) -> u64 {
        self.adjacency[u]
    }

    /// Distinct edges in increasing index order.
    pub fn distinct_edges(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.n()).flat_map(move |u| {
            let above = self.adjacency[u] & !full_mask(u + 1);
            BitIter(above).map(move |v| self.universe.row_start(u as u64) + (v - u - 1) as u64)
        })
    }

    /// Number of distinct edges crossing the cut with mask `x`.
    pub fn crossing_count(&self, x: u64) -> u64 {
        BitIter(x & full_mask(self.n()))
            .map(|u| u64::from((self.adjacency[u] & !x).count_ones()))
            .sum()
    }

    /// Number of distinct edges with both endpoints in the set `s`.
    pub fn induced_count(&self, s: u64) -> u64 {
        let twice: u64 = BitIter(s & full_mask(self.n()))
            .map(|u| u64::from((self.adjacency[u] & s).count_ones()))
            .sum();
        twice / 2
    }

    /// `val_G(x)`: fraction of distinct edges crossing `x`.
    pub fn cut_value(&self, x: Cut) -> Result<f64> {
        if x.n() != self.n() {
            return Err(Error::InvalidInput(format!(
                "cut over {} vertices applied to a graph on {}",
                x.n(),
                self.n()
            )));
        }
        if self.distinct == 0 {
            return Err(Error::Undefined(
                "cut value of a graph with no edges".into(),
            ));
        }
        Ok(self.crossing_count(x.mask()) as f64 / self.distinct as f64)
    }

    /// Induced-edge density `|E(S)| / |S|` of a nonempty vertex set.
    pub fn density(&self, s: u64) -> f64 {
        let size = (s & full_mask(self.n())).count_ones();
        if size == 0 {
            return 0.0;
        }
        self.induced_count(s) as f64 / f64::from(size)
    }
}

/// Free-function form of [`Graph::cut_value`].
pub fn cut_value(g: &Graph, x: Cut) -> Result<f64> {
    g.cut_value(x)
}

/// Dimensions of a Max-CSP instance: `n` variables, arity `k`, alphabet `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CspShape {
    pub n: usize,
    pub k: usize,
    pub q: usize,
}

/// A constraint `(v, Π)`. Bit `j` of `table` is `Π(a_0, ..., a_{k-1})` where
/// `j = a_0 q^(k-1) + ... + a_{k-1}` (first variable most significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub vars: Vec<usize>,
    pub table: u64,
}

impl Constraint {
    pub fn new(vars: Vec<usize>, table: u64) -> Self {
        Constraint { vars, table }
    }

    /// The Max-Cut edge `{u, v}` as a binary disequality constraint.
    pub fn cut_edge(u: usize, v: usize) -> Self {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        Constraint {
            vars: vec![a, b],
            table: XOR_TABLE,
        }
    }

    pub fn satisfied_by(&self, q: usize, x: &[u32]) -> bool {
        let j = self
            .vars
            .iter()
            .fold(0usize, |acc, &v| acc * q + x[v] as usize);
        self.table >> j & 1 == 1
    }
}

/// Truth table of `y_0 != y_1` over `{0,1}^2`.
pub const XOR_TABLE: u64 = 0b0110;
/// Truth table of `y_0 AND y_1` over `{0,1}^2`.
pub const AND_TABLE: u64 = 0b1000;

impl CspShape {
    pub fn new(n: usize, k: usize, q: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::param(
                "k",
                format!("arity {k} must be in [1, n={n}]"),
            ));
        }
        if q < 2 {
            return Err(Error::param(
                "q",
                format!("alphabet size {q} must be at least 2"),
            ));
        }
        let shape = CspShape { n, k, q };
        if shape.table_len() > 62 {
            return Err(Error::CapExceeded {
                what: "q^k",
                got: shape.table_len() as u64,
                cap: 62,
            });
        }
        shape.universe_size()?;
        Ok(shape)
    }

    /// `q^k`, the number of rows in a truth table.
    pub fn table_len(&self) -> usize {
        self.q.pow(self.k as u32)
    }

    pub fn predicates(&self) -> u64 {
        1u64 << self.table_len()
    }

    /// `n (n-1) ... (n-k+1)`.
    pub fn injections(&self) -> u64 {
        falling(self.n as u64, self.k as u64)
    }

    /// `n^(falling k) * 2^(q^k)`.
    pub fn universe_size(&self) -> Result<u64> {
        self.injections()
            .checked_mul(self.predicates())
            .ok_or(Error::CapExceeded {
                what: "constraint universe size",
                got: u64::MAX,
                cap: u64::MAX,
            })
    }

    pub fn validate(&self, c: &Constraint) -> Result<()> {
        if c.vars.len() != self.k {
            return Err(Error::InvalidInput(format!(
                "constraint has {} variables, arity is {}",
                c.vars.len(),
                self.k
            )));
        }
        for (i, &v) in c.vars.iter().enumerate() {
            if v >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    n: self.n,
                });
            }
            if c.vars[..i].contains(&v) {
                return Err(Error::InvalidInput(format!(
                    "variable {v} repeated in constraint scope {:?}",
                    c.vars
                )));
            }
        }
        if self.table_len() < 64 && c.table >> self.table_len() != 0 {
            return Err(Error::InvalidInput(format!(
                "truth table {:#x} longer than q^k = {}",
                c.table,
                self.table_len()
            )));
        }
        Ok(())
    }

    pub fn encode(&self, c: &Constraint) -> Result<u64> {
        self.validate(c)?;
        let n = self.n as u64;
        let k = self.k as u64;
        let mut rank = 0u64;
        for (i, &v) in c.vars.iter().enumerate() {
            let smaller_unused = v - c.vars[..i].iter().filter(|&&w| w < v).count();
            rank += smaller_unused as u64 * falling(n - i as u64 - 1, k - i as u64 - 1);
        }
        Ok(rank * self.predicates() + c.table)
    }

    pub fn decode(&self, index: u64) -> Result<Constraint> {
        let size = self.universe_size()?;
        if index >= size {
            return Err(Error::OutOfUniverse {
                element: index,
                size,
            });
        }
        let table = index % self.predicates();
        let mut rank = index / self.predicates();
        let n = self.n as u64;
        let k = self.k as u64;
        let mut vars = Vec::with_capacity(self.k);
        for i in 0..k {
            let block = falling(n - i - 1, k - i - 1);
            let mut slot = (rank / block) as usize;
            rank %= block;
            // slot-th smallest value not yet used
            let mut v = 0;
            loop {
                if !vars.contains(&v) {
                    if slot == 0 {
                        break;
                    }
                    slot -= 1;
                }
                v += 1;
            }
            vars.push(v);
        }
        Ok(Constraint { vars, table })
    }

    /// Every injective scope in rank order.
    pub fn scopes(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let predicates = self.predicates();
        (0..self.injections()).map(move |r| {
            self.decode(r * predicates)
                .expect("rank below injection count")
                .vars
        })
    }
}

pub(crate) fn falling(n: u64, k: u64) -> u64 {
    (0..k).map(|i| n - i).product()
}

/// Assignment `x` with `x_i` the `i`-th base-`q` digit of `index` (least
/// significant first). For `q = 2` this coincides with [`Cut`] masks.
pub fn assignment_from_index(index: u64, n: usize, q: usize) -> Vec<u32> {
    let mut rest = index;
    (0..n)
        .map(|_| {
            let d = (rest % q as u64) as u32;
            rest /= q as u64;
            d
        })
        .collect()
}

pub fn assignment_index(x: &[u32], q: usize) -> u64 {
    x.iter()
        .rev()
        .fold(0u64, |acc, &d| acc * q as u64 + u64::from(d))
}

/// A Max-CSP instance. Repeated constraints count once in the value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    shape: CspShape,
    stream: Vec<Constraint>,
    distinct: Vec<Constraint>,
}

impl CspInstance {
    pub fn new(shape: CspShape, constraints: Vec<Constraint>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut distinct = Vec::new();
        for c in &constraints {
            if seen.insert(shape.encode(c)?) {
                distinct.push(c.clone());
            }
        }
        Ok(CspInstance {
            shape,
            stream: constraints,
            distinct,
        })
    }

    /// Max-Cut embedded as Max-CSP with `k = q = 2` and the disequality predicate.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let shape = CspShape::new(g.n(), 2, 2)?;
        let u = g.universe();
        let constraints = g
            .edges()
            .iter()
            .map(|&e| {
                let (a, b) = u.decode(e)?;
                Ok(Constraint::cut_edge(a, b))
            })
            .collect::<Result<Vec<_>>>()?;
        CspInstance::new(shape, constraints)
    }

    pub fn shape(&self) -> CspShape {
        self.shape
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.stream
    }

    pub fn distinct(&self) -> &[Constraint] {
        &self.distinct
    }

    pub fn satisfied_count(&self, x: &[u32]) -> u64 {
        self.distinct
            .iter()
            .filter(|c| c.satisfied_by(self.shape.q, x))
            .count() as u64
    }

    /// `val_Φ(x)`: fraction of distinct constraints satisfied by `x`.
    pub fn value(&self, x: &[u32]) -> Result<f64> {
        if x.len() != self.shape.n {
            return Err(Error::InvalidInput(format!(
                "assignment has {} entries for {} variables",
                x.len(),
                self.shape.n
            )));
        }
        if let Some(&bad) = x.iter().find(|&&d| d as usize >= self.shape.q) {
            return Err(Error::InvalidInput(format!(
                "assignment value {bad} outside alphabet [0, {})",
                self.shape.q
            )));
        }
        if self.distinct.is_empty() {
            return Err(Error::Undefined(
                "value of an instance with no constraints".into(),
            ));
        }
        Ok(self.satisfied_count(x) as f64 / self.distinct.len() as f64)
    }
}

/// Free-function form of [`CspInstance::value`].
pub fn csp_value(phi: &CspInstance, x: &[u32]) -> Result<f64> {
    phi.value(x)
}
