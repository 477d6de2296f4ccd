//! Dense-stream `(1 - ε)`-approximations for Max-Cut, Densest Subgraph and
//! Max-CSP, each with an F0-sketch path and an expander-sampler path, plus
//! exhaustive oracles.
//!
//! All paths read the stream once, then enumerate every candidate solution
//! against the frozen sketch. The query loop runs on the rayon pool; the
//! winner is the highest estimate, ties going to the smallest solution index.

mod brute;
mod csp;
mod densest;
mod maxcut;

pub use brute::{csp_brute, densest_brute, maxcut_brute};
pub use csp::{csp_dense, csp_dense_f0, csp_dense_sampler};
pub use densest::{densest_dense, densest_dense_f0, densest_dense_sampler};
pub use maxcut::{maxcut_dense, maxcut_dense_f0, maxcut_dense_sampler, MaxCutSketch};

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hashing::mix64;
use crate::sampler::{ExpanderGraph, Sigma, Update, WalkSample};
use crate::universe::{assignment_index, Cut};

/// Largest `n` for the `2^n` loops of the Max-Cut and densest paths.
pub const MAX_ENUM_VERTICES: usize = 24;
/// Largest `n` for [`densest_brute`].
pub const MAX_BRUTE_SUBSET_VERTICES: usize = 20;
/// Largest `q^n` for the CSP paths.
pub const MAX_CSP_ASSIGNMENTS: u64 = 1 << 24;
/// Largest `q^n` for [`csp_brute`].
pub const MAX_CSP_BRUTE_ASSIGNMENTS: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    F0,
    Sampler,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f0" => Ok(Variant::F0),
            "sampler" => Ok(Variant::Sampler),
            other => Err(Error::param(
                "variant",
                format!("unknown variant {other:?}"),
            )),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::F0 => "f0",
            Variant::Sampler => "sampler",
        })
    }
}

/// Overrides for the sampler path. `None` keeps the value derived from `eps` and `alpha`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SamplerOverrides {
    pub t: Option<usize>,
    pub lambda: Option<f64>,
    /// Replace the walk by one pass over every expander vertex.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseRunConfig {
    pub eps: f64,
    pub alpha: f64,
    pub variant: Variant,
    pub seed: u64,
    /// Keep every per-solution estimate in [`OptResult::table`].
    pub record_table: bool,
    pub sampler: SamplerOverrides,
}

impl DenseRunConfig {
    pub fn new(eps: f64, alpha: f64, seed: u64) -> Result<Self> {
        let cfg = DenseRunConfig {
            eps,
            alpha,
            variant: Variant::F0,
            seed,
            record_table: false,
            sampler: SamplerOverrides::default(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_table(mut self) -> Self {
        self.record_table = true;
        self
    }

    pub fn with_sampler(mut self, sampler: SamplerOverrides) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(Error::param("eps", format!("{} not in (0, 1)", self.eps)));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::param(
                "alpha",
                format!("{} not in (0, 1]", self.alpha),
            ));
        }
        if let Some(l) = self.sampler.lambda {
            if !(l > 0.0 && l < 1.0) {
                return Err(Error::param("lambda", format!("{l} not in (0, 1)")));
            }
        }
        if self.sampler.t == Some(0) {
            return Err(Error::param("t", "walk length must be at least 1"));
        }
        Ok(())
    }

    pub(crate) fn subseed(&self, tag: u64) -> u64 {
        mix64(tag, self.seed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Cut(Cut),
    /// Vertex set as a bitmask over `n` vertices.
    Subset {
        n: usize,
        mask: u64,
    },
    Assignment {
        q: usize,
        values: Vec<u32>,
    },
}

impl Solution {
    /// Bitmask (cuts, subsets) or base-`q` index (assignments).
    pub fn index(&self) -> u64 {
        match self {
            Solution::Cut(c) => c.mask(),
            Solution::Subset { mask, .. } => *mask,
            Solution::Assignment { q, values } => assignment_index(values, *q),
        }
    }

    pub fn hex(&self) -> String {
        format!("{:#x}", self.index())
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solution::Cut(c) => write!(f, "{c}"),
            Solution::Subset { n, mask } => {
                let members: Vec<String> = (0..*n)
                    .filter(|v| mask >> v & 1 == 1)
                    .map(|v| v.to_string())
                    .collect();
                write!(f, "{{{}}}", members.join(","))
            }
            Solution::Assignment { values, .. } => {
                for v in values {
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QueryEstimate {
    pub index: u64,
    pub estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub solution: Solution,
    /// Estimated objective of `solution`: a fraction for Max-Cut and Max-CSP,
    /// `|E(S)| / |S|` for densest subgraph.
    pub estimate: f64,
    /// True objective of `solution`, filled in when an oracle is run.
    pub exact: Option<f64>,
    /// Brute-force optimum, filled in when an oracle is run.
    pub optimum: Option<f64>,
    pub warnings: Vec<String>,
    pub table: Option<Vec<QueryEstimate>>,
}

impl OptResult {
    fn new(
        solution: Solution,
        estimate: f64,
        warnings: Vec<String>,
        table: Option<Vec<QueryEstimate>>,
    ) -> Self {
        OptResult {
            solution,
            estimate,
            exact: None,
            optimum: None,
            warnings,
            table,
        }
    }
}

fn better(a: (u64, f64), b: (u64, f64)) -> (u64, f64) {
    match a.1.total_cmp(&b.1) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if a.0 <= b.0 {
                a
            } else {
                b
            }
        }
    }
}

type Scored = ((u64, f64), Option<Vec<QueryEstimate>>);

/// Best `(index, estimate)` over `0..count`, skipping `None`; ties go to the
/// smaller index regardless of how rayon splits the range.
pub(crate) fn argmax<F>(count: u64, record: bool, score: F) -> Result<Scored>
where
    F: Fn(u64) -> Result<Option<f64>> + Sync,
{
    let none = (u64::MAX, f64::NEG_INFINITY);
    let (best, table) = if record {
        let scored: Vec<(u64, Option<f64>)> = (0..count)
            .into_par_iter()
            .map(|i| score(i).map(|s| (i, s)))
            .collect::<Result<_>>()?;
        let table: Vec<QueryEstimate> = scored
            .into_iter()
            .filter_map(|(index, s)| s.map(|estimate| QueryEstimate { index, estimate }))
            .collect();
        let best = table
            .iter()
            .fold(none, |acc, q| better(acc, (q.index, q.estimate)));
        (best, Some(table))
    } else {
        let best = (0..count)
            .into_par_iter()
            .map(|i| score(i).map(|s| s.map_or(none, |v| (i, v))))
            .try_reduce(|| none, |a, b| Ok(better(a, b)))?;
        (best, None)
    };
    if best.0 == u64::MAX {
        return Err(Error::Undefined(
            "no candidate solution passed the search filter".into(),
        ));
    }
    Ok((best, table))
}

pub(crate) fn check_enum_vertices(n: usize) -> Result<()> {
    if n > MAX_ENUM_VERTICES {
        return Err(Error::CapExceeded {
            what: "vertex count n",
            got: n as u64,
            cap: MAX_ENUM_VERTICES as u64,
        });
    }
    if n < 2 {
        return Err(Error::param("n", "need at least two vertices"));
    }
    Ok(())
}

/// Sampler parameters of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SamplerPlan {
    pub t: usize,
    pub lambda: f64,
}

impl SamplerPlan {
    /// `t = ⌈4n / (ε'² α²)⌉` and `λ = ε' α`, unless overridden.
    pub fn new(cfg: &DenseRunConfig, n: usize, eps_prime: f64) -> Self {
        let a = cfg.alpha;
        let t = (4.0 * n as f64 / (eps_prime * eps_prime * a * a)).ceil();
        SamplerPlan {
            t: cfg.sampler.t.unwrap_or(t.min(usize::MAX as f64) as usize),
            lambda: cfg.sampler.lambda.unwrap_or(eps_prime * a),
        }
    }

    /// Runs the subsampler over `stream` and returns `σ`.
    pub fn run<I>(&self, cfg: &DenseRunConfig, universe: u64, cap: i64, stream: I) -> Result<Sigma>
    where
        I: IntoIterator<Item = u64>,
    {
        let graph = ExpanderGraph::build(universe, self.lambda)?;
        let walk = if cfg.sampler.exhaustive {
            WalkSample::exhaustive(graph)
        } else {
            WalkSample::new(graph, self.t, cfg.subseed(SAMPLER_TAG))?
        };
        let mut walk = walk.with_multiplicity_cap(cap);
        for e in stream {
            walk.push(Update::insert(e))?;
        }
        walk.finish()
    }
}

const SAMPLER_TAG: u64 = 0x5a;

pub(crate) fn density_warning(m: f64, floor: f64, what: &str) -> Option<String> {
    (m < floor).then(|| {
        format!("{what} = {m} is below the density floor {floor}; the guarantee does not apply")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(DenseRunConfig::new(0.2, 0.2, 1).is_ok());
        assert!(DenseRunConfig::new(0.0, 0.2, 1).is_err());
        assert!(DenseRunConfig::new(1.0, 0.2, 1).is_err());
        assert!(DenseRunConfig::new(0.2, 0.0, 1).is_err());
        assert!(DenseRunConfig::new(0.2, 1.0, 1).is_ok());
        let mut cfg = DenseRunConfig::new(0.2, 0.2, 1).unwrap();
        cfg.sampler.lambda = Some(1.5);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn argmax_prefers_smallest_index_on_ties() {
        let ((i, v), _) = argmax(1000, false, |i| {
            Ok(Some(if i % 7 == 3 { 1.0 } else { 0.0 }))
        })
        .unwrap();
        assert_eq!((i, v), (3, 1.0));
        let ((i, _), table) = argmax(10, true, |i| Ok((i > 4).then_some(0.5))).unwrap();
        assert_eq!(i, 5);
        assert_eq!(table.unwrap().len(), 5);
        assert!(argmax(4, false, |_| Ok(None)).is_err());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("f0".parse::<Variant>().unwrap(), Variant::F0);
        assert_eq!("sampler".parse::<Variant>().unwrap(), Variant::Sampler);
        assert!("exact".parse::<Variant>().is_err());
    }
}
