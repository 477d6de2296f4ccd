use super::{
    argmax, check_enum_vertices, csp_dense_sampler, density_warning, DenseRunConfig, OptResult,
    Solution, Variant,
};
use crate::error::{Error, Result};
use crate::f0::{F0Params, F0Sketch};
use crate::universe::{crossing_set, CspInstance, Cut, EdgeUniverse, Graph};

const EDGES_TAG: u64 = 1;
const UNION_TAG: u64 = 2;

/// Dispatches on `cfg.variant`.
pub fn maxcut_dense(g: &Graph, cfg: &DenseRunConfig) -> Result<OptResult> {
    match cfg.variant {
        Variant::F0 => maxcut_dense_f0(g, cfg),
        Variant::Sampler => maxcut_dense_sampler(g, cfg),
    }
}

/// The two sketches of the Max-Cut streaming algorithm, queryable for any cut:
/// `m̂` at `(ε/10, 1/9)` and a union sketch at `(εα/10, 1/(9·2^n))`.
#[derive(Debug, Clone)]
pub struct MaxCutSketch {
    n: usize,
    universe: EdgeUniverse,
    edges: F0Sketch,
    union: F0Sketch,
}

impl MaxCutSketch {
    /// Streams the edges of `g` into both sketches.
    pub fn build(g: &Graph, cfg: &DenseRunConfig) -> Result<Self> {
        cfg.validate()?;
        let n = g.n();
        check_enum_vertices(n)?;
        let universe = g.universe();
        let size = universe.size();
        let eps = cfg.eps;
        let mut edges = F0Sketch::new(
            F0Params::new(eps / 10.0, 1.0 / 9.0, size)?,
            cfg.subseed(EDGES_TAG),
        );
        let union_delta = 1.0 / (9.0 * 2f64.powi(n as i32));
        let mut union = F0Sketch::new(
            F0Params::new(eps * cfg.alpha / 10.0, union_delta, size)?,
            cfg.subseed(UNION_TAG),
        );
        for &e in g.edges() {
            edges.insert(e)?;
            union.insert(e)?;
        }
        Ok(MaxCutSketch {
            n,
            universe,
            edges,
            union,
        })
    }

    pub fn m_hat(&self) -> f64 {
        self.edges.estimate()
    }

    /// `V̂_x = m̂ + |C(x)| - Û_x`, where `Û_x` estimates `|E ∪ C(x)|`.
    pub fn crossing_estimate(&self, cut: Cut) -> Result<f64> {
        if cut.n() != self.n {
            return Err(Error::InvalidInput(format!(
                "cut on {} vertices for a graph on {}",
                cut.n(),
                self.n
            )));
        }
        let side = u64::from(cut.popcount());
        let crossing = (side * (self.n as u64 - side)) as f64;
        let u_hat = self
            .union
            .estimate_union(crossing_set(cut, self.universe))?;
        Ok(self.m_hat() + crossing - u_hat)
    }
}

/// Scores every cut with `x_{n-1} = 0` by `V̂_x / m̂` from a [`MaxCutSketch`].
pub fn maxcut_dense_f0(g: &Graph, cfg: &DenseRunConfig) -> Result<OptResult> {
    let sketch = MaxCutSketch::build(g, cfg)?;
    let n = g.n();
    let m_hat = sketch.m_hat();
    if m_hat <= 0.0 {
        return Err(Error::Undefined("max-cut of an empty edge stream".into()));
    }
    let warnings: Vec<String> = density_warning(m_hat, cfg.alpha * (n * n) as f64, "m̂")
        .into_iter()
        .collect();

    let ((mask, v_hat), table) = argmax(1u64 << (n - 1), cfg.record_table, |mask| {
        Ok(Some(sketch.crossing_estimate(Cut::from_mask(n, mask)?)?))
    })?;
    let table = table.map(|rows| {
        rows.into_iter()
            .map(|mut q| {
                q.estimate = (q.estimate / m_hat).clamp(0.0, 1.0);
                q
            })
            .collect()
    });
    Ok(OptResult::new(
        Solution::Cut(Cut::from_mask(n, mask)?),
        (v_hat / m_hat).clamp(0.0, 1.0),
        warnings,
        table,
    ))
}

/// The Max-CSP sampler path on the disequality embedding (`k = q = 2`).
pub fn maxcut_dense_sampler(g: &Graph, cfg: &DenseRunConfig) -> Result<OptResult> {
    check_enum_vertices(g.n())?;
    let phi = CspInstance::from_graph(g)?;
    let mut result = csp_dense_sampler(&phi, cfg)?;
    let Solution::Assignment { values, .. } = &result.solution else {
        unreachable!("csp paths return assignments");
    };
    let sides: Vec<bool> = values.iter().map(|&v| v == 1).collect();
    result.solution = Solution::Cut(Cut::from_sides(&sides)?);
    Ok(result)
}
