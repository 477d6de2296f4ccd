use super::{
    argmax, check_enum_vertices, density_warning, DenseRunConfig, OptResult, SamplerPlan, Solution,
    Variant,
};
use crate::error::{Error, Result};
use crate::f0::{F0Params, F0Sketch};
use crate::universe::{induced_pairs, Graph};

const UNION_TAG: u64 = 3;

pub fn densest_dense(g: &Graph, cfg: &DenseRunConfig) -> Result<OptResult> {
    match cfg.variant {
        Variant::F0 => densest_dense_f0(g, cfg),
        Variant::Sampler => densest_dense_sampler(g, cfg),
    }
}

/// `|S| >= m/n`, checked without rounding.
fn large_enough(size: u32, m: u64, n: usize) -> bool {
    u64::from(size) * n as u64 >= m
}

/// Exact edge counter plus one union sketch at `(εα²/4, 1/(2·2^n))`. Each
/// `S` with `|S| >= m/n` gets `D̂_S = (m + |D(S)| - Û_S) / |S|`, where `D(S)`
/// is every pair inside `S` and `Û_S` estimates `|E ∪ D(S)|`.
pub fn densest_dense_f0(g: &Graph, cfg: &DenseRunConfig) -> Result<OptResult> {
    cfg.validate()?;
    let n = g.n();
    check_enum_vertices(n)?;
    let universe = g.universe();
    let eps_prime = cfg.eps * cfg.alpha * cfg.alpha / 4.0;
    let delta = 1.0 / (2.0 * 2f64.powi(n as i32));
    let mut union = F0Sketch::new(
        F0Params::new(eps_prime, delta, universe.size())?,
        cfg.subseed(UNION_TAG),
    );
    let mut m = 0u64;
    for &e in g.edges() {
        union.insert(e)?;
        m += 1;
    }
    let warnings: Vec<String> = density_warning(m as f64, cfg.alpha * (n * n) as f64, "m")
        .into_iter()
        .collect();

    let ((mask, density), table) = argmax(1u64 << n, cfg.record_table, |mask| {
        let size = mask.count_ones();
        if size == 0 || !large_enough(size, m, n) {
            return Ok(None);
        }
        let pairs = u64::from(size) * u64::from(size - 1) / 2;
        let u_hat = union.estimate_union(induced_pairs(mask, universe))?;
        Ok(Some((m as f64 + pairs as f64 - u_hat) / f64::from(size)))
    })?;
    Ok(OptResult::new(
        Solution::Subset { n, mask },
        density.max(0.0),
        warnings,
        table,
    ))
}

/// One subsampler pass with `ε' = εα/16`, `λ = ε'α`, `t = 4n/(ε'²α²)`, then
/// `(m/|S|)·μ̂(f_S)` for each `|S| >= m/n`, with `f_S(e) = [e ⊆ S]`. The
/// stream must be a simple graph: repeated edges trip the counter cap.
pub fn densest_dense_sampler(g: &Graph, cfg: &DenseRunConfig) -> Result<OptResult> {
    cfg.validate()?;
    let n = g.n();
    check_enum_vertices(n)?;
    let universe = g.universe();
    let eps_prime = cfg.eps * cfg.alpha / 16.0;
    let plan = SamplerPlan::new(cfg, n, eps_prime);
    let sigma = plan.run(cfg, universe.size(), 1, g.edges().iter().copied())?;
    let m = sigma.stream_size() as u64;
    if m == 0 {
        return Err(Error::Undefined(
            "densest subgraph of an empty edge stream".into(),
        ));
    }
    let mut warnings: Vec<String> = density_warning(m as f64, cfg.alpha * (n * n) as f64, "m")
        .into_iter()
        .collect();
    if !cfg.sampler.exhaustive && sigma.size() == 0 {
        warnings.push("the walk hit no stream element; every estimate is 0".into());
    }
    let sampled: Vec<(u64, u64)> = sigma
        .copies()
        .iter()
        .map(|&(e, c)| {
            let (u, v) = universe.decode(e)?;
            Ok(((1u64 << u) | (1u64 << v), c))
        })
        .collect::<Result<_>>()?;
    let weight = sigma.copy_weight()?;

    let ((mask, density), table) = argmax(1u64 << n, cfg.record_table, |mask| {
        let size = mask.count_ones();
        if size == 0 || !large_enough(size, m, n) {
            return Ok(None);
        }
        let inside: u64 = sampled
            .iter()
            .filter(|&&(pair, _)| pair & mask == pair)
            .map(|&(_, c)| c)
            .sum();
        let mu = weight * inside as f64;
        Ok(Some(m as f64 / f64::from(size) * mu))
    })?;
    Ok(OptResult::new(
        Solution::Subset { n, mask },
        density,
        warnings,
        table,
    ))
}
