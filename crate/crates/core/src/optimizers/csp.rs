use super::{
    argmax, density_warning, DenseRunConfig, OptResult, SamplerPlan, Solution, Variant,
    MAX_CSP_ASSIGNMENTS,
};
use crate::error::{Error, Result};
use crate::f0::{F0Params, F0Sketch};
use crate::sampler::DEFAULT_MULTIPLICITY_CAP;
use crate::universe::{assignment_from_index, Constraint, CspInstance, CspShape};

const UNION_TAG: u64 = 4;
/// Largest arity and alphabet accepted by the CSP paths.
pub const MAX_CSP_ARITY: usize = 3;
pub const MAX_CSP_ALPHABET: usize = 3;
/// Largest `|T(x)|` enumerated per query on the F0 path.
pub const MAX_SATISFYING_SET: u64 = 1 << 24;

pub fn csp_dense(phi: &CspInstance, cfg: &DenseRunConfig) -> Result<OptResult> {
    match cfg.variant {
        Variant::F0 => csp_dense_f0(phi, cfg),
        Variant::Sampler => csp_dense_sampler(phi, cfg),
    }
}

fn assignment_count(shape: CspShape) -> Result<u64> {
    if shape.k > MAX_CSP_ARITY {
        return Err(Error::CapExceeded {
            what: "arity k",
            got: shape.k as u64,
            cap: MAX_CSP_ARITY as u64,
        });
    }
    if shape.q > MAX_CSP_ALPHABET {
        return Err(Error::CapExceeded {
            what: "alphabet q",
            got: shape.q as u64,
            cap: MAX_CSP_ALPHABET as u64,
        });
    }
    let count = (shape.q as u64)
        .checked_pow(shape.n as u32)
        .filter(|&c| c <= MAX_CSP_ASSIGNMENTS)
        .ok_or(Error::CapExceeded {
            what: "assignment count q^n",
            got: (shape.q as f64).powi(shape.n as i32).min(u64::MAX as f64) as u64,
            cap: MAX_CSP_ASSIGNMENTS,
        })?;
    Ok(count)
}

fn warnings_for(phi: &CspInstance, cfg: &DenseRunConfig, m: u64) -> Vec<String> {
    let shape = phi.shape();
    let floor = cfg.alpha * (shape.n as f64).powi(shape.k as i32);
    density_warning(m as f64, floor, "m").into_iter().collect()
}

/// Row index of `x` restricted to `scope` in a truth table.
fn row(scope: &[usize], q: usize, x: &[u32]) -> u32 {
    scope.iter().fold(0u32, |acc, &v| acc * q as u32 + x[v])
}

/// Exact constraint counter plus one union sketch at
/// `(εα / (8·2^(q^k)·q^k), 1/(3 q^n))`. Each assignment `x` gets
/// `V̂_x = m + |T(x)| - Û_x`, with `T(x)` every constraint in the universe
/// that `x` satisfies, streamed into the union query without being stored.
pub fn csp_dense_f0(phi: &CspInstance, cfg: &DenseRunConfig) -> Result<OptResult> {
    cfg.validate()?;
    let shape = phi.shape();
    let count = assignment_count(shape)?;
    let (n, q) = (shape.n, shape.q);
    let predicates = shape.predicates();
    let t_size = shape.injections() * (predicates / 2);
    if t_size > MAX_SATISFYING_SET {
        return Err(Error::CapExceeded {
            what: "|T(x)|",
            got: t_size,
            cap: MAX_SATISFYING_SET,
        });
    }

    let qk = shape.table_len() as f64;
    let eps_prime = cfg.eps * cfg.alpha / (8.0 * 2f64.powf(qk) * qk);
    let delta = 1.0 / (3.0 * (q as f64).powi(n as i32));
    let mut union = F0Sketch::new(
        F0Params::new(eps_prime, delta, shape.universe_size()?)?,
        cfg.subseed(UNION_TAG),
    );
    let mut m = 0u64;
    for c in phi.constraints() {
        union.insert(shape.encode(c)?)?;
        m += 1;
    }
    if m == 0 {
        return Err(Error::Undefined(
            "max-CSP of an empty constraint stream".into(),
        ));
    }
    let warnings = warnings_for(phi, cfg, m);
    let scopes: Vec<Vec<usize>> = shape.scopes().collect();
    let half = predicates / 2;

    let ((index, v_hat), table) = argmax(count, cfg.record_table, |index| {
        let x = assignment_from_index(index, n, q);
        let satisfying = scopes.iter().enumerate().flat_map(|(rank, scope)| {
            let j = row(scope, q, &x);
            let low = (1u64 << j) - 1;
            let base = rank as u64 * predicates;
            // every table with bit j set, in increasing order
            (0..half).map(move |rest| base + (((rest & !low) << 1) | (1 << j) | (rest & low)))
        });
        let u_hat = union.estimate_union(satisfying)?;
        Ok(Some((m as f64 + t_size as f64 - u_hat) / m as f64))
    })?;
    Ok(OptResult::new(
        Solution::Assignment {
            q,
            values: assignment_from_index(index, n, q),
        },
        v_hat.clamp(0.0, 1.0),
        warnings,
        table.map(clamp_rows),
    ))
}

fn clamp_rows(rows: Vec<super::QueryEstimate>) -> Vec<super::QueryEstimate> {
    rows.into_iter()
        .map(|mut r| {
            r.estimate = r.estimate.clamp(0.0, 1.0);
            r
        })
        .collect()
}

/// One subsampler pass over the constraint universe with `ε' = ε/(4 q^k)`,
/// `λ = ε'α`, `t = 4n/(ε'²α²)`; each assignment is scored by `μ̂(f_x)` where
/// `f_x` indicates satisfaction.
pub fn csp_dense_sampler(phi: &CspInstance, cfg: &DenseRunConfig) -> Result<OptResult> {
    cfg.validate()?;
    let shape = phi.shape();
    let count = assignment_count(shape)?;
    let (n, q) = (shape.n, shape.q);
    let eps_prime = cfg.eps / (4.0 * shape.table_len() as f64);
    let plan = SamplerPlan::new(cfg, n, eps_prime);
    let encoded = phi
        .constraints()
        .iter()
        .map(|c| shape.encode(c))
        .collect::<Result<Vec<_>>>()?;
    let sigma = plan.run(
        cfg,
        shape.universe_size()?,
        DEFAULT_MULTIPLICITY_CAP,
        encoded,
    )?;
    let weight = sigma.copy_weight()?;
    let m = sigma.stream_size() as u64;
    let mut warnings = warnings_for(phi, cfg, m);
    if !cfg.sampler.exhaustive && sigma.size() == 0 {
        warnings.push("the walk hit no stream element; every estimate is 0".into());
    }
    let sampled: Vec<(Constraint, u64)> = sigma
        .copies()
        .iter()
        .map(|&(e, c)| Ok((shape.decode(e)?, c)))
        .collect::<Result<_>>()?;

    let ((index, mu), table) = argmax(count, cfg.record_table, |index| {
        let x = assignment_from_index(index, n, q);
        let hits: u64 = sampled
            .iter()
            .filter(|(c, _)| c.satisfied_by(q, &x))
            .map(|&(_, c)| c)
            .sum();
        Ok(Some(weight * hits as f64))
    })?;
    Ok(OptResult::new(
        Solution::Assignment {
            q,
            values: assignment_from_index(index, n, q),
        },
        mu,
        warnings,
        table,
    ))
}
