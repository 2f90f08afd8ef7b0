use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::VirtualOperation;
use crate::error::{Error, Result};
use crate::qmath::{DensityMatrix, Observable, QuantumChannel};

/// Shots per reduction chunk. Fixed so the summation tree does not depend on scheduling.
const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub n_samples: usize,
    /// Shot `i` draws from ChaCha8 seeded with `seed` on stream `i`.
    pub seed: u64,
    pub beta: f64,
    pub delta: f64,
}

impl SamplerConfig {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        Self {
            n_samples,
            seed,
            beta: 0.1,
            delta: 0.05,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidArgument("n_samples must be at least 1".into()));
        }
        if !(self.beta > 0.0) || !self.beta.is_finite() {
            return Err(Error::InvalidArgument(format!("beta = {} must be positive", self.beta)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidArgument(format!("delta = {} outside (0, 1)", self.delta)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub exact: Option<f64>,
    /// `C sqrt(ln(2/delta) / (2n))`
    pub hoeffding_bound: f64,
}

impl EstimateReport {
    pub fn within_bound(&self) -> Option<bool> {
        self.exact.map(|e| (self.mean - e).abs() <= self.hoeffding_bound)
    }
}

/// Accuracy guaranteed with probability `1 - delta` after `n` shots of a
/// virtual operation with overhead `c`.
///
/// Uses Hoeffding's inequality for shot values spread over a range of width
/// `c`, the convention matching [`required_samples`].
pub fn hoeffding_bound(c: f64, n: usize, delta: f64) -> f64 {
    c * ((2.0 / delta).ln() / (2.0 * n as f64)).sqrt()
}

/// `ceil(C^2 ln(2/delta) / (2 beta^2))`
pub fn required_samples(c: f64, beta: f64, delta: f64) -> Result<u64> {
    if !(c >= 1.0) || !c.is_finite() {
        return Err(Error::InvalidArgument(format!("overhead {c} must be finite and >= 1")));
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("beta = {beta} must be positive")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta = {delta} outside (0, 1)")));
    }
    Ok((c * c * (2.0 / delta).ln() / (2.0 * beta * beta)).ceil() as u64)
}

fn effective_observable(m: &Observable, post: Option<&QuantumChannel>) -> Result<Observable> {
    match post {
        Some(ch) => ch.adjoint_apply(m),
        None => Ok(m.clone()),
    }
}

fn check_dims(vop: &VirtualOperation, rho: &DensityMatrix, m: &Observable) -> Result<()> {
    if rho.dim() != vop.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} into an operation on dimension {}",
            rho.dim(),
            vop.dim_in()
        )));
    }
    if m.dim() != vop.dim_out() {
        return Err(Error::DimensionMismatch(format!(
            "observable of dimension {} after an operation with output {}",
            m.dim(),
            vop.dim_out()
        )));
    }
    Ok(())
}

/// `tr[M Lambda~(rho)] = sum_j w_j tr[M Lambda_j(rho)]`
pub fn exact_expectation(vop: &VirtualOperation, rho: &DensityMatrix, m: &Observable) -> Result<f64> {
    check_dims(vop, rho, m)?;
    Ok(vop
        .terms()
        .iter()
        .map(|(w, ch)| w * ch.apply_matrix(rho.matrix()).re_inner(m.matrix()))
        .sum())
}

/// Sampling tables: term selection and per-term Born distributions over the eigenbasis of `M`.
struct Tables {
    c: f64,
    term_cdf: Vec<f64>,
    signs: Vec<f64>,
    outcome_cdf: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
}

fn cdf(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let w: Vec<f64> = weights.map(|x| x.max(0.0)).collect();
    let total: f64 = w.iter().sum();
    let mut acc = 0.0;
    let mut out: Vec<f64> = w
        .iter()
        .map(|x| {
            acc += x / total;
            acc
        })
        .collect();
    if let Some(last) = out.last_mut() {
        *last = 1.0;
    }
    out
}

fn pick(cdf: &[f64], u: f64) -> usize {
    cdf.partition_point(|&x| x <= u).min(cdf.len() - 1)
}

impl Tables {
    fn new(vop: &VirtualOperation, rho: &DensityMatrix, m: &Observable) -> Self {
        let eig = m.eigen();
        let c = vop.overhead();
        let mut outcome_cdf = Vec::with_capacity(vop.terms().len());
        for (_, ch) in vop.terms() {
            let out = ch.apply_matrix(rho.matrix());
            let probs = (0..eig.values.len()).map(|k| out.expectation(&eig.vectors.column(k)));
            outcome_cdf.push(cdf(probs));
        }
        Self {
            c,
            term_cdf: cdf(vop.terms().iter().map(|(w, _)| w.abs())),
            signs: vop.terms().iter().map(|(w, _)| w.signum()).collect(),
            outcome_cdf,
            eigenvalues: eig.values.clone(),
        }
    }

    fn shot(&self, seed: u64, index: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let j = pick(&self.term_cdf, rng.gen::<f64>());
        let k = pick(&self.outcome_cdf[j], rng.gen::<f64>());
        self.c * self.signs[j] * self.eigenvalues[k]
    }
}

fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Individual shot values `C sign(w_j) outcome`, in shot order.
pub fn shot_values(vop: &VirtualOperation, rho: &DensityMatrix, m: &Observable, cfg: &SamplerConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    check_dims(vop, rho, m)?;
    let tables = Tables::new(vop, rho, m);
    Ok((0..cfg.n_samples as u64)
        .into_par_iter()
        .map(|i| tables.shot(cfg.seed, i))
        .collect())
}

/// Estimates `tr[M Lambda~(rho)]` from `cfg.n_samples` shots.
pub fn estimate(vop: &VirtualOperation, rho: &DensityMatrix, m: &Observable, cfg: &SamplerConfig) -> Result<EstimateReport> {
    estimate_with_channel(vop, rho, m, None, cfg)
}

/// As [`estimate`], measuring `M` after a further channel `post`.
pub fn estimate_with_channel(
    vop: &VirtualOperation,
    rho: &DensityMatrix,
    m: &Observable,
    post: Option<&QuantumChannel>,
    cfg: &SamplerConfig,
) -> Result<EstimateReport> {
    cfg.validate()?;
    let m = effective_observable(m, post)?;
    check_dims(vop, rho, &m)?;
    let tables = Tables::new(vop, rho, &m);
    let n = cfg.n_samples;
    let chunks: Vec<(f64, f64)> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            let vals: Vec<f64> = (lo..hi).map(|i| tables.shot(cfg.seed, i as u64)).collect();
            let sq: Vec<f64> = vals.iter().map(|x| x * x).collect();
            (pairwise_sum(&vals), pairwise_sum(&sq))
        })
        .collect();
    let sums: Vec<f64> = chunks.iter().map(|c| c.0).collect();
    let squares: Vec<f64> = chunks.iter().map(|c| c.1).collect();
    let nf = n as f64;
    let mean = pairwise_sum(&sums) / nf;
    let var = if n > 1 {
        ((pairwise_sum(&squares) - nf * mean * mean) / (nf - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(EstimateReport {
        mean,
        std_error: (var / nf).sqrt(),
        n_samples: n,
        exact: Some(exact_expectation(vop, rho, &m)?),
        hoeffding_bound: hoeffding_bound(vop.overhead(), n, cfg.delta),
    })
}
