use std::sync::atomic::{AtomicUsize, Ordering};

use log::{info, warn};
use rayon::prelude::*;

use super::config::SweepConfig;
use crate::error::Result;
use crate::vrd::{conventional_rate, virtual_rate, RateResult, Theory};

/// Both rates at one `(p, eps)` grid point.
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub theory: Theory,
    pub p: f64,
    pub eps: f64,
    pub conventional: Result<usize>,
    pub virtual_rate: Result<RateResult>,
}

impl SweepPoint {
    pub fn error(&self) -> Option<String> {
        let mut msgs = Vec::new();
        if let Err(e) = &self.conventional {
            msgs.push(format!("conventional rate: {e}"));
        }
        if let Err(e) = &self.virtual_rate {
            msgs.push(format!("virtual rate: {e}"));
        }
        (!msgs.is_empty()).then(|| msgs.join("; "))
    }
}

/// Evaluates every grid point, ascending in `eps` then `p`.
///
/// Points run on the current rayon pool; the order of the result does not
/// depend on scheduling.
pub fn run_sweep(theory: Theory, p_grid: &[f64], eps_list: &[f64], m_max: usize) -> Vec<SweepPoint> {
    let mut eps_sorted = eps_list.to_vec();
    eps_sorted.sort_by(f64::total_cmp);
    let points: Vec<(f64, f64)> = eps_sorted
        .iter()
        .flat_map(|&e| p_grid.iter().map(move |&p| (p, e)))
        .collect();
    let total = points.len();
    let done = AtomicUsize::new(0);
    points
        .into_par_iter()
        .map(|(p, eps)| {
            let point = match theory.noisy_state(p) {
                Ok(rho) => SweepPoint {
                    theory,
                    p,
                    eps,
                    conventional: conventional_rate(&rho, eps, theory, m_max),
                    virtual_rate: virtual_rate(&rho, eps, theory, m_max),
                },
                Err(e) => SweepPoint {
                    theory,
                    p,
                    eps,
                    conventional: Err(e.clone()),
                    virtual_rate: Err(e),
                },
            };
            if let Some(msg) = point.error() {
                warn!("{theory} p={p} eps={eps}: {msg}");
            }
            let n = done.fetch_add(1, Ordering::Relaxed) + 1;
            if n % 20 == 0 || n == total {
                info!("{theory}: {n}/{total} grid points");
            }
            point
        })
        .collect()
}

/// One output line: the overhead for a given `m` together with both rates at its grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct Figure2Row {
    pub theory: Theory,
    pub p: f64,
    pub eps: f64,
    pub m: usize,
    pub c_lower: f64,
    pub c_upper: f64,
    pub c_exact: Option<f64>,
    pub v: f64,
    pub d: Option<usize>,
    /// Set when a solver failed at this point; the numeric fields are then NaN.
    pub error: Option<String>,
}

pub fn rows_for_point(point: &SweepPoint, m_max: usize) -> Vec<Figure2Row> {
    let error = point.error();
    let d = point.conventional.as_ref().ok().copied();
    match &point.virtual_rate {
        Ok(rate) => rate
            .overheads
            .iter()
            .map(|o| Figure2Row {
                theory: point.theory,
                p: point.p,
                eps: point.eps,
                m: o.m,
                c_lower: o.lower,
                c_upper: o.upper,
                c_exact: o.exact,
                v: rate.rate,
                d,
                error: error.clone(),
            })
            .collect(),
        Err(_) => (1..=m_max)
            .map(|m| Figure2Row {
                theory: point.theory,
                p: point.p,
                eps: point.eps,
                m,
                c_lower: f64::NAN,
                c_upper: f64::NAN,
                c_exact: None,
                v: f64::NAN,
                d,
                error: error.clone(),
            })
            .collect(),
    }
}

pub fn run_figure2(cfg: &SweepConfig) -> Vec<Figure2Row> {
    run_sweep(cfg.theory, &cfg.p_grid, &cfg.eps_list, cfg.m_max)
        .iter()
        .flat_map(|pt| rows_for_point(pt, cfg.m_max))
        .collect()
}
