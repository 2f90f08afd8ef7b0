use super::overhead::{overhead_bounds, OverheadResult};
use super::theory::Theory;
use super::zeta::{positive_test_overlap, Variant, FEASIBILITY_SLACK};
use crate::error::{Error, Result};
use crate::qmath::DensityMatrix;

/// Rates closer than this count as tied; the smaller `m` wins.
pub const RATE_TIE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct RateEntry {
    pub m: usize,
    pub overhead: f64,
    /// `m / C^2`, zero for an infinite overhead.
    pub rate: f64,
}

#[derive(Clone, Debug)]
pub struct RateResult {
    pub epsilon: f64,
    /// Zero when every overhead is infinite.
    pub m_star: usize,
    pub rate: f64,
    pub per_m: Vec<RateEntry>,
    pub overheads: Vec<OverheadResult>,
}

fn check_m_max(theory: Theory, m_max: usize) -> Result<()> {
    if m_max == 0 {
        return Err(Error::InvalidArgument("m_max must be at least 1".into()));
    }
    if m_max > theory.max_copies() {
        return Err(Error::Unsupported(format!(
            "{theory} supports m_max up to {}, got {m_max}",
            theory.max_copies()
        )));
    }
    Ok(())
}

/// Largest `m <= m_max` reachable by a single free operation within `eps`; zero if none.
///
/// This is the overhead program with the negative part removed, evaluated at
/// the lower-bound `k = 1/F_F` with the same free-state condition used for the
/// overhead, so a feasible `m` always has overhead one.
pub fn conventional_rate(rho: &DensityMatrix, eps: f64, theory: Theory, m_max: usize) -> Result<usize> {
    check_m_max(theory, m_max)?;
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("eps = {eps} outside [0, 1)")));
    }
    let free = theory.input_free_set();
    let mut best = 0;
    for m in 1..=m_max {
        let td = theory.target_data(m)?;
        let c = &td.coincidence;
        let variant = if c.rs_plus_1.is_finite() { Variant::S } else { Variant::G };
        let overlap = positive_test_overlap(rho, c.fs_inv, variant, &free)?;
        if overlap >= 1.0 - eps - FEASIBILITY_SLACK {
            best = m;
        }
    }
    Ok(best)
}

/// `max_m m / C^eps(rho, m)^2` over `m = 1..=m_max`.
pub fn virtual_rate(rho: &DensityMatrix, eps: f64, theory: Theory, m_max: usize) -> Result<RateResult> {
    check_m_max(theory, m_max)?;
    let overheads = (1..=m_max)
        .map(|m| overhead_bounds(rho, m, eps, theory))
        .collect::<Result<Vec<_>>>()?;
    let per_m: Vec<RateEntry> = overheads
        .iter()
        .map(|o| {
            let c = o.value();
            RateEntry {
                m: o.m,
                overhead: c,
                rate: if c.is_finite() { o.m as f64 / (c * c) } else { 0.0 },
            }
        })
        .collect();
    let mut m_star = 0;
    let mut rate = 0.0;
    for e in &per_m {
        if e.rate > rate + RATE_TIE_TOL {
            rate = e.rate;
            m_star = e.m;
        }
    }
    Ok(RateResult {
        epsilon: eps,
        m_star,
        rate,
        per_m,
        overheads,
    })
}
