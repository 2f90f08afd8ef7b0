//! Opt-in process-wide record of certificate checks on optimal solutions.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use super::certificate::CertificateReport;

static ENABLED: AtomicBool = AtomicBool::new(false);
static OPTIMAL: AtomicU64 = AtomicU64::new(0);
static REJECTED: AtomicU64 = AtomicU64::new(0);
// Bit pattern of a nonnegative f64; integer order matches float order.
static WORST: AtomicU64 = AtomicU64::new(0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditSnapshot {
    pub optimal: u64,
    pub rejected: u64,
    /// Largest primal or dual residual seen.
    pub worst_residual: f64,
}

/// Starts (or restarts) auditing: every optimal solve from now on is verified.
pub fn start_audit() {
    OPTIMAL.store(0, Ordering::SeqCst);
    REJECTED.store(0, Ordering::SeqCst);
    WORST.store(0, Ordering::SeqCst);
    ENABLED.store(true, Ordering::SeqCst);
}

pub fn stop_audit() -> AuditSnapshot {
    ENABLED.store(false, Ordering::SeqCst);
    audit_snapshot()
}

pub fn audit_snapshot() -> AuditSnapshot {
    AuditSnapshot {
        optimal: OPTIMAL.load(Ordering::SeqCst),
        rejected: REJECTED.load(Ordering::SeqCst),
        worst_residual: f64::from_bits(WORST.load(Ordering::SeqCst)),
    }
}

pub(crate) fn enabled() -> bool {
    ENABLED.load(Ordering::Relaxed)
}

pub(crate) fn record(report: &CertificateReport) {
    OPTIMAL.fetch_add(1, Ordering::SeqCst);
    if !report.accepted {
        REJECTED.fetch_add(1, Ordering::SeqCst);
    }
    let r = report.primal_residual.max(report.dual_residual);
    let r = if r.is_nan() { f64::INFINITY } else { r.max(0.0) };
    WORST.fetch_max(r.to_bits(), Ordering::SeqCst);
}
