//! Overheads and rates of virtual distillation.

mod overhead;
mod rate;
mod teleport;
mod theory;
mod zeta;

pub use overhead::{overhead_bounds, overhead_closed_form, OverheadMethod, OverheadResult};
pub use rate::{conventional_rate, virtual_rate, RateEntry, RateResult, RATE_TIE_TOL};
pub use teleport::build_virtual_operation_teleport;
pub use theory::{TargetData, Theory};
pub use zeta::{zeta, Variant, ZetaResult};

#[cfg(test)]
mod tests;
