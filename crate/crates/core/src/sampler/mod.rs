//! Monte Carlo realization of virtual operations by signed random channel selection.

mod estimate;
mod operation;

pub use estimate::{
    estimate, estimate_with_channel, exact_expectation, hoeffding_bound, required_samples, shot_values,
    EstimateReport, SamplerConfig,
};
pub use operation::VirtualOperation;
