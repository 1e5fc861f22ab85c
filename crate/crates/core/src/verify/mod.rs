//! Statistical checks used by the verification suite.

mod ks;
mod martingale;
mod rate;
mod stats;

pub use ks::{
    critical_value, kaplan_meier, km_ks_statistic, kolmogorov_sf, ks_statistic, two_sample_ks, KsReport,
    DEFAULT_ALPHA,
};
pub use martingale::{martingale_residual, path_residual, ResidualTracker};
pub use rate::{exp_rate_fit, exp_rate_fit_censored, RateFit};
pub use stats::{ols_slope, pairwise_sum, MeanSe};
