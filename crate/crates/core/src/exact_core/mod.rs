//! Exact scalars and truncated power series.
//!
//! Everything here is exact: no floating point is used anywhere in the
//! module. Series keep plain coefficients (not EGF-normalised); factorial
//! scaling only happens in [`egf_coeff`].

mod kernels;
mod rational;
mod series;

pub use kernels::{cosh_series, egf_coeff, exp_series, sinh_over_w_series, sinhc_series};
pub use rational::{binomial, factorial, format_rational, parse_rational, rational_serde, rational_vec_serde, Rational};
pub use series::Series;

/// Truncation order used when a caller does not pick one.
pub const DEFAULT_ORDER: usize = 30;
