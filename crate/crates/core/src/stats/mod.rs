//! Dispersion metrics, the Fisher variance-ratio test and OLS with full
//! inference. All functions are pure.

pub mod dispersion;
pub mod ols;
pub mod special;
pub mod variance;

pub use dispersion::{dispersion, quantile_sorted, sample_variance, DispersionSummary};
pub use ols::{ols, Coefficient, Covariance, ModelF, OlsFit, OlsOptions};
pub use special::{f_survival, incomplete_beta, ln_gamma, t_cdf, t_quantile, t_two_tailed};
pub use variance::{fisher_variance_test, VarianceTestResult, FISHER_CONVENTION};
