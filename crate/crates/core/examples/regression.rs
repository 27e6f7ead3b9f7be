//! Catch-up regression: change in FSS on starting FSS and a South dummy,
//! with classical and heteroskedasticity-robust standard errors.

use fssrank::replicate::fixture_regression;
use fssrank::report::render_regression_table;
use fssrank::stats::Covariance;

fn main() -> fssrank::Result<()> {
    for covariance in [Covariance::Classical, Covariance::Hc1] {
        println!("{covariance} standard errors\n");
        println!("{}", render_regression_table(&fixture_regression(covariance)?));
    }
    Ok(())
}
