//! Did university productivity converge? Dispersion of the two FSS
//! distributions and the variance-ratio test between them.

use fssrank::fixture::{self, UNIVERSITIES};
use fssrank::report::{render_dispersion, render_variance_test};
use fssrank::stats::{dispersion, fisher_variance_test};

fn main() -> fssrank::Result<()> {
    let before: Vec<f64> = UNIVERSITIES.iter().map(|r| r.fss_before).collect();
    let after: Vec<f64> = UNIVERSITIES.iter().map(|r| r.fss_after).collect();
    println!("{}", render_dispersion(fixture::PERIOD_BEFORE, &dispersion(&before)?));
    println!("{}", render_dispersion(fixture::PERIOD_AFTER, &dispersion(&after)?));
    println!("{}", render_variance_test(&fisher_variance_test(&before, &after)?));
    Ok(())
}
