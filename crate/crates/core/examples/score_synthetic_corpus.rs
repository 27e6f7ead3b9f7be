//! Generates a seeded corpus, scores one period and lists the top
//! universities and the SDS scaling factors.
//!
//! ```text
//! cargo run --example score_synthetic_corpus -- [seed]
//! ```

use fssrank::scoring::score_period;
use fssrank::synthetic::{generate, SyntheticSpec};
use fssrank::{Level, ObservationPeriod, ScoringOptions};

fn main() -> fssrank::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let corpus = generate(&SyntheticSpec {
        seed,
        universities: 8,
        professors: 400,
        sectors: 6,
        ..SyntheticSpec::default()
    });
    let period = ObservationPeriod::with_year_end_census(2007, 2011)?;
    let dataset = corpus.period_dataset(period)?;
    let scores = score_period(&dataset, ScoringOptions { jobs: 0, ..ScoringOptions::default() })?;

    println!(
        "{} professors assessed, {:.1}% unproductive",
        scores.professors.len(),
        100.0 * scores.unproductive_share
    );
    println!("\nSDS scaling factors (productive mean of FSS_p):");
    for (sds, factor) in &scores.scaling.factors {
        println!("  {sds:<12} {factor:.4}");
    }

    let mut units: Vec<_> = scores.units_at(Level::Overall).collect();
    units.sort_by(|a, b| b.fss.total_cmp(&a.fss));
    println!("\n{:<6} {:>6} {:>8}", "unit", "staff", "FSS");
    for u in units {
        println!("{:<6} {:>6} {:>8.3}", u.unit_key, u.staff, u.fss);
    }
    Ok(())
}
