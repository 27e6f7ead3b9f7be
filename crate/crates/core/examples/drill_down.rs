//! University × field rank-change marks.
//!
//! Scores two synthetic periods, builds the UDA drill-down and prints it
//! next to the published per-UDA breakdown for Firenze.

use std::collections::BTreeMap;

use fssrank::comparison::{drill_down, Mark};
use fssrank::scoring::score_period;
use fssrank::synthetic::{generate, SyntheticSpec};
use fssrank::{fixture, report, Level, ObservationPeriod, ScoringOptions, TieBreak};

fn main() -> fssrank::Result<()> {
    let mut units = Vec::new();
    let mut regions = BTreeMap::new();
    for (seed, start, end) in [(11, 2007, 2011), (12, 2013, 2017)] {
        let corpus = generate(&SyntheticSpec {
            seed,
            start_year: start,
            end_year: end,
            professors: 600,
            sectors: 10,
            ..SyntheticSpec::default()
        });
        for u in corpus.universities.values() {
            regions.insert(u.id.clone(), u.macro_region);
        }
        let period = ObservationPeriod::with_year_end_census(start, end)?;
        let scores = score_period(&corpus.period_dataset(period)?, ScoringOptions::default())?;
        units.push(scores.units_at(Level::Uda).cloned().collect::<Vec<_>>());
    }
    let drill = drill_down(&units[0], &units[1], TieBreak::UnitKey)?;
    print!("{}", report::render_drilldown_table(&drill, &regions));

    println!("\nPublished Firenze breakdown by UDA:");
    for row in &fixture::FIRENZE_BY_UDA {
        let mark = Mark::from_delta(i64::from(row.delta_rank));
        println!(
            "  UDA {:>2}: rank {:>2} -> {:>2} {}",
            row.field,
            row.rank_before,
            row.rank_after,
            mark.symbol()
        );
    }
    Ok(())
}
