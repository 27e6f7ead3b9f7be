//! Improving and worsening universities per macro region.

use fssrank::comparison::region_summary;
use fssrank::replicate::fixture_shifts;
use fssrank::{fixture, report, TieBreak};

fn main() -> fssrank::Result<()> {
    let shifts = fixture_shifts(TieBreak::Hint)?;
    let summary = region_summary(&shifts, &fixture::regions())?;
    print!("{}", report::render_region_table(&summary));

    // Ties at two decimals decide several ranks; breaking them by name
    // instead of by published order changes the counts.
    let by_name = region_summary(&fixture_shifts(TieBreak::UnitKey)?, &fixture::regions())?;
    println!("\nties broken by university name:");
    print!("{}", report::render_region_table(&by_name));
    Ok(())
}
