//! Ranks the 60 published universities in both periods and prints the
//! rank-shift table, most improved first.

use std::collections::BTreeMap;

use fssrank::replicate::fixture_shifts;
use fssrank::{fixture, report, TieBreak};

fn main() -> fssrank::Result<()> {
    let shifts = fixture_shifts(TieBreak::Hint)?;
    let mut shifts = shifts;
    fssrank::comparison::sort_for_display(&mut shifts);
    let regions: BTreeMap<_, _> = fixture::regions();
    print!(
        "{}",
        report::render_shift_table(&shifts, &regions, fixture::PERIOD_BEFORE, fixture::PERIOD_AFTER)
    );
    Ok(())
}
