//! Prints the built-in salary cost table and the normalization factor each
//! (UDA, rank) pair divides individual productivity by.

use fssrank::{AcademicRank, CostTable};

fn main() -> fssrank::Result<()> {
    let table = CostTable::italian_default();
    println!("base cost: {}", table.base_cost());
    println!("{:<40} {:>10} {:>10} {:>10}", "UDA", "Assistant", "Associate", "Full");
    for uda in table.udas() {
        let mut line = format!("{:<40}", format!("{} {}", uda.id(), uda.name()));
        for rank in AcademicRank::ALL {
            line.push_str(&format!(" {:>10.2}", table.normalization_factor(uda, rank)?));
        }
        println!("{line}");
    }
    Ok(())
}
