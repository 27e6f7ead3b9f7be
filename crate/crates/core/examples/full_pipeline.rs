//! Writes a two-period synthetic corpus to disk, scores it, compares the
//! periods and lists the files produced.
//!
//! ```text
//! cargo run --example full_pipeline -- [output-dir]
//! ```

use std::path::PathBuf;

use fssrank::config::period_from_parts;
use fssrank::synthetic::{generate, write_corpus, SyntheticSpec};
use fssrank::{pipeline, report, RunConfig};

fn main() -> fssrank::Result<()> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("fssrank-full-pipeline"));

    for (seed, start, end) in [(1, 2007, 2011), (2, 2013, 2017)] {
        let corpus = generate(&SyntheticSpec {
            seed,
            start_year: start,
            end_year: end,
            universities: 12,
            professors: 900,
            sectors: 10,
            ..SyntheticSpec::default()
        });
        write_corpus(&corpus, &root.join(format!("corpus/{start}-{end}")))?;
    }

    let mut config = RunConfig::new(
        root.join("corpus"),
        period_from_parts("2007-2011", None)?,
        period_from_parts("2013-2017", None)?,
    )?;
    config.out = root.join("out");
    config.min_staff = 10;
    std::fs::write(root.join("run.conf"), config.to_text()).expect("writable output directory");

    pipeline::run_score(&config)?;
    let before = report::read_unit_scores(&config.out.join("2007-2011/unit_scores.csv"))?;
    let after = report::read_unit_scores(&config.out.join("2013-2017/unit_scores.csv"))?;
    let regions = pipeline::load_regions(&root.join("corpus/2007-2011/universities.csv"))?;
    let cmp = pipeline::run_compare(&before, &after, &regions, config.min_staff, &config.out.join("compare"))?;

    print!("{}", report::render_region_table(&cmp.regions));
    println!("\noutputs under {}", config.out.display());
    Ok(())
}
