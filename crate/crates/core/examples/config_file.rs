//! Builds a run configuration, renders it as key = value text and reads
//! it back.

use fssrank::config::period_from_parts;
use fssrank::{CountingScheme, RunConfig, Theta};

fn main() -> fssrank::Result<()> {
    let mut config = RunConfig::new(
        "data/corpus",
        period_from_parts("2007-2011", Some("2013-12-31"))?,
        period_from_parts("2013-2017", Some("2019-12-31"))?,
    )?;
    config.theta = Theta::new(0.7)?;
    config.scheme_overrides.insert("AGR/01".into(), CountingScheme::Positional);

    let text = config.to_text();
    print!("{text}");
    assert_eq!(RunConfig::parse(&text)?, config);
    println!("# round trip ok");
    Ok(())
}
