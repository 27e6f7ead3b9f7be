//! End-to-end runs behind the command-line tool: scoring a corpus over two
//! periods, comparing unit scores, and replicating the published tables.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::comparison::{drill_down, joint_rankings, rank_shift, region_summary, sort_for_display, DrillDown, RankShift, RegionSummary, TieBreak};
use crate::config::RunConfig;
use crate::corpus::{BaselineFallback, Corpus, IngestOptions, ObservationPeriod};
use crate::error::{Error, Result};
use crate::fixture::{self, Side};
use crate::io::{open_csv, read_rows, write_file};
use crate::replicate::{replicate, ReplicationReport};
use crate::report;
use crate::scoring::{score_period, Level, PeriodScores, ScoringOptions, UnitScore};
use crate::taxonomy::MacroRegion;

/// Corpus directory for a period: `<corpus>/<YYYY-YYYY>` when present,
/// otherwise `<corpus>` itself.
pub fn period_corpus_dir(corpus: &Path, period: &ObservationPeriod) -> PathBuf {
    let sub = corpus.join(period.label());
    if sub.is_dir() {
        sub
    } else {
        corpus.to_path_buf()
    }
}

/// Ingests one period's corpus with the configured scheme overrides.
pub fn load_corpus(config: &RunConfig, period: &ObservationPeriod) -> Result<Corpus> {
    let dir = period_corpus_dir(&config.corpus, period);
    let mut corpus = Corpus::ingest(&dir, IngestOptions { strict: config.strict })?;
    for (sds, scheme) in &config.scheme_overrides {
        corpus.sds.override_scheme(sds, *scheme)?;
    }
    let needed: BTreeSet<_> = corpus
        .professors
        .values()
        .map(|p| corpus.sds.get(&p.sds).map(|s| s.uda))
        .collect::<Result<_>>()?;
    corpus.costs.require_udas(needed)?;
    Ok(corpus)
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodMetadata {
    pub period: String,
    pub census_date: String,
    pub corpus_digest: String,
    pub professors_assessed: usize,
    pub unproductive_share: f64,
    pub unscalable_sds: Vec<String>,
    pub dropped_references: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub theta: f64,
    pub periods: Vec<PeriodMetadata>,
}

#[derive(Debug, Clone)]
pub struct ScoreRun {
    pub periods: Vec<PeriodScores>,
    pub metadata: RunMetadata,
}

pub fn scoring_options(config: &RunConfig) -> ScoringOptions {
    ScoringOptions {
        theta: config.theta,
        jobs: config.jobs,
        baseline_fallback: if config.allow_external_baselines {
            BaselineFallback::External
        } else {
            BaselineFallback::Forbid
        },
    }
}

/// Scores both periods and writes `<out>/<period>/scores.csv`,
/// `<out>/<period>/unit_scores.csv`, `run_metadata.json` and `config.txt`.
pub fn run_score(config: &RunConfig) -> Result<ScoreRun> {
    config.validate()?;
    let options = scoring_options(config);
    let mut periods = Vec::new();
    let mut meta = Vec::new();
    for period in [config.period_before, config.period_after] {
        let corpus = load_corpus(config, &period)?;
        let dataset = corpus.period_dataset(period)?;
        let scores = score_period(&dataset, options)?;
        log::info!(
            "{}: {} professors, {} units",
            scores.period,
            scores.professors.len(),
            scores.units.len()
        );
        let dir = config.out.join(&scores.period);
        write_file(&dir.join("scores.csv"), &report::scores_csv(&scores.professors)?)?;
        write_file(&dir.join("unit_scores.csv"), &report::unit_scores_csv(&scores.units)?)?;
        meta.push(PeriodMetadata {
            period: scores.period.clone(),
            census_date: period.census_date.to_string(),
            corpus_digest: corpus.digest(),
            professors_assessed: scores.professors.len(),
            unproductive_share: scores.unproductive_share,
            unscalable_sds: scores.scaling.unscalable.clone(),
            dropped_references: corpus.report.dangling.clone(),
        });
        periods.push(scores);
    }
    let metadata = RunMetadata {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        theta: config.theta.value(),
        periods: meta,
    };
    write_file(&config.out.join("run_metadata.json"), &format!("{}\n", serde_json::to_string_pretty(&metadata)?))?;
    write_file(&config.out.join("config.txt"), &config.to_text())?;
    Ok(ScoreRun { periods, metadata })
}

#[derive(Deserialize)]
struct UniversityRegionRow {
    university_id: String,
    macro_region: String,
}

/// University id to macro region, from a `universities.csv`.
pub fn load_regions(path: &Path) -> Result<BTreeMap<String, MacroRegion>> {
    let (file, mut rdr) = open_csv(path)?;
    read_rows::<UniversityRegionRow, _>(&file, &mut rdr, &["university_id", "macro_region"])?
        .into_iter()
        .map(|(line, r)| {
            let region = r.macro_region.parse().map_err(|e| crate::io::malformed(&file, line, e))?;
            Ok((r.university_id, region))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct CompareRun {
    pub shifts: Vec<RankShift>,
    pub regions: Vec<RegionSummary>,
    pub drill_downs: Vec<(Level, DrillDown)>,
    pub markdown: String,
}

fn at_level(units: &[UnitScore], level: Level) -> Vec<UnitScore> {
    units.iter().filter(|u| u.level == level).cloned().collect()
}

/// Compares two sets of unit scores and writes `shifts.csv`,
/// `region_summary.csv`, `drilldown.csv`, `drilldown_summary.csv` and
/// `report.md` into `out`.
///
/// Exact FSS ties are broken by the optional `tie_order` column, then by
/// unit key.
pub fn run_compare(
    before: &[UnitScore],
    after: &[UnitScore],
    regions: &BTreeMap<String, MacroRegion>,
    min_staff: usize,
    out: &Path,
) -> Result<CompareRun> {
    let tie = TieBreak::Hint;
    let overall_before = at_level(before, Level::Overall);
    let overall_after = at_level(after, Level::Overall);
    if overall_before.is_empty() || overall_after.is_empty() {
        return Err(Error::InvalidArgument("no university-level units to compare".into()));
    }
    let (rb, ra) = joint_rankings(&overall_before, &overall_after, min_staff, tie)?;
    let dropped = overall_before.len().max(overall_after.len()) - rb.len();
    if dropped > 0 {
        log::warn!("{dropped} universities are missing from one period or below {min_staff} staff");
    }
    let mut shifts = rank_shift(&rb, &ra)?;
    sort_for_display(&mut shifts);
    let summary = region_summary(&shifts, regions)?;

    let mut drill_downs = Vec::new();
    for level in [Level::Uda, Level::Sds] {
        let (b, a) = (at_level(before, level), at_level(after, level));
        if !b.is_empty() && !a.is_empty() {
            drill_downs.push((level, drill_down(&b, &a, tie)?));
        }
    }

    let before_label = overall_before[0].period.clone();
    let after_label = overall_after[0].period.clone();
    let mut markdown = format!("# Rank shifts {before_label} to {after_label}\n\n");
    markdown.push_str(&report::render_shift_table(&shifts, regions, &before_label, &after_label));
    markdown.push_str("\n## By macro region\n\n");
    markdown.push_str(&report::render_region_table(&summary));
    for (level, drill) in &drill_downs {
        markdown.push_str(&format!("\n## By {level}\n\n"));
        markdown.push_str(&report::render_drilldown_table(drill, regions));
    }

    write_file(&out.join("shifts.csv"), &report::shifts_csv(&shifts, regions)?)?;
    write_file(&out.join("region_summary.csv"), &report::region_summary_csv(&summary)?)?;
    let mut drill_rows = String::new();
    let mut drill_summary = String::new();
    for (i, (level, drill)) in drill_downs.iter().enumerate() {
        let rows = report::drilldown_csv(*level, drill)?;
        let summary_rows = report::drilldown_summary_csv(*level, drill)?;
        // one header for the concatenated levels
        let skip = |s: String| if i == 0 { s } else { s.split_once('\n').map_or(String::new(), |(_, rest)| rest.to_string()) };
        drill_rows.push_str(&skip(rows));
        drill_summary.push_str(&skip(summary_rows));
    }
    if drill_downs.is_empty() {
        drill_rows = "level,unit_key,university,segment,mark,rank_before,rank_after,delta_rank\n".into();
        drill_summary = "level,university,assessed,improving,share_improving\n".into();
    }
    write_file(&out.join("drilldown.csv"), &drill_rows)?;
    write_file(&out.join("drilldown_summary.csv"), &drill_summary)?;
    write_file(&out.join("report.md"), &markdown)?;

    Ok(CompareRun {
        shifts,
        regions: summary,
        drill_downs,
        markdown,
    })
}

#[derive(Serialize)]
struct RegionOut<'a> {
    university_id: &'a str,
    name: &'a str,
    macro_region: &'static str,
}

/// Recomputes the published tables. With `out`, also writes
/// `replication.txt`, `replication.json`, the fixture's unit scores per
/// period and a matching `universities.csv`, so that `compare` can be run
/// on them.
pub fn run_replicate(out: Option<&Path>) -> Result<ReplicationReport> {
    let report = replicate()?;
    if let Some(out) = out {
        write_file(&out.join("replication.txt"), &format!("{report}\n"))?;
        write_file(&out.join("replication.json"), &format!("{}\n", serde_json::to_string_pretty(&report)?))?;
        for (side, label) in [(Side::Before, fixture::PERIOD_BEFORE), (Side::After, fixture::PERIOD_AFTER)] {
            write_file(
                &out.join(label).join("unit_scores.csv"),
                &report::unit_scores_csv(&fixture::unit_scores(side))?,
            )?;
        }
        let regions = crate::io::to_csv(fixture::UNIVERSITIES.iter().map(|r| RegionOut {
            university_id: r.university,
            name: r.university,
            macro_region: r.region.code(),
        }))?;
        write_file(&out.join("universities.csv"), &regions)?;
        write_file(
            &out.join("regression.md"),
            &report::render_regression_table(&report.regression),
        )?;
    }
    Ok(report)
}

/// Reads one numeric column of a CSV file.
pub fn read_column(path: &Path, column: &str) -> Result<Vec<f64>> {
    let (file, mut rdr) = open_csv(path)?;
    let rows = read_rows::<BTreeMap<String, String>, _>(&file, &mut rdr, &[column])?;
    rows.into_iter()
        .map(|(line, row)| {
            let raw = &row[column];
            raw.parse::<f64>()
                .map_err(|_| crate::io::malformed(&file, line, format!("{column}: not a number: {raw:?}")))
        })
        .collect()
}
