//! Machine-readable CSV artifacts and markdown tables.
//!
//! CSV files carry full precision. Markdown tables round FSS to two
//! decimals and percentages to whole numbers.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::comparison::{DrillDown, RankShift, RegionSummary};
use crate::error::{Error, Result};
use crate::io::{malformed, open_csv, read_rows, reader_from, to_csv};
use crate::scoring::{Level, ProfessorScore, UnitScore};
use crate::stats::{DispersionSummary, OlsFit, VarianceTestResult};
use crate::taxonomy::MacroRegion;

#[derive(Serialize)]
struct ScoreRecord<'a> {
    prof_id: &'a str,
    university_id: &'a str,
    sds_code: &'a str,
    uda_id: u8,
    fss_p: f64,
    scaled_fss: Option<f64>,
}

/// `scores.csv`: `prof_id,university_id,sds_code,uda_id,fss_p,scaled_fss`.
pub fn scores_csv(scores: &[ProfessorScore]) -> Result<String> {
    to_csv(scores.iter().map(|s| ScoreRecord {
        prof_id: &s.prof_id,
        university_id: &s.university,
        sds_code: &s.sds,
        uda_id: s.uda.id(),
        fss_p: s.fss_p,
        scaled_fss: s.scaled_fss,
    }))
}

#[derive(Serialize, Deserialize)]
struct UnitRecord {
    unit_key: String,
    level: String,
    period: String,
    staff: usize,
    fss: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tie_order: Option<u32>,
}

/// `unit_scores.csv`: `unit_key,level,period,staff,fss`, plus a trailing
/// `tie_order` column when any unit carries a tie hint.
pub fn unit_scores_csv(units: &[UnitScore]) -> Result<String> {
    let with_hint = units.iter().any(|u| u.tie_order.is_some());
    if with_hint && units.iter().any(|u| u.tie_order.is_none()) {
        return Err(Error::InvalidArgument("tie_order must be set on every unit or none".into()));
    }
    to_csv(units.iter().map(|u| UnitRecord {
        unit_key: u.unit_key.clone(),
        level: u.level.to_string(),
        period: u.period.clone(),
        staff: u.staff,
        fss: u.fss,
        tie_order: u.tie_order,
    }))
}

pub fn read_unit_scores(path: &Path) -> Result<Vec<UnitScore>> {
    let (file, mut rdr) = open_csv(path)?;
    parse_unit_scores(&file, &mut rdr)
}

pub fn unit_scores_from_reader<R: Read>(reader: R) -> Result<Vec<UnitScore>> {
    parse_unit_scores("unit_scores.csv", &mut reader_from(reader))
}

fn parse_unit_scores<R: Read>(file: &str, rdr: &mut csv::Reader<R>) -> Result<Vec<UnitScore>> {
    let rows = read_rows::<UnitRecord, _>(file, rdr, &["unit_key", "level", "period", "staff", "fss"])?;
    rows.into_iter()
        .map(|(line, r)| {
            let level: Level = r.level.parse().map_err(|e| malformed(file, line, e))?;
            Ok(UnitScore {
                unit_key: r.unit_key,
                level,
                period: r.period,
                staff: r.staff,
                fss: r.fss,
                tie_order: r.tie_order,
            })
        })
        .collect()
}

fn region_code(regions: &BTreeMap<String, MacroRegion>, unit_key: &str) -> &'static str {
    let university = unit_key
        .split_once(crate::scoring::UNIT_KEY_SEPARATOR)
        .map_or(unit_key, |(u, _)| u);
    regions.get(university).map_or("", |r| r.code())
}

#[derive(Serialize)]
struct ShiftRecord<'a> {
    unit_key: &'a str,
    region: &'a str,
    staff_before: usize,
    fss_before: f64,
    rank_before: usize,
    staff_after: usize,
    fss_after: f64,
    rank_after: usize,
    delta_fss: f64,
    delta_rank: i64,
    relative_delta_rank: Option<f64>,
}

pub fn shifts_csv(shifts: &[RankShift], regions: &BTreeMap<String, MacroRegion>) -> Result<String> {
    to_csv(shifts.iter().map(|s| ShiftRecord {
        unit_key: &s.unit_key,
        region: region_code(regions, &s.unit_key),
        staff_before: s.staff_before,
        fss_before: s.fss_before,
        rank_before: s.rank_before,
        staff_after: s.staff_after,
        fss_after: s.fss_after,
        rank_after: s.rank_after,
        delta_fss: s.delta_fss,
        delta_rank: s.delta_rank,
        relative_delta_rank: s.relative_delta_rank,
    }))
}

#[derive(Serialize)]
struct RegionRecord {
    region: &'static str,
    n_universities: usize,
    n_improve: usize,
    n_worsen: usize,
    avg_relative_delta_rank: Option<f64>,
    max_improvement: Option<f64>,
    max_decline: Option<f64>,
}

pub fn region_summary_csv(summaries: &[RegionSummary]) -> Result<String> {
    to_csv(summaries.iter().map(|s| RegionRecord {
        region: s.region.code(),
        n_universities: s.n_universities,
        n_improve: s.n_improve,
        n_worsen: s.n_worsen,
        avg_relative_delta_rank: s.avg_relative_delta_rank,
        max_improvement: s.max_improvement,
        max_decline: s.max_decline,
    }))
}

#[derive(Serialize)]
struct DrillRecord<'a> {
    level: &'a str,
    unit_key: &'a str,
    university: &'a str,
    segment: &'a str,
    mark: &'a str,
    rank_before: Option<usize>,
    rank_after: Option<usize>,
    delta_rank: Option<i64>,
}

/// One line per assessed cell.
pub fn drilldown_csv(level: Level, drill: &DrillDown) -> Result<String> {
    let level = level.as_str();
    to_csv(drill.rows.iter().flat_map(|row| {
        row.cells.iter().filter_map(move |c| {
            c.shift.as_ref().map(|s| DrillRecord {
                level,
                unit_key: &c.unit_key,
                university: &c.university,
                segment: &c.segment,
                mark: c.mark.symbol(),
                rank_before: Some(s.rank_before),
                rank_after: Some(s.rank_after),
                delta_rank: Some(s.delta_rank),
            })
        })
    }))
}

#[derive(Serialize)]
struct DrillSummaryRecord<'a> {
    level: &'a str,
    university: &'a str,
    assessed: usize,
    improving: usize,
    share_improving: f64,
}

pub fn drilldown_summary_csv(level: Level, drill: &DrillDown) -> Result<String> {
    let level = level.as_str();
    to_csv(drill.rows.iter().map(|r| DrillSummaryRecord {
        level,
        university: &r.university,
        assessed: r.assessed,
        improving: r.improving,
        share_improving: r.share_improving,
    }))
}

/// Whole-percent rendering without a negative zero.
pub fn pct(v: f64) -> String {
    let r = (v * 100.0).round();
    if r == 0.0 {
        "0%".to_string()
    } else {
        format!("{r:.0}%")
    }
}

fn opt_pct(v: Option<f64>) -> String {
    v.map_or_else(|| "n.a.".to_string(), pct)
}

/// University-level scores, ranks and relative rank shifts.
pub fn render_shift_table(shifts: &[RankShift], regions: &BTreeMap<String, MacroRegion>, before: &str, after: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "| University | Macro region | Staff {before} | FSS {before} | Rank {before} | Staff {after} | FSS {after} | Rank {after} | ΔFSS | Δrank | Relative Δrank |");
    out.push_str("|---|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n");
    for s in shifts {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {:.2} | {} | {} | {:.2} | {} | {:.2} | {} | {} |",
            s.unit_key,
            region_code(regions, &s.unit_key),
            s.staff_before,
            s.fss_before,
            s.rank_before,
            s.staff_after,
            s.fss_after,
            s.rank_after,
            s.delta_fss,
            s.delta_rank,
            opt_pct(s.relative_delta_rank)
        );
    }
    out
}

pub fn render_region_table(summaries: &[RegionSummary]) -> String {
    let mut out = String::from(
        "| Macro region | No. of universities | Improve | Worsen | Avg. rel. Δrank | Max improvement | Max decline |\n|---|---:|---:|---:|---:|---:|---:|\n",
    );
    for s in summaries {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} |",
            s.region,
            s.n_universities,
            s.n_improve,
            s.n_worsen,
            opt_pct(s.avg_relative_delta_rank),
            opt_pct(s.max_improvement),
            opt_pct(s.max_decline)
        );
    }
    out
}

pub fn render_drilldown_table(drill: &DrillDown, regions: &BTreeMap<String, MacroRegion>) -> String {
    let mut out = String::from("| University | Macro region | Assessed | Of which increasing |");
    for seg in &drill.segments {
        let _ = write!(out, " {seg} |");
    }
    out.push_str("\n|---|---|---:|---:|");
    out.push_str(&"---|".repeat(drill.segments.len()));
    out.push('\n');
    for row in &drill.rows {
        let _ = write!(
            out,
            "| {} | {} | {} | {} |",
            row.university,
            region_code(regions, &row.university),
            row.assessed,
            pct(row.share_improving)
        );
        for c in &row.cells {
            let _ = write!(out, " {} |", c.mark.symbol());
        }
        out.push('\n');
    }
    out
}

pub fn render_regression_table(fit: &OlsFit) -> String {
    let mut out = String::from("| | Coeff. | Std Err. | t | P>t | 95% CI low | 95% CI high |\n|---|---:|---:|---:|---:|---:|---:|\n");
    for c in &fit.coefficients {
        let _ = writeln!(
            out,
            "| {} | {:.3} | {:.3} | {:.3} | {:.3} | {:.3} | {:.3} |",
            c.name, c.estimate, c.std_error, c.t, c.p_value, c.ci_low, c.ci_high
        );
    }
    let _ = writeln!(
        out,
        "\nNumber of obs = {}; F({},{}) = {:.2}; Prob>F = {:.3}; R-squared = {:.3}; Root MSE = {:.3}; covariance = {}",
        fit.n, fit.model_f.df1, fit.model_f.df2, fit.model_f.statistic, fit.model_f.p_value, fit.r_squared, fit.root_mse, fit.covariance
    );
    out
}

pub fn render_dispersion(label: &str, d: &DispersionSummary) -> String {
    format!(
        "{label}: n={} mean={:.3} median={:.3} sd={:.3} min={:.3} max={:.3} range={:.3} q1={:.3} q3={:.3} iqr={:.3} skewness={:.3}{}",
        d.n,
        d.mean,
        d.median,
        d.std_dev,
        d.min,
        d.max,
        d.range,
        d.q1,
        d.q3,
        d.iqr,
        d.skewness,
        if d.skewness_defined { "" } else { " (undefined)" }
    )
}

pub fn render_variance_test(r: &VarianceTestResult) -> String {
    format!(
        "F({}, {}) = {:.3}, p = {:.5} ({})",
        r.df.0, r.df.1, r.statistic, r.p_value, r.convention
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percent_rounding() {
        assert_eq!(pct(14.0 / 19.0), "74%");
        assert_eq!(pct(-1.0), "-100%");
        assert_eq!(pct(-1.0 / 58.0), "-2%");
        assert_eq!(pct(-0.001), "0%");
    }

    #[test]
    fn unit_scores_round_trip_with_and_without_hints() {
        let mut units = vec![
            UnitScore {
                unit_key: "A".into(),
                level: Level::Overall,
                period: "2007-2011".into(),
                staff: 31,
                fss: 1.0 / 3.0,
                tie_order: None,
            },
            UnitScore {
                unit_key: "A::FIS/01".into(),
                level: Level::Sds,
                period: "2007-2011".into(),
                staff: 2,
                fss: 0.1 + 0.2,
                tie_order: None,
            },
        ];
        let text = unit_scores_csv(&units).unwrap();
        assert!(text.starts_with("unit_key,level,period,staff,fss\n"));
        assert_eq!(unit_scores_from_reader(text.as_bytes()).unwrap(), units);

        units[0].tie_order = Some(2);
        assert!(unit_scores_csv(&units).is_err());
        units[1].tie_order = Some(1);
        let text = unit_scores_csv(&units).unwrap();
        assert!(text.starts_with("unit_key,level,period,staff,fss,tie_order\n"));
        assert_eq!(unit_scores_from_reader(text.as_bytes()).unwrap(), units);
    }

    #[test]
    fn bad_level_reports_line() {
        let text = "unit_key,level,period,staff,fss\nA,overall,p,1,1.0\nB,campus,p,1,1.0\n";
        assert!(matches!(
            unit_scores_from_reader(text.as_bytes()),
            Err(Error::MalformedRow { line: 3, .. })
        ));
    }
}
