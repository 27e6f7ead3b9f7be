//! Run configuration stored as flat `key = value` text.
//!
//! ```text
//! corpus = data/corpus
//! period_before = 2007-2011
//! census_before = 2013-12-31
//! period_after = 2013-2017
//! census_after = 2019-12-31
//! theta = 0.5
//! min_staff = 30
//! jobs = 0
//! out = out
//! strict = false
//! allow_external_baselines = false
//! scheme.AGR/01 = positional
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDate;

use crate::corpus::{parse_year_range, ObservationPeriod};
use crate::error::{Error, Result};
use crate::scoring::Theta;
use crate::taxonomy::CountingScheme;

pub const DEFAULT_MIN_STAFF: usize = 30;

/// Years between the end of a period and its default citation census.
pub const DEFAULT_CENSUS_LAG_YEARS: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus: PathBuf,
    pub period_before: ObservationPeriod,
    pub period_after: ObservationPeriod,
    pub theta: Theta,
    pub min_staff: usize,
    /// 0 lets the thread pool pick.
    pub jobs: usize,
    pub out: PathBuf,
    pub strict: bool,
    pub allow_external_baselines: bool,
    pub scheme_overrides: BTreeMap<String, CountingScheme>,
}

/// Period from `"YYYY-YYYY"` with an optional ISO census date. Without one
/// the census is Dec 31 two years after the period ends.
pub fn period_from_parts(range: &str, census: Option<&str>) -> Result<ObservationPeriod> {
    let (start, end) = parse_year_range(range)?;
    let census = match census {
        Some(c) => parse_date(c)?,
        None => default_census(end)?,
    };
    ObservationPeriod::new(start, end, census)
}

pub fn default_census(end_year: i32) -> Result<NaiveDate> {
    NaiveDate::from_ymd_opt(end_year + DEFAULT_CENSUS_LAG_YEARS, 12, 31)
        .ok_or_else(|| Error::Config(format!("no census date for end year {end_year}")))
}

fn parse_date(s: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s.trim(), "%Y-%m-%d")
        .map_err(|e| Error::Config(format!("bad date {s:?}: {e}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got {v:?}"))),
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: not a valid number: {v:?}")))
}

impl RunConfig {
    pub fn new(corpus: impl Into<PathBuf>, period_before: ObservationPeriod, period_after: ObservationPeriod) -> Result<Self> {
        let config = Self {
            corpus: corpus.into(),
            period_before,
            period_after,
            theta: Theta::default(),
            min_staff: DEFAULT_MIN_STAFF,
            jobs: 0,
            out: PathBuf::from("out"),
            strict: false,
            allow_external_baselines: false,
            scheme_overrides: BTreeMap::new(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.period_before.overlaps(&self.period_after) {
            return Err(Error::Config(format!(
                "periods {} and {} overlap",
                self.period_before, self.period_after
            )));
        }
        Theta::new(self.theta.value())?;
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("corpus", &self.corpus.display());
        kv("period_before", &self.period_before.label());
        kv("census_before", &self.period_before.census_date);
        kv("period_after", &self.period_after.label());
        kv("census_after", &self.period_after.census_date);
        // `{:?}` on f64 is the shortest round-tripping form
        kv("theta", &format_args!("{:?}", self.theta.value()));
        kv("min_staff", &self.min_staff);
        kv("jobs", &self.jobs);
        kv("out", &self.out.display());
        kv("strict", &self.strict);
        kv("allow_external_baselines", &self.allow_external_baselines);
        for (sds, scheme) in &self.scheme_overrides {
            kv(&format!("scheme.{sds}"), scheme);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values: BTreeMap<String, String> = BTreeMap::new();
        let mut scheme_overrides = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if let Some(sds) = k.strip_prefix("scheme.") {
                if scheme_overrides.insert(sds.to_string(), v.parse()?).is_some() {
                    return Err(Error::Config(format!("line {}: duplicate key {k}", i + 1)));
                }
                continue;
            }
            const KNOWN: [&str; 11] = [
                "corpus",
                "period_before",
                "census_before",
                "period_after",
                "census_after",
                "theta",
                "min_staff",
                "jobs",
                "out",
                "strict",
                "allow_external_baselines",
            ];
            if !KNOWN.contains(&k) {
                return Err(Error::Config(format!("line {}: unknown key {k}", i + 1)));
            }
            if values.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key {k}", i + 1)));
            }
        }
        let get = |k: &str| values.get(k).map(String::as_str);
        let required = |k: &str| get(k).ok_or_else(|| Error::Config(format!("missing key {k}")));

        let period_before = period_from_parts(required("period_before")?, get("census_before"))?;
        let period_after = period_from_parts(required("period_after")?, get("census_after"))?;
        let mut config = Self::new(required("corpus")?, period_before, period_after)?;
        if let Some(v) = get("theta") {
            config.theta = Theta::new(parse_num("theta", v)?)?;
        }
        if let Some(v) = get("min_staff") {
            config.min_staff = parse_num("min_staff", v)?;
        }
        if let Some(v) = get("jobs") {
            config.jobs = parse_num("jobs", v)?;
        }
        if let Some(v) = get("out") {
            config.out = PathBuf::from(v);
        }
        if let Some(v) = get("strict") {
            config.strict = parse_bool("strict", v)?;
        }
        if let Some(v) = get("allow_external_baselines") {
            config.allow_external_baselines = parse_bool("allow_external_baselines", v)?;
        }
        config.scheme_overrides = scheme_overrides;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}
