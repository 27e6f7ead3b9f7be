//! Fractional Scientific Strength (FSS) scoring.
//!
//! Individual productivity is the cost-normalized, fractionally counted,
//! field-normalized impact a professor produces per year on staff:
//!
//! ```text
//! fss_p = 1 / (cost factor) · 1 / t · Σ c_i · f_i
//! ```
//!
//! Unit scores average each member's `fss_p` divided by the mean `fss_p` of
//! the productive professors in the member's SDS, zeros included, so a unit
//! score of 1.10 reads as 10% above the national average.
//!
//! Per-professor work runs on a rayon pool sized by `jobs`. Every sum is
//! accumulated in a fixed order (publication id, then byline position, then
//! professor id) so results do not depend on the number of workers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{compute_baselines, BaselineFallback, Baselines, JournalYear, PeriodDataset, Publication};
use crate::error::{Error, Result};
use crate::taxonomy::{AcademicRank, CountingScheme, Uda};

/// Weight of field-normalized citations against field-normalized impact
/// factor in article quality. Must lie in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Theta(f64);

impl Theta {
    pub const DEFAULT: Theta = Theta(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Theta(value))
        } else {
            Err(Error::InvalidArgument(format!("theta must lie in [0, 1], got {value}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Theta {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Theta {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("theta must be a number, got {s:?}")))?;
        Theta::new(v)
    }
}

const INTRAMURAL_EDGE: f64 = 0.40;
const INTRAMURAL_REST: f64 = 0.20;
const EXTRAMURAL_EDGE: f64 = 0.30;
const EXTRAMURAL_INNER_EDGE: f64 = 0.15;
const EXTRAMURAL_REST: f64 = 0.10;

/// Credit share of every byline slot. The result always sums to one.
///
/// Positional bylines give the first and last author the largest shares
/// (and, for extramural work, the second and second-to-last a smaller one);
/// whatever is left goes equally to the remaining authors. On short
/// bylines where roles coincide, a slot collects the sum of its roles and
/// the whole byline is then rescaled to one.
pub fn byline_weights(n_authors: usize, scheme: CountingScheme, intramural: bool) -> Vec<f64> {
    if n_authors == 0 {
        return Vec::new();
    }
    let n = n_authors;
    if scheme == CountingScheme::Alphabetical {
        return vec![1.0 / n as f64; n];
    }
    let mut w = vec![0.0; n];
    let last = n - 1;
    let rest_slots: Vec<usize>;
    let rest_total;
    if intramural {
        w[0] += INTRAMURAL_EDGE;
        w[last] += INTRAMURAL_EDGE;
        rest_slots = (1..last).collect();
        rest_total = INTRAMURAL_REST;
    } else {
        w[0] += EXTRAMURAL_EDGE;
        w[last] += EXTRAMURAL_EDGE;
        if n >= 2 {
            w[1] += EXTRAMURAL_INNER_EDGE;
            w[last - 1] += EXTRAMURAL_INNER_EDGE;
        }
        rest_slots = if n > 4 { (2..last - 1).collect() } else { Vec::new() };
        rest_total = EXTRAMURAL_REST;
    }
    if !rest_slots.is_empty() {
        let share = rest_total / rest_slots.len() as f64;
        for i in rest_slots {
            w[i] += share;
        }
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

/// Credit share of the author at 1-based `position`.
pub fn fractional_contribution(position: usize, n_authors: usize, scheme: CountingScheme, intramural: bool) -> Result<f64> {
    if position == 0 || position > n_authors {
        return Err(Error::PositionOutOfRange { position, n_authors });
    }
    Ok(byline_weights(n_authors, scheme, intramural)[position - 1])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArticleScore {
    pub pub_id: String,
    pub normalized_citations: f64,
    pub normalized_if: f64,
    /// `θ·normalized_citations + (1−θ)·normalized_if`
    pub quality: f64,
}

pub fn article_quality(publication: &Publication, journal: &JournalYear, baselines: &Baselines, theta: Theta) -> Result<ArticleScore> {
    let base = baselines.for_categories(publication.year, &journal.subject_categories)?;
    let normalized_citations = f64::from(publication.citations_at_census) / base.mean_citations_of_cited;
    let normalized_if = journal.impact_factor / base.mean_if;
    let t = theta.value();
    Ok(ArticleScore {
        pub_id: publication.id.clone(),
        normalized_citations,
        normalized_if,
        quality: t * normalized_citations + (1.0 - t) * normalized_if,
    })
}

/// Professor FSS from the weighted output `Σ c_i·f_i`, cost and years active.
pub fn individual_fss(weighted_output: f64, years_active: u32, cost_factor: f64) -> f64 {
    assert!(years_active > 0, "years_active must be positive after period filtering");
    weighted_output / (cost_factor * f64::from(years_active))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfessorScore {
    pub prof_id: String,
    pub university: String,
    pub sds: String,
    pub uda: Uda,
    pub rank: AcademicRank,
    pub years_active: u32,
    /// `Σ c_i·f_i` over the professor's period publications.
    pub weighted_output: f64,
    pub fss_p: f64,
    /// `fss_p` over the SDS productive mean; `None` when the SDS has no
    /// productive professor.
    pub scaled_fss: Option<f64>,
}

impl ProfessorScore {
    pub fn is_productive(&self) -> bool {
        self.fss_p > 0.0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SdsScaling {
    /// Mean `fss_p` of productive professors per SDS.
    pub factors: BTreeMap<String, f64>,
    /// SDSs with no productive professor; their members are not aggregated.
    pub unscalable: Vec<String>,
}

/// Per-SDS mean of `fss_p` over productive professors (zeros removed).
pub fn sds_scaling_factors(scores: &[ProfessorScore]) -> SdsScaling {
    let mut by_sds: BTreeMap<&str, Vec<&ProfessorScore>> = BTreeMap::new();
    for s in scores {
        by_sds.entry(&s.sds).or_default().push(s);
    }
    let mut out = SdsScaling::default();
    for (sds, mut members) in by_sds {
        members.sort_by(|a, b| a.prof_id.cmp(&b.prof_id));
        let productive: Vec<f64> = members.iter().filter(|m| m.is_productive()).map(|m| m.fss_p).collect();
        if productive.is_empty() {
            out.unscalable.push(sds.to_string());
        } else {
            let mean = productive.iter().sum::<f64>() / productive.len() as f64;
            out.factors.insert(sds.to_string(), mean);
        }
    }
    out
}

/// Fills `scaled_fss` from the SDS factors.
pub fn apply_scaling(scores: &mut [ProfessorScore], scaling: &SdsScaling) {
    for s in scores {
        s.scaled_fss = scaling.factors.get(&s.sds).map(|f| s.fss_p / f);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Overall,
    Uda,
    Sds,
}

impl Level {
    pub fn as_str(self) -> &'static str {
        match self {
            Level::Overall => "overall",
            Level::Uda => "uda",
            Level::Sds => "sds",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "overall" => Ok(Level::Overall),
            "uda" => Ok(Level::Uda),
            "sds" => Ok(Level::Sds),
            other => Err(Error::InvalidArgument(format!("unknown level {other:?}"))),
        }
    }
}

/// Separator between the university and the UDA/SDS part of a unit key.
pub const UNIT_KEY_SEPARATOR: &str = "::";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitScore {
    /// `UNIV`, `UNIV::<uda id>` or `UNIV::<sds code>`.
    pub unit_key: String,
    pub level: Level,
    pub period: String,
    pub staff: usize,
    pub fss: f64,
    /// Explicit ordinal for breaking exact FSS ties; `None` ranks ties by key.
    pub tie_order: Option<u32>,
}

impl UnitScore {
    pub fn university(&self) -> &str {
        self.unit_key
            .split_once(UNIT_KEY_SEPARATOR)
            .map_or(self.unit_key.as_str(), |(u, _)| u)
    }

    /// UDA id or SDS code for field-level units.
    pub fn segment(&self) -> Option<&str> {
        self.unit_key.split_once(UNIT_KEY_SEPARATOR).map(|(_, s)| s)
    }
}

pub fn unit_key(university: &str, segment: Option<&str>) -> String {
    match segment {
        Some(s) => format!("{university}{UNIT_KEY_SEPARATOR}{s}"),
        None => university.to_string(),
    }
}

/// Unit FSS: mean of the members' scaled scores, zeros included.
pub fn aggregate_fss(members: &[&ProfessorScore]) -> Result<f64> {
    if members.is_empty() {
        return Err(Error::EmptyUnit("no members".into()));
    }
    let mut sum = 0.0;
    for m in members {
        sum += m
            .scaled_fss
            .ok_or_else(|| Error::InvalidArgument(format!("professor {} has no scaled score", m.prof_id)))?;
    }
    Ok(sum / members.len() as f64)
}

/// Unit scores at `level` for every unit with at least one scalable member.
pub fn aggregate_units(scores: &[ProfessorScore], level: Level, period: &str) -> Result<Vec<UnitScore>> {
    let mut units: BTreeMap<String, Vec<&ProfessorScore>> = BTreeMap::new();
    for s in scores.iter().filter(|s| s.scaled_fss.is_some()) {
        let seg = match level {
            Level::Overall => None,
            Level::Uda => Some(s.uda.id().to_string()),
            Level::Sds => Some(s.sds.clone()),
        };
        units.entry(unit_key(&s.university, seg.as_deref())).or_default().push(s);
    }
    units
        .into_iter()
        .map(|(key, mut members)| {
            members.sort_by(|a, b| a.prof_id.cmp(&b.prof_id));
            let fss = aggregate_fss(&members).map_err(|_| Error::EmptyUnit(key.clone()))?;
            Ok(UnitScore {
                unit_key: key,
                level,
                period: period.to_string(),
                staff: members.len(),
                fss,
                tie_order: None,
            })
        })
        .collect()
}

/// Share of professors with no scored output.
pub fn unproductive_share(scores: &[ProfessorScore]) -> f64 {
    if scores.is_empty() {
        return 0.0;
    }
    scores.iter().filter(|s| !s.is_productive()).count() as f64 / scores.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoringOptions {
    pub theta: Theta,
    /// Worker threads; `0` lets rayon choose.
    pub jobs: usize,
    pub baseline_fallback: BaselineFallback,
}

impl Default for ScoringOptions {
    fn default() -> Self {
        Self {
            theta: Theta::DEFAULT,
            jobs: 1,
            baseline_fallback: BaselineFallback::Forbid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodScores {
    pub period: String,
    pub theta: Theta,
    pub professors: Vec<ProfessorScore>,
    pub scaling: SdsScaling,
    /// Overall, UDA and SDS units, in that order.
    pub units: Vec<UnitScore>,
    pub unproductive_share: f64,
}

impl PeriodScores {
    pub fn units_at(&self, level: Level) -> impl Iterator<Item = &UnitScore> {
        self.units.iter().filter(move |u| u.level == level)
    }
}

/// Scores every assessed professor of a period and aggregates them into
/// university, university×UDA and university×SDS units.
pub fn score_period(dataset: &PeriodDataset<'_>, options: ScoringOptions) -> Result<PeriodScores> {
    let corpus = dataset.corpus;
    let baselines = compute_baselines(dataset, options.baseline_fallback)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {} workers: {e}", options.jobs)))?;

    let scored: Vec<&Publication> = dataset.scored_publications().copied().collect();

    let professors = pool.install(|| -> Result<Vec<ProfessorScore>> {
        let articles: Vec<ArticleScore> = scored
            .par_iter()
            .map(|p| article_quality(p, corpus.journal_year(&p.journal, p.year)?, &baselines, options.theta))
            .collect::<Result<_>>()?;

        // (article index, position) per professor, in publication-id then
        // position order
        let mut credits: BTreeMap<&str, Vec<(usize, usize)>> = BTreeMap::new();
        for (i, p) in scored.iter().enumerate() {
            for (slot, author) in p.byline.iter().enumerate() {
                if let Some(id) = author {
                    if dataset.includes_professor(id) {
                        credits.entry(id.as_str()).or_default().push((i, slot + 1));
                    }
                }
            }
        }

        dataset
            .professors
            .par_iter()
            .map(|prof| {
                let sds = corpus.sds.get(&prof.sds)?;
                let factor = corpus.costs.normalization_factor(sds.uda, prof.rank)?;
                let mut weighted_output = 0.0;
                for &(i, position) in credits.get(prof.id.as_str()).map_or(&[][..], Vec::as_slice) {
                    let p = scored[i];
                    let f = fractional_contribution(position, p.n_authors(), sds.counting_scheme, p.intramural)?;
                    weighted_output += articles[i].quality * f;
                }
                Ok(ProfessorScore {
                    prof_id: prof.id.clone(),
                    university: prof.university.clone(),
                    sds: prof.sds.clone(),
                    uda: sds.uda,
                    rank: prof.rank,
                    years_active: prof.years_active,
                    weighted_output,
                    fss_p: individual_fss(weighted_output, prof.years_active, factor),
                    scaled_fss: None,
                })
            })
            .collect()
    })?;

    let mut professors = professors;
    let scaling = sds_scaling_factors(&professors);
    for sds in &scaling.unscalable {
        log::warn!("SDS {sds} has no productive professor in {}; its members are excluded from aggregates", dataset.period);
    }
    apply_scaling(&mut professors, &scaling);

    let label = dataset.period.label();
    let mut units = Vec::new();
    for level in [Level::Overall, Level::Uda, Level::Sds] {
        units.extend(aggregate_units(&professors, level, &label)?);
    }
    Ok(PeriodScores {
        period: label,
        theta: options.theta,
        unproductive_share: unproductive_share(&professors),
        professors,
        scaling,
        units,
    })
}
