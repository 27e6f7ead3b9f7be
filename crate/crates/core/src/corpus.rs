//! Data model and file ingestion for universities, professors, journals,
//! publications and authorships, plus observation periods and the
//! field baselines used to normalize citations and impact factors.
//!
//! A corpus directory holds one observation period:
//!
//! ```text
//! universities.csv   university_id,name,macro_region
//! professors.csv     prof_id,university_id,sds_code,rank,years_active
//! journals.csv       journal_id,year,impact_factor,sc_codes
//! publications.csv   pub_id,year,journal_id,n_authors,intramural,citations_at_census
//! authorships.csv    pub_id,prof_id,position
//! sds_table.csv      sds_code,uda_id,counting_scheme
//! cost_table.csv     (optional, defaults to the Italian table)
//! baselines.csv      (optional, only consulted as a fallback)
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::io::{malformed, open_csv, read_rows};
use crate::taxonomy::{AcademicRank, CostTable, MacroRegion, SdsRegistry};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct University {
    pub id: String,
    pub name: String,
    pub macro_region: MacroRegion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Professor {
    pub id: String,
    pub university: String,
    pub sds: String,
    pub rank: AcademicRank,
    /// Years on staff during the observation period.
    pub years_active: u32,
}

/// One journal in one year.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JournalYear {
    pub journal: String,
    pub year: i32,
    pub impact_factor: f64,
    pub subject_categories: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Publication {
    pub id: String,
    pub year: i32,
    pub journal: String,
    /// One slot per author; `None` for authors outside the professor roster.
    pub byline: Vec<Option<String>>,
    /// Only one affiliation in the address list.
    pub intramural: bool,
    pub citations_at_census: u32,
}

impl Publication {
    pub fn n_authors(&self) -> usize {
        self.byline.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ObservationPeriod {
    pub start_year: i32,
    pub end_year: i32,
    pub census_date: NaiveDate,
}

impl ObservationPeriod {
    pub fn new(start_year: i32, end_year: i32, census_date: NaiveDate) -> Result<Self> {
        if end_year < start_year {
            return Err(Error::InvalidArgument(format!(
                "period {start_year}-{end_year} ends before it starts"
            )));
        }
        let year_end = NaiveDate::from_ymd_opt(end_year, 12, 31)
            .ok_or_else(|| Error::InvalidArgument(format!("bad end year {end_year}")))?;
        if census_date < year_end {
            return Err(Error::InvalidArgument(format!(
                "census date {census_date} precedes the end of period {start_year}-{end_year}"
            )));
        }
        Ok(Self {
            start_year,
            end_year,
            census_date,
        })
    }

    /// Period whose citations are counted at Dec 31 of its last year.
    pub fn with_year_end_census(start_year: i32, end_year: i32) -> Result<Self> {
        let census = NaiveDate::from_ymd_opt(end_year, 12, 31)
            .ok_or_else(|| Error::InvalidArgument(format!("bad end year {end_year}")))?;
        Self::new(start_year, end_year, census)
    }

    pub fn len_years(&self) -> u32 {
        (self.end_year - self.start_year + 1) as u32
    }

    pub fn contains(&self, year: i32) -> bool {
        (self.start_year..=self.end_year).contains(&year)
    }

    pub fn overlaps(&self, other: &ObservationPeriod) -> bool {
        self.start_year <= other.end_year && other.start_year <= self.end_year
    }

    /// `"2007-2011"`.
    pub fn label(&self) -> String {
        format!("{}-{}", self.start_year, self.end_year)
    }
}

impl fmt::Display for ObservationPeriod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start_year, self.end_year)
    }
}

/// Parses `"YYYY-YYYY"` into `(start, end)`.
pub fn parse_year_range(s: &str) -> Result<(i32, i32)> {
    let bad = || Error::InvalidArgument(format!("expected YYYY-YYYY, got {s:?}"));
    let (a, b) = s.trim().split_once('-').ok_or_else(bad)?;
    let a = i32::from_str(a.trim()).map_err(|_| bad())?;
    let b = i32::from_str(b.trim()).map_err(|_| bad())?;
    Ok((a, b))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestOptions {
    /// Fail on dangling references instead of dropping and reporting them.
    pub strict: bool,
}

/// Problems found while resolving cross references in lenient mode.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub dangling: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.dangling.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Corpus {
    pub universities: BTreeMap<String, University>,
    pub professors: BTreeMap<String, Professor>,
    #[serde(serialize_with = "journal_rows")]
    pub journals: BTreeMap<(String, i32), JournalYear>,
    pub publications: BTreeMap<String, Publication>,
    #[serde(skip)]
    pub sds: SdsRegistry,
    #[serde(skip)]
    pub costs: CostTable,
    #[serde(skip)]
    pub external_baselines: Option<Baselines>,
    pub report: ValidationReport,
}

fn journal_rows<S: serde::Serializer>(journals: &BTreeMap<(String, i32), JournalYear>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(journals.values())
}

#[derive(Deserialize)]
struct UniversityRow {
    university_id: String,
    name: String,
    macro_region: String,
}

#[derive(Deserialize)]
struct ProfessorRow {
    prof_id: String,
    university_id: String,
    sds_code: String,
    rank: String,
    years_active: u32,
}

#[derive(Deserialize)]
struct JournalRow {
    journal_id: String,
    year: i32,
    impact_factor: f64,
    sc_codes: String,
}

#[derive(Deserialize)]
struct PublicationRow {
    pub_id: String,
    year: i32,
    journal_id: String,
    n_authors: usize,
    intramural: u8,
    citations_at_census: u32,
}

#[derive(Deserialize)]
struct AuthorshipRow {
    pub_id: String,
    prof_id: String,
    position: usize,
}

struct Dangling<'a> {
    strict: bool,
    report: &'a mut ValidationReport,
}

impl Dangling<'_> {
    fn flag(&mut self, file: &str, detail: String) -> Result<()> {
        if self.strict {
            return Err(Error::Dangling {
                file: file.to_string(),
                detail,
            });
        }
        log::warn!("{file}: {detail} (dropped)");
        self.report.dangling.push(format!("{file}: {detail}"));
        Ok(())
    }
}

fn dup(file: &str, line: u64, key: impl Into<String>) -> Error {
    Error::DuplicateKey {
        file: file.to_string(),
        line,
        key: key.into(),
    }
}

impl Corpus {
    /// Reads and cross-validates a corpus directory.
    pub fn ingest(dir: &Path, options: IngestOptions) -> Result<Self> {
        let sds = SdsRegistry::load(&dir.join("sds_table.csv"))?;
        let cost_path = dir.join("cost_table.csv");
        let costs = if cost_path.exists() {
            CostTable::load(&cost_path)?
        } else {
            CostTable::italian_default()
        };
        let baseline_path = dir.join("baselines.csv");
        let external_baselines = if baseline_path.exists() {
            Some(Baselines::load(&baseline_path)?)
        } else {
            None
        };

        let mut report = ValidationReport::default();
        let mut dangling = Dangling {
            strict: options.strict,
            report: &mut report,
        };

        // universities
        let (file, mut rdr) = open_csv(&dir.join("universities.csv"))?;
        let mut universities = BTreeMap::new();
        for (line, row) in read_rows::<UniversityRow, _>(&file, &mut rdr, &["university_id", "name", "macro_region"])? {
            let macro_region = row.macro_region.parse().map_err(|e| malformed(&file, line, e))?;
            if universities.contains_key(&row.university_id) {
                return Err(dup(&file, line, row.university_id));
            }
            universities.insert(
                row.university_id.clone(),
                University {
                    id: row.university_id,
                    name: row.name,
                    macro_region,
                },
            );
        }

        // professors
        let (file, mut rdr) = open_csv(&dir.join("professors.csv"))?;
        let cols = ["prof_id", "university_id", "sds_code", "rank", "years_active"];
        let mut professors = BTreeMap::new();
        for (line, row) in read_rows::<ProfessorRow, _>(&file, &mut rdr, &cols)? {
            let rank = row.rank.parse().map_err(|e| malformed(&file, line, e))?;
            if professors.contains_key(&row.prof_id) {
                return Err(dup(&file, line, row.prof_id));
            }
            if !universities.contains_key(&row.university_id) {
                dangling.flag(&file, format!("professor {} references unknown university {}", row.prof_id, row.university_id))?;
                continue;
            }
            if sds.get(&row.sds_code).is_err() {
                dangling.flag(&file, format!("professor {} references unregistered SDS {}", row.prof_id, row.sds_code))?;
                continue;
            }
            professors.insert(
                row.prof_id.clone(),
                Professor {
                    id: row.prof_id,
                    university: row.university_id,
                    sds: row.sds_code,
                    rank,
                    years_active: row.years_active,
                },
            );
        }

        // journals
        let (file, mut rdr) = open_csv(&dir.join("journals.csv"))?;
        let mut journals = BTreeMap::new();
        for (line, row) in read_rows::<JournalRow, _>(&file, &mut rdr, &["journal_id", "year", "impact_factor", "sc_codes"])? {
            if !(row.impact_factor.is_finite() && row.impact_factor >= 0.0) {
                return Err(malformed(&file, line, format!("impact factor {} must be >= 0", row.impact_factor)));
            }
            let mut scs: Vec<String> = row
                .sc_codes
                .split(';')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            scs.sort();
            scs.dedup();
            if scs.is_empty() {
                return Err(malformed(&file, line, "journal has no subject categories"));
            }
            let key = (row.journal_id.clone(), row.year);
            if journals.contains_key(&key) {
                return Err(dup(&file, line, format!("{} {}", row.journal_id, row.year)));
            }
            journals.insert(
                key,
                JournalYear {
                    journal: row.journal_id,
                    year: row.year,
                    impact_factor: row.impact_factor,
                    subject_categories: scs,
                },
            );
        }

        // publications
        let (file, mut rdr) = open_csv(&dir.join("publications.csv"))?;
        let cols = ["pub_id", "year", "journal_id", "n_authors", "intramural", "citations_at_census"];
        let mut publications = BTreeMap::new();
        for (line, row) in read_rows::<PublicationRow, _>(&file, &mut rdr, &cols)? {
            if row.n_authors == 0 {
                return Err(malformed(&file, line, "n_authors must be at least 1"));
            }
            let intramural = match row.intramural {
                0 => false,
                1 => true,
                v => return Err(malformed(&file, line, format!("intramural must be 0 or 1, got {v}"))),
            };
            if publications.contains_key(&row.pub_id) {
                return Err(dup(&file, line, row.pub_id));
            }
            if !journals.contains_key(&(row.journal_id.clone(), row.year)) {
                dangling.flag(&file, format!("publication {} references journal {} with no {} entry", row.pub_id, row.journal_id, row.year))?;
                continue;
            }
            publications.insert(
                row.pub_id.clone(),
                Publication {
                    id: row.pub_id,
                    year: row.year,
                    journal: row.journal_id,
                    byline: vec![None; row.n_authors],
                    intramural,
                    citations_at_census: row.citations_at_census,
                },
            );
        }

        // authorships
        let (file, mut rdr) = open_csv(&dir.join("authorships.csv"))?;
        let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
        for (line, row) in read_rows::<AuthorshipRow, _>(&file, &mut rdr, &["pub_id", "prof_id", "position"])? {
            let Some(publication) = publications.get_mut(&row.pub_id) else {
                dangling.flag(&file, format!("authorship references unknown publication {} (prof {})", row.pub_id, row.prof_id))?;
                continue;
            };
            if !professors.contains_key(&row.prof_id) {
                dangling.flag(&file, format!("publication {} references unknown professor {}", row.pub_id, row.prof_id))?;
                continue;
            }
            let n = publication.byline.len();
            if row.position == 0 || row.position > n {
                return Err(malformed(&file, line, format!("position {} outside byline of {n} authors", row.position)));
            }
            if !seen.insert((row.pub_id.clone(), row.prof_id.clone())) {
                return Err(dup(&file, line, format!("{} {}", row.pub_id, row.prof_id)));
            }
            let slot = &mut publication.byline[row.position - 1];
            if slot.is_some() {
                return Err(dup(&file, line, format!("{} position {}", row.pub_id, row.position)));
            }
            *slot = Some(row.prof_id);
        }

        Ok(Self {
            universities,
            professors,
            journals,
            publications,
            sds,
            costs,
            external_baselines,
            report,
        })
    }

    /// Hex SHA-256 of the canonical corpus content (row order independent).
    pub fn digest(&self) -> String {
        let json = serde_json::to_vec(self).expect("corpus serializes");
        hex::encode(Sha256::digest(json))
    }

    pub fn journal_year(&self, journal: &str, year: i32) -> Result<&JournalYear> {
        self.journals
            .get(&(journal.to_string(), year))
            .ok_or_else(|| Error::MissingImpactFactor {
                journal: journal.to_string(),
                year,
            })
    }

    /// Professors with at least three active years and the publications
    /// dated inside the period.
    pub fn period_dataset(&self, period: ObservationPeriod) -> Result<PeriodDataset<'_>> {
        let mut professors = Vec::new();
        for p in self.professors.values() {
            if p.years_active > period.len_years() {
                return Err(Error::InvalidArgument(format!(
                    "professor {} has {} active years in a {}-year period",
                    p.id,
                    p.years_active,
                    period.len_years()
                )));
            }
            if p.years_active >= MIN_YEARS_ACTIVE {
                professors.push(p);
            }
        }
        let publications = self
            .publications
            .values()
            .filter(|p| period.contains(p.year))
            .collect();
        Ok(PeriodDataset {
            corpus: self,
            period,
            professors,
            publications,
        })
    }
}

/// Minimum years on staff for a professor to be assessed in a period.
pub const MIN_YEARS_ACTIVE: u32 = 3;

/// The slice of a corpus assessed in one observation period.
#[derive(Debug, Clone)]
pub struct PeriodDataset<'a> {
    pub corpus: &'a Corpus,
    pub period: ObservationPeriod,
    /// Sorted by professor id.
    pub professors: Vec<&'a Professor>,
    /// Sorted by publication id.
    pub publications: Vec<&'a Publication>,
}

impl PeriodDataset<'_> {
    pub fn includes_professor(&self, id: &str) -> bool {
        self.professors.binary_search_by(|p| p.id.as_str().cmp(id)).is_ok()
    }

    /// Publications with at least one assessed professor on the byline.
    pub fn scored_publications(&self) -> impl Iterator<Item = &&Publication> {
        self.publications.iter().filter(|p| {
            p.byline
                .iter()
                .flatten()
                .any(|id| self.includes_professor(id))
        })
    }
}

/// Field baselines for one (year, subject category) cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaselineCell {
    /// Mean citations over publications cited at least once.
    pub mean_citations_of_cited: f64,
    pub mean_if: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Baselines {
    cells: BTreeMap<(i32, String), BaselineCell>,
}

#[derive(Deserialize)]
struct BaselineRow {
    year: i32,
    sc_code: String,
    mean_citations_cited: f64,
    mean_if: f64,
}

impl Baselines {
    pub fn insert(&mut self, year: i32, sc: &str, cell: BaselineCell) {
        self.cells.insert((year, sc.to_string()), cell);
    }

    pub fn get(&self, year: i32, sc: &str) -> Result<&BaselineCell> {
        self.cells
            .get(&(year, sc.to_string()))
            .ok_or_else(|| Error::MissingBaseline {
                year,
                sc: sc.to_string(),
            })
    }

    /// Arithmetic mean of the per-category baselines of a multi-category
    /// publication.
    pub fn for_categories(&self, year: i32, scs: &[String]) -> Result<BaselineCell> {
        if scs.is_empty() {
            return Err(Error::MissingBaseline { year, sc: String::new() });
        }
        let mut cit = 0.0;
        let mut imp = 0.0;
        for sc in scs {
            let cell = self.get(year, sc)?;
            cit += cell.mean_citations_of_cited;
            imp += cell.mean_if;
        }
        let n = scs.len() as f64;
        Ok(BaselineCell {
            mean_citations_of_cited: cit / n,
            mean_if: imp / n,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &str, &BaselineCell)> {
        self.cells.iter().map(|((y, sc), c)| (*y, sc.as_str(), c))
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let (file, mut rdr) = open_csv(path)?;
        let mut out = Self::default();
        for (line, row) in read_rows::<BaselineRow, _>(&file, &mut rdr, &["year", "sc_code", "mean_citations_cited", "mean_if"])? {
            if !(row.mean_citations_cited > 0.0 && row.mean_if > 0.0) {
                return Err(malformed(&file, line, "baseline means must be positive"));
            }
            if out.cells.contains_key(&(row.year, row.sc_code.clone())) {
                return Err(dup(&file, line, format!("{} {}", row.year, row.sc_code)));
            }
            out.insert(
                row.year,
                &row.sc_code,
                BaselineCell {
                    mean_citations_of_cited: row.mean_citations_cited,
                    mean_if: row.mean_if,
                },
            );
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BaselineFallback {
    /// Every needed cell must be computable from the corpus.
    #[default]
    Forbid,
    /// Cells that cannot be computed are taken from the corpus' baselines.csv.
    External,
}

/// Per (year, SC) citation and IF means over the period's publications and
/// journals. Only cells needed by scored publications are validated.
pub fn compute_baselines(dataset: &PeriodDataset<'_>, fallback: BaselineFallback) -> Result<Baselines> {
    let corpus = dataset.corpus;
    let period = dataset.period;

    // (sum, count) accumulators; iteration order is fixed by the BTreeMaps
    let mut citations: BTreeMap<(i32, &str), (f64, u64)> = BTreeMap::new();
    for p in &dataset.publications {
        if p.citations_at_census == 0 {
            continue;
        }
        let jy = corpus.journal_year(&p.journal, p.year)?;
        for sc in &jy.subject_categories {
            let e = citations.entry((p.year, sc.as_str())).or_default();
            e.0 += f64::from(p.citations_at_census);
            e.1 += 1;
        }
    }
    let mut impact: BTreeMap<(i32, &str), (f64, u64)> = BTreeMap::new();
    for jy in corpus.journals.values().filter(|j| period.contains(j.year)) {
        for sc in &jy.subject_categories {
            let e = impact.entry((jy.year, sc.as_str())).or_default();
            e.0 += jy.impact_factor;
            e.1 += 1;
        }
    }

    let mut out = Baselines::default();
    for (&(year, sc), &(sum, n)) in &citations {
        if let Some(&(isum, icount)) = impact.get(&(year, sc)) {
            let mean_if = isum / icount as f64;
            if mean_if > 0.0 {
                out.insert(
                    year,
                    sc,
                    BaselineCell {
                        mean_citations_of_cited: sum / n as f64,
                        mean_if,
                    },
                );
            }
        }
    }

    let needed: BTreeSet<(i32, &str)> = dataset
        .scored_publications()
        .map(|p| corpus.journal_year(&p.journal, p.year).map(|jy| (p.year, jy)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flat_map(|(year, jy)| jy.subject_categories.iter().map(move |sc| (year, sc.as_str())))
        .collect();
    for (year, sc) in needed {
        if out.get(year, sc).is_ok() {
            continue;
        }
        match (fallback, &corpus.external_baselines) {
            (BaselineFallback::External, Some(ext)) => {
                let cell = *ext.get(year, sc)?;
                out.insert(year, sc, cell);
            }
            _ => {
                return Err(Error::MissingBaseline {
                    year,
                    sc: sc.to_string(),
                })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn write(dir: &Path, name: &str, body: &str) {
        fs::write(dir.join(name), body).unwrap();
    }

    fn toy(dir: &Path) {
        write(dir, "universities.csv", "university_id,name,macro_region\nU1,Alpha,N\n");
        write(
            dir,
            "professors.csv",
            "prof_id,university_id,sds_code,rank,years_active\nP1,U1,FIS/01,full,5\nP2,U1,FIS/01,assistant,2\n",
        );
        write(dir, "journals.csv", "journal_id,year,impact_factor,sc_codes\nJ1,2008,2.0,PHYSICS\n");
        write(
            dir,
            "publications.csv",
            "pub_id,year,journal_id,n_authors,intramural,citations_at_census\nA1,2008,J1,3,0,4\n",
        );
        write(dir, "authorships.csv", "pub_id,prof_id,position\nA1,P1,2\n");
        write(dir, "sds_table.csv", "sds_code,uda_id,counting_scheme\nFIS/01,2,default\n");
    }

    #[test]
    fn minimal_corpus_resolves_one_authorship() {
        let dir = tempfile::tempdir().unwrap();
        toy(dir.path());
        let c = Corpus::ingest(dir.path(), IngestOptions { strict: true }).unwrap();
        assert_eq!(c.professors.len(), 2);
        let p = &c.publications["A1"];
        assert_eq!(p.byline, vec![None, Some("P1".to_string()), None]);
        assert!(c.report.is_clean());
        assert_eq!(c.costs, CostTable::italian_default());
    }

    #[test]
    fn dangling_professor_is_an_error_in_strict_mode() {
        let dir = tempfile::tempdir().unwrap();
        toy(dir.path());
        write(dir.path(), "authorships.csv", "pub_id,prof_id,position\nA1,P1,1\nA1,P9,2\n");
        let err = Corpus::ingest(dir.path(), IngestOptions { strict: true }).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("A1") && msg.contains("P9"), "{msg}");

        let lenient = Corpus::ingest(dir.path(), IngestOptions::default()).unwrap();
        assert_eq!(lenient.report.dangling.len(), 1);
        assert_eq!(lenient.publications["A1"].byline[1], None);
    }

    #[test]
    fn ingestion_is_deterministic_and_row_order_free() {
        let dir = tempfile::tempdir().unwrap();
        toy(dir.path());
        let a = Corpus::ingest(dir.path(), IngestOptions::default()).unwrap();
        let b = Corpus::ingest(dir.path(), IngestOptions::default()).unwrap();
        assert_eq!(a.digest(), b.digest());
        write(
            dir.path(),
            "professors.csv",
            "prof_id,university_id,sds_code,rank,years_active\nP2,U1,FIS/01,assistant,2\nP1,U1,FIS/01,full,5\n",
        );
        let c = Corpus::ingest(dir.path(), IngestOptions::default()).unwrap();
        assert_eq!(a.digest(), c.digest());
    }

    #[test]
    fn malformed_and_duplicate_rows_report_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        toy(dir.path());
        write(
            dir.path(),
            "publications.csv",
            "pub_id,year,journal_id,n_authors,intramural,citations_at_census\nA1,2008,J1,3,0,4\nA2,2008,J1,x,0,4\n",
        );
        match Corpus::ingest(dir.path(), IngestOptions::default()) {
            Err(Error::MalformedRow { file, line, .. }) => {
                assert_eq!(file, "publications.csv");
                assert_eq!(line, 3);
            }
            other => panic!("{other:?}"),
        }
        toy(dir.path());
        write(dir.path(), "universities.csv", "university_id,name,macro_region\nU1,Alpha,N\nU1,Beta,S\n");
        assert!(matches!(
            Corpus::ingest(dir.path(), IngestOptions::default()),
            Err(Error::DuplicateKey { line: 3, .. })
        ));
    }

    #[test]
    fn missing_file_is_named() {
        let dir = tempfile::tempdir().unwrap();
        toy(dir.path());
        fs::remove_file(dir.path().join("journals.csv")).unwrap();
        let err = Corpus::ingest(dir.path(), IngestOptions::default()).unwrap_err();
        assert!(matches!(err, Error::MissingFile(_)));
        assert!(err.to_string().contains("journals.csv"));
    }

    #[test]
    fn period_filter_applies_three_year_threshold_and_window() {
        let dir = tempfile::tempdir().unwrap();
        toy(dir.path());
        write(
            dir.path(),
            "professors.csv",
            "prof_id,university_id,sds_code,rank,years_active\nP1,U1,FIS/01,full,3\nP2,U1,FIS/01,assistant,2\n",
        );
        write(dir.path(), "journals.csv", "journal_id,year,impact_factor,sc_codes\nJ1,2008,2.0,PHYSICS\nJ1,2012,2.0,PHYSICS\n");
        write(
            dir.path(),
            "publications.csv",
            "pub_id,year,journal_id,n_authors,intramural,citations_at_census\nA1,2008,J1,3,0,4\nA2,2012,J1,1,0,4\n",
        );
        let c = Corpus::ingest(dir.path(), IngestOptions::default()).unwrap();
        let period = ObservationPeriod::with_year_end_census(2007, 2011).unwrap();
        let ds = c.period_dataset(period).unwrap();
        let ids: Vec<_> = ds.professors.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids, ["P1"]);
        let pubs: Vec<_> = ds.publications.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(pubs, ["A1"]);
    }

    #[test]
    fn period_validation() {
        let d = NaiveDate::from_ymd_opt(2013, 12, 31).unwrap();
        assert!(ObservationPeriod::new(2007, 2011, d).is_ok());
        assert!(ObservationPeriod::new(2011, 2007, d).is_err());
        let early = NaiveDate::from_ymd_opt(2011, 6, 30).unwrap();
        assert!(ObservationPeriod::new(2007, 2011, early).is_err());
        assert_eq!(parse_year_range("2013-2017").unwrap(), (2013, 2017));
        assert!(parse_year_range("2013").is_err());
    }

    fn baseline_corpus(citations: &[u32]) -> (tempfile::TempDir, Corpus) {
        let dir = tempfile::tempdir().unwrap();
        toy(dir.path());
        let mut pubs = String::from("pub_id,year,journal_id,n_authors,intramural,citations_at_census\n");
        let mut auth = String::from("pub_id,prof_id,position\n");
        for (i, c) in citations.iter().enumerate() {
            pubs.push_str(&format!("A{i},2008,J1,1,0,{c}\n"));
            auth.push_str(&format!("A{i},P1,1\n"));
        }
        write(dir.path(), "publications.csv", &pubs);
        write(dir.path(), "authorships.csv", &auth);
        let c = Corpus::ingest(dir.path(), IngestOptions::default()).unwrap();
        (dir, c)
    }

    #[test]
    fn baseline_means_exclude_uncited() {
        let period = ObservationPeriod::with_year_end_census(2007, 2011).unwrap();
        let (_d, c) = baseline_corpus(&[2, 4, 6]);
        let b = compute_baselines(&c.period_dataset(period).unwrap(), BaselineFallback::Forbid).unwrap();
        assert_eq!(b.get(2008, "PHYSICS").unwrap().mean_citations_of_cited, 4.0);
        assert_eq!(b.get(2008, "PHYSICS").unwrap().mean_if, 2.0);

        let (_d, c) = baseline_corpus(&[0, 0, 5]);
        let b = compute_baselines(&c.period_dataset(period).unwrap(), BaselineFallback::Forbid).unwrap();
        assert_eq!(b.get(2008, "PHYSICS").unwrap().mean_citations_of_cited, 5.0);
    }

    #[test]
    fn all_zero_category_is_an_error_unless_external_fallback() {
        let period = ObservationPeriod::with_year_end_census(2007, 2011).unwrap();
        let (dir, c) = baseline_corpus(&[0, 0]);
        let err = compute_baselines(&c.period_dataset(period).unwrap(), BaselineFallback::Forbid).unwrap_err();
        assert!(matches!(err, Error::MissingBaseline { year: 2008, ref sc } if sc == "PHYSICS"));

        write(dir.path(), "baselines.csv", "year,sc_code,mean_citations_cited,mean_if\n2008,PHYSICS,3.5,1.5\n");
        let c = Corpus::ingest(dir.path(), IngestOptions::default()).unwrap();
        let b = compute_baselines(&c.period_dataset(period).unwrap(), BaselineFallback::External).unwrap();
        assert_eq!(b.get(2008, "PHYSICS").unwrap().mean_citations_of_cited, 3.5);
    }

    #[test]
    fn multi_category_baseline_is_mean_of_cells() {
        let mut b = Baselines::default();
        b.insert(2010, "A", BaselineCell { mean_citations_of_cited: 2.0, mean_if: 1.0 });
        b.insert(2010, "B", BaselineCell { mean_citations_of_cited: 6.0, mean_if: 3.0 });
        let cell = b.for_categories(2010, &["A".into(), "B".into()]).unwrap();
        assert_eq!(cell.mean_citations_of_cited, 4.0);
        assert_eq!(cell.mean_if, 2.0);
        assert!(b.for_categories(2010, &["C".into()]).is_err());
    }
}
