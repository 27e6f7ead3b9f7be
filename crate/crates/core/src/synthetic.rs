//! Seeded random corpora for examples, benchmarks and property tests.
//!
//! Every journal-year gets one cited anchor publication with no assessed
//! authors so that field baselines always exist.

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::{Corpus, JournalYear, Professor, Publication, University, ValidationReport};
use crate::error::Result;
use crate::io::{to_csv, write_file};
use crate::taxonomy::{AcademicRank, CostTable, MacroRegion, SdsRegistry, Uda};

/// One SDS per UDA, in UDA order.
pub const SECTORS: [(&str, u8); 10] = [
    ("MAT/05", 1),
    ("FIS/01", 2),
    ("CHIM/03", 3),
    ("GEO/04", 4),
    ("BIO/10", 5),
    ("MED/09", 6),
    ("AGR/01", 7),
    ("ICAR/08", 8),
    ("ING-INF/05", 9),
    ("M-PSI/01", 10),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub seed: u64,
    pub universities: usize,
    pub professors: usize,
    /// How many entries of [`SECTORS`] to use, 1..=10.
    pub sectors: usize,
    pub start_year: i32,
    pub end_year: i32,
    /// Expected publications per professor over the whole span.
    pub mean_publications: f64,
    /// Share of professors with no publications at all.
    pub unproductive_share: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            seed: 42,
            universities: 6,
            professors: 120,
            sectors: 4,
            start_year: 2007,
            end_year: 2011,
            mean_publications: 8.0,
            unproductive_share: 0.1,
        }
    }
}

pub fn generate(spec: &SyntheticSpec) -> Corpus {
    assert!(spec.universities > 0 && spec.professors > 0);
    assert!((1..=SECTORS.len()).contains(&spec.sectors));
    assert!(spec.end_year >= spec.start_year);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let span = (spec.end_year - spec.start_year + 1) as u32;

    let mut sds = SdsRegistry::new();
    for (code, uda) in &SECTORS[..spec.sectors] {
        sds.register(code, Uda::new(*uda).expect("valid UDA"), None)
            .expect("distinct sectors");
    }

    let universities: BTreeMap<String, University> = (0..spec.universities)
        .map(|i| {
            let id = format!("U{:02}", i + 1);
            let u = University {
                id: id.clone(),
                name: format!("University {}", i + 1),
                macro_region: MacroRegion::ALL[i % 3],
            };
            (id, u)
        })
        .collect();
    let university_ids: Vec<&String> = universities.keys().collect();

    let mut professors = BTreeMap::new();
    for i in 0..spec.professors {
        let id = format!("P{:04}", i + 1);
        let (code, _) = SECTORS[rng.gen_range(0..spec.sectors)];
        let years_active = if rng.gen_bool(0.05) { rng.gen_range(1..=span) } else { span.min(rng.gen_range(3..=span.max(3))) };
        professors.insert(
            id.clone(),
            Professor {
                id,
                university: university_ids[rng.gen_range(0..university_ids.len())].clone(),
                sds: code.to_string(),
                rank: AcademicRank::ALL[rng.gen_range(0..3)],
                years_active,
            },
        );
    }

    // Two journals per subject category, a third spanning two categories.
    let scs: Vec<String> = (0..spec.sectors).map(|i| format!("SC{:02}", i + 1)).collect();
    let mut journal_scs: Vec<(String, Vec<String>)> = Vec::new();
    for (i, sc) in scs.iter().enumerate() {
        journal_scs.push((format!("J{:02}A", i + 1), vec![sc.clone()]));
        journal_scs.push((format!("J{:02}B", i + 1), vec![sc.clone()]));
        let other = &scs[(i + 1) % scs.len()];
        let mut pair = vec![sc.clone(), other.clone()];
        pair.sort();
        pair.dedup();
        journal_scs.push((format!("J{:02}X", i + 1), pair));
    }
    let mut journals = BTreeMap::new();
    for (journal, cats) in &journal_scs {
        for year in spec.start_year..=spec.end_year {
            let impact_factor = (rng.gen_range(0.3..6.0_f64) * 1000.0).round() / 1000.0;
            journals.insert(
                (journal.clone(), year),
                JournalYear {
                    journal: journal.clone(),
                    year,
                    impact_factor,
                    subject_categories: cats.clone(),
                },
            );
        }
    }

    let mut publications = BTreeMap::new();
    let mut next_pub = 0usize;
    let mut new_id = || {
        next_pub += 1;
        format!("W{next_pub:06}")
    };
    for (journal, year) in journals.keys() {
        let id = new_id();
        publications.insert(
            id.clone(),
            Publication {
                id,
                year: *year,
                journal: journal.clone(),
                byline: vec![None; rng.gen_range(1..=6)],
                intramural: false,
                citations_at_census: rng.gen_range(1..=40),
            },
        );
    }

    let prof_list: Vec<&Professor> = professors.values().collect();
    for prof in &prof_list {
        if rng.gen_bool(spec.unproductive_share) {
            continue;
        }
        let count = rng.gen_range(0..=(2.0 * spec.mean_publications).round() as usize);
        for _ in 0..count {
            let n_authors = rng.gen_range(1..=8usize);
            let mut byline = vec![None; n_authors];
            let mut positions: Vec<usize> = (0..n_authors).collect();
            positions.shuffle(&mut rng);
            byline[positions[0]] = Some(prof.id.clone());
            // occasionally a colleague on the same byline
            if n_authors > 1 && rng.gen_bool(0.3) {
                let colleague = prof_list[rng.gen_range(0..prof_list.len())];
                if colleague.id != prof.id {
                    byline[positions[1]] = Some(colleague.id.clone());
                }
            }
            let sector = SECTORS.iter().position(|(c, _)| *c == prof.sds).expect("known sector");
            let journal = &journal_scs[sector * 3 + rng.gen_range(0..3)].0;
            let id = new_id();
            publications.insert(
                id.clone(),
                Publication {
                    id,
                    year: rng.gen_range(spec.start_year..=spec.end_year),
                    journal: journal.clone(),
                    byline,
                    intramural: rng.gen_bool(0.4),
                    citations_at_census: if rng.gen_bool(0.2) { 0 } else { rng.gen_range(1..=60) },
                },
            );
        }
    }

    Corpus {
        universities,
        professors,
        journals,
        publications,
        sds,
        costs: CostTable::italian_default(),
        external_baselines: None,
        report: ValidationReport::default(),
    }
}

#[derive(Serialize)]
struct UniversityOut<'a> {
    university_id: &'a str,
    name: &'a str,
    macro_region: &'static str,
}

#[derive(Serialize)]
struct ProfessorOut<'a> {
    prof_id: &'a str,
    university_id: &'a str,
    sds_code: &'a str,
    rank: &'static str,
    years_active: u32,
}

#[derive(Serialize)]
struct JournalOut<'a> {
    journal_id: &'a str,
    year: i32,
    impact_factor: f64,
    sc_codes: String,
}

#[derive(Serialize)]
struct PublicationOut<'a> {
    pub_id: &'a str,
    year: i32,
    journal_id: &'a str,
    n_authors: usize,
    intramural: u8,
    citations_at_census: u32,
}

#[derive(Serialize)]
struct AuthorshipOut<'a> {
    pub_id: &'a str,
    prof_id: &'a str,
    position: usize,
}

#[derive(Serialize)]
struct SdsOut<'a> {
    sds_code: &'a str,
    uda_id: u8,
    counting_scheme: String,
}

/// Writes the corpus in the layout [`Corpus::ingest`] reads. The cost table
/// is omitted, so ingestion falls back to the built-in one.
pub fn write_corpus(corpus: &Corpus, dir: &Path) -> Result<()> {
    let files = [
        (
            "universities.csv",
            to_csv(corpus.universities.values().map(|u| UniversityOut {
                university_id: &u.id,
                name: &u.name,
                macro_region: u.macro_region.code(),
            }))?,
        ),
        (
            "professors.csv",
            to_csv(corpus.professors.values().map(|p| ProfessorOut {
                prof_id: &p.id,
                university_id: &p.university,
                sds_code: &p.sds,
                rank: p.rank.as_str(),
                years_active: p.years_active,
            }))?,
        ),
        (
            "journals.csv",
            to_csv(corpus.journals.values().map(|j| JournalOut {
                journal_id: &j.journal,
                year: j.year,
                impact_factor: j.impact_factor,
                sc_codes: j.subject_categories.join(";"),
            }))?,
        ),
        (
            "publications.csv",
            to_csv(corpus.publications.values().map(|p| PublicationOut {
                pub_id: &p.id,
                year: p.year,
                journal_id: &p.journal,
                n_authors: p.n_authors(),
                intramural: u8::from(p.intramural),
                citations_at_census: p.citations_at_census,
            }))?,
        ),
        (
            "authorships.csv",
            to_csv(corpus.publications.values().flat_map(|p| {
                p.byline.iter().enumerate().filter_map(move |(i, slot)| {
                    slot.as_ref().map(|prof| AuthorshipOut {
                        pub_id: &p.id,
                        prof_id: prof,
                        position: i + 1,
                    })
                })
            }))?,
        ),
        (
            "sds_table.csv",
            to_csv(corpus.sds.iter().map(|s| SdsOut {
                sds_code: &s.code,
                uda_id: s.uda.id(),
                counting_scheme: s.counting_scheme.to_string(),
            }))?,
        ),
    ];
    for (name, body) in files {
        write_file(&dir.join(name), &body)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::IngestOptions;

    #[test]
    fn same_seed_same_corpus() {
        let spec = SyntheticSpec::default();
        assert_eq!(generate(&spec).digest(), generate(&spec).digest());
        let other = SyntheticSpec { seed: 7, ..spec };
        assert_ne!(generate(&spec).digest(), generate(&other).digest());
    }

    #[test]
    fn written_corpus_ingests_back() {
        let corpus = generate(&SyntheticSpec {
            professors: 40,
            ..SyntheticSpec::default()
        });
        let dir = tempfile::tempdir().unwrap();
        write_corpus(&corpus, dir.path()).unwrap();
        let back = Corpus::ingest(dir.path(), IngestOptions { strict: true }).unwrap();
        assert_eq!(back, corpus);
    }
}
