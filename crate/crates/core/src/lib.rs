//! Fractional Scientific Strength (FSS) research-productivity scoring for
//! universities, with before/after rank-shift comparison and the
//! convergence statistics used to read it.
//!
//! The pipeline runs bottom-up:
//!
//! 1. [`corpus`] ingests professors, journals and publications and computes
//!    field baselines per observation period.
//! 2. [`scoring`] turns them into professor-level FSS, SDS-scaled scores and
//!    university, university×UDA and university×SDS unit scores.
//! 3. [`comparison`] ranks units in two periods and measures rank shifts.
//! 4. [`stats`] summarises dispersion, tests variance convergence and fits
//!    the catch-up regression.
//!
//! [`fixture`] embeds the published university-level results and
//! [`replicate`] recomputes them.

pub mod comparison;
pub mod config;
pub mod corpus;
pub mod error;
pub mod fixture;
mod io;
pub mod pipeline;
pub mod replicate;
pub mod report;
pub mod scoring;
pub mod stats;
pub mod synthetic;
pub mod taxonomy;

pub use comparison::{RankShift, RegionSummary, TieBreak};
pub use config::RunConfig;
pub use corpus::{Corpus, IngestOptions, ObservationPeriod};
pub use error::{Error, Result};
pub use scoring::{Level, PeriodScores, ProfessorScore, ScoringOptions, Theta, UnitScore};
pub use taxonomy::{AcademicRank, CostTable, CountingScheme, MacroRegion, SdsRegistry, Uda};
