//! Classification system (SDS, UDA, academic rank, macro-region) and the
//! cost model used to normalize individual productivity.
//!
//! Everything here is immutable once loaded and can be shared read-only
//! across scoring workers.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::{malformed, open_csv, read_rows, reader_from};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AcademicRank {
    Assistant,
    Associate,
    Full,
}

impl AcademicRank {
    pub const ALL: [AcademicRank; 3] = [Self::Assistant, Self::Associate, Self::Full];

    /// Collapses the ranks held during a period into the single rank used for
    /// the whole period: the one held for most active years, ties going to
    /// the higher rank.
    pub fn for_period(spells: &[(AcademicRank, u32)]) -> Option<AcademicRank> {
        let mut years: BTreeMap<AcademicRank, u32> = BTreeMap::new();
        for &(rank, y) in spells {
            *years.entry(rank).or_default() += y;
        }
        // BTreeMap iterates low to high, so `max_by_key` keeps the last
        // (highest) rank among equal counts.
        years
            .into_iter()
            .filter(|&(_, y)| y > 0)
            .max_by_key(|&(_, y)| y)
            .map(|(rank, _)| rank)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Assistant => "assistant",
            Self::Associate => "associate",
            Self::Full => "full",
        }
    }
}

impl fmt::Display for AcademicRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AcademicRank {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "assistant" => Ok(Self::Assistant),
            "associate" => Ok(Self::Associate),
            "full" => Ok(Self::Full),
            other => Err(Error::InvalidArgument(format!("unknown academic rank {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MacroRegion {
    North,
    Center,
    South,
}

impl MacroRegion {
    pub const ALL: [MacroRegion; 3] = [Self::North, Self::Center, Self::South];

    pub fn code(self) -> &'static str {
        match self {
            Self::North => "N",
            Self::Center => "C",
            Self::South => "S",
        }
    }
}

impl fmt::Display for MacroRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::North => "North",
            Self::Center => "Center",
            Self::South => "South",
        })
    }
}

impl FromStr for MacroRegion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "N" | "n" | "North" | "north" => Ok(Self::North),
            "C" | "c" | "Center" | "center" => Ok(Self::Center),
            "S" | "s" | "South" | "south" => Ok(Self::South),
            other => Err(Error::InvalidArgument(format!("unknown macro region {other:?}"))),
        }
    }
}

const UDA_NAMES: [&str; 10] = [
    "Mathematics and computer science",
    "Physics",
    "Chemistry",
    "Earth sciences",
    "Biology",
    "Medicine",
    "Agricultural and veterinary sciences",
    "Civil engineering",
    "Industrial and information engineering",
    "Psychology",
];

/// One of the ten bibliometric university disciplinary areas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Uda(u8);

impl Uda {
    pub const MATHEMATICS: Uda = Uda(1);
    pub const PHYSICS: Uda = Uda(2);
    pub const CHEMISTRY: Uda = Uda(3);
    pub const EARTH_SCIENCES: Uda = Uda(4);
    pub const BIOLOGY: Uda = Uda(5);
    pub const MEDICINE: Uda = Uda(6);
    pub const AGRICULTURE_VETERINARY: Uda = Uda(7);
    pub const CIVIL_ENGINEERING: Uda = Uda(8);
    pub const INDUSTRIAL_INFORMATION_ENGINEERING: Uda = Uda(9);
    pub const PSYCHOLOGY: Uda = Uda(10);

    pub fn new(id: u8) -> Result<Self> {
        if (1..=10).contains(&id) {
            Ok(Uda(id))
        } else {
            Err(Error::InvalidArgument(format!("UDA id {id} is not one of the 10 bibliometric UDAs")))
        }
    }

    pub fn all() -> impl Iterator<Item = Uda> {
        (1..=10).map(Uda)
    }

    pub fn id(self) -> u8 {
        self.0
    }

    pub fn name(self) -> &'static str {
        UDA_NAMES[usize::from(self.0 - 1)]
    }

    /// Life-science areas where byline order signals contribution.
    pub fn default_scheme(self) -> CountingScheme {
        if self == Self::BIOLOGY || self == Self::MEDICINE {
            CountingScheme::Positional
        } else {
            CountingScheme::Alphabetical
        }
    }
}

impl TryFrom<u8> for Uda {
    type Error = Error;
    fn try_from(id: u8) -> Result<Self> {
        Uda::new(id)
    }
}

impl From<Uda> for u8 {
    fn from(u: Uda) -> u8 {
        u.0
    }
}

impl fmt::Display for Uda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} - {}", self.0, self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountingScheme {
    Alphabetical,
    Positional,
}

impl FromStr for CountingScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alphabetical" => Ok(Self::Alphabetical),
            "positional" => Ok(Self::Positional),
            other => Err(Error::InvalidArgument(format!("unknown counting scheme {other:?}"))),
        }
    }
}

impl fmt::Display for CountingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Alphabetical => "alphabetical",
            Self::Positional => "positional",
        })
    }
}

/// Scientific disciplinary sector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sds {
    pub code: String,
    pub uda: Uda,
    pub counting_scheme: CountingScheme,
}

/// Registry of SDSs with their UDA and counting scheme.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SdsRegistry {
    sectors: BTreeMap<String, Sds>,
}

#[derive(Debug, Deserialize)]
struct SdsRow {
    sds_code: String,
    uda_id: u8,
    counting_scheme: String,
}

impl SdsRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers `code` under `uda`; `scheme = None` takes the UDA default.
    pub fn register(&mut self, code: &str, uda: Uda, scheme: Option<CountingScheme>) -> Result<()> {
        let code = code.trim().to_string();
        if self.sectors.contains_key(&code) {
            return Err(Error::InvalidArgument(format!("SDS {code} registered twice")));
        }
        let counting_scheme = scheme.unwrap_or_else(|| uda.default_scheme());
        self.sectors.insert(code.clone(), Sds { code, uda, counting_scheme });
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let (name, reader) = open_csv(path)?;
        Self::parse(&name, reader)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        Self::parse("sds_table.csv", reader_from(reader))
    }

    fn parse<R: Read>(file: &str, mut reader: csv::Reader<R>) -> Result<Self> {
        let mut registry = Self::new();
        for (line, row) in read_rows::<SdsRow, _>(file, &mut reader, &["sds_code", "uda_id", "counting_scheme"])? {
            let uda = Uda::new(row.uda_id).map_err(|e| malformed(file, line, e))?;
            let scheme = match row.counting_scheme.trim().to_ascii_lowercase().as_str() {
                "default" | "" => None,
                s => Some(s.parse().map_err(|e| malformed(file, line, e))?),
            };
            if registry.sectors.contains_key(row.sds_code.trim()) {
                return Err(Error::DuplicateKey {
                    file: file.to_string(),
                    line,
                    key: row.sds_code,
                });
            }
            registry.register(&row.sds_code, uda, scheme)?;
        }
        Ok(registry)
    }

    /// Replaces the counting scheme of an already registered SDS.
    pub fn override_scheme(&mut self, code: &str, scheme: CountingScheme) -> Result<()> {
        let sds = self
            .sectors
            .get_mut(code)
            .ok_or_else(|| Error::UnregisteredSds(code.to_string()))?;
        sds.counting_scheme = scheme;
        Ok(())
    }

    pub fn get(&self, code: &str) -> Result<&Sds> {
        self.sectors
            .get(code)
            .ok_or_else(|| Error::UnregisteredSds(code.to_string()))
    }

    pub fn counting_scheme_for(&self, code: &str) -> Result<CountingScheme> {
        self.get(code).map(|s| s.counting_scheme)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Sds> {
        self.sectors.values()
    }

    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }
}

/// Yearly cost of production factors for one (UDA, rank) cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostEntry {
    /// Capital available for research, euro/year.
    pub capital: f64,
    /// Half salary plus capital, euro/year.
    pub total_cost: f64,
    /// `total_cost` over the smallest total cost in the table.
    pub normalization_factor: f64,
}

/// Per-UDA, per-rank cost of research with derived normalization factors.
#[derive(Debug, Clone, PartialEq)]
pub struct CostTable {
    entries: BTreeMap<(Uda, AcademicRank), CostEntry>,
    base_cost: f64,
}

#[derive(Debug, Deserialize)]
struct CostRow {
    uda_id: u8,
    k: f64,
    total_cost_assistant: f64,
    total_cost_associate: f64,
    total_cost_full: f64,
}

/// (uda, k, assistant, associate, full), euro/year.
const ITALIAN_COSTS: [(u8, u32, u32, u32, u32); 10] = [
    (1, 30822, 58109, 65079, 82019),
    (2, 46194, 73481, 80451, 97391),
    (3, 39820, 67107, 74077, 91017),
    (4, 60016, 87303, 94273, 111213),
    (5, 45748, 73035, 80005, 96945),
    (6, 41228, 68515, 75485, 92424),
    (7, 45748, 73035, 80005, 96945),
    (8, 47810, 75097, 82067, 99007),
    (9, 47810, 75097, 82067, 99007),
    (10, 26777, 54064, 61034, 77974),
];

impl CostTable {
    /// Builds a table from `(uda, k, [assistant, associate, full])` rows.
    pub fn from_rows(rows: impl IntoIterator<Item = (Uda, f64, [f64; 3])>) -> Result<Self> {
        let mut raw = BTreeMap::new();
        for (uda, k, totals) in rows {
            if raw.insert(uda, (k, totals)).is_some() {
                return Err(Error::CostTable(format!("duplicate row for UDA {}", uda.id())));
            }
        }
        Self::build(raw)
    }

    fn build(raw: BTreeMap<Uda, (f64, [f64; 3])>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::CostTable("no UDA rows".into()));
        }
        for (uda, (k, totals)) in &raw {
            if !(k.is_finite() && *k > 0.0) {
                return Err(Error::CostTable(format!("UDA {}: non-positive capital {k}", uda.id())));
            }
            for (rank, total) in AcademicRank::ALL.iter().zip(totals) {
                if !(total.is_finite() && *total > 0.0) {
                    return Err(Error::CostTable(format!(
                        "UDA {}: non-positive total cost {total} for {rank}",
                        uda.id()
                    )));
                }
                if total <= k {
                    return Err(Error::CostTable(format!(
                        "UDA {}: total cost {total} for {rank} does not exceed capital {k}",
                        uda.id()
                    )));
                }
            }
        }
        let base_cost = raw
            .values()
            .flat_map(|(_, totals)| totals.iter().copied())
            .fold(f64::INFINITY, f64::min);
        let entries = raw
            .into_iter()
            .flat_map(|(uda, (k, totals))| {
                AcademicRank::ALL.into_iter().zip(totals).map(move |(rank, total)| {
                    (
                        (uda, rank),
                        CostEntry {
                            capital: k,
                            total_cost: total,
                            normalization_factor: total / base_cost,
                        },
                    )
                })
            })
            .collect();
        Ok(Self { entries, base_cost })
    }

    /// The Italian 2007–2017 cost table (10 bibliometric UDAs).
    pub fn italian_default() -> Self {
        Self::from_rows(ITALIAN_COSTS.iter().map(|&(id, k, a, b, c)| {
            (Uda(id), f64::from(k), [f64::from(a), f64::from(b), f64::from(c)])
        }))
        .expect("embedded cost table is valid")
    }

    /// Loads `cost_table.csv`
    /// (`uda_id,k,total_cost_assistant,total_cost_associate,total_cost_full`).
    pub fn load(path: &Path) -> Result<Self> {
        let (name, reader) = open_csv(path)?;
        Self::parse(&name, reader)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        Self::parse("cost_table.csv", reader_from(reader))
    }

    fn parse<R: Read>(file: &str, mut reader: csv::Reader<R>) -> Result<Self> {
        let mut raw = BTreeMap::new();
        let cols = ["uda_id", "k", "total_cost_assistant", "total_cost_associate", "total_cost_full"];
        for (line, row) in read_rows::<CostRow, _>(file, &mut reader, &cols)? {
            let uda = Uda::new(row.uda_id).map_err(|e| malformed(file, line, e))?;
            let totals = [row.total_cost_assistant, row.total_cost_associate, row.total_cost_full];
            if row.k <= 0.0 || totals.iter().any(|&t| t <= 0.0) {
                return Err(malformed(file, line, format!("non-positive cost in row for UDA {}", uda.id())));
            }
            if raw.insert(uda, (row.k, totals)).is_some() {
                return Err(Error::DuplicateKey {
                    file: file.to_string(),
                    line,
                    key: format!("uda_id {}", uda.id()),
                });
            }
        }
        Self::build(raw)
    }

    pub fn entry(&self, uda: Uda, rank: AcademicRank) -> Result<&CostEntry> {
        self.entries.get(&(uda, rank)).ok_or(Error::UnknownCostEntry {
            uda: uda.id(),
            rank: rank.to_string(),
        })
    }

    pub fn normalization_factor(&self, uda: Uda, rank: AcademicRank) -> Result<f64> {
        self.entry(uda, rank).map(|e| e.normalization_factor)
    }

    /// Smallest total cost in the table; every factor is relative to it.
    pub fn base_cost(&self) -> f64 {
        self.base_cost
    }

    pub fn udas(&self) -> impl Iterator<Item = Uda> + '_ {
        self.entries.keys().map(|&(u, _)| u).collect::<std::collections::BTreeSet<_>>().into_iter()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Uda, AcademicRank, &CostEntry)> {
        self.entries.iter().map(|(&(u, r), e)| (u, r, e))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Errors naming the first UDA in `required` that has no row.
    pub fn require_udas(&self, required: impl IntoIterator<Item = Uda>) -> Result<()> {
        for uda in required {
            if !self.entries.contains_key(&(uda, AcademicRank::Assistant)) {
                return Err(Error::CostTable(format!("missing row for UDA {}", uda.id())));
            }
        }
        Ok(())
    }
}
