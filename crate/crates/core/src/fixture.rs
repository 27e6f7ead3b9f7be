//! Published university-level results for Italian universities, 2007-2011
//! versus 2013-2017, used as golden values for replication.
//!
//! FSS values are the printed two-decimal figures. Because many of them tie
//! at that precision, the printed ranks are kept as tie-order hints: they
//! only decide between units with identical printed FSS.

use std::collections::BTreeMap;

use crate::scoring::{Level, UnitScore};
use crate::taxonomy::MacroRegion::{self, Center, North, South};

pub const PERIOD_BEFORE: &str = "2007-2011";
pub const PERIOD_AFTER: &str = "2013-2017";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversityRow {
    pub university: &'static str,
    pub region: MacroRegion,
    pub staff_before: u32,
    pub fss_before: f64,
    pub rank_before: u32,
    pub staff_after: u32,
    pub fss_after: f64,
    pub rank_after: u32,
    pub delta_fss: f64,
    pub delta_rank: i32,
    /// Whole percent; `None` where printed "n.a.".
    pub relative_delta_rank_pct: Option<i32>,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    university: &'static str,
    region: MacroRegion,
    staff_before: u32,
    fss_before: f64,
    rank_before: u32,
    staff_after: u32,
    fss_after: f64,
    rank_after: u32,
    delta_fss: f64,
    delta_rank: i32,
    relative_delta_rank_pct: Option<i32>,
) -> UniversityRow {
    UniversityRow {
        university,
        region,
        staff_before,
        fss_before,
        rank_before,
        staff_after,
        fss_after,
        rank_after,
        delta_fss,
        delta_rank,
        relative_delta_rank_pct,
    }
}

/// The 60 universities with at least 30 assessable professors in both
/// periods, in published order.
pub const UNIVERSITIES: [UniversityRow; 60] = [
    row("Vita - Salute San Raffaele", North, 63, 3.27, 1, 85, 2.42, 1, -0.85, 0, None),
    row("Salerno", South, 448, 0.97, 20, 417, 1.22, 6, 0.25, 14, Some(74)),
    row("Napoli 'Federico II'", South, 1580, 0.77, 42, 1453, 1.04, 16, 0.27, 26, Some(63)),
    row("del Salento", South, 261, 1.00, 18, 228, 1.11, 9, 0.11, 9, Some(53)),
    row("Napoli 'Parthenope'", South, 122, 0.65, 51, 118, 1.00, 25, 0.35, 26, Some(52)),
    row("SISSA - Trieste", North, 50, 1.72, 3, 60, 1.85, 2, 0.13, 1, Some(50)),
    row("Urbino 'Carlo Bo'", Center, 148, 0.65, 50, 121, 0.96, 28, 0.31, 22, Some(45)),
    row("Catania", South, 823, 0.63, 52, 672, 0.95, 30, 0.32, 22, Some(43)),
    row("Politecnico di Bari", South, 219, 0.77, 43, 179, 0.96, 26, 0.20, 17, Some(40)),
    row("Messina", South, 717, 0.62, 53, 618, 0.92, 32, 0.30, 21, Some(40)),
    row("Politecnica delle Marche", Center, 385, 0.93, 27, 365, 1.03, 17, 0.10, 10, Some(38)),
    row("Milano Bicocca", North, 458, 1.11, 12, 436, 1.14, 8, 0.03, 4, Some(36)),
    row("Bergamo", North, 90, 0.48, 60, 86, 0.86, 39, 0.38, 21, Some(36)),
    row("Firenze", Center, 1022, 1.02, 17, 878, 1.09, 12, 0.07, 5, Some(31)),
    row("Perugia", Center, 679, 0.85, 34, 596, 1.00, 24, 0.15, 10, Some(30)),
    row("Roma Tre", Center, 252, 0.94, 24, 245, 1.03, 18, 0.09, 6, Some(26)),
    row("Seconda Napoli", South, 585, 0.73, 44, 524, 0.92, 33, 0.19, 11, Some(26)),
    row("Magna Grecia di Catanzaro", South, 157, 0.78, 41, 138, 0.93, 31, 0.15, 10, Some(25)),
    row("Cagliari", South, 573, 0.61, 55, 498, 0.82, 43, 0.21, 12, Some(22)),
    row("della Calabria", South, 439, 0.98, 19, 409, 1.04, 15, 0.07, 4, Some(22)),
    row("Roma 'La Sapienza'", Center, 2339, 0.69, 45, 1945, 0.87, 36, 0.18, 9, Some(20)),
    row("Padova", North, 1335, 1.36, 6, 1271, 1.26, 5, -0.10, 1, Some(20)),
    row("Ca' Foscari Venezia", North, 103, 0.68, 47, 85, 0.86, 38, 0.18, 9, Some(20)),
    row("Mediterranea di Reggio Calabria", South, 139, 0.65, 49, 137, 0.85, 40, 0.20, 9, Some(19)),
    row("Pisa", Center, 955, 0.95, 23, 841, 1.02, 19, 0.07, 4, Some(18)),
    row("Camerino", Center, 189, 0.60, 57, 192, 0.75, 55, 0.15, 2, Some(4)),
    row("dell'Aquila", South, 425, 0.52, 59, 362, 0.75, 57, 0.23, 2, Some(3)),
    row("Palermo", South, 963, 0.68, 46, 848, 0.82, 45, 0.13, 1, Some(2)),
    row("Trento", North, 239, 1.51, 4, 238, 1.40, 4, -0.11, 0, Some(0)),
    row("Verona", North, 349, 1.33, 7, 326, 1.16, 7, -0.17, 0, Some(0)),
    row("Torino", North, 1078, 1.14, 11, 1010, 1.10, 11, -0.05, 0, Some(0)),
    row("Scuola Superiore S.Anna", Center, 43, 2.16, 2, 53, 1.80, 3, -0.36, -1, Some(-2)),
    row("Cattolica del Sacro Cuore", North, 740, 0.96, 22, 618, 1.00, 23, 0.04, -1, Some(-3)),
    row("Milano", North, 1358, 1.22, 8, 1210, 1.10, 10, -0.11, -2, Some(-4)),
    row("Bologna", North, 1542, 1.14, 10, 1385, 1.06, 14, -0.08, -4, Some(-8)),
    row("Pavia", North, 604, 0.93, 26, 512, 0.95, 29, 0.03, -3, Some(-9)),
    row("Ferrara", North, 389, 1.07, 14, 349, 1.02, 20, -0.05, -6, Some(-13)),
    row("Foggia", South, 158, 1.06, 16, 146, 1.00, 22, -0.06, -6, Some(-14)),
    row("'Campus Bio-medico'", Center, 78, 1.38, 5, 96, 1.09, 13, -0.30, -8, Some(-15)),
    row("del Sannio", South, 108, 0.90, 29, 108, 0.91, 34, 0.01, -5, Some(-16)),
    row("Politecnico di Milano", North, 819, 1.18, 9, 835, 1.01, 21, -0.17, -12, Some(-24)),
    row("Modena e Reggio Emilia", North, 523, 0.84, 35, 470, 0.83, 42, -0.01, -7, Some(-28)),
    row("dell'Insubria", North, 248, 0.92, 28, 218, 0.86, 37, -0.06, -9, Some(-28)),
    row("Genova", North, 746, 0.86, 33, 699, 0.85, 41, -0.01, -8, Some(-30)),
    row("della Toscana", Center, 145, 1.09, 13, 151, 0.96, 27, -0.13, -14, Some(-30)),
    row("Cassino", Center, 116, 0.68, 48, 104, 0.77, 52, 0.09, -4, Some(-33)),
    row("Trieste", North, 392, 0.84, 37, 343, 0.81, 47, -0.03, -10, Some(-43)),
    row("Politecnico di Torino", North, 583, 1.06, 15, 576, 0.90, 35, -0.16, -20, Some(-44)),
    row("Bari", South, 848, 0.82, 38, 748, 0.81, 48, -0.01, -10, Some(-45)),
    row("Sassari", South, 375, 0.54, 58, 326, 0.67, 59, 0.13, -1, Some(-50)),
    row("Parma", North, 625, 0.86, 32, 533, 0.81, 46, -0.05, -14, Some(-50)),
    row("Teramo", South, 89, 0.79, 39, 89, 0.79, 50, 0.00, -11, Some(-52)),
    row("Brescia", North, 380, 0.94, 25, 359, 0.82, 44, -0.12, -19, Some(-54)),
    row("Gabriele D'Annunzio", South, 331, 0.78, 40, 307, 0.78, 51, 0.00, -11, Some(-55)),
    row("del Molise", South, 129, 0.62, 54, 117, 0.68, 58, 0.06, -4, Some(-67)),
    row("Piemonte Orientale A. Avogadro", North, 186, 0.97, 21, 174, 0.81, 49, -0.17, -28, Some(-72)),
    row("Roma 'Tor Vergata'", Center, 908, 0.84, 36, 775, 0.76, 54, -0.08, -18, Some(-75)),
    row("Udine", North, 370, 0.89, 30, 358, 0.76, 53, -0.13, -23, Some(-77)),
    row("Siena", Center, 451, 0.88, 31, 330, 0.75, 56, -0.14, -25, Some(-86)),
    row("della Basilicata", South, 225, 0.60, 56, 219, 0.64, 60, 0.03, -4, Some(-100)),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Before,
    After,
}

/// Overall unit scores of one period, tie hints set to the printed rank.
pub fn unit_scores(side: Side) -> Vec<UnitScore> {
    UNIVERSITIES
        .iter()
        .map(|r| {
            let (period, staff, fss, rank) = match side {
                Side::Before => (PERIOD_BEFORE, r.staff_before, r.fss_before, r.rank_before),
                Side::After => (PERIOD_AFTER, r.staff_after, r.fss_after, r.rank_after),
            };
            UnitScore {
                unit_key: r.university.to_string(),
                level: Level::Overall,
                period: period.to_string(),
                staff: staff as usize,
                fss,
                tie_order: Some(rank),
            }
        })
        .collect()
}

pub fn regions() -> BTreeMap<String, MacroRegion> {
    UNIVERSITIES
        .iter()
        .map(|r| (r.university.to_string(), r.region))
        .collect()
}

pub fn row_for(university: &str) -> Option<&'static UniversityRow> {
    UNIVERSITIES.iter().find(|r| r.university == university)
}

/// Published per-region summary of rank changes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionRow {
    pub region: MacroRegion,
    pub n_universities: usize,
    pub n_improve: usize,
    pub n_worsen: usize,
    pub avg_relative_pct: i32,
    pub max_improvement_pct: i32,
    pub max_decline_pct: i32,
}

pub const REGION_SUMMARY: [RegionRow; 3] = [
    RegionRow { region: North, n_universities: 24, n_improve: 5, n_worsen: 15, avg_relative_pct: -14, max_improvement_pct: 50, max_decline_pct: -77 },
    RegionRow { region: Center, n_universities: 14, n_improve: 8, n_worsen: 6, avg_relative_pct: -2, max_improvement_pct: 45, max_decline_pct: -86 },
    RegionRow { region: South, n_universities: 22, n_improve: 14, n_worsen: 8, avg_relative_pct: 4, max_improvement_pct: 74, max_decline_pct: -100 },
];

/// Published regression of ΔFSS on first-period FSS and a South dummy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegressionRow {
    pub name: &'static str,
    pub coefficient: f64,
    pub std_error: f64,
    pub t: f64,
    pub p_value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

pub const REGRESSION: [RegressionRow; 3] = [
    RegressionRow { name: "const", coefficient: 0.333, std_error: 0.044, t: 7.630, p_value: 0.000, ci_low: 0.245, ci_high: 0.420 },
    RegressionRow { name: "fss_before", coefficient: -0.344, std_error: 0.040, t: -8.710, p_value: 0.000, ci_low: -0.423, ci_high: -0.265 },
    RegressionRow { name: "south", coefficient: 0.069, std_error: 0.031, t: 2.200, p_value: 0.032, ci_low: 0.006, ci_high: 0.131 },
];
pub const REGRESSION_N: usize = 60;
pub const REGRESSION_F: f64 = 51.50;
pub const REGRESSION_F_DF: (usize, usize) = (2, 57);
pub const REGRESSION_R_SQUARED: f64 = 0.675;
pub const REGRESSION_ROOT_MSE: f64 = 0.114;

/// Published dispersion of the two FSS distributions, (before, after).
pub const STD_DEV: (f64, f64) = (0.425, 0.290);
pub const RANGE: (f64, f64) = (2.791, 1.777);
pub const IQR: (f64, f64) = (0.372, 0.228);
pub const SKEWNESS: (f64, f64) = (3.261, 2.874);
pub const VARIANCE_RATIO_F: f64 = 2.140;
pub const VARIANCE_RATIO_P_BELOW: f64 = 0.005;
/// Share of professors with zero FSS, (before, after). Professor-level data
/// is not published, so this is documentation only.
pub const UNPRODUCTIVE_SHARE: (f64, f64) = (0.083, 0.029);

/// One row of a university's per-field breakdown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRow {
    pub field: &'static str,
    pub staff_before: u32,
    pub fss_before: f64,
    pub rank_before: u32,
    pub staff_after: u32,
    pub fss_after: f64,
    pub rank_after: u32,
    pub delta_rank: i32,
}

#[allow(clippy::too_many_arguments)]
const fn field(
    field: &'static str,
    staff_before: u32,
    fss_before: f64,
    rank_before: u32,
    staff_after: u32,
    fss_after: f64,
    rank_after: u32,
    delta_rank: i32,
) -> FieldRow {
    FieldRow { field, staff_before, fss_before, rank_before, staff_after, fss_after, rank_after, delta_rank }
}

/// University of Firenze by UDA id.
pub const FIRENZE_BY_UDA: [FieldRow; 10] = [
    field("1", 104, 0.87, 24, 76, 0.77, 35, -11),
    field("2", 71, 0.68, 36, 58, 0.72, 33, 3),
    field("3", 109, 2.02, 1, 99, 1.87, 1, 0),
    field("4", 37, 1.56, 2, 37, 1.72, 2, 0),
    field("5", 124, 1.20, 10, 121, 1.15, 8, 2),
    field("6", 272, 1.13, 11, 220, 1.09, 11, 0),
    field("7", 119, 0.62, 20, 96, 0.71, 21, -1),
    field("8", 45, 0.45, 26, 43, 0.58, 30, -4),
    field("9", 99, 0.50, 44, 92, 0.95, 22, 22),
    field("10", 42, 0.67, 11, 36, 1.40, 1, 10),
];

/// University of Firenze by Physics SDS.
pub const FIRENZE_PHYSICS_SDS: [FieldRow; 6] = [
    field("FIS/01", 19, 0.62, 35, 11, 0.72, 30, 5),
    field("FIS/02", 10, 0.34, 33, 9, 0.52, 31, 2),
    field("FIS/03", 20, 0.94, 14, 23, 0.74, 24, -10),
    field("FIS/04", 4, 0.94, 11, 3, 1.62, 6, 5),
    field("FIS/05", 9, 0.60, 17, 5, 0.59, 18, -1),
    field("FIS/07", 9, 0.46, 33, 6, 0.31, 38, -5),
];

/// Per-UDA marks (UDA 1..=10) for universities assessed in all ten UDAs.
pub const UDA_MARKS_FULL_COVERAGE: [(&str, &str, u32); 8] = [
    ("Napoli 'Federico II'", "++++++-+++", 90),
    ("Roma 'La Sapienza'", "+++-++-+++", 80),
    ("Messina", "--+=+++-++", 60),
    ("Palermo", "+-+++-+-+-", 60),
    ("Firenze", "-+==+=--++", 40),
    ("Parma", "-----++--+", 30),
    ("Bologna", "-+--+=----", 20),
    ("Padova", "-+-=+-----", 20),
];
