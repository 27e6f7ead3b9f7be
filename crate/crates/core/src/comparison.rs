//! Before/after comparison of unit rankings.
//!
//! The relative rank shift divides the rank change by the largest change
//! the unit could have made from where it started: `rank_before − 1`
//! positions of possible gain, `N − rank_before` of possible loss.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scoring::UnitScore;
use crate::taxonomy::MacroRegion;

/// How exact FSS ties are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Ascending unit key.
    #[default]
    UnitKey,
    /// Ascending `UnitScore::tie_order`, then unit key.
    Hint,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedUnit {
    pub unit_key: String,
    pub period: String,
    pub fss: f64,
    pub staff: usize,
    pub rank: usize,
}

/// Ranks units by descending FSS. Ranks are 1..=N with ties resolved by
/// `tie`.
pub fn rank_units(scores: &[UnitScore], tie: TieBreak) -> Result<Vec<RankedUnit>> {
    let mut seen = BTreeSet::new();
    for s in scores {
        if !seen.insert(s.unit_key.as_str()) {
            return Err(Error::DuplicateUnit(s.unit_key.clone()));
        }
        if !s.fss.is_finite() {
            return Err(Error::InvalidArgument(format!("unit {} has non-finite FSS", s.unit_key)));
        }
    }
    let mut order: Vec<&UnitScore> = scores.iter().collect();
    order.sort_by(|a, b| {
        b.fss
            .partial_cmp(&a.fss)
            .unwrap_or(Ordering::Equal)
            .then_with(|| match tie {
                TieBreak::UnitKey => Ordering::Equal,
                TieBreak::Hint => cmp_hint(a.tie_order, b.tie_order),
            })
            .then_with(|| a.unit_key.cmp(&b.unit_key))
    });
    Ok(order
        .into_iter()
        .enumerate()
        .map(|(i, s)| RankedUnit {
            unit_key: s.unit_key.clone(),
            period: s.period.clone(),
            fss: s.fss,
            staff: s.staff,
            rank: i + 1,
        })
        .collect())
}

fn cmp_hint(a: Option<u32>, b: Option<u32>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

/// Ranks the units assessed in both periods with at least `min_staff`
/// members in each. Units seen in only one period are left out; if no unit
/// is shared the call fails listing the unmatched keys.
pub fn joint_rankings(
    before: &[UnitScore],
    after: &[UnitScore],
    min_staff: usize,
    tie: TieBreak,
) -> Result<(Vec<RankedUnit>, Vec<RankedUnit>)> {
    let after_keys: BTreeSet<&str> = after.iter().map(|u| u.unit_key.as_str()).collect();
    let before_keys: BTreeSet<&str> = before.iter().map(|u| u.unit_key.as_str()).collect();
    if before_keys.is_disjoint(&after_keys) && !(before.is_empty() && after.is_empty()) {
        let unmatched = before_keys.union(&after_keys).map(|s| s.to_string()).collect();
        return Err(Error::UnmatchedUnits(unmatched));
    }
    let eligible: BTreeSet<&str> = before
        .iter()
        .filter(|b| b.staff >= min_staff && after_keys.contains(b.unit_key.as_str()))
        .map(|b| b.unit_key.as_str())
        .filter(|k| after.iter().any(|a| a.unit_key == *k && a.staff >= min_staff))
        .collect();
    let pick = |set: &[UnitScore]| -> Vec<UnitScore> {
        set.iter()
            .filter(|u| eligible.contains(u.unit_key.as_str()))
            .cloned()
            .collect()
    };
    Ok((rank_units(&pick(before), tie)?, rank_units(&pick(after), tie)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankShift {
    pub unit_key: String,
    pub staff_before: usize,
    pub fss_before: f64,
    pub rank_before: usize,
    pub staff_after: usize,
    pub fss_after: f64,
    pub rank_after: usize,
    pub delta_fss: f64,
    /// `rank_before − rank_after`; positive is an improvement.
    pub delta_rank: i64,
    /// In `[−1, 1]`; `None` when no move in the observed direction was
    /// possible (a unit holding rank 1 that stays there).
    pub relative_delta_rank: Option<f64>,
}

/// Relative rank shift for a move from `before` to `after` among `n` units.
pub fn relative_delta_rank(before: usize, after: usize, n: usize) -> Option<f64> {
    let delta = before as i64 - after as i64;
    let denom = match delta.cmp(&0) {
        Ordering::Greater | Ordering::Equal => before as i64 - 1,
        Ordering::Less => n as i64 - before as i64,
    };
    if denom == 0 {
        None
    } else {
        Some(delta as f64 / denom as f64)
    }
}

/// Pairs two rankings of the same unit set.
pub fn rank_shift(before: &[RankedUnit], after: &[RankedUnit]) -> Result<Vec<RankShift>> {
    let b: BTreeMap<&str, &RankedUnit> = before.iter().map(|u| (u.unit_key.as_str(), u)).collect();
    let a: BTreeMap<&str, &RankedUnit> = after.iter().map(|u| (u.unit_key.as_str(), u)).collect();
    if b.len() != before.len() {
        return Err(Error::DuplicateUnit("in before ranking".into()));
    }
    if a.len() != after.len() {
        return Err(Error::DuplicateUnit("in after ranking".into()));
    }
    let unmatched: Vec<String> = b
        .keys()
        .filter(|k| !a.contains_key(*k))
        .chain(a.keys().filter(|k| !b.contains_key(*k)))
        .map(|k| k.to_string())
        .collect();
    if !unmatched.is_empty() {
        return Err(Error::UnmatchedUnits(unmatched));
    }
    let n = b.len();
    Ok(b.into_iter()
        .map(|(key, rb)| {
            let ra = a[key];
            RankShift {
                unit_key: key.to_string(),
                staff_before: rb.staff,
                fss_before: rb.fss,
                rank_before: rb.rank,
                staff_after: ra.staff,
                fss_after: ra.fss,
                rank_after: ra.rank,
                delta_fss: ra.fss - rb.fss,
                delta_rank: rb.rank as i64 - ra.rank as i64,
                relative_delta_rank: relative_delta_rank(rb.rank, ra.rank, n),
            }
        })
        .collect())
}

/// Display order: undefined first, then descending relative shift,
/// descending absolute shift, unit key.
pub fn sort_for_display(shifts: &mut [RankShift]) {
    shifts.sort_by(|x, y| {
        let rx = x.relative_delta_rank.unwrap_or(f64::INFINITY);
        let ry = y.relative_delta_rank.unwrap_or(f64::INFINITY);
        ry.partial_cmp(&rx)
            .unwrap_or(Ordering::Equal)
            .then(y.delta_rank.cmp(&x.delta_rank))
            .then_with(|| x.unit_key.cmp(&y.unit_key))
    });
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionSummary {
    pub region: MacroRegion,
    pub n_universities: usize,
    pub n_improve: usize,
    pub n_worsen: usize,
    /// Mean over units whose relative shift is defined.
    pub avg_relative_delta_rank: Option<f64>,
    pub max_improvement: Option<f64>,
    pub max_decline: Option<f64>,
}

/// Per macro-region counts of improving and worsening units. Units are
/// mapped to regions through the university part of their key.
pub fn region_summary(shifts: &[RankShift], regions: &BTreeMap<String, MacroRegion>) -> Result<Vec<RegionSummary>> {
    let mut groups: BTreeMap<MacroRegion, Vec<&RankShift>> = BTreeMap::new();
    for s in shifts {
        let university = s
            .unit_key
            .split_once(crate::scoring::UNIT_KEY_SEPARATOR)
            .map_or(s.unit_key.as_str(), |(u, _)| u);
        let region = regions
            .get(university)
            .ok_or_else(|| Error::InvalidArgument(format!("no macro region for {university}")))?;
        groups.entry(*region).or_default().push(s);
    }
    Ok(groups
        .into_iter()
        .map(|(region, members)| {
            let rel: Vec<f64> = members.iter().filter_map(|s| s.relative_delta_rank).collect();
            RegionSummary {
                region,
                n_universities: members.len(),
                n_improve: members.iter().filter(|s| s.delta_rank > 0).count(),
                n_worsen: members.iter().filter(|s| s.delta_rank < 0).count(),
                avg_relative_delta_rank: (!rel.is_empty()).then(|| rel.iter().sum::<f64>() / rel.len() as f64),
                max_improvement: rel.iter().copied().reduce(f64::max),
                max_decline: rel.iter().copied().reduce(f64::min),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mark {
    Up,
    Down,
    Same,
    Absent,
}

impl Mark {
    pub fn from_delta(delta_rank: i64) -> Mark {
        match delta_rank.cmp(&0) {
            Ordering::Greater => Mark::Up,
            Ordering::Less => Mark::Down,
            Ordering::Equal => Mark::Same,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Mark::Up => "+",
            Mark::Down => "-",
            Mark::Same => "=",
            Mark::Absent => "",
        }
    }
}

impl fmt::Display for Mark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DrillDownCell {
    pub unit_key: String,
    pub university: String,
    pub segment: String,
    pub mark: Mark,
    pub shift: Option<RankShift>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DrillDownRow {
    pub university: String,
    pub assessed: usize,
    pub improving: usize,
    /// `improving / assessed`.
    pub share_improving: f64,
    /// One cell per segment in `DrillDown::segments` order.
    pub cells: Vec<DrillDownCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DrillDown {
    pub segments: Vec<String>,
    pub rows: Vec<DrillDownRow>,
}

/// Orders UDA ids numerically and SDS codes lexicographically.
fn segment_order(a: &str, b: &str) -> Ordering {
    match (a.parse::<u32>(), b.parse::<u32>()) {
        (Ok(x), Ok(y)) => x.cmp(&y),
        _ => a.cmp(b),
    }
}

/// University × field matrix of rank-change marks. Each field is ranked on
/// its own, over the universities with staff in it in both periods.
pub fn drill_down(before: &[UnitScore], after: &[UnitScore], tie: TieBreak) -> Result<DrillDown> {
    let group = |units: &[UnitScore]| -> Result<BTreeMap<String, Vec<UnitScore>>> {
        let mut m: BTreeMap<String, Vec<UnitScore>> = BTreeMap::new();
        for u in units {
            let seg = u
                .segment()
                .ok_or_else(|| Error::InvalidArgument(format!("unit {} has no UDA/SDS part", u.unit_key)))?;
            m.entry(seg.to_string()).or_default().push(u.clone());
        }
        Ok(m)
    };
    let b = group(before)?;
    let a = group(after)?;

    let mut segments: Vec<String> = b.keys().chain(a.keys()).cloned().collect::<BTreeSet<_>>().into_iter().collect();
    segments.sort_by(|x, y| segment_order(x, y));

    let mut shifts: BTreeMap<(String, String), RankShift> = BTreeMap::new();
    for seg in &segments {
        let (Some(sb), Some(sa)) = (b.get(seg), a.get(seg)) else { continue };
        let shared: BTreeSet<&str> = sb
            .iter()
            .map(|u| u.unit_key.as_str())
            .filter(|k| sa.iter().any(|x| x.unit_key == *k))
            .collect();
        if shared.is_empty() {
            continue;
        }
        let (rb, ra) = joint_rankings(sb, sa, 0, tie)?;
        for s in rank_shift(&rb, &ra)? {
            let university = s
                .unit_key
                .split_once(crate::scoring::UNIT_KEY_SEPARATOR)
                .map_or(s.unit_key.clone(), |(u, _)| u.to_string());
            shifts.insert((university, seg.clone()), s);
        }
    }

    let universities: BTreeSet<&str> = shifts.keys().map(|(u, _)| u.as_str()).collect();
    let mut rows: Vec<DrillDownRow> = universities
        .into_iter()
        .map(|u| {
            let cells: Vec<DrillDownCell> = segments
                .iter()
                .map(|seg| {
                    let shift = shifts.get(&(u.to_string(), seg.clone())).cloned();
                    DrillDownCell {
                        unit_key: crate::scoring::unit_key(u, Some(seg)),
                        university: u.to_string(),
                        segment: seg.clone(),
                        mark: shift.as_ref().map_or(Mark::Absent, |s| Mark::from_delta(s.delta_rank)),
                        shift,
                    }
                })
                .collect();
            let assessed = cells.iter().filter(|c| c.mark != Mark::Absent).count();
            let improving = cells.iter().filter(|c| c.mark == Mark::Up).count();
            DrillDownRow {
                university: u.to_string(),
                assessed,
                improving,
                share_improving: improving as f64 / assessed as f64,
                cells,
            }
        })
        .collect();
    rows.sort_by(|x, y| {
        y.assessed
            .cmp(&x.assessed)
            .then(y.share_improving.partial_cmp(&x.share_improving).unwrap_or(Ordering::Equal))
            .then_with(|| x.university.cmp(&y.university))
    });
    Ok(DrillDown { segments, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::{unit_key, Level};

    fn unit(key: &str, fss: f64, staff: usize) -> UnitScore {
        UnitScore {
            unit_key: key.into(),
            level: if key.contains("::") { Level::Uda } else { Level::Overall },
            period: "p".into(),
            staff,
            fss,
            tie_order: None,
        }
    }

    fn ranked(key: &str, rank: usize) -> RankedUnit {
        RankedUnit {
            unit_key: key.into(),
            period: "p".into(),
            fss: 0.0,
            staff: 1,
            rank,
        }
    }

    fn ranks(r: &[RankedUnit]) -> BTreeMap<String, usize> {
        r.iter().map(|u| (u.unit_key.clone(), u.rank)).collect()
    }

    #[test]
    fn strict_ordering_and_key_ties() {
        let r = rank_units(&[unit("B", 1.0, 1), unit("C", 0.5, 1), unit("A", 2.0, 1)], TieBreak::UnitKey).unwrap();
        let m = ranks(&r);
        assert_eq!((m["A"], m["B"], m["C"]), (1, 2, 3));
        let r = rank_units(&[unit("B", 1.0, 1), unit("A", 1.0, 1)], TieBreak::UnitKey).unwrap();
        assert_eq!(ranks(&r)["A"], 1);
    }

    #[test]
    fn hint_tie_break_only_orders_equal_scores() {
        let mut a = unit("A", 1.0, 1);
        let mut b = unit("B", 1.0, 1);
        let mut c = unit("C", 2.0, 1);
        a.tie_order = Some(3);
        b.tie_order = Some(2);
        c.tie_order = Some(9);
        let m = ranks(&rank_units(&[a, b, c], TieBreak::Hint).unwrap());
        assert_eq!((m["C"], m["B"], m["A"]), (1, 2, 3));
    }

    #[test]
    fn duplicate_units_are_rejected() {
        assert!(matches!(
            rank_units(&[unit("A", 1.0, 1), unit("A", 2.0, 1)], TieBreak::UnitKey),
            Err(Error::DuplicateUnit(_))
        ));
    }

    #[test]
    fn relative_shift_matches_printed_examples() {
        let n = 60;
        assert!((relative_delta_rank(20, 6, n).unwrap() - 14.0 / 19.0).abs() < 1e-15);
        assert_eq!(relative_delta_rank(56, 60, n), Some(-1.0));
        assert!((relative_delta_rank(2, 3, n).unwrap() + 1.0 / 58.0).abs() < 1e-15);
        assert_eq!(relative_delta_rank(1, 1, n), None);
        assert_eq!(relative_delta_rank(4, 4, n), Some(0.0));
        assert_eq!(relative_delta_rank(60, 1, n), Some(1.0));
    }

    #[test]
    fn shifts_need_identical_unit_sets() {
        let b = [ranked("A", 1), ranked("B", 2)];
        let a = [ranked("A", 2), ranked("C", 1)];
        match rank_shift(&b, &a) {
            Err(Error::UnmatchedUnits(u)) => assert_eq!(u, ["B", "C"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn self_comparison_is_all_zero() {
        let r = rank_units(&[unit("A", 1.0, 1), unit("B", 0.3, 1), unit("C", 0.7, 1)], TieBreak::UnitKey).unwrap();
        let s = rank_shift(&r, &r).unwrap();
        assert!(s.iter().all(|x| x.delta_rank == 0 && x.delta_fss == 0.0));
    }

    #[test]
    fn min_staff_filters_in_either_period() {
        let before = [unit("A", 1.0, 40), unit("B", 2.0, 10), unit("C", 0.5, 35)];
        let after = [unit("A", 1.0, 40), unit("B", 2.0, 40), unit("C", 0.5, 29)];
        let (rb, ra) = joint_rankings(&before, &after, 30, TieBreak::UnitKey).unwrap();
        assert_eq!(rb.len(), 1);
        assert_eq!(ra[0].unit_key, "A");
    }

    #[test]
    fn disjoint_periods_fail_with_unmatched_list() {
        let err = joint_rankings(&[unit("A", 1.0, 1)], &[unit("B", 1.0, 1)], 0, TieBreak::UnitKey).unwrap_err();
        assert!(matches!(err, Error::UnmatchedUnits(ref u) if u.len() == 2));
    }

    #[test]
    fn swapping_pair_is_antisymmetric() {
        let b = [ranked("A", 1), ranked("B", 2)];
        let a = [ranked("A", 2), ranked("B", 1)];
        let shifts = rank_shift(&b, &a).unwrap();
        let regions = BTreeMap::from([("A".to_string(), MacroRegion::North), ("B".to_string(), MacroRegion::North)]);
        let s = region_summary(&shifts, &regions).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!((s[0].n_improve, s[0].n_worsen, s[0].n_universities), (1, 1, 2));
        assert_eq!(s[0].max_improvement, Some(1.0));
        assert_eq!(s[0].max_decline, Some(-1.0));
    }

    #[test]
    fn region_summary_skips_undefined_in_average() {
        let b = [ranked("A", 1), ranked("B", 2), ranked("C", 3)];
        let a = [ranked("A", 1), ranked("B", 3), ranked("C", 2)];
        let shifts = rank_shift(&b, &a).unwrap();
        let regions: BTreeMap<String, MacroRegion> =
            ["A", "B", "C"].iter().map(|k| (k.to_string(), MacroRegion::South)).collect();
        let s = &region_summary(&shifts, &regions).unwrap()[0];
        assert_eq!(s.n_universities, 3);
        // B: -1/1, C: +1/2
        assert_eq!(s.avg_relative_delta_rank, Some((-1.0 + 0.5) / 2.0));
        let missing = BTreeMap::new();
        assert!(region_summary(&shifts, &missing).is_err());
    }

    #[test]
    fn drill_down_marks_and_shares() {
        let k = |u: &str, s: &str| unit_key(u, Some(s));
        let before = [
            unit(&k("X", "1"), 2.0, 3),
            unit(&k("Y", "1"), 1.0, 3),
            unit(&k("X", "2"), 1.0, 3),
            unit(&k("Y", "2"), 2.0, 3),
            unit(&k("Z", "3"), 1.0, 3),
        ];
        let after = [
            unit(&k("X", "1"), 1.0, 3),
            unit(&k("Y", "1"), 2.0, 3),
            unit(&k("X", "2"), 1.0, 3),
            unit(&k("Y", "2"), 2.0, 3),
            unit(&k("W", "3"), 1.0, 3),
        ];
        let d = drill_down(&before, &after, TieBreak::UnitKey).unwrap();
        assert_eq!(d.segments, ["1", "2", "3"]);
        assert_eq!(d.rows.len(), 2, "Z and W are never assessed in both periods");
        let y = d.rows.iter().find(|r| r.university == "Y").unwrap();
        let marks: Vec<_> = y.cells.iter().map(|c| c.mark).collect();
        assert_eq!(marks, [Mark::Up, Mark::Same, Mark::Absent]);
        assert_eq!((y.assessed, y.improving), (2, 1));
        assert_eq!(y.share_improving, 0.5);
    }

    #[test]
    fn segment_sort_is_numeric_for_udas() {
        let mut v = vec!["10", "2", "1"];
        v.sort_by(|a, b| segment_order(a, b));
        assert_eq!(v, ["1", "2", "10"]);
    }
}
