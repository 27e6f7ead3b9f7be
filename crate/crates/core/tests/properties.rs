mod oracle;

use proptest::prelude::*;

use fssrank::comparison::{rank_shift, rank_units, relative_delta_rank, TieBreak};
use fssrank::config::period_from_parts;
use fssrank::scoring::{byline_weights, fractional_contribution, score_period};
use fssrank::stats::{dispersion, fisher_variance_test, incomplete_beta};
use fssrank::synthetic::{generate, SyntheticSpec};
use fssrank::{CountingScheme, Level, ObservationPeriod, RunConfig, ScoringOptions, Theta, UnitScore};

fn scheme() -> impl Strategy<Value = CountingScheme> {
    prop_oneof![Just(CountingScheme::Alphabetical), Just(CountingScheme::Positional)]
}

fn units(scores: &[f64]) -> Vec<UnitScore> {
    scores
        .iter()
        .enumerate()
        .map(|(i, &fss)| UnitScore {
            unit_key: format!("U{i:03}"),
            level: Level::Overall,
            period: "p".into(),
            staff: 30,
            fss,
            tie_order: None,
        })
        .collect()
}

proptest! {
    #[test]
    fn byline_shares_sum_to_one(n in 1usize..=50, scheme in scheme(), intramural: bool) {
        let w = byline_weights(n, scheme, intramural);
        prop_assert_eq!(w.len(), n);
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(w.iter().all(|&x| x > 0.0));
        for (pos, want) in oracle::byline_shares(n, scheme, intramural).iter().enumerate() {
            let got = fractional_contribution(pos + 1, n, scheme, intramural).unwrap();
            prop_assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn positional_shares_are_symmetric(n in 1usize..=50, intramural: bool) {
        let w = byline_weights(n, CountingScheme::Positional, intramural);
        for i in 0..n {
            prop_assert!((w[i] - w[n - 1 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn out_of_range_positions_are_rejected(n in 1usize..=20, extra in 1usize..5) {
        prop_assert!(fractional_contribution(0, n, CountingScheme::Positional, false).is_err());
        prop_assert!(fractional_contribution(n + extra, n, CountingScheme::Alphabetical, true).is_err());
    }

    #[test]
    fn scaled_sector_means_are_one(seed in 0u64..10_000, theta in 0.0f64..=1.0) {
        let corpus = generate(&SyntheticSpec { seed, professors: 60, sectors: 5, ..SyntheticSpec::default() });
        let period = ObservationPeriod::with_year_end_census(2007, 2011).unwrap();
        let scores = score_period(
            &corpus.period_dataset(period).unwrap(),
            ScoringOptions { theta: Theta::new(theta).unwrap(), ..ScoringOptions::default() },
        ).unwrap();
        for sds in scores.scaling.factors.keys() {
            let productive: Vec<f64> = scores.professors.iter()
                .filter(|p| &p.sds == sds && p.fss_p > 0.0)
                .map(|p| p.scaled_fss.unwrap())
                .collect();
            prop_assert!((oracle::mean(&productive) - 1.0).abs() < 1e-9);
        }
        for u in scores.units_at(Level::Overall) {
            prop_assert!(u.fss >= 0.0 && u.fss.is_finite());
        }
    }

    #[test]
    fn ranks_survive_increasing_transforms(
        scores in prop::collection::vec(0.0f64..5.0, 2..80),
        scale in 0.1f64..10.0,
        shift in -3.0f64..3.0,
    ) {
        let base = rank_units(&units(&scores), TieBreak::UnitKey).unwrap();
        let moved: Vec<f64> = scores.iter().map(|x| (scale * x + shift).exp()).collect();
        let ranked = rank_units(&units(&moved), TieBreak::UnitKey).unwrap();
        for (a, b) in base.iter().zip(&ranked) {
            prop_assert_eq!(&a.unit_key, &b.unit_key);
            prop_assert_eq!(a.rank, b.rank);
        }
    }

    #[test]
    fn rank_shifts_sum_to_zero_and_stay_bounded(
        pairs in prop::collection::vec((0.0f64..3.0, 0.0f64..3.0), 1..80),
    ) {
        let before: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let after: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let rb = rank_units(&units(&before), TieBreak::UnitKey).unwrap();
        let ra = rank_units(&units(&after), TieBreak::UnitKey).unwrap();
        let shifts = rank_shift(&rb, &ra).unwrap();
        prop_assert_eq!(shifts.iter().map(|s| s.delta_rank).sum::<i64>(), 0);
        let n = shifts.len();
        for s in &shifts {
            prop_assert_eq!(s.relative_delta_rank, oracle::relative_shift(s.rank_before, s.rank_after, n));
            if let Some(r) = s.relative_delta_rank {
                prop_assert!((-1.0..=1.0).contains(&r));
            }
        }
    }

    #[test]
    fn relative_shift_reaches_the_extremes(n in 2usize..200, from in 1usize..200) {
        let from = from.min(n);
        if from > 1 {
            prop_assert_eq!(relative_delta_rank(from, 1, n), Some(1.0));
        }
        if from < n {
            prop_assert_eq!(relative_delta_rank(from, n, n), Some(-1.0));
        }
    }

    #[test]
    fn config_round_trips(
        start in 1990i32..2010,
        len in 1i32..8,
        gap in 0i32..5,
        lag in 0i64..2000,
        theta in 0.0f64..=1.0,
        min_staff in 0usize..500,
        jobs in 0usize..64,
        strict: bool,
        external: bool,
        overrides in prop::collection::btree_map("[A-Z]{2,4}/[0-9]{2}", scheme(), 0..4),
    ) {
        let end = start + len - 1;
        let after_start = end + 1 + gap;
        let census = chrono::NaiveDate::from_ymd_opt(end, 12, 31).unwrap() + chrono::Duration::days(lag);
        let mut config = RunConfig::new(
            "some dir/corpus",
            period_from_parts(&format!("{start}-{end}"), Some(&census.to_string())).unwrap(),
            period_from_parts(&format!("{after_start}-{}", after_start + len - 1), None).unwrap(),
        ).unwrap();
        config.theta = Theta::new(theta).unwrap();
        config.min_staff = min_staff;
        config.jobs = jobs;
        config.strict = strict;
        config.allow_external_baselines = external;
        config.scheme_overrides = overrides;
        prop_assert_eq!(RunConfig::parse(&config.to_text()).unwrap(), config);
    }

    #[test]
    fn variance_test_is_symmetric(
        a in prop::collection::vec(-10.0f64..10.0, 3..40),
        b in prop::collection::vec(-10.0f64..10.0, 3..40),
    ) {
        prop_assume!(oracle::sample_variance(&a) > 1e-6 && oracle::sample_variance(&b) > 1e-6);
        let x = fisher_variance_test(&a, &b).unwrap();
        let y = fisher_variance_test(&b, &a).unwrap();
        prop_assert_eq!(x.statistic, y.statistic);
        prop_assert_eq!(x.df, y.df);
        prop_assert_eq!(x.p_value, y.p_value);
        prop_assert!(x.statistic >= 1.0);
        prop_assert!(x.p_value > 0.0 && x.p_value < 1.0);
        if x.df.0 == x.df.1 {
            prop_assert!(x.p_value <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn incomplete_beta_reflects_and_increases(a in 0.2f64..40.0, b in 0.2f64..40.0, x in 0.0f64..=1.0, dx in 0.0f64..0.2) {
        let ix = incomplete_beta(a, b, x);
        prop_assert!((ix - (1.0 - incomplete_beta(b, a, 1.0 - x))).abs() < 1e-10);
        prop_assert!(incomplete_beta(a, b, (x + dx).min(1.0)) >= ix - 1e-12);
        prop_assert!((0.0..=1.0).contains(&ix));
    }

    #[test]
    fn dispersion_invariants(v in prop::collection::vec(-100.0f64..100.0, 2..60)) {
        let d = dispersion(&v).unwrap();
        prop_assert!((d.range - (d.max - d.min)).abs() < 1e-12);
        prop_assert!(d.iqr >= 0.0);
        prop_assert!((d.iqr - (d.q3 - d.q1)).abs() < 1e-12);
        prop_assert!(d.min <= d.q1 && d.q1 <= d.median && d.median <= d.q3 && d.q3 <= d.max);
    }
}
