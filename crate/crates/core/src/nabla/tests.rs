use std::f64::consts::SQRT_2;

use proptest::prelude::*;

use super::*;
use crate::timescale::Piece;

const K: usize = 20;

fn tri(a: f64, b: f64, c: f64) -> FuzzyNumber {
    FuzzyNumber::triangular(a, b, c, K).unwrap()
}

fn scaled(s: impl Fn(f64) -> f64 + Sync, u: FuzzyNumber) -> impl FuzzyFunction {
    FnFuzzy::new(u.k(), move |t| Ok(u.scalar_mul(s(t))))
}

fn example_scale(n: u32) -> TimeScale {
    TimeScale::new(vec![
        Piece::Reciprocal {
            scale: 1.0,
            count: n,
            accumulate: true,
        },
        Piece::Reciprocal {
            scale: SQRT_2,
            count: n,
            accumulate: true,
        },
        Piece::Points { points: vec![0.0] },
    ])
    .unwrap()
}

fn on_root_branch(t: f64) -> bool {
    if t <= 0.0 {
        return false;
    }
    let m = SQRT_2 / t;
    (m - m.round()).abs() < 1e-6
}

fn example_fn(k: usize) -> impl FuzzyFunction {
    FnFuzzy::new(k, move |t| {
        let b = (t * t + t - 2.0) / 2.0;
        if on_root_branch(t) {
            FuzzyNumber::triangular(t - 2.0, b, t * t, k)
        } else {
            FuzzyNumber::triangular(-2.0, b, t * t + t, k)
        }
    })
}

fn z(a: i64, b: i64) -> TimeScale {
    TimeScale::integers(a, b).unwrap()
}

#[test]
fn scalar_examples() {
    let cfg = ProbeConfig::default();
    assert_eq!(
        nabla_scalar(&|t: f64| t * t, &z(-5, 5), 3.0, &cfg).unwrap(),
        5.0
    );
    let d = nabla_scalar(
        &|t: f64| t * t,
        &TimeScale::interval(0.0, 1.0).unwrap(),
        0.5,
        &cfg,
    )
    .unwrap();
    assert!((d - 1.0).abs() < 1e-6, "{d}");
    assert_eq!(
        nabla_scalar(&|_t: f64| 4.0, &z(0, 5), 2.0, &cfg).unwrap(),
        0.0
    );
}

#[test]
fn scalar_on_quantum_grid() {
    let ts = TimeScale::new(vec![Piece::Geometric {
        base: 2.0,
        min_exp: 0,
        max_exp: 6,
    }])
    .unwrap();
    // (16 - 4) / (4 - 2)
    let d = nabla_scalar(&|t: f64| t * t, &ts, 4.0, &ProbeConfig::default()).unwrap();
    assert_eq!(d, 6.0);
}

#[test]
fn constant_is_crisp_zero() {
    let u = tri(1.0, 2.0, 4.0);
    let f = FnFuzzy::new(K, move |_| Ok(u.clone()));
    for ts in [z(0, 5), TimeScale::interval(0.0, 1.0).unwrap()] {
        let t = if ts.intervals().is_empty() { 3.0 } else { 0.5 };
        let d = nabla_gh(&f, &ts, t, &ProbeConfig::default()).unwrap();
        assert_eq!(d.case, DiffCase::Crisp);
        assert_eq!(d.value.unwrap(), FuzzyNumber::zero(K));
        for e in &d.endpoint_report {
            assert_eq!(e.dminus_lower, 0.0);
            assert_eq!(e.dplus_upper, 0.0);
        }
    }
}

#[test]
fn linear_on_integers() {
    let u = tri(1.0, 2.0, 3.0);
    let f = scaled(|t| t, u.clone());
    let d = nabla_gh(&f, &z(0, 10), 3.0, &ProbeConfig::default()).unwrap();
    assert_eq!(d.case, DiffCase::CaseI);
    assert_eq!(d.residual, 0.0);
    assert!(d.value.unwrap().hausdorff(&u).unwrap() < 1e-12);
    for e in &d.endpoint_report {
        assert!((e.dminus_lower - (1.0 + e.alpha)).abs() < 1e-12);
        assert!((e.dplus_upper - (3.0 - e.alpha)).abs() < 1e-12);
        assert!(e.all_exist());
    }
}

#[test]
fn decreasing_lengths_give_case_ii() {
    let f = scaled(|t| 3.0 - t, tri(1.0, 2.0, 3.0));
    let d = nabla_gh(&f, &z(0, 10), 1.0, &ProbeConfig::default()).unwrap();
    assert_eq!(d.case, DiffCase::CaseII);
    assert!(d.value.unwrap().hausdorff(&tri(-3.0, -2.0, -1.0)).unwrap() < 1e-12);
}

#[test]
fn dense_interval_derivatives() {
    let ts = TimeScale::interval(0.0, 2.0).unwrap();
    let cfg = ProbeConfig::default();
    let f = scaled(|t| t * t, tri(1.0, 2.0, 3.0));
    let d = nabla_gh(&f, &ts, 1.0, &cfg).unwrap();
    assert_eq!(d.case, DiffCase::CaseI);
    assert!(d.residual <= cfg.agreement_tol);
    assert!(d.value.unwrap().hausdorff(&tri(2.0, 4.0, 6.0)).unwrap() < 1e-6);

    let g = scaled(|t| 3.0 - t, tri(1.0, 2.0, 3.0));
    let d = nabla_gh(&g, &ts, 1.0, &cfg).unwrap();
    assert_eq!(d.case, DiffCase::CaseII);
}

#[test]
fn switching_cases_on_interval() {
    let ts = TimeScale::interval(-1.0, 1.0).unwrap();
    let cfg = ProbeConfig::default();
    let v = tri(-1.0, 0.0, 1.0);
    let f = scaled(|t: f64| t.abs(), v.clone());
    let d = nabla_gh(&f, &ts, 0.0, &cfg).unwrap();
    assert_eq!(d.case, DiffCase::SwitchingIII);
    assert!(d.value.unwrap().hausdorff(&v).unwrap() < 1e-9);

    let g = scaled(|t: f64| 2.0 - t.abs(), v.clone());
    let d = nabla_gh(&g, &ts, 0.0, &cfg).unwrap();
    assert_eq!(d.case, DiffCase::SwitchingIV);
}

#[test]
fn kink_is_not_differentiable() {
    let ts = TimeScale::interval(-1.0, 1.0).unwrap();
    let f = scaled(|t: f64| t.abs(), tri(1.0, 2.0, 3.0));
    assert!(matches!(
        nabla_gh(&f, &ts, 0.0, &ProbeConfig::default()),
        Err(Error::LimitDisagreement { .. })
    ));
}

#[test]
fn nonexistent_difference_at_scattered_point() {
    let f = FnFuzzy::new(K, |t| {
        if t < 0.5 {
            FuzzyNumber::triangular(0.0, 3.0, 4.0, K)
        } else {
            FuzzyNumber::triangular(0.0, 1.0, 5.0, K)
        }
    });
    assert_eq!(
        nabla_gh(&f, &z(0, 3), 1.0, &ProbeConfig::default()).unwrap_err(),
        Error::GhNonexistent { at: 1.0 }
    );
}

#[test]
fn domain_errors() {
    let f = scaled(|t| t, tri(1.0, 2.0, 3.0));
    let cfg = ProbeConfig::default();
    assert!(matches!(
        nabla_gh(&f, &z(0, 3), 0.0, &cfg),
        Err(Error::NotInDomain { .. })
    ));
    assert!(matches!(
        nabla_gh(&f, &z(0, 3), 0.5, &cfg),
        Err(Error::NotInDomain { .. })
    ));
    let bad = ProbeConfig {
        probe_count: 2,
        ..cfg
    };
    assert!(matches!(
        nabla_gh(&f, &z(0, 3), 2.0, &bad),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn two_generator_example_at_zero() {
    let ts = example_scale(10_000);
    let f = example_fn(K);
    let cfg = ProbeConfig::with_tol(2e-3);
    let d = nabla_gh(&f, &ts, 0.0, &cfg).unwrap();
    assert_eq!(d.case, DiffCase::SwitchingIII);
    let v = d.value.unwrap();
    for k in 0..=K {
        let a = k as f64 / K as f64;
        let c = v.cut(k);
        assert!((c.lo - a / 2.0).abs() < 2e-3 && (c.hi - (1.0 - a / 2.0)).abs() < 2e-3);
    }
    let labels: Vec<&str> = d.families.iter().map(|f| f.label.as_str()).collect();
    assert_eq!(labels, ["recip(1)", "recip(sqrt2)"]);
    assert_eq!(d.families[0].orientation, Orientation::Direct);
    assert_eq!(d.families[1].orientation, Orientation::Swapped);
}

#[test]
fn two_generator_example_endpoint_limits() {
    let ts = example_scale(10_000);
    let f = example_fn(K);
    let cfg = ProbeConfig::with_tol(2e-3);
    let report = endpoint_derivatives(&f, &ts, 0.0, &cfg).unwrap();
    let e = &report[0];
    assert_eq!(e.alpha, 0.0);
    let lower: Vec<&SubsequenceLimit> = e
        .subsequence_limits
        .iter()
        .filter(|s| s.endpoint == "lower")
        .collect();
    assert_eq!(lower.len(), 2);
    assert!(lower[0].value.abs() < 1e-3);
    assert!((lower[1].value - 1.0).abs() < 1e-3);
    assert_eq!(e.exists.dplus_lower, Existence::Absent);
    assert_eq!(e.exists.lower, Existence::Absent);
    assert!(!e.exists.lower.exists());
}

#[test]
fn merged_sequence_cannot_certify_absence() {
    let ts = example_scale(10_000);
    let f = example_fn(K);
    let cfg = ProbeConfig {
        subsequence_split: false,
        ..ProbeConfig::with_tol(2e-3)
    };
    let report = endpoint_derivatives(&f, &ts, 0.0, &cfg).unwrap();
    assert_eq!(report[0].exists.dplus_lower, Existence::Inconclusive);
}

#[test]
fn rho_identity_examples() {
    let cfg = ProbeConfig::default();
    let f = scaled(|t| t, tri(1.0, 2.0, 3.0));
    assert!(check_rho_identity(&f, &z(0, 10), 3.0, &cfg).unwrap() <= 1e-12);

    let q = TimeScale::new(vec![Piece::Geometric {
        base: 2.0,
        min_exp: 0,
        max_exp: 5,
    }])
    .unwrap();
    let g = scaled(|t| t * t, tri(1.0, 2.0, 3.0));
    assert!(check_rho_identity(&g, &q, 4.0, &cfg).unwrap() <= 1e-9);

    let dense = TimeScale::interval(0.0, 1.0).unwrap();
    assert_eq!(check_rho_identity(&g, &dense, 0.5, &cfg).unwrap(), 0.0);

    let h = scaled(|t| 10.0 - t, tri(1.0, 2.0, 3.0));
    assert!(check_rho_identity(&h, &z(0, 10), 3.0, &cfg).unwrap() <= 1e-12);
}

#[test]
fn level_consistency_examples() {
    let cfg = ProbeConfig::default();
    let f = scaled(|t| t * t + 1.0, tri(1.0, 2.0, 3.0));
    assert!(check_level_consistency(&f, &z(0, 10), 4.0, &cfg).unwrap() <= 1e-12);
    let u = tri(0.0, 1.0, 2.0);
    let c = FnFuzzy::new(K, move |_| Ok(u.clone()));
    assert_eq!(
        check_level_consistency(&c, &z(0, 10), 4.0, &cfg).unwrap(),
        0.0
    );
    let dense = TimeScale::interval(0.0, 2.0).unwrap();
    assert!(check_level_consistency(&f, &dense, 1.0, &cfg).unwrap() <= 1e-6);
}

#[test]
fn uniqueness_across_probe_counts() {
    let ts = TimeScale::interval(0.0, 2.0).unwrap();
    let f = scaled(|t| t * t * t, tri(1.0, 2.0, 3.0));
    let a = ProbeConfig {
        probe_count: 3,
        ..ProbeConfig::with_tol(1e-5)
    };
    let b = ProbeConfig {
        probe_count: 7,
        ..a
    };
    let da = nabla_gh(&f, &ts, 1.3, &a).unwrap().value.unwrap();
    let db = nabla_gh(&f, &ts, 1.3, &b).unwrap().value.unwrap();
    assert!(da.hausdorff(&db).unwrap() <= 2.0 * a.agreement_tol);
}

#[test]
fn crisp_value_at_left_scattered_right_dense_point() {
    // T = {0} ∪ [1, 2]; f(s) = u ⊕ crisp(s) away from 0, so both
    // H-difference orientations exist against f(ρ(1)).
    let ts = TimeScale::new(vec![
        Piece::Points { points: vec![0.0] },
        Piece::Interval { a: 1.0, b: 2.0 },
    ])
    .unwrap();
    let u = tri(-1.0, 0.0, 2.0);
    let f = FnFuzzy::new(K, move |t| u.add(&FuzzyNumber::crisp(t, K)));
    let d = nabla_gh(&f, &ts, 1.0, &ProbeConfig::default()).unwrap();
    assert_eq!(d.case, DiffCase::Crisp);
    let crisp = d
        .evidence
        .iter()
        .find(|e| e.name.starts_with("crisp value"))
        .expect("crisp-theorem evidence recorded");
    assert!(crisp.holds);
    assert!(d.evidence.iter().all(|e| e.holds), "{:?}", d.evidence);
}

#[test]
fn continuity_evidence_along_probes() {
    let ts = TimeScale::interval(0.0, 2.0).unwrap();
    let f = scaled(|t| t * t, tri(1.0, 2.0, 3.0));
    let d = nabla_gh(&f, &ts, 1.0, &ProbeConfig::default()).unwrap();
    let c = d
        .evidence
        .iter()
        .find(|e| e.name == "continuity at t")
        .unwrap();
    assert!(c.holds);
}

#[test]
fn characterization_hypothesis_reading_is_recorded() {
    let f = scaled(|t| t, tri(1.0, 2.0, 3.0));
    let e = characterization_hypothesis(&f, &z(0, 10), 3.0, &ProbeConfig::default()).unwrap();
    assert!(e.holds);
    assert!(e.detail.contains("reading"));
}

#[test]
fn derivative_report_serializes() {
    let f = scaled(|t| t, tri(1.0, 2.0, 3.0));
    let d = nabla_gh(&f, &z(0, 10), 3.0, &ProbeConfig::default()).unwrap();
    let json = serde_json::to_value(&d).unwrap();
    assert_eq!(json["case"], "CaseI");
    assert!(json["endpoint_report"][0]["dminus_lower"].is_number());
    assert!(json["endpoint_report"][0]["exists"]["lower"].is_string());
}

fn poly(c: [f64; 3]) -> impl Fn(f64) -> f64 + Sync + Clone {
    move |t| c[0] + c[1] * t + c[2] * t * t
}

proptest! {
    #[test]
    fn scattered_points_are_exact(
        p in prop::array::uniform3(-3.0..3.0f64),
        l in prop::array::uniform3(0.0..2.0f64),
        r in prop::array::uniform3(0.0..2.0f64),
        t in 1i64..20,
    ) {
        let (pp, lp, rp) = (poly(p), poly(l), poly(r));
        let f = FnFuzzy::new(K, move |s| {
            let b = pp(s);
            FuzzyNumber::triangular(b - lp(s), b, b + rp(s), K)
        });
        let ts = z(0, 20);
        let t = t as f64;
        let d = nabla_gh(&f, &ts, t, &ProbeConfig::default()).unwrap();
        prop_assert_eq!(d.residual, 0.0);
        let g = f.eval(t).unwrap().gh_diff(&f.eval(t - 1.0).unwrap()).unwrap();
        prop_assert_eq!(d.value.unwrap(), g.value.unwrap());
    }

    #[test]
    fn classified_case_matches_endpoints(
        a in 0.1..1.0f64,
        t in 1i64..9,
        flip in any::<bool>(),
    ) {
        let sgn = if flip { -1.0 } else { 1.0 };
        let f = scaled(move |s| 10.0 + sgn * a * s, tri(1.0, 2.0, 4.0));
        let d = nabla_gh(&f, &z(0, 10), t as f64, &ProbeConfig::default()).unwrap();
        let v = d.value.clone().unwrap();
        for (k, e) in d.endpoint_report.iter().enumerate() {
            let cut = v.cut(k);
            match d.case {
                DiffCase::CaseI => {
                    prop_assert!((cut.lo - e.dminus_lower).abs() < 1e-12);
                    prop_assert!((cut.hi - e.dminus_upper).abs() < 1e-12);
                }
                DiffCase::CaseII => {
                    prop_assert!((cut.lo - e.dminus_upper).abs() < 1e-12);
                    prop_assert!((cut.hi - e.dminus_lower).abs() < 1e-12);
                }
                other => prop_assert!(false, "unexpected case {other}"),
            }
        }
        prop_assert_eq!(d.case, if flip { DiffCase::CaseII } else { DiffCase::CaseI });
    }
}
