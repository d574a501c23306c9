use proptest::prelude::*;
use singan::catalog::lookup;
use singan::exact::{rat, Rational};
use singan::map::MapInstance;
use singan::singularity::{
    analyze_probe, classify_singularity, epsilon_orbit, find_singular_values, point_valuation, singular_probe,
    Classification, OrbitConfig, PatternEntry, Probe, Seed, SingularValue, SingularityReport,
};

fn map(key: &str) -> MapInstance {
    lookup(key).unwrap().map()
}

fn cfg(horizon: usize) -> OrbitConfig {
    OrbitConfig { horizon, ..OrbitConfig::default() }
}

fn signature(e: &PatternEntry, negate: bool) -> String {
    let s = |r: &Rational| if negate { -r } else { r.clone() };
    match e {
        PatternEntry::Regular { depends_on_tracker: true, .. } => "κ".into(),
        PatternEntry::Regular { value, .. } => format!("{}", s(&value.as_constant().unwrap())),
        PatternEntry::NearValue { base, deviation } => format!("{} + ε^{deviation}", s(base)),
        PatternEntry::Vanishing(v) => format!("ε^{v}"),
        PatternEntry::Diverging(v) => format!("ε^{v}"),
    }
}

fn signatures(c: &Classification, negate: bool) -> Vec<Vec<String>> {
    let pts = match c {
        Classification::Confined { pattern } => pattern.clone(),
        Classification::Anticonfined(a) => a.window.clone(),
        Classification::NonConfined => Vec::new(),
    };
    pts.iter().map(|p| p.iter().map(|e| signature(e, negate)).collect()).collect()
}

#[test]
fn odd_maps_have_mirrored_patterns() {
    for key in ["eq3", "cqii", "tsuda", "dp2-linear"] {
        let m = map(key);
        let vals = find_singular_values(&m, 1).unwrap();
        for v in &vals {
            let SingularValue::Finite(r) = v else { continue };
            if *r <= rat(0, 1) {
                continue;
            }
            let neg = SingularValue::Finite(-r);
            assert!(vals.contains(&neg), "{key}: {r} without {}", -r);
            let a = classify_singularity(&m, v, 1, &cfg(12)).unwrap();
            let b = classify_singularity(&m, &neg, 1, &cfg(12)).unwrap();
            assert_eq!(a.classification.name(), b.classification.name(), "{key}");
            assert_eq!(signatures(&a.classification, true), signatures(&b.classification, false), "{key}: {r}");
        }
    }
}

fn valuations(r: &SingularityReport) -> (Vec<i64>, Vec<i64>) {
    match &r.classification {
        Classification::Confined { pattern } => (pattern.iter().map(point_valuation).collect(), Vec::new()),
        Classification::Anticonfined(a) => (a.forward_valuations.clone(), a.backward_valuations.clone()),
        Classification::NonConfined => (Vec::new(), Vec::new()),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn eps_scale_leaves_valuations(p in 1i64..=7, q in 1i64..=7, neg in any::<bool>()) {
        let lambda = rat(if neg { -p } else { p }, q);
        let cases = [
            ("tsuda", Probe::new(Seed::Tracker, Seed::near(rat(1, 1)), 1)),
            ("tsuda", Probe::new(Seed::Tracker, Seed::eps(), 1)),
            ("cqii", Probe::new(Seed::Tracker, Seed::eps_pow(-1), 1)),
            ("k3", Probe::new(Seed::eps(), Seed::Tracker, 0)),
        ];
        for (key, probe) in cases {
            let m = map(key);
            let a = analyze_probe(&m, &probe, "a", None, true, &cfg(10));
            let b = analyze_probe(&m, &probe.rescaled(&lambda), "b", None, true, &cfg(10));
            prop_assert_eq!(a.classification.name(), b.classification.name());
            let (af, ab) = valuations(&a);
            let (bf, bb) = valuations(&b);
            let f = af.len().min(bf.len());
            let k = ab.len().min(bb.len());
            prop_assert_eq!(&af[..f], &bf[..f], "{} forward", key);
            prop_assert_eq!(&ab[..k], &bb[..k], "{} backward", key);
        }
    }
}

#[test]
fn tracker_dependence_and_two_sidedness() {
    for key in ["eq3", "cqii", "tsuda", "k2", "dp2-linear", "dp2-late"] {
        let m = map(key);
        for v in find_singular_values(&m, 1).unwrap() {
            let r = classify_singularity(&m, &v, 1, &cfg(14)).unwrap();
            match &r.classification {
                Classification::Confined { pattern } => {
                    let probe = singular_probe(&v, 1);
                    let orbit = epsilon_orbit(&m, &probe, &cfg(14));
                    let at = 1 + pattern.len() as i64;
                    let (_, pt) = orbit.points().into_iter().find(|(n, _)| *n == at).unwrap();
                    let recovered = pt.iter().any(|x| x.valuation() == 0 && x.leading().is_some_and(|c| !c.is_constant()));
                    assert!(recovered, "{key} {}: no c-dependent recovery at n = {at}", r.label);
                }
                Classification::Anticonfined(a) => {
                    assert!(a.window.iter().flatten().any(PatternEntry::is_recovered), "{key} {}", r.label);
                    assert!(a.forward_valuations.iter().chain(&a.backward_valuations).all(|&x| x != 0), "{key} {}", r.label);
                }
                Classification::NonConfined => {}
            }
        }
    }
}

#[test]
fn confinement_survives_a_longer_horizon() {
    for key in ["eq3", "cqii", "tsuda", "dp2-linear"] {
        let m = map(key);
        for v in find_singular_values(&m, 1).unwrap() {
            let a = classify_singularity(&m, &v, 1, &cfg(12)).unwrap();
            if let Classification::Confined { .. } = a.classification {
                let b = classify_singularity(&m, &v, 1, &cfg(24)).unwrap();
                assert_eq!(a.classification, b.classification, "{key} {}", a.label);
            }
        }
    }
}

#[test]
fn non_confinement_is_rechecked_at_double_horizon() {
    let m = map("dp2-generic");
    let r = classify_singularity(&m, &SingularValue::Finite(rat(1, 1)), 1, &cfg(10)).unwrap();
    assert!(matches!(r.classification, Classification::NonConfined));
    let limited = r.warnings.iter().any(|w| w.contains("stopped"));
    assert!(r.horizon == 20 || limited, "{r:?}");
}
