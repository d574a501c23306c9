use num_traits::{Signed, Zero};
use proptest::prelude::*;
use singan::catalog::{catalog, lookup};
use singan::exact::{rat_i, Poly, Rational};
use singan::growth::{
    degree_oracle, degree_sequence, entropy_estimate, entropy_tolerance, fit_recurrence, isolate_real_roots,
    seed_value, DegreeConfig, EntropyConfig,
};
use singan::map::Kind;

#[test]
fn modular_degrees_match_the_unreduced_oracle() {
    for e in catalog() {
        let m = e.map();
        if m.kind != Kind::Scalar {
            continue;
        }
        let d = degree_sequence(&m, 8, &[0], &DegreeConfig::default()).unwrap();
        let o = degree_oracle(&m, 8, &seed_value(0)).unwrap();
        assert!(o.len() >= 4, "{}: oracle reached n = {}", e.key, o.len() - 1);
        assert_eq!(d.degrees[..o.len()], o[..], "{}", e.key);
    }
}

#[test]
fn seed_disagreement_is_reported() {
    for e in catalog() {
        let m = e.map();
        let all = degree_sequence(&m, 10, &[0, 1, 2], &DegreeConfig::default()).unwrap();
        let len = all.degrees.len();
        let split = [0, 1, 2].iter().any(|&s| {
            let one = degree_sequence(&m, 10, &[s], &DegreeConfig::default()).unwrap();
            one.degrees[..len.min(one.degrees.len())] != all.degrees[..len.min(one.degrees.len())]
        });
        if split {
            assert!(all.warnings.iter().any(|w| w.contains("differ")), "{}: {:?}", e.key, all.warnings);
        }
    }
}

#[test]
fn homographic_conjugates_share_the_dominant_root() {
    let cfg = EntropyConfig::default();
    for (a, b) in [("tanh2", "k2"), ("tanh3", "k3")] {
        let ea = entropy_estimate(&lookup(a).unwrap().map(), &[0, 1, 2], &cfg).unwrap();
        let eb = entropy_estimate(&lookup(b).unwrap().map(), &[0, 1, 2], &cfg).unwrap();
        let (ra, rb) = (ea.dominant_root.unwrap(), eb.dominant_root.unwrap());
        assert!(ra.lo <= rb.hi && rb.lo <= ra.hi, "{a}: {ra:?} vs {b}: {rb:?}");
    }
}

#[test]
fn fitted_catalog_recurrences_hold_on_every_term() {
    for key in ["tsuda", "k3", "cqii", "dp2-late", "henon"] {
        let e = entropy_estimate(&lookup(key).unwrap().map(), &[0, 1, 2], &EntropyConfig::default()).unwrap();
        let seq: Vec<Rational> = e.degrees.degrees.iter().map(|&d| rat_i(d as i64)).collect();
        assert!(e.recurrence.unwrap().holds_on(&seq), "{key}");
    }
}

fn eval(p: &Poly<Rational>, x: &Rational) -> Rational {
    p.coeffs().iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn recurrences_predict_their_holdout(
        coeffs in prop::collection::vec(-3i64..=3, 1..4),
        init in prop::collection::vec(-5i64..=5, 4),
        pre in prop::collection::vec(0i64..=9, 0..3),
    ) {
        let k = coeffs.len();
        let mut seq: Vec<i64> = pre.clone();
        seq.extend(&init[..k]);
        let start = seq.len();
        while seq.len() < start + 3 * k + 6 {
            let j = seq.len();
            seq.push((1..=k).map(|i| coeffs[i - 1] * seq[j - i]).sum());
        }
        let v: Vec<Rational> = seq.iter().map(|&d| rat_i(d)).collect();
        let rec = fit_recurrence(&v, 2).unwrap();
        prop_assert!(rec.order <= k);
        prop_assert!(rec.holds_on(&v), "{:?} on {:?}", rec, seq);
        // the two held-out terms are predicted exactly
        let n = v.len();
        for m in n - 2..n {
            prop_assert_eq!(rec.predict(&v[m - rec.order..m]), v[m].clone());
        }
    }

    #[test]
    fn isolated_roots_are_certified(cs in prop::collection::vec(-6i64..=6, 2..7)) {
        let p = Poly::new(cs.iter().map(|&c| rat_i(c)).collect());
        prop_assume!(p.degree().is_some_and(|d| d >= 1));
        let tol = entropy_tolerance();
        for r in isolate_real_roots(&p, &tol).unwrap() {
            prop_assert!(eval(&p, &r.lo) * eval(&p, &r.hi) <= Rational::zero() || r.is_exact());
            prop_assert!(r.width().abs() <= tol);
        }
    }
}
