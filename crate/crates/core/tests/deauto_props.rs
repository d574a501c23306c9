use num_traits::{One, Pow, Zero};
use proptest::prelude::*;
use singan::catalog::lookup;
use singan::deauto::{constraint_char_poly, gen_params};
use singan::exact::{rat, rat_i, Rational};
use singan::growth::{dominant_root, entropy_tolerance};
use singan::map::ParamSeq;
use singan::singularity::{classify_singularity, Classification, OrbitConfig, SingularValue};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_windows_satisfy_the_constraint(
        coeffs in prop::collection::vec((-3i64..=3, 1i64..=2), 1..5),
        init in prop::collection::vec(1i64..=9, 4),
    ) {
        let mut c: Vec<Rational> = coeffs.iter().map(|&(p, q)| rat(p, q)).collect();
        let k = c.len();
        if c[k - 1].is_zero() {
            c[k - 1] = Rational::one();
        }
        let seq = ParamSeq::LinRec { coeffs: c.clone(), init: init[..k].iter().map(|&v| rat_i(v)).collect() };
        let v = gen_params(&seq, 6).unwrap();
        prop_assert_eq!(v.len(), 13);
        for j in k..v.len() {
            let rhs = (1..=k).fold(Rational::zero(), |s, i| s + &c[i - 1] * &v[j - i]);
            prop_assert_eq!(&v[j], &rhs);
        }
    }

    #[test]
    fn multiplicative_windows_satisfy_the_constraint(
        e in prop::collection::vec(-2i64..=2, 1..4),
        pows in prop::collection::vec(1u32..=3, 3),
    ) {
        let mut e = e;
        let k = e.len();
        e[k - 1] = if e[k - 1] < 0 { -1 } else { 1 };
        let init: Vec<Rational> = pows[..k].iter().map(|&p| rat_i(2i64.pow(p))).collect();
        let seq = ParamSeq::MulRec { exponents: e.clone(), init };
        let v = gen_params(&seq, 4).unwrap();
        for j in k..v.len() {
            let rhs = (1..=k).fold(Rational::one(), |s, i| s * Pow::pow(&v[j - i], e[i - 1] as i32));
            prop_assert_eq!(&v[j], &rhs);
        }
    }
}

#[test]
fn late_confinement_has_positive_entropy() {
    let m = lookup("dp2-late").unwrap().map();
    let (_, seq) = &m.params[0];
    let root = dominant_root(&constraint_char_poly(seq).unwrap(), &entropy_tolerance()).unwrap();
    assert!(root.lo > rat_i(1), "{root:?}");
    for v in [1, -1] {
        let r = classify_singularity(&m, &SingularValue::Finite(rat_i(v)), 1, &OrbitConfig::default()).unwrap();
        assert!(matches!(r.classification, Classification::Confined { .. }), "{}", r.label);
    }
}
