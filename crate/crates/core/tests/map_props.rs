use num_traits::{One, Pow, Zero};
use proptest::prelude::*;
use singan::catalog::catalog;
use singan::dsl::parse_expr;
use singan::exact::{rat, Rational};
use singan::map::{
    auto_invert, check_conjugacy, conjugate_map, transform::rules_equal, Direction, Expr, Kind, ParamSeq, Rule,
    StateTransform, Var,
};
use singan::sample;

#[test]
fn catalog_maps_are_birational() {
    for e in catalog() {
        let m = e.map();
        let env = m.env();
        let mut rng = sample::rng(7);
        let mut checked = 0;
        for k in 0..1000 {
            if checked == 100 {
                break;
            }
            let n = (k % 5) as i64 + 1;
            let s = (sample::random_rational(&mut rng), sample::random_rational(&mut rng));
            let Ok(f) = m.step(&env, &(), &s, n, Direction::Forward) else { continue };
            let Ok(back) = m.step(&env, &(), &f, n + 1, Direction::Backward) else { continue };
            assert_eq!(back, s, "{}: backward after forward at n = {n}", e.key);
            let Ok(b) = m.step(&env, &(), &s, n, Direction::Backward) else { continue };
            let Ok(fwd) = m.step(&env, &(), &b, n - 1, Direction::Forward) else { continue };
            assert_eq!(fwd, s, "{}: forward after backward at n = {n}", e.key);
            checked += 1;
        }
        assert_eq!(checked, 100, "{}", e.key);
    }
}

#[test]
fn derived_inverses_undo_the_rule() {
    for e in catalog() {
        let m = e.map();
        if m.kind != Kind::Scalar {
            continue;
        }
        let Rule::Scalar(f) = &m.forward else { unreachable!() };
        let g = auto_invert(&m).unwrap();
        let composed = f.substitute(&Expr::var(Var::X), &g);
        let id = Rule::Scalar(Expr::var(Var::Y));
        assert!(rules_equal(&Rule::Scalar(composed), &id, &m.param_names()).unwrap(), "{}", e.key);
    }
}

#[test]
fn conjugation_is_functorial() {
    let scalar = [("(1-X)/(1+X)", "(1-X)/(1+X)"), ("2*X + 3", "(X - 3)/2")];
    for e in catalog() {
        let m = e.map();
        let ts: Vec<StateTransform> = match m.kind {
            Kind::Scalar => scalar
                .iter()
                .map(|(t, ti)| StateTransform::pointwise(parse_expr(t).unwrap(), parse_expr(ti).unwrap()))
                .collect(),
            Kind::Pair => vec![StateTransform::new(
                (parse_expr("X").unwrap(), parse_expr("Y + X").unwrap()),
                (parse_expr("X").unwrap(), parse_expr("Y - X").unwrap()),
            )],
        };
        for t in ts {
            let c = conjugate_map(&m, &t).unwrap();
            let o = check_conjugacy(&m, &t, &c, 30, 1).unwrap();
            assert!(o.holds && o.checked == 30, "{}: {o:?}", e.key);
        }
    }
}

fn coeffs() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-3i64..=3, 1i64..=2).prop_map(|(p, q)| rat(p, q)), 1..4).prop_map(|mut c| {
        let last = c.len() - 1;
        if c[last].is_zero() {
            c[last] = Rational::one();
        }
        c
    })
}

fn init(k: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..=9, 1i64..=3).prop_map(|(p, q)| rat(p, q)), k..=k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linrec_holds_on_both_sides((c, i) in coeffs().prop_flat_map(|c| { let k = c.len(); (Just(c), init(k)) })) {
        let s = ParamSeq::LinRec { coeffs: c.clone(), init: i };
        let v = s.values(-8, 12).unwrap();
        let k = c.len();
        for j in k..v.len() {
            let rhs = (1..=k).fold(Rational::zero(), |acc, i| acc + &c[i - 1] * &v[j - i]);
            prop_assert_eq!(&v[j], &rhs);
        }
    }

    #[test]
    fn mulrec_holds_on_both_sides(e in prop::collection::vec(-2i64..=2, 1..4), b in 2i64..=3) {
        let mut e = e;
        let last = e.len() - 1;
        if e[last] == 0 {
            e[last] = 1;
        }
        let k = e.len();
        let s = ParamSeq::MulRec { exponents: e.clone(), init: vec![rat(b, 1); k] };
        // extending below 0 needs a_n^{±1} in the last slot
        let lo = if e[last].abs() == 1 { -3 } else { 0 };
        let hi = 5;
        let v = s.values(lo, hi).unwrap();
        prop_assert_eq!(v.len() as i64, hi - lo + 1);
        for j in k..v.len() {
            let rhs = (1..=k).fold(Rational::one(), |acc, i| acc * Pow::pow(&v[j - i], e[i - 1] as i32));
            prop_assert_eq!(&v[j], &rhs);
        }
    }
}
