use crate::exact::{Multi, Rational};
use crate::sample;

use super::expr::{EvalError, Expr, Var};
use super::model::{from_multi, Direction, Kind, MapError, MapInstance, Rule, SYMBOLIC_DEGREE_LIMIT};

/// Birational change of state variables. Expressions use `X`, `Y` for the
/// state being transformed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateTransform {
    pub forward: (Expr, Expr),
    pub inverse: (Expr, Expr),
    /// Set when both components apply the same one-variable substitution,
    /// which maps scalar maps to scalar maps.
    pointwise: Option<(Expr, Expr)>,
}

impl StateTransform {
    pub fn new(forward: (Expr, Expr), inverse: (Expr, Expr)) -> Self {
        StateTransform { forward, inverse, pointwise: None }
    }

    /// `x ↦ t(x)` on every component; `t` and `t_inv` are written in `X`.
    pub fn pointwise(t: Expr, t_inv: Expr) -> Self {
        let on = |e: &Expr, v: Var| e.substitute(&Expr::var(v), &Expr::var(v));
        StateTransform {
            forward: (on(&t, Var::X), on(&t, Var::Y)),
            inverse: (on(&t_inv, Var::X), on(&t_inv, Var::Y)),
            pointwise: Some((t, t_inv)),
        }
    }

    pub fn identity() -> Self {
        Self::pointwise(Expr::var(Var::X), Expr::var(Var::X))
    }

    pub fn apply(&self, s: &(Rational, Rational)) -> Result<(Rational, Rational), EvalError> {
        let np = |_: &str| -> Result<Rational, EvalError> { Err(EvalError::UnknownParam(String::new())) };
        Ok((self.forward.0.eval(&(), &s.0, &s.1, &np)?, self.forward.1.eval(&(), &s.0, &s.1, &np)?))
    }
}

fn eval_multi(e: &Expr, names: &[String], x: &Multi, y: &Multi) -> Result<Multi, MapError> {
    let bound = e.degree_bound();
    if bound > SYMBOLIC_DEGREE_LIMIT {
        return Err(MapError::TooLarge(bound));
    }
    let lookup = |name: &str| -> Result<Multi, EvalError> {
        names
            .iter()
            .position(|q| q == name)
            .map(|i| Multi::generator(i + 1))
            .ok_or_else(|| EvalError::UnknownParam(name.to_string()))
    };
    e.eval(&(), x, y, &lookup).map_err(|err| match err {
        EvalError::UnknownParam(n) => MapError::UndeclaredParam(n),
        other => MapError::Degenerate(other.to_string()),
    })
}

/// `T ∘ Φ ∘ T⁻¹`, with rules in reduced rational form. Scalar maps stay
/// scalar under pointwise transforms; otherwise the result is a pair map on
/// `(x_{n-1}, x_n)` coordinates.
pub fn conjugate_map(m: &MapInstance, t: &StateTransform) -> Result<MapInstance, MapError> {
    let names = m.param_names();
    let p = names.len();
    let u = Multi::generator(p + 1);
    let v = Multi::generator(p + 2);
    let name_x = || Expr::var(Var::X);
    let name_y = || Expr::var(Var::Y);
    let (kind, forward, backward) = match (&t.pointwise, m.kind) {
        (Some((tf, ti)), Kind::Scalar) => {
            let conj = |rule: &Rule| -> Result<Rule, MapError> {
                let Rule::Scalar(f) = rule else { unreachable!() };
                let xo = eval_multi(ti, &names, &u, &u)?;
                let yo = eval_multi(ti, &names, &v, &v)?;
                let r = eval_multi(f, &names, &xo, &yo)?;
                let out = eval_multi(tf, &names, &r, &r)?;
                Ok(Rule::Scalar(from_multi(&out, &names, name_x(), name_y())))
            };
            (Kind::Scalar, conj(&m.forward)?, conj(&m.backward)?)
        }
        _ => {
            let pm = m.pair_view();
            let conj = |rule: &Rule| -> Result<Rule, MapError> {
                let Rule::Pair(f, g) = rule else { unreachable!() };
                let xo = eval_multi(&t.inverse.0, &names, &u, &v)?;
                let yo = eval_multi(&t.inverse.1, &names, &u, &v)?;
                let x1 = eval_multi(f, &names, &xo, &yo)?;
                let y1 = eval_multi(g, &names, &xo, &yo)?;
                let a = eval_multi(&t.forward.0, &names, &x1, &y1)?;
                let b = eval_multi(&t.forward.1, &names, &x1, &y1)?;
                Ok(Rule::Pair(
                    from_multi(&a, &names, name_x(), name_y()),
                    from_multi(&b, &names, name_x(), name_y()),
                ))
            };
            (Kind::Pair, conj(&pm.forward)?, conj(&pm.backward)?)
        }
    };
    Ok(MapInstance {
        name: format!("{}~", m.name),
        kind,
        forward,
        backward,
        backward_derived: m.backward_derived,
        params: m.params.clone(),
    })
}

/// Whether two rules denote the same rational function of the state.
pub fn rules_equal(a: &Rule, b: &Rule, names: &[String]) -> Result<bool, MapError> {
    let p = names.len();
    let (x, y) = (Multi::generator(p + 1), Multi::generator(p + 2));
    let (ea, eb) = (a.exprs(), b.exprs());
    if ea.len() != eb.len() {
        return Ok(false);
    }
    for (l, r) in ea.iter().zip(eb) {
        if eval_multi(l, names, &x, &y)? != eval_multi(r, names, &x, &y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyOutcome {
    pub holds: bool,
    /// Non-degenerate states compared.
    pub checked: usize,
    /// First state (source coordinates) where the two sides differ.
    pub counterexample: Option<(Rational, Rational)>,
}

/// Check `T(Φ_source(s)) = Φ_target(T(s))` on random rational states.
pub fn check_conjugacy(
    source: &MapInstance,
    t: &StateTransform,
    target: &MapInstance,
    trials: usize,
    seed: u64,
) -> Result<ConjugacyOutcome, MapError> {
    let (src, tgt) = (source.pair_view(), target.pair_view());
    let (src_env, tgt_env) = (src.env(), tgt.env());
    let mut rng = sample::rng(seed);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < trials.max(1) && attempts < 20 * trials.max(1) {
        attempts += 1;
        let s = (sample::random_rational(&mut rng), sample::random_rational(&mut rng));
        let n = 0;
        let lhs = src.step(&src_env, &(), &s, n, Direction::Forward).and_then(|s1| t.apply(&s1));
        let rhs = t.apply(&s).and_then(|ts| tgt.step(&tgt_env, &(), &ts, n, Direction::Forward));
        let (Ok(lhs), Ok(rhs)) = (lhs, rhs) else { continue };
        checked += 1;
        if lhs != rhs {
            return Ok(ConjugacyOutcome { holds: false, checked, counterexample: Some(s) });
        }
    }
    if checked == 0 {
        return Err(MapError::Degenerate("every sampled state hit a pole".into()));
    }
    Ok(ConjugacyOutcome { holds: true, checked, counterexample: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_i;
    use crate::map::param::ParamSeq;

    fn x() -> Expr {
        Expr::var(Var::X)
    }
    fn y() -> Expr {
        Expr::var(Var::Y)
    }

    fn scalar(name: &str, f: Expr, params: Vec<(String, ParamSeq)>) -> MapInstance {
        MapInstance::new(name, Kind::Scalar, Rule::Scalar(f), None, params).unwrap()
    }

    #[test]
    fn identity_transform_keeps_rules() {
        let m = scalar("k2", Expr::div(Expr::power(x(), 2), y()), vec![]);
        let c = conjugate_map(&m, &StateTransform::identity()).unwrap();
        assert!(rules_equal(&c.forward, &m.forward, &[]).unwrap());
        let out = check_conjugacy(&m, &StateTransform::identity(), &m, 20, 1).unwrap();
        assert!(out.holds);
    }

    #[test]
    fn mismatch_has_counterexample() {
        let h = scalar("h", Expr::sub(Expr::add(Expr::int(1), Expr::power(x(), 2)), y()), vec![]);
        let l = scalar("l", Expr::sub(Expr::add(Expr::int(1), x()), y()), vec![]);
        let out = check_conjugacy(&h, &StateTransform::identity(), &l, 10, 0).unwrap();
        assert!(!out.holds);
        assert!(out.counterexample.is_some());
    }

    #[test]
    fn functoriality_with_params() {
        let a = vec![("a".to_string(), ParamSeq::Constant(rat_i(3)))];
        let f = Expr::sub(
            Expr::div(Expr::mul(Expr::param("a"), Expr::sub(Expr::power(x(), 2), Expr::int(1))), Expr::add(x(), y())),
            x(),
        );
        let m = scalar("eq3", f, a);
        let mt = StateTransform::pointwise(
            Expr::div(Expr::sub(Expr::int(1), x()), Expr::add(Expr::int(1), x())),
            Expr::div(Expr::sub(Expr::int(1), x()), Expr::add(Expr::int(1), x())),
        );
        let c = conjugate_map(&m, &mt).unwrap();
        assert!(check_conjugacy(&m, &mt, &c, 25, 3).unwrap().holds);
    }
}
