use std::fmt;

use crate::exact::{poly_gcd, rat_i, Field, Multi, Poly, RatFunc, Rational};
use crate::growth::rational_roots;
use crate::map::{Domain, EvalError, Expr, Kind, MapInstance, Rule};

use super::SingularityError;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SingularValue {
    Finite(Rational),
    Infinity,
}

impl fmt::Display for SingularValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularValue::Finite(r) => write!(f, "{r}"),
            SingularValue::Infinity => f.write_str("∞"),
        }
    }
}

/// `f` with parameters at index `n` as an element of `Q(x)(y)`, `x` level 1.
fn specialise(m: &MapInstance, f: &Expr, n: i64, x: &Multi, y: &Multi) -> Result<Multi, SingularityError> {
    let env = m.env();
    let param = |name: &str| -> Result<Multi, EvalError> {
        let v = env.value(name, n).map_err(|e| EvalError::Param { name: name.into(), index: n, reason: e.to_string() })?;
        <Multi as Domain>::constant(&v, &())
    };
    f.eval(&(), x, y, &param).map_err(|e| SingularityError::Symbolic(e.to_string()))
}

fn to_poly_x(c: &Multi) -> RatFunc<Rational> {
    match c {
        Multi::Const(r) => RatFunc::constant(r.clone()),
        other => other
            .as_ratfunc_in(1)
            .map_coeffs(|k| k.as_rational().cloned().expect("coefficients below level 1 are rational"))
            .expect("nonzero denominator"),
    }
}

/// `f = N(x, y) / D(x, y)` with coprime polynomial coefficients in `x`,
/// indexed by the power of `y`.
fn split(f: &Multi) -> (Vec<Poly<Rational>>, Vec<Poly<Rational>>) {
    let rf = f.as_ratfunc_in(2);
    let num: Vec<RatFunc<Rational>> = rf.num().coeffs().iter().map(to_poly_x).collect();
    let den: Vec<RatFunc<Rational>> = rf.den().coeffs().iter().map(to_poly_x).collect();
    let mut l = Poly::one();
    for c in num.iter().chain(&den) {
        let g = poly_gcd(&l, c.den());
        l = l.mul(&c.den().div_exact(&g).expect("gcd divides"));
    }
    let clear = |cs: &[RatFunc<Rational>]| -> Vec<Poly<Rational>> {
        cs.iter().map(|c| c.num().mul(&l.div_exact(c.den()).expect("lcm is a multiple"))).collect()
    };
    let (mut n, mut d) = (clear(&num), clear(&den));
    let content = n.iter().chain(&d).fold(Poly::zero(), |g, c| poly_gcd(&g, c));
    if !content.is_zero() && content.degree() != Some(0) {
        for c in n.iter_mut().chain(d.iter_mut()) {
            *c = c.div_exact(&content).expect("content divides");
        }
    }
    (n, d)
}

/// Gcd over `y`-powers of `N_y D − N D_y`; zero when `f` ignores `y`.
fn wronskian_gcd(n: &[Poly<Rational>], d: &[Poly<Rational>]) -> Poly<Rational> {
    let mut w: Vec<Poly<Rational>> = vec![Poly::zero(); (n.len() + d.len()).max(1)];
    for (i, ni) in n.iter().enumerate() {
        for (j, dj) in d.iter().enumerate() {
            if i + j == 0 || i == j {
                continue;
            }
            let term = ni.mul(dj).scale(&rat_i(i as i64 - j as i64));
            w[i + j - 1] = w[i + j - 1].add(&term);
        }
    }
    w.iter().fold(Poly::zero(), |g, c| poly_gcd(&g, c))
}

fn finite_roots(g: &Poly<Rational>) -> Result<Vec<Rational>, SingularityError> {
    if g.degree().unwrap_or(0) == 0 {
        return Ok(vec![]);
    }
    let (roots, rest) = rational_roots(g).map_err(|e| SingularityError::Symbolic(e.to_string()))?;
    if rest.degree().unwrap_or(0) > 0 {
        return Err(SingularityError::IrrationalSingularValues(rest.display_with("x")));
    }
    Ok(roots)
}

/// Values `v` such that `x_n = v` makes `x_{n+1}` independent of `x_{n-1}`,
/// with parameters at index `n`. Infinity is included when it is singular
/// and can be reached from finite values.
pub fn find_singular_values(m: &MapInstance, n: i64) -> Result<Vec<SingularValue>, SingularityError> {
    let f = match (&m.kind, &m.forward) {
        (Kind::Scalar, Rule::Scalar(f)) => f,
        _ => return Err(SingularityError::PairMap),
    };
    let (x, y) = (Multi::generator(1), Multi::generator(2));
    let fm = specialise(m, f, n, &x, &y)?;
    let (num, den) = split(&fm);
    let g = wronskian_gcd(&num, &den);
    if g.is_zero() {
        return Err(SingularityError::Symbolic("forward rule does not depend on y".into()));
    }
    let mut out: Vec<SingularValue> = finite_roots(&g)?.into_iter().map(SingularValue::Finite).collect();

    // polynomial rules never produce infinity from finite values
    let enterable = den.len() > 1 || den.iter().any(|c| c.degree().unwrap_or(0) > 0);
    if enterable {
        let one = <Multi as Field>::one();
        let (xi, yi) = (Field::div(&one, &x).expect("x != 0"), Field::div(&one, &y).expect("y != 0"));
        let at_inf = specialise(m, f, n, &xi, &yi)?;
        let conj = Field::inv(&at_inf).ok_or_else(|| SingularityError::Symbolic("rule vanishes identically".into()))?;
        let (cn, cd) = split(&conj);
        let gi = wronskian_gcd(&cn, &cd);
        if !gi.is_zero() && Field::is_zero(&gi.eval(&rat_i(0))) {
            out.push(SingularValue::Infinity);
        }
    }
    Ok(out)
}
