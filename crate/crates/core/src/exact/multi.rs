use std::fmt;

use super::field::{Field, Rational};
use super::poly::Poly;
use super::ratfunc::RatFunc;

/// Element of the tower `Q(g_1)(g_2)...(g_k)`.
///
/// `Tower(l, r)` is a rational function in generator `g_l` whose coefficients
/// live strictly below level `l`. Values are kept canonical: a rational
/// function that does not involve its generator is demoted to its constant,
/// so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Multi {
    Const(Rational),
    Tower(usize, Box<RatFunc<Multi>>),
}

impl Multi {
    /// Generator `g_level`, `level >= 1`.
    pub fn generator(level: usize) -> Self {
        assert!(level >= 1);
        Multi::Tower(level, Box::new(RatFunc::var()))
    }

    pub fn level(&self) -> usize {
        match self {
            Multi::Const(_) => 0,
            Multi::Tower(l, _) => *l,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Multi::Const(r) => Some(r),
            Multi::Tower(..) => None,
        }
    }

    /// View as a rational function in `g_level` (constant if the value lives
    /// below that level).
    pub fn as_ratfunc_in(&self, level: usize) -> RatFunc<Multi> {
        match self {
            Multi::Tower(l, r) if *l == level => (**r).clone(),
            other => {
                debug_assert!(other.level() < level);
                RatFunc::constant(other.clone())
            }
        }
    }

    /// Canonical element from a rational function in `g_level`.
    pub fn from_ratfunc(level: usize, r: RatFunc<Multi>) -> Self {
        match r.as_constant() {
            Some(c) => c,
            None => Multi::Tower(level, Box::new(r)),
        }
    }

    /// Polynomial in `g_level` with the given coefficients.
    pub fn from_poly(level: usize, p: Poly<Multi>) -> Self {
        Self::from_ratfunc(level, RatFunc::from_poly(p))
    }

    fn binop(
        &self,
        rhs: &Self,
        on_const: impl Fn(&Rational, &Rational) -> Rational,
        on_tower: impl Fn(&RatFunc<Multi>, &RatFunc<Multi>) -> RatFunc<Multi>,
    ) -> Self {
        match (self, rhs) {
            (Multi::Const(a), Multi::Const(b)) => Multi::Const(on_const(a, b)),
            _ => {
                let l = self.level().max(rhs.level());
                let r = on_tower(&self.as_ratfunc_in(l), &rhs.as_ratfunc_in(l));
                Self::from_ratfunc(l, r)
            }
        }
    }

    /// Substitute rationals for generators `1..=values.len()` (in order).
    /// Returns `None` on a pole.
    pub fn eval_all(&self, values: &[Rational]) -> Option<Rational> {
        match self {
            Multi::Const(r) => Some(r.clone()),
            Multi::Tower(l, r) => {
                let x = values.get(*l - 1)?;
                let ev = |p: &Poly<Multi>| -> Option<Rational> {
                    let mut acc = <Rational as Field>::zero();
                    for c in p.coeffs().iter().rev() {
                        acc = acc.mul(x).add(&c.eval_all(values)?);
                    }
                    Some(acc)
                };
                let n = ev(r.num())?;
                let d = ev(r.den())?;
                n.div(&d)
            }
        }
    }

    /// Largest generator-wise degree appearing anywhere; a rough size measure.
    pub fn size(&self) -> usize {
        match self {
            Multi::Const(_) => 1,
            Multi::Tower(_, r) => {
                let s = |p: &Poly<Multi>| p.coeffs().iter().map(Multi::size).sum::<usize>();
                s(r.num()) + s(r.den())
            }
        }
    }
}

impl Field for Multi {
    fn zero() -> Self {
        Multi::Const(<Rational as Field>::zero())
    }
    fn one() -> Self {
        Multi::Const(<Rational as Field>::one())
    }
    fn is_zero(&self) -> bool {
        matches!(self, Multi::Const(r) if Field::is_zero(r))
    }
    fn add(&self, rhs: &Self) -> Self {
        self.binop(rhs, |a, b| a + b, |a, b| a.add(b))
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.binop(rhs, |a, b| a - b, |a, b| a.sub(b))
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.binop(rhs, |a, b| a * b, |a, b| a.mul(b))
    }
    fn neg(&self) -> Self {
        match self {
            Multi::Const(r) => Multi::Const(-r),
            Multi::Tower(l, r) => Multi::Tower(*l, Box::new(r.neg())),
        }
    }
    fn inv(&self) -> Option<Self> {
        match self {
            Multi::Const(r) => Field::inv(r).map(Multi::Const),
            Multi::Tower(l, r) => r.inv().map(|i| Multi::Tower(*l, Box::new(i))),
        }
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(Multi::Const(r.clone()))
    }
}

impl fmt::Debug for Multi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multi::Const(r) => write!(f, "{r}"),
            Multi::Tower(l, r) => write!(f, "[g{l}: {:?} / {:?}]", r.num().coeffs(), r.den().coeffs()),
        }
    }
}
