use std::fmt;

use super::field::{Field, Rational};
use super::poly::{poly_gcd, Poly};

/// Reduced univariate rational function `num/den` with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

/// Reduce `num/den` to lowest terms with a monic denominator.
/// Returns `None` when `den` is zero.
pub fn ratfunc_reduce<F: Field>(num: Poly<F>, den: Poly<F>) -> Option<RatFunc<F>> {
    if den.is_zero() {
        return None;
    }
    if num.is_zero() {
        return Some(RatFunc { num, den: Poly::one() });
    }
    let (num, den) = if den.is_constant() {
        (num, den)
    } else {
        let g = poly_gcd(&num, &den);
        if g.is_constant() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        }
    };
    let lc_inv = den.lc().expect("nonzero").inv().expect("nonzero");
    Some(RatFunc { num: num.scale(&lc_inv), den: den.scale(&lc_inv) })
}

impl<F: Field> RatFunc<F> {
    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    /// The generator as a rational function.
    pub fn var() -> Self {
        Self::from_poly(Poly::var())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn into_parts(self) -> (Poly<F>, Poly<F>) {
        (self.num, self.den)
    }

    /// `max(deg num, deg den)`; zero has degree 0.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    /// Constant in the generator (both parts of degree ≤ 0).
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The constant value, when [`Self::is_constant`].
    pub fn as_constant(&self) -> Option<F> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    /// Evaluate at a point; `None` at a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        self.num.eval(x).div(&self.den.eval(x))
    }

    fn mul_parts(a: &Poly<F>, b: &Poly<F>, c: &Poly<F>, d: &Poly<F>) -> Self {
        // (a/b)(c/d) with a/b and c/d already reduced: cancel crosswise.
        let g1 = if a.is_constant() || d.is_constant() { Poly::one() } else { poly_gcd(a, d) };
        let g2 = if c.is_constant() || b.is_constant() { Poly::one() } else { poly_gcd(c, b) };
        let (a, d) = if g1.is_constant() { (a.clone(), d.clone()) } else { (a.div_rem(&g1).0, d.div_rem(&g1).0) };
        let (c, b) = if g2.is_constant() { (c.clone(), b.clone()) } else { (c.div_rem(&g2).0, b.div_rem(&g2).0) };
        let num = a.mul(&c);
        let den = b.mul(&d);
        let lc_inv = den.lc().expect("nonzero").inv().expect("nonzero");
        RatFunc { num: num.scale(&lc_inv), den: den.scale(&lc_inv) }
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Option<RatFunc<G>> {
        ratfunc_reduce(self.num.map_coeffs(&f), self.den.map_coeffs(&f))
    }

    pub fn display_with(&self, var: &str) -> String
    where
        F: fmt::Display,
    {
        let n = self.num.display_with(var);
        if self.den.is_constant() {
            return n;
        }
        let d = self.den.display_with(var);
        let wrap = |s: String, poly: &Poly<F>| {
            let nontrivial = poly.coeffs().iter().filter(|c| !c.is_zero()).count() > 1;
            if nontrivial { format!("({s})") } else { s }
        };
        format!("{}/{}", wrap(n, &self.num), wrap(d, &self.den))
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return ratfunc_reduce(self.num.add(&rhs.num), self.den.clone()).expect("nonzero den");
        }
        if self.den.is_constant() && rhs.den.is_constant() {
            return Self::from_poly(self.num.add(&rhs.num));
        }
        let g = poly_gcd(&self.den, &rhs.den);
        let (bd, dd) = (self.den.div_rem(&g).0, rhs.den.div_rem(&g).0);
        let num = self.num.mul(&dd).add(&rhs.num.mul(&bd));
        let den = self.den.mul(&dd);
        ratfunc_reduce(num, den).expect("nonzero den")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::mul_parts(&self.num, &self.den, &rhs.num, &rhs.den)
    }
    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let lc_inv = self.num.lc().expect("nonzero").inv().expect("nonzero");
        Some(RatFunc { num: self.den.scale(&lc_inv), den: self.num.scale(&lc_inv) })
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        F::from_rational(r).map(Self::constant)
    }
}

impl<F: Field + fmt::Display> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}

impl<F: Field> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(cs: &[i64]) -> Poly<Rational> {
        Poly::from_ints(cs)
    }

    #[test]
    fn reduce_examples() {
        let r = ratfunc_reduce(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!((r.num().clone(), r.den().clone()), (p(&[1, 1]), p(&[1])));
        let r = ratfunc_reduce(p(&[0, 1]), p(&[1])).unwrap();
        assert_eq!((r.num().clone(), r.den().clone()), (p(&[0, 1]), p(&[1])));
        let r = ratfunc_reduce(p(&[0, 2]), p(&[0, 0, 4])).unwrap();
        assert_eq!(r.num(), &Poly::constant(rat(1, 2)));
        assert_eq!(r.den(), &p(&[0, 1]));
        assert!(ratfunc_reduce(p(&[1]), Poly::zero()).is_none());
    }

    #[test]
    fn arithmetic_roundtrip() {
        let a = ratfunc_reduce(p(&[1, 2]), p(&[3, 0, 1])).unwrap();
        let b = ratfunc_reduce(p(&[-1, 1]), p(&[1, 1])).unwrap();
        let s = a.add(&b);
        assert_eq!(s.sub(&b), a);
        let m = a.mul(&b);
        assert_eq!(m.div(&b).unwrap(), a);
        assert_eq!(a.mul(&a.inv().unwrap()), RatFunc::one());
    }
}
