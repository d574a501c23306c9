use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::Poly;

/// Arbitrary-precision rational number. Always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Shorthand for `p/q`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_i(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// A commutative field with exact equality.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Image of a rational; `None` when the denominator is not invertible
    /// (only possible in positive characteristic).
    fn from_rational(r: &Rational) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&rat_i(n)).expect("integers embed in every field used here")
    }

    /// A faster route to the monic gcd of two polynomials, when the field
    /// has one.
    fn poly_gcd_hint(_a: &Poly<Self>, _b: &Poly<Self>) -> Option<Poly<Self>> {
        None
    }

    /// A faster route to a polynomial product, when the field has one.
    fn poly_mul_hint(_a: &Poly<Self>, _b: &Poly<Self>) -> Option<Poly<Self>> {
        None
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn poly_gcd_hint(a: &Poly<Self>, b: &Poly<Self>) -> Option<Poly<Self>> {
        Some(rational_poly_gcd(a, b))
    }
    fn poly_mul_hint(a: &Poly<Self>, b: &Poly<Self>) -> Option<Poly<Self>> {
        (a.coeffs().len().min(b.coeffs().len()) > 4).then(|| rational_poly_mul(a, b))
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(r.clone())
    }
}


/// Common denominator and integer numerators.
fn integer_form(p: &Poly<Rational>) -> (BigInt, Vec<BigInt>) {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints = p.coeffs().iter().map(|c| c.numer() * (&l / c.denom())).collect();
    (l, ints)
}

/// Product by integer convolution, skipping rational normalisation.
fn rational_poly_mul(a: &Poly<Rational>, b: &Poly<Rational>) -> Poly<Rational> {
    let (la, ia) = integer_form(a);
    let (lb, ib) = integer_form(b);
    let mut out = vec![BigInt::zero(); ia.len() + ib.len() - 1];
    for (i, x) in ia.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in ib.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    let l = la * lb;
    if l.is_one() {
        return Poly::new(out.into_iter().map(Rational::from_integer).collect());
    }
    Poly::new(out.into_iter().map(|c| Rational::new(c, l.clone())).collect())
}

/// Monic gcd over `Q` through the multi-modular integer gcd.
fn rational_poly_gcd(a: &Poly<Rational>, b: &Poly<Rational>) -> Poly<Rational> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    match super::modgcd::integer_poly_gcd(&integer_form(a).1, &integer_form(b).1) {
        None => Poly::one(),
        Some(g) => Poly::new(g.into_iter().map(Rational::from_integer).collect()).monic(),
    }
}
