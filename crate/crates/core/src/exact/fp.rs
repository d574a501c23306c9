use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::field::{Field, Rational};

/// Integers modulo the Mersenne prime 2^61 − 1.
///
/// Used by the degree engine: iterating a map over `F_p(t)` from the
/// reduction of a rational seed reads the same reduced degrees as over
/// `Q(t)` unless `p` divides one of a finite set of resultants.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp(u64);

impl Fp {
    pub const MODULUS: u64 = (1 << 61) - 1;

    pub fn new(v: u64) -> Self {
        Fp(v % Self::MODULUS)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce128(x: u128) -> u64 {
        let p = Self::MODULUS as u128;
        let folded = (x & p) + (x >> 61);
        let folded = (folded & p) + (folded >> 61);
        let r = folded as u64;
        if r >= Self::MODULUS {
            r - Self::MODULUS
        } else {
            r
        }
    }

    fn from_bigint(n: &BigInt) -> Fp {
        let m = BigInt::from(Self::MODULUS);
        let r = n.mod_floor(&m);
        Fp(r.to_u64().expect("residue fits in u64"))
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Field for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn one() -> Self {
        Fp(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= Self::MODULUS { s - Self::MODULUS } else { s })
    }
    fn sub(&self, rhs: &Self) -> Self {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp(self.0 + Self::MODULUS - rhs.0)
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        Fp(Self::reduce128(self.0 as u128 * rhs.0 as u128))
    }
    fn neg(&self) -> Self {
        if self.0 == 0 {
            *self
        } else {
            Fp(Self::MODULUS - self.0)
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(Self::MODULUS - 2))
        }
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        let d = Self::from_bigint(r.denom());
        d.inv().map(|di| Self::from_bigint(r.numer()).mul(&di))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn inverse_and_rational_images() {
        let a = Fp::new(123456789);
        assert_eq!(a.mul(&a.inv().unwrap()), Fp::one());
        let h = Fp::from_rational(&rat(1, 2)).unwrap();
        assert_eq!(h.add(&h), Fp::one());
        let m = Fp::from_rational(&rat(-3, 7)).unwrap();
        assert_eq!(m.mul(&Fp::from_i64(7)), Fp::from_i64(-3));
    }
}
