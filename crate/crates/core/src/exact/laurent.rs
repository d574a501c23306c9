use std::fmt;

use super::field::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LaurentError {
    /// Every coefficient in the known window cancelled; the value cannot be
    /// told apart from zero at this truncation.
    #[error("precision exhausted: all coefficients in the truncation window cancelled")]
    PrecisionExhausted,
    #[error("division by an exact zero")]
    DivisionByZero,
    #[error("truncation mismatch between operands")]
    TruncationMismatch,
}

/// Truncated Laurent series `ε^valuation · (c₀ + c₁ε + … )` with `c₀ ≠ 0`.
///
/// At most `trunc + 1` coefficients are kept. A value is *exact* when every
/// coefficient past the stored ones is known to vanish (constants, the
/// tracker symbol, seeds like `1 + ε`); otherwise the stored coefficients are
/// exactly those known, which can be fewer than `trunc + 1` after a leading
/// cancellation. The exact zero is the only value with no coefficients.
#[derive(Clone, PartialEq)]
pub struct Laurent<F> {
    valuation: i64,
    coeffs: Vec<F>,
    trunc: usize,
    exact: bool,
}

impl<F: Field> Laurent<F> {
    /// A truncated series: `coeffs` are the known coefficients from
    /// `ε^valuation` on. Leading zeros are stripped; `None` if nothing is left.
    pub fn new(valuation: i64, coeffs: Vec<F>, trunc: usize) -> Option<Self> {
        Self::build(valuation, coeffs, trunc, false)
    }

    /// A finite series known exactly (no hidden higher-order terms).
    pub fn exact(valuation: i64, coeffs: Vec<F>, trunc: usize) -> Self {
        Self::build(valuation, coeffs, trunc, true).unwrap_or_else(|| Self::zero(trunc))
    }

    fn build(valuation: i64, mut coeffs: Vec<F>, trunc: usize, exact: bool) -> Option<Self> {
        let lead = coeffs.iter().position(|c| !c.is_zero());
        let Some(lead) = lead else {
            return exact.then(|| Self::zero(trunc));
        };
        coeffs.drain(..lead);
        let mut exact = exact;
        if exact {
            while coeffs.last().is_some_and(F::is_zero) {
                coeffs.pop();
            }
        }
        if coeffs.len() > trunc + 1 {
            coeffs.truncate(trunc + 1);
            exact = false;
        }
        Some(Laurent { valuation: valuation + lead as i64, coeffs, trunc, exact })
    }

    pub fn zero(trunc: usize) -> Self {
        Laurent { valuation: 0, coeffs: Vec::new(), trunc, exact: true }
    }

    pub fn constant(c: F, trunc: usize) -> Self {
        Self::exact(0, vec![c], trunc)
    }

    /// `ε` itself.
    pub fn eps(trunc: usize) -> Self {
        Self::exact(1, vec![F::one()], trunc)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Known coefficients, leading first.
    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.first()
    }

    /// Coefficient of `ε^k`, when known.
    pub fn coeff_at(&self, k: i64) -> Option<F> {
        if self.is_zero() {
            return Some(F::zero());
        }
        if k < self.valuation {
            return Some(F::zero());
        }
        let i = (k - self.valuation) as usize;
        match self.coeffs.get(i) {
            Some(c) => Some(c.clone()),
            None if self.exact => Some(F::zero()),
            None => None,
        }
    }

    /// Absolute order up to which the value is known (exclusive);
    /// `None` for exact values.
    fn precision(&self) -> Option<i64> {
        (!self.exact).then(|| self.valuation + self.coeffs.len() as i64)
    }

    fn check(&self, rhs: &Self) -> Result<(), LaurentError> {
        if self.trunc != rhs.trunc {
            return Err(LaurentError::TruncationMismatch);
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, LaurentError> {
        self.check(rhs)?;
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        let lo = self.valuation.min(rhs.valuation);
        let prec = match (self.precision(), rhs.precision()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let end_exact = (self.valuation + self.coeffs.len() as i64).max(rhs.valuation + rhs.coeffs.len() as i64);
        let end = prec.unwrap_or(end_exact);
        let mut out = Vec::with_capacity((end - lo).max(0) as usize);
        for k in lo..end {
            let a = self.coeff_at(k).unwrap_or_else(F::zero);
            let b = rhs.coeff_at(k).unwrap_or_else(F::zero);
            out.push(a.add(&b));
        }
        match prec {
            None => Ok(Self::exact(lo, out, self.trunc)),
            Some(_) => Self::new(lo, out, self.trunc).ok_or(LaurentError::PrecisionExhausted),
        }
    }

    pub fn neg(&self) -> Self {
        Laurent {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(F::neg).collect(),
            trunc: self.trunc,
            exact: self.exact,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, LaurentError> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, LaurentError> {
        self.check(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero(self.trunc));
        }
        let exact = self.exact && rhs.exact;
        let len = if exact {
            self.coeffs.len() + rhs.coeffs.len() - 1
        } else {
            let la = if self.exact { usize::MAX } else { self.coeffs.len() };
            let lb = if rhs.exact { usize::MAX } else { rhs.coeffs.len() };
            la.min(lb).min(self.trunc + 1)
        };
        let mut out = vec![F::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        let v = self.valuation + rhs.valuation;
        Ok(if exact {
            Self::exact(v, out, self.trunc)
        } else {
            Self::new(v, out, self.trunc).expect("leading coefficients multiply to nonzero")
        })
    }

    /// Multiplicative inverse; exact monomials invert exactly.
    pub fn inv(&self) -> Result<Self, LaurentError> {
        let lead = self.leading().ok_or(LaurentError::DivisionByZero)?;
        let lead_inv = lead.inv().expect("leading coefficient nonzero");
        if self.exact && self.coeffs.len() == 1 {
            return Ok(Self::exact(-self.valuation, vec![lead_inv], self.trunc));
        }
        let len = if self.exact { self.trunc + 1 } else { self.coeffs.len().min(self.trunc + 1) };
        // b_0 = 1/a_0, b_k = -(1/a_0) Σ_{j=1..k} a_j b_{k-j}
        let mut out: Vec<F> = Vec::with_capacity(len);
        out.push(lead_inv.clone());
        for k in 1..len {
            let mut s = F::zero();
            for j in 1..=k {
                if let Some(a) = self.coeffs.get(j) {
                    if !a.is_zero() {
                        s = s.add(&a.mul(&out[k - j]));
                    }
                }
            }
            out.push(s.mul(&lead_inv).neg());
        }
        Ok(Self::new(-self.valuation, out, self.trunc).expect("nonzero leading term"))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, LaurentError> {
        self.mul(&rhs.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, LaurentError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut b = base;
        let mut acc = Self::constant(F::one(), self.trunc);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(acc)
    }

    /// Re-embed with a different truncation, keeping the known coefficients.
    pub fn with_trunc(&self, trunc: usize) -> Self {
        Self::build(self.valuation, self.coeffs.clone(), trunc, self.exact).unwrap_or_else(|| Self::zero(trunc))
    }

    /// Multiply the coefficients of `ε^k` by `λ^k` (substitute `ε → λε`).
    pub fn rescale_eps(&self, lambda: &F) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let base = if self.valuation >= 0 {
            lambda.pow(self.valuation as u64)
        } else {
            lambda.inv().expect("nonzero scale").pow(self.valuation.unsigned_abs())
        };
        let mut f = base;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.mul(&f));
            f = f.mul(lambda);
        }
        Laurent { valuation: self.valuation, coeffs: out, trunc: self.trunc, exact: self.exact }
    }
}

impl<F: Field> fmt::Debug for Laurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "ε^{}·{:?}{}", self.valuation, self.coeffs, if self.exact { "" } else { "+…" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_i, Rational};

    fn l(v: i64, cs: &[Rational], t: usize) -> Laurent<Rational> {
        Laurent::new(v, cs.to_vec(), t).unwrap()
    }

    #[test]
    fn mul_examples() {
        let a = l(-1, &[rat_i(1), rat_i(0)], 1);
        assert_eq!(a.mul(&a).unwrap().valuation(), -2);
        let b = l(1, &[rat_i(1), rat_i(1)], 1);
        let p = b.mul(&a).unwrap();
        assert_eq!((p.valuation(), p.coeffs()), (0, &[rat_i(1), rat_i(1)][..]));
        let p = l(-4, &[rat_i(2)], 0).mul(&l(-4, &[rat_i(3)], 0)).unwrap();
        assert_eq!((p.valuation(), p.coeffs()), (-8, &[rat_i(6)][..]));
    }

    #[test]
    fn add_examples() {
        let s = l(-1, &[rat_i(1), rat_i(0)], 1).add(&l(-1, &[rat_i(-1), rat_i(1)], 1)).unwrap();
        assert_eq!((s.valuation(), s.coeffs()), (0, &[rat_i(1)][..]));
        let s = l(0, &[rat_i(1), rat_i(0)], 1).add(&l(1, &[rat_i(1), rat_i(0)], 1)).unwrap();
        assert_eq!((s.valuation(), s.coeffs()), (0, &[rat_i(1), rat_i(1)][..]));
        let e = l(0, &[rat_i(1)], 0).add(&l(0, &[rat_i(-1)], 0));
        assert_eq!(e, Err(LaurentError::PrecisionExhausted));
    }

    #[test]
    fn inv_examples() {
        let i = l(1, &[rat_i(1)], 0).inv().unwrap();
        assert_eq!((i.valuation(), i.coeffs()), (-1, &[rat_i(1)][..]));
        let i = Laurent::exact(0, vec![rat_i(1), rat_i(-1)], 2).inv().unwrap();
        assert_eq!(i.coeffs(), &[rat_i(1), rat_i(1), rat_i(1)][..]);
        let i = l(-3, &[rat_i(2), rat_i(1)], 1).inv().unwrap();
        assert_eq!((i.valuation(), i.coeffs()), (3, &[rat(1, 2), rat(-1, 4)][..]));
    }

    #[test]
    fn exact_values_cancel_to_zero() {
        let a = Laurent::exact(0, vec![rat_i(1), rat_i(1)], 4);
        assert!(a.sub(&a).unwrap().is_zero());
        assert_eq!(Laurent::<Rational>::zero(4).inv(), Err(LaurentError::DivisionByZero));
    }
}
