use std::cell::RefCell;

use num_traits::{One, Zero};

use crate::exact::Rational;

/// A parameter as a function of the lattice index `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamSeq {
    Constant(Rational),
    /// `a_{n+k} = Σ_{i=1..k} coeffs[i-1] · a_{n+k-i}`, `init = a_0..a_{k-1}`.
    LinRec { coeffs: Vec<Rational>, init: Vec<Rational> },
    /// `a_{n+k} = Π_{i=1..k} a_{n+k-i}^{exponents[i-1]}`, `init = a_0..a_{k-1}`.
    MulRec { exponents: Vec<i64>, init: Vec<Rational> },
    /// `values[j]` is `a_{from+j}`; undefined elsewhere.
    Explicit { from: i64, values: Vec<Rational> },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamError {
    #[error("invalid parameter sequence: {0}")]
    Invalid(String),
    #[error("cannot extend below index {0}: lowest-order coefficient is not invertible")]
    BackwardImpossible(i64),
    #[error("multiplicative recurrence reached zero at index {0}")]
    ZeroValue(i64),
    #[error("index {0} outside the explicit range")]
    OutOfRange(i64),
}

impl ParamSeq {
    pub fn order(&self) -> usize {
        match self {
            ParamSeq::Constant(_) | ParamSeq::Explicit { .. } => 0,
            ParamSeq::LinRec { coeffs, .. } => coeffs.len(),
            ParamSeq::MulRec { exponents, .. } => exponents.len(),
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        match self {
            ParamSeq::Constant(_) => Ok(()),
            ParamSeq::LinRec { coeffs, init } => {
                if coeffs.is_empty() || coeffs.len() != init.len() {
                    return Err(ParamError::Invalid(format!(
                        "linrec needs {} initial values, got {}",
                        coeffs.len().max(1),
                        init.len()
                    )));
                }
                Ok(())
            }
            ParamSeq::MulRec { exponents, init } => {
                if exponents.is_empty() || exponents.len() != init.len() {
                    return Err(ParamError::Invalid(format!(
                        "mulrec needs {} initial values, got {}",
                        exponents.len().max(1),
                        init.len()
                    )));
                }
                if let Some(i) = init.iter().position(Zero::is_zero) {
                    return Err(ParamError::ZeroValue(i as i64));
                }
                Ok(())
            }
            ParamSeq::Explicit { values, .. } => {
                if values.is_empty() {
                    return Err(ParamError::Invalid("empty list".into()));
                }
                Ok(())
            }
        }
    }

    /// Values `a_lo..=a_hi`.
    pub fn values(&self, lo: i64, hi: i64) -> Result<Vec<Rational>, ParamError> {
        self.validate()?;
        if hi < lo {
            return Ok(Vec::new());
        }
        match self {
            ParamSeq::Constant(c) => Ok(vec![c.clone(); (hi - lo + 1) as usize]),
            ParamSeq::Explicit { from, values } => (lo..=hi)
                .map(|n| {
                    let j = n - from;
                    if j < 0 {
                        return Err(ParamError::OutOfRange(n));
                    }
                    values.get(j as usize).cloned().ok_or(ParamError::OutOfRange(n))
                })
                .collect(),
            ParamSeq::LinRec { .. } | ParamSeq::MulRec { .. } => {
                let k = self.order() as i64;
                let start = lo.min(0);
                let end = hi.max(k - 1);
                let mut window = self.recurrence_window(start, end)?;
                let skip = (lo - start) as usize;
                window.drain(..skip);
                window.truncate((hi - lo + 1) as usize);
                Ok(window)
            }
        }
    }

    pub fn value(&self, n: i64) -> Result<Rational, ParamError> {
        Ok(self.values(n, n)?.remove(0))
    }

    /// `a_start..=a_end` with `start <= 0` and `end >= k-1`.
    fn recurrence_window(&self, start: i64, end: i64) -> Result<Vec<Rational>, ParamError> {
        let init = match self {
            ParamSeq::LinRec { init, .. } | ParamSeq::MulRec { init, .. } => init,
            _ => unreachable!(),
        };
        let k = init.len();
        let mut fwd: Vec<Rational> = init.clone();
        for n in k as i64..=end {
            let w = &fwd[fwd.len() - k..];
            let v = self.next_value(w, n)?;
            fwd.push(v);
        }
        // Backward: prepend values a_{-1}, a_{-2}, ...
        let mut back: Vec<Rational> = Vec::new();
        for n in (start..0).rev() {
            // window a_{n+1}..a_{n+k}
            let mut w: Vec<Rational> = back.iter().rev().cloned().collect();
            w.extend(fwd.iter().cloned());
            w.truncate(k);
            let v = self.prev_value(&w, n)?;
            back.push(v);
        }
        back.reverse();
        back.extend(fwd);
        Ok(back)
    }

    /// `a_{n}` from the window `a_{n-k}..a_{n-1}`.
    fn next_value(&self, w: &[Rational], n: i64) -> Result<Rational, ParamError> {
        let k = w.len();
        match self {
            ParamSeq::LinRec { coeffs, .. } => {
                let mut s = Rational::zero();
                for (i, c) in coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        s += c * &w[k - 1 - i];
                    }
                }
                Ok(s)
            }
            ParamSeq::MulRec { exponents, .. } => {
                let mut p = Rational::one();
                for (i, &e) in exponents.iter().enumerate() {
                    p *= power(&w[k - 1 - i], e);
                }
                if p.is_zero() {
                    return Err(ParamError::ZeroValue(n));
                }
                Ok(p)
            }
            _ => unreachable!(),
        }
    }

    /// `a_n` from the window `a_{n+1}..a_{n+k}`.
    fn prev_value(&self, w: &[Rational], n: i64) -> Result<Rational, ParamError> {
        let k = w.len();
        match self {
            ParamSeq::LinRec { coeffs, .. } => {
                let ck = &coeffs[k - 1];
                if ck.is_zero() {
                    return Err(ParamError::BackwardImpossible(n));
                }
                // a_{n+k} = Σ_{i<k} c_i a_{n+k-i} + c_k a_n
                let mut s = w[k - 1].clone();
                for i in 1..k {
                    s -= &coeffs[i - 1] * &w[k - 1 - i];
                }
                Ok(s / ck)
            }
            ParamSeq::MulRec { exponents, .. } => {
                let ek = exponents[k - 1];
                if ek != 1 && ek != -1 {
                    return Err(ParamError::BackwardImpossible(n));
                }
                let mut q = w[k - 1].clone();
                for i in 1..k {
                    q /= power(&w[k - 1 - i], exponents[i - 1]);
                }
                Ok(if ek == 1 { q } else { q.recip() })
            }
            _ => unreachable!(),
        }
    }
}

fn power(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), e.unsigned_abs() as usize)
    }
}

/// Lazily evaluated parameter values for one analysis. Not shared between
/// threads; each computation builds its own.
#[derive(Debug)]
pub struct ParamEnv {
    names: Vec<String>,
    seqs: Vec<ParamSeq>,
    cache: RefCell<Vec<Option<(i64, Vec<Rational>)>>>,
}

impl ParamEnv {
    pub fn new(params: &[(String, ParamSeq)]) -> Self {
        ParamEnv {
            names: params.iter().map(|(n, _)| n.clone()).collect(),
            seqs: params.iter().map(|(_, s)| s.clone()).collect(),
            cache: RefCell::new(vec![None; params.len()]),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn value(&self, name: &str, n: i64) -> Result<Rational, ParamError> {
        let i = self.index_of(name).ok_or_else(|| ParamError::Invalid(format!("unknown parameter `{name}`")))?;
        self.value_at(i, n)
    }

    pub fn value_at(&self, i: usize, n: i64) -> Result<Rational, ParamError> {
        if let ParamSeq::Constant(c) = &self.seqs[i] {
            return Ok(c.clone());
        }
        let mut cache = self.cache.borrow_mut();
        if let Some((lo, vals)) = &cache[i] {
            if n >= *lo && n < lo + vals.len() as i64 {
                return Ok(vals[(n - lo) as usize].clone());
            }
        }
        let (mut lo, mut hi) = (n - 8, n + 8);
        if let Some((clo, vals)) = &cache[i] {
            lo = lo.min(*clo);
            hi = hi.max(clo + vals.len() as i64 - 1);
        }
        let vals = match &self.seqs[i] {
            ParamSeq::Explicit { from, values } => {
                lo = lo.max(*from);
                hi = hi.min(from + values.len() as i64 - 1);
                if n < lo || n > hi {
                    return Err(ParamError::OutOfRange(n));
                }
                self.seqs[i].values(lo, hi)?
            }
            seq => seq.values(lo, hi)?,
        };
        let v = vals[(n - lo) as usize].clone();
        cache[i] = Some((lo, vals));
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_i};

    #[test]
    fn linrec_examples() {
        let p = ParamSeq::LinRec { coeffs: vec![rat_i(2), rat_i(-1)], init: vec![rat_i(1), rat_i(2)] };
        assert_eq!(p.value(5).unwrap(), rat_i(6));
        assert_eq!(p.value(-4).unwrap(), rat_i(-3));
        assert_eq!(ParamSeq::Constant(rat(3, 2)).value(-7).unwrap(), rat(3, 2));
    }

    #[test]
    fn mulrec_examples() {
        let p = ParamSeq::MulRec { exponents: vec![0, 2, 1], init: vec![rat_i(2), rat_i(3), rat_i(5)] };
        assert_eq!(p.value(3).unwrap(), rat_i(18));
        let v = p.values(-3, 5).unwrap();
        for w in v.windows(4) {
            assert_eq!(w[3], &w[1] * &w[1] * &w[0]);
        }
        let bad = ParamSeq::MulRec { exponents: vec![1, 2], init: vec![rat_i(2), rat_i(3)] };
        assert!(matches!(bad.value(-1), Err(ParamError::BackwardImpossible(-1))));
    }

    #[test]
    fn env_caches_and_extends() {
        let env = ParamEnv::new(&[(
            "a".to_string(),
            ParamSeq::LinRec { coeffs: vec![rat_i(2), rat_i(-1)], init: vec![rat_i(1), rat_i(2)] },
        )]);
        assert_eq!(env.value("a", 30).unwrap(), rat_i(31));
        assert_eq!(env.value("a", -30).unwrap(), rat_i(-29));
        assert_eq!(env.value("a", 0).unwrap(), rat_i(1));
        let ex = ParamEnv::new(&[("b".into(), ParamSeq::Explicit { from: -1, values: vec![rat_i(4), rat_i(5)] })]);
        assert_eq!(ex.value("b", 0).unwrap(), rat_i(5));
        assert!(ex.value("b", 1).is_err());
    }
}
