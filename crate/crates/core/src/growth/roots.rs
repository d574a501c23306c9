use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exact::{poly_gcd, rat_i, Field, Poly, Rational};

/// Closed interval `[lo, hi]` of rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn point(r: Rational) -> Self {
        RootInterval { lo: r.clone(), hi: r }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / rat_i(2)
    }

    pub fn mid_f64(&self) -> f64 {
        to_f64(&self.midpoint())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("unsupported spectrum: a complex root has modulus above the largest real root")]
    UnsupportedSpectrum,
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(f) = r.to_f64() {
        if f.is_finite() {
            return f;
        }
    }
    // scale huge numerators and denominators down together
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let n = r.numer() >> shift;
    let d = r.denom() >> shift;
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}

/// `p / gcd(p, p')`, monic.
pub fn squarefree(p: &Poly<Rational>) -> Poly<Rational> {
    let g = poly_gcd(p, &p.derivative());
    p.div_exact(&g).unwrap_or_else(|| p.clone()).monic()
}

pub fn sturm_sequence(p: &Poly<Rational>) -> Vec<Poly<Rational>> {
    let mut seq = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    seq
}

fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn variations(seq: &[Poly<Rational>], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for p in seq {
        let s = sign(&p.eval(x));
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

/// Number of distinct real roots in `(a, b]`; `seq` must come from a
/// squarefree polynomial.
pub fn count_roots(seq: &[Poly<Rational>], a: &Rational, b: &Rational) -> usize {
    variations(seq, a).saturating_sub(variations(seq, b))
}

/// Cauchy bound: every complex root has modulus below it.
pub fn cauchy_bound(p: &Poly<Rational>) -> Rational {
    let lc = p.lc().cloned().unwrap_or_else(|| rat_i(1));
    let n = p.coeffs().len().saturating_sub(1);
    let m = p.coeffs()[..n].iter().map(|c| (c / &lc).abs()).max().unwrap_or_else(|| rat_i(0));
    m + rat_i(1)
}

/// Isolating intervals of width at most `tol` for all real roots, sorted.
pub fn isolate_real_roots(p: &Poly<Rational>, tol: &Rational) -> Result<Vec<RootInterval>, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let q = squarefree(p);
    if q.degree() == Some(0) {
        return Ok(vec![]);
    }
    let seq = sturm_sequence(&q);
    let b = cauchy_bound(&q);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots(&seq, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 && Field::is_zero(&q.eval(&hi)) {
            out.push(RootInterval::point(hi));
            continue;
        }
        if n == 1 && &hi - &lo <= *tol {
            out.push(RootInterval { lo, hi });
            continue;
        }
        let mid = (&lo + &hi) / rat_i(2);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Scale to a primitive polynomial with integer coefficients.
pub fn primitive_integer(p: &Poly<Rational>) -> Vec<BigInt> {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

/// All rational roots of `p` (distinct, sorted) together with the cofactor
/// left after dividing them out of the squarefree part.
pub fn rational_roots(p: &Poly<Rational>) -> Result<(Vec<Rational>, Poly<Rational>), RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let q = squarefree(p);
    let ints = primitive_integer(&q);
    let lc = ints.last().cloned().unwrap_or_else(BigInt::one).abs();
    let l = Rational::from_integer(lc.clone());
    // candidates are k / lc; isolate finer than their spacing
    let tol = rat_i(1) / (l.clone() * rat_i(4));
    let mut roots = Vec::new();
    for iv in isolate_real_roots(&q, &tol)? {
        if iv.is_exact() {
            roots.push(iv.lo);
            continue;
        }
        let k = (iv.midpoint() * &l).round();
        let cand = k / &l;
        if cand >= iv.lo && cand <= iv.hi && Field::is_zero(&q.eval(&cand)) {
            roots.push(cand);
        }
    }
    let mut rest = q;
    for r in &roots {
        let lin = Poly::new(vec![-r.clone(), rat_i(1)]);
        rest = rest.div_exact(&lin).expect("root divides");
    }
    Ok((roots, rest))
}

/// Multiplicity of `r` as a root of `p`.
pub fn root_multiplicity(p: &Poly<Rational>, r: &Rational) -> usize {
    let lin = Poly::new(vec![-r.clone(), rat_i(1)]);
    let mut q = p.clone();
    let mut m = 0;
    while !q.is_zero() {
        let (d, rem) = q.div_rem(&lin);
        if !rem.is_zero() {
            break;
        }
        q = d;
        m += 1;
    }
    m
}

/// Schur–Cohn–Jury test: every root of `p` lies strictly inside the unit
/// disk.
pub fn roots_inside_unit_disk(p: &Poly<Rational>) -> bool {
    let mut a: Vec<Rational> = p.coeffs().to_vec();
    while a.len() > 1 {
        let n = a.len() - 1;
        let (a0, an) = (a[0].clone(), a[n].clone());
        if &a0 * &a0 >= &an * &an {
            return false;
        }
        // (an p − a0 p*) / z keeps the roots inside iff p has them inside
        a = (0..n).map(|i| &an * &a[i + 1] - &a0 * &a[n - 1 - i]).collect();
    }
    true
}

/// The largest real root `r >= 1` of `p` (or `[1, 1]` when there is none
/// above 1) as an interval of width at most `tol`, checked against complex
/// roots of larger modulus.
pub fn dominant_root(p: &Poly<Rational>, tol: &Rational) -> Result<RootInterval, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let q = squarefree(p);
    let seq = sturm_sequence(&q);
    let one = rat_i(1);
    let mut hi = cauchy_bound(&q);
    let mut lo = one.clone();
    let root = if q.degree() == Some(0) || count_roots(&seq, &lo, &hi) == 0 {
        RootInterval::point(one)
    } else {
        loop {
            if Field::is_zero(&q.eval(&hi)) {
                break RootInterval::point(hi);
            }
            if &hi - &lo <= *tol {
                break RootInterval { lo, hi };
            }
            let mid = (&lo + &hi) / rat_i(2);
            if count_roots(&seq, &mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    };
    // no root of modulus beyond the real one (up to tol)
    let r = &root.hi + tol;
    let scaled = Poly::new(
        q.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * Field::pow(&r, i as u64))
            .collect(),
    );
    if !roots_inside_unit_disk(&scaled) {
        return Err(RootError::UnsupportedSpectrum);
    }
    Ok(root)
}
