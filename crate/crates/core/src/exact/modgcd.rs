//! Multi-modular gcd of integer polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = powmod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^62, descending.
fn primes() -> impl Iterator<Item = u64> {
    let mut n = (1u64 << 62) - 1;
    std::iter::from_fn(move || loop {
        n -= 2;
        if is_prime(n) {
            return Some(n);
        }
    })
}

fn reduce(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd over `Z/p`.
fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let inv = powmod(*y.last().unwrap(), p - 2, p);
        let dy = y.len() - 1;
        while x.len() > dy {
            let k = x.len() - 1 - dy;
            let q = mulmod(*x.last().unwrap(), inv, p);
            for (i, c) in y.iter().enumerate() {
                let t = mulmod(q, *c, p);
                x[i + k] = (x[i + k] + p - t) % p;
            }
            trim(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    if let Some(&l) = x.last() {
        let inv = powmod(l, p - 2, p);
        for c in x.iter_mut() {
            *c = mulmod(*c, inv, p);
        }
    }
    x
}

fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = content(v);
    let g = if v.last().is_some_and(|l| l.is_negative()) { -g } else { g };
    v.iter().map(|c| c / &g).collect()
}

/// Whether `h` divides `a` over `Z`, for primitive `h`.
fn divides(h: &[BigInt], a: &[BigInt]) -> bool {
    let dh = h.len() - 1;
    let lh = &h[dh];
    let mut r = a.to_vec();
    while r.len() > dh {
        let top = r.last().unwrap();
        if top.is_zero() {
            r.pop();
            continue;
        }
        let (q, rem) = top.div_rem(lh);
        if !rem.is_zero() {
            return false;
        }
        let k = r.len() - 1 - dh;
        for (i, c) in h.iter().enumerate() {
            r[i + k] -= &q * c;
        }
        r.pop();
    }
    r.iter().all(Zero::is_zero)
}

/// Primitive gcd of two nonzero integer polynomials, positive leading
/// coefficient; `None` means the gcd is constant.
pub(crate) fn integer_poly_gcd(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    let (a, b) = (primitive(a), primitive(b));
    if a.len() <= 1 || b.len() <= 1 {
        return None;
    }
    let (la, lb) = (a.last().unwrap(), b.last().unwrap());
    let gamma = la.gcd(lb);
    let mut best: Option<(usize, Vec<BigInt>, BigInt)> = None;
    let mut last_lift: Option<Vec<BigInt>> = None;
    for p in primes() {
        if reduce(la, p) == 0 || reduce(lb, p) == 0 {
            continue;
        }
        let ap: Vec<u64> = a.iter().map(|c| reduce(c, p)).collect();
        let bp: Vec<u64> = b.iter().map(|c| reduce(c, p)).collect();
        let g = gcd_mod(&ap, &bp, p);
        let d = g.len() - 1;
        if d == 0 {
            return None;
        }
        let gm = reduce(&gamma, p);
        let g: Vec<u64> = g.iter().map(|c| mulmod(*c, gm, p)).collect();
        let pb = BigInt::from(p);
        match &mut best {
            Some((bd, _, _)) if d > *bd => continue,
            Some((bd, v, m)) if d == *bd => {
                // v + m * ((r - v) / m mod p)
                let minv = BigInt::from(powmod(reduce(m, p), p - 2, p));
                for (vi, r) in v.iter_mut().zip(&g) {
                    let t = ((BigInt::from(*r) - &*vi) * &minv).mod_floor(&pb);
                    *vi += &*m * t;
                }
                *m *= &pb;
            }
            _ => {
                best = Some((d, g.iter().map(|&c| BigInt::from(c)).collect(), pb));
                last_lift = None;
                continue;
            }
        }
        let (_, v, m) = best.as_ref().unwrap();
        let half: BigInt = m >> 1;
        let lift: Vec<BigInt> = v.iter().map(|c| if c > &half { c - m } else { c.clone() }).collect();
        if last_lift.as_ref() == Some(&lift) {
            let h = primitive(&lift);
            if divides(&h, &a) && divides(&h, &b) {
                return Some(h);
            }
        }
        last_lift = Some(lift);
    }
    unreachable!("prime supply is unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn recovers_common_factor() {
        let g = ints(&[3, 0, 1]);
        let a = mul(&g, &ints(&[-1, 2]));
        let b = mul(&mul(&g, &g), &ints(&[5, 0, 0, 7]));
        assert_eq!(integer_poly_gcd(&a, &b), Some(g));
        assert_eq!(integer_poly_gcd(&ints(&[1, 1]), &ints(&[-1, 1])), None);
        let big = mul(&ints(&[i64::MAX, 1]), &ints(&[i64::MIN + 1, 3]));
        let a = mul(&big, &ints(&[7, 11]));
        let b = mul(&big, &ints(&[-13, 0, 2]));
        assert_eq!(integer_poly_gcd(&a, &b), Some(primitive(&big)));
        assert!(is_prime((1 << 61) - 1) && !is_prime((1 << 61) + 1));
    }
}
