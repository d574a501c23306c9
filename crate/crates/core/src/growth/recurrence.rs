use num_traits::{Signed, Zero};

use crate::exact::{rat_i, Poly, Rational};

/// `d_{n+1} = Σ_{i=1..k} coeffs[i-1] · d_{n+1-i}` for all `n >= valid_from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    pub order: usize,
    pub coeffs: Vec<Rational>,
    pub valid_from: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FitError {
    #[error("no linear recurrence of order <= {max_order} fits")]
    NoFit { max_order: usize },
    #[error("order-{order} recurrence fits the training terms but mispredicts held-out term {index}")]
    HoldoutMismatch { order: usize, index: usize },
    #[error("sequence too short: {len} terms with holdout {holdout}")]
    TooShort { len: usize, holdout: usize },
}

impl Recurrence {
    /// Next term from the preceding `order` terms (oldest first).
    pub fn predict(&self, window: &[Rational]) -> Rational {
        let k = self.order;
        let mut s = Rational::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            s += c * &window[k - 1 - i];
        }
        s
    }

    /// Whether the recurrence reproduces `seq[valid_from + 1..]`.
    pub fn holds_on(&self, seq: &[Rational]) -> bool {
        let k = self.order;
        let first = (self.valid_from + 1).max(k);
        (first..seq.len()).all(|m| self.predict(&seq[m - k..m]) == seq[m])
    }

    /// `λ^k − Σ c_i λ^{k−i}`.
    pub fn char_poly(&self) -> Poly<Rational> {
        let k = self.order;
        let mut cs = vec![Rational::zero(); k + 1];
        cs[k] = rat_i(1);
        for (i, c) in self.coeffs.iter().enumerate() {
            cs[k - 1 - i] = -c.clone();
        }
        Poly::new(cs)
    }

    /// Human-readable form, e.g. `d_{n+1} = 2 d_n - d_{n-2}`.
    pub fn display(&self) -> String {
        let mut out = String::from("d_{n+1} =");
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match i {
                0 => "d_n".to_string(),
                _ => format!("d_{{n-{i}}}"),
            };
            let mag = c.abs();
            let coef = if mag == rat_i(1) { String::new() } else { format!("{mag} ") };
            if first {
                out.push(' ');
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&coef);
            out.push_str(&term);
            first = false;
        }
        if first {
            out.push_str(" 0");
        }
        out
    }
}

pub fn char_poly(r: &Recurrence) -> Poly<Rational> {
    r.char_poly()
}

/// Solve `A c = b` exactly; `None` when inconsistent. Free variables are set
/// to zero.
fn solve(mut rows: Vec<Vec<Rational>>, k: usize) -> Option<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in col..=k {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); k];
    for (i, &col) in pivots.iter().enumerate() {
        sol[col] = rows[i][k].clone();
    }
    Some(sol)
}

/// Minimal-order linear recurrence with rational coefficients fitting the
/// sequence minus its last `holdout` terms, checked against those terms.
///
/// For each order `k = 1, 2, …` the earliest start is searched for which the
/// Hankel system over the remaining training terms (at least `k + 1`
/// equations) is consistent.
pub fn fit_recurrence(seq: &[Rational], holdout: usize) -> Result<Recurrence, FitError> {
    let n = seq.len();
    if n < holdout + 3 {
        return Err(FitError::TooShort { len: n, holdout });
    }
    let train = &seq[..n - holdout];
    let t = train.len();
    let max_order = t / 2;
    let mut mismatch: Option<FitError> = None;
    for k in 1..=max_order {
        // equations predict train[m] for m in s+k .. t
        let mut s = 0;
        while t >= s + 2 * k + 1 {
            let rows: Vec<Vec<Rational>> = (s + k..t)
                .map(|m| {
                    let mut row: Vec<Rational> = (1..=k).map(|i| train[m - i].clone()).collect();
                    row.push(train[m].clone());
                    row
                })
                .collect();
            if let Some(coeffs) = solve(rows, k) {
                let rec = Recurrence { order: k, coeffs, valid_from: s + k - 1 };
                let bad = (t..n).find(|&m| rec.predict(&seq[m - k..m]) != seq[m]);
                match bad {
                    None => return Ok(rec),
                    Some(index) => {
                        mismatch.get_or_insert(FitError::HoldoutMismatch { order: k, index });
                    }
                }
                break;
            }
            s += 1;
        }
    }
    Err(mismatch.unwrap_or(FitError::NoFit { max_order }))
}

pub fn fit_recurrence_i64(seq: &[i64], holdout: usize) -> Result<Recurrence, FitError> {
    let v: Vec<Rational> = seq.iter().map(|&d| rat_i(d)).collect();
    fit_recurrence(&v, holdout)
}
