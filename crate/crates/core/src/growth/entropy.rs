use std::fmt;

use crate::exact::{rat, rat_i, Poly, Rational};
use crate::map::MapInstance;

use super::degree::{degree_sequence, DegreeConfig, DegreeError, DegreeSequence};
use super::recurrence::{fit_recurrence_i64, FitError, Recurrence};
use super::roots::{dominant_root, root_multiplicity, RootError, RootInterval};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthType {
    Bounded,
    Polynomial(usize),
    Exponential,
}

impl fmt::Display for GrowthType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthType::Bounded => f.write_str("bounded"),
            GrowthType::Polynomial(k) => write!(f, "polynomial({k})"),
            GrowthType::Exponential => f.write_str("exponential"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Recurrence,
    Ratio,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Recurrence => "recurrence",
            Method::Ratio => "ratio",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyEstimate {
    pub degrees: DegreeSequence,
    pub recurrence: Option<Recurrence>,
    pub char_poly: Option<Poly<Rational>>,
    pub dominant_root: Option<RootInterval>,
    pub entropy: f64,
    /// The dominant root is certified to exceed 1.
    pub positive: bool,
    pub growth_type: GrowthType,
    pub method: Method,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EntropyError {
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error(transparent)]
    Root(#[from] RootError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntropyConfig {
    pub steps: usize,
    /// Length used when no recurrence fits at `steps`.
    pub extended_steps: usize,
    pub holdout: usize,
    pub degree: DegreeConfig,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        EntropyConfig { steps: 14, extended_steps: 20, holdout: 2, degree: DegreeConfig::default() }
    }
}

/// Root isolation width.
pub fn entropy_tolerance() -> Rational {
    rat(1, 1 << 50) / rat_i(1 << 10)
}

fn fit(d: &DegreeSequence, holdout: usize) -> Result<Recurrence, FitError> {
    let seq: Vec<i64> = d.degrees.iter().map(|&x| x as i64).collect();
    fit_recurrence_i64(&seq, holdout)
}

/// Growth type of a fitted recurrence from its characteristic polynomial.
pub fn classify_char_poly(p: &Poly<Rational>, root: &RootInterval) -> GrowthType {
    if root.lo > rat_i(1) {
        return GrowthType::Exponential;
    }
    match root_multiplicity(p, &rat_i(1)) {
        0 | 1 => GrowthType::Bounded,
        m => GrowthType::Polynomial(m - 1),
    }
}

/// Algebraic entropy from the degree sequence.
pub fn entropy_estimate(m: &MapInstance, seeds: &[u64], cfg: &EntropyConfig) -> Result<EntropyEstimate, EntropyError> {
    let mut warnings = Vec::new();
    let mut degrees = degree_sequence(m, cfg.steps, seeds, &cfg.degree)?;
    let mut fitted = fit(&degrees, cfg.holdout);
    if fitted.is_err() && cfg.extended_steps > cfg.steps && degrees.degrees.len() == cfg.steps + 1 {
        warnings.push(format!(
            "no recurrence fits {} degrees; extending to {}",
            degrees.degrees.len(),
            cfg.extended_steps + 1
        ));
        degrees = degree_sequence(m, cfg.extended_steps, seeds, &cfg.degree)?;
        fitted = fit(&degrees, cfg.holdout);
    }
    match fitted {
        Ok(rec) => {
            let p = rec.char_poly();
            let root = dominant_root(&p, &entropy_tolerance())?;
            let growth_type = classify_char_poly(&p, &root);
            let positive = growth_type == GrowthType::Exponential;
            let entropy = if positive { root.mid_f64().ln() } else { 0.0 };
            Ok(EntropyEstimate {
                degrees,
                recurrence: Some(rec),
                char_poly: Some(p),
                dominant_root: Some(root),
                entropy,
                positive,
                growth_type,
                method: Method::Recurrence,
                warnings,
            })
        }
        Err(e) => {
            let d = &degrees.degrees;
            let (a, b) = (d[d.len() - 2] as f64, d[d.len() - 1] as f64);
            let ratio = if a > 0.0 { b / a } else { 1.0 };
            let n = d.len() as f64;
            // polynomial growth of order k has ratio near 1 + k/n
            let positive = ratio > 1.0 + 4.0 / n;
            warnings.push(format!("no recurrence fits the degrees ({e}); ratio estimate, low confidence"));
            Ok(EntropyEstimate {
                degrees,
                recurrence: None,
                char_poly: None,
                dominant_root: None,
                entropy: ratio.max(1.0).ln(),
                positive,
                growth_type: if positive { GrowthType::Exponential } else { GrowthType::Polynomial(0) },
                method: Method::Ratio,
                warnings,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_mapfile;

    fn est(src: &str) -> EntropyEstimate {
        let m = parse_mapfile(src).unwrap().remove(0);
        entropy_estimate(&m, &[0, 1, 2], &EntropyConfig::default()).unwrap()
    }

    #[test]
    fn golden_mean() {
        let e = est("map \"t\" { kind: scalar forward: y*(x - 1/x) }");
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert_eq!(e.growth_type, GrowthType::Exponential);
        assert!((e.entropy - phi.ln()).abs() < 1e-9);
        assert_eq!(e.recurrence.unwrap().display(), "d_{n+1} = 2 d_n - d_{n-2}");
    }

    #[test]
    fn polynomial_orders() {
        let e = est("map \"q\" { kind: scalar forward: (x^2-1)/y }");
        assert_eq!(e.growth_type, GrowthType::Polynomial(1));
        assert_eq!(e.entropy, 0.0);
        let e = est("map \"d\" { kind: scalar param a: linrec coeffs=[2, -1] init=[1, 2] forward: 2*a*x/(x^2-1) - y }");
        assert_eq!(e.growth_type, GrowthType::Polynomial(2));
        let e = est("map \"l\" { kind: scalar forward: 2*x - y + 1 }");
        assert!(matches!(e.growth_type, GrowthType::Bounded | GrowthType::Polynomial(1)));
    }

    #[test]
    fn k_power() {
        let e = est("map \"k\" { kind: scalar forward: x^3/y }");
        let lam = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((e.entropy - lam.ln()).abs() < 1e-9);
        let e = est("map \"k\" { kind: scalar forward: x^2/y }");
        assert_eq!(e.growth_type, GrowthType::Polynomial(1));
    }
}
