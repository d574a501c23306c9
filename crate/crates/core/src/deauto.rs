//! Non-autonomous parameters under confinement constraints.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{rat_i, Field, Poly, Rational};
use crate::growth::{dominant_root, fit_recurrence_i64, rational_roots, FitError, Recurrence, RootError, RootInterval};
use crate::map::{MapInstance, ParamError, ParamSeq};
use crate::singularity::{
    classify_singularity, find_singular_values, Classification, OrbitConfig, PatternEntry, SingularValue,
    SingularityError, SingularityReport,
};

/// Largest `|n|` for multiplicative sequences off a power lattice.
pub const MULREC_INDEX_CAP: i64 = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeautoError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error("constraint must be a linear or multiplicative recurrence")]
    NotRecurrence,
    #[error("multiplicative values off a power lattice are limited to |n| <= {MULREC_INDEX_CAP}, asked for {0}")]
    IndexCap(i64),
    #[error("generated value a_{0} violates the recurrence")]
    Violated(i64),
    #[error("value at position {0} is not positive")]
    NonPositive(usize),
    #[error("values are not powers of a common base")]
    NoCommonBase,
    #[error("exponent sequence is not recurrent: {0}")]
    NotRecurrent(FitError),
    #[error("tail must be at least 4, got {0}")]
    ShortTail(usize),
    #[error("map has no parameter {0}")]
    UnknownParam(String),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Singularity(#[from] SingularityError),
}

/// Whether `seq[j]` for `j >= k` follows the recurrence of `c` from the
/// preceding `k` values; returns the first offending position.
fn check_constraint(c: &ParamSeq, seq: &[Rational]) -> Option<usize> {
    let k = c.order();
    (k..seq.len()).find(|&j| {
        let w = &seq[j - k..j];
        let next = match c {
            ParamSeq::LinRec { coeffs, .. } => {
                coeffs.iter().enumerate().fold(<Rational as Zero>::zero(), |s, (i, a)| s + a * &w[k - 1 - i])
            }
            ParamSeq::MulRec { exponents, .. } => exponents.iter().enumerate().fold(<Rational as One>::one(), |s, (i, &e)| {
                let p = Field::pow(&w[k - 1 - i], e.unsigned_abs());
                s * if e < 0 { p.recip() } else { p }
            }),
            _ => return false,
        };
        next != seq[j]
    })
}

/// `a_{-n}..=a_n` for a recurrence constraint, re-checked after generation.
pub fn gen_params(c: &ParamSeq, n: i64) -> Result<Vec<Rational>, DeautoError> {
    let n = n.abs();
    match c {
        ParamSeq::LinRec { .. } => {}
        ParamSeq::MulRec { init, .. } => {
            if n > MULREC_INDEX_CAP && common_base(init).is_none() {
                return Err(DeautoError::IndexCap(n));
            }
        }
        _ => return Err(DeautoError::NotRecurrence),
    }
    let vals = c.values(-n, n)?;
    if let Some(j) = check_constraint(c, &vals) {
        return Err(DeautoError::Violated(j as i64 - n));
    }
    Ok(vals)
}

fn log2(x: &BigInt) -> f64 {
    let b = x.bits();
    if b <= 64 {
        return x.to_f64().unwrap_or(0.0).abs().log2();
    }
    let top = (x.abs() >> (b - 60)).to_f64().unwrap_or(1.0);
    top.log2() + (b - 60) as f64
}

fn log2_rat(r: &Rational) -> f64 {
    log2(r.numer()) - log2(r.denom())
}

/// `r = root^k` with `k` maximal, for positive `r != 1`.
fn primitive_root(r: &Rational) -> Rational {
    let (p, q) = (r.numer(), r.denom());
    let max_k = p.bits().max(q.bits()) as u32;
    for k in (2..=max_k).rev() {
        let (a, b) = (p.nth_root(k), q.nth_root(k));
        if num_traits::pow(a.clone(), k as usize) == *p && num_traits::pow(b.clone(), k as usize) == *q {
            return Rational::new(a, b);
        }
    }
    r.clone()
}

/// `e` with `base^e = r`.
fn exponent_of(r: &Rational, base: &Rational) -> Option<i64> {
    if One::is_one(r) {
        return Some(0);
    }
    let guess = (log2_rat(r) / log2_rat(base)).round() as i64;
    (guess - 1..=guess + 1).find(|&e| {
        let p = Field::pow(base, e.unsigned_abs());
        *r == if e < 0 { p.recip() } else { p }
    })
}

/// The smallest base of which every positive value is an integer power,
/// with the exponents; `None` when the values are not on one lattice.
pub fn common_base(values: &[Rational]) -> Option<(Rational, Vec<i64>)> {
    if values.iter().any(|v| !v.is_positive()) {
        return None;
    }
    let seed = values
        .iter()
        .filter(|v| !One::is_one(*v))
        .min_by_key(|v| v.numer().bits() + v.denom().bits())?;
    let mut base = primitive_root(seed);
    if base < rat_i(1) {
        base = base.recip();
    }
    let exps = values.iter().map(|v| exponent_of(v, &base)).collect::<Option<Vec<_>>>()?;
    Some((base, exps))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoglogRate {
    pub rate: f64,
    pub base: Option<Rational>,
    pub exponents: Vec<i64>,
    pub recurrence: Option<Recurrence>,
    pub char_poly: Option<Poly<Rational>>,
    pub dominant_root: Option<RootInterval>,
}

fn root_tolerance() -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << 60)
}

fn log_of_root(root: &RootInterval) -> f64 {
    if root.lo > rat_i(1) {
        root.mid_f64().ln()
    } else {
        0.0
    }
}

/// `lim (1/n) log log a_n` from the exponents of the values on their power
/// lattice; the last `tail` values are held out of the fit.
pub fn loglog_growth_rate(params: &[Rational], tail: usize) -> Result<LoglogRate, DeautoError> {
    if tail < 4 {
        return Err(DeautoError::ShortTail(tail));
    }
    if let Some(i) = params.iter().position(|v| !v.is_positive()) {
        return Err(DeautoError::NonPositive(i));
    }
    let flat = LoglogRate {
        rate: 0.0,
        base: None,
        exponents: vec![0; params.len()],
        recurrence: None,
        char_poly: None,
        dominant_root: None,
    };
    if params.iter().all(One::is_one) {
        return Ok(flat);
    }
    let (base, exponents) = common_base(params).ok_or(DeautoError::NoCommonBase)?;
    let rec = fit_recurrence_i64(&exponents, tail).map_err(DeautoError::NotRecurrent)?;
    let p = rec.char_poly();
    let root = dominant_root(&p, &root_tolerance())?;
    Ok(LoglogRate {
        rate: log_of_root(&root),
        base: Some(base),
        exponents,
        recurrence: Some(rec),
        char_poly: Some(p),
        dominant_root: Some(root),
    })
}

/// `λ^k − Σ c_i λ^{k−i}` for a recurrence constraint; multiplicative
/// constraints give the polynomial of their exponent recurrence.
pub fn constraint_char_poly(c: &ParamSeq) -> Result<Poly<Rational>, DeautoError> {
    let coeffs: Vec<Rational> = match c {
        ParamSeq::LinRec { coeffs, .. } => coeffs.clone(),
        ParamSeq::MulRec { exponents, .. } => exponents.iter().map(|&e| rat_i(e)).collect(),
        _ => return Err(DeautoError::NotRecurrence),
    };
    Ok(Recurrence { order: coeffs.len(), coeffs, valid_from: 0 }.char_poly())
}

/// `p` as a product of its rational linear factors and the cofactor, e.g.
/// `(λ + 1)(λ^2 - λ - 1)`.
pub fn factored(p: &Poly<Rational>, var: &str) -> Result<String, DeautoError> {
    let lin = |r: &Rational| Poly::new(vec![-r.clone(), rat_i(1)]);
    let (roots, _) = rational_roots(p)?;
    let mut rest = p.monic();
    let mut parts = Vec::new();
    for r in &roots {
        while let Some(q) = rest.div_exact(&lin(r)) {
            parts.push(lin(r));
            rest = q;
        }
    }
    if !rest.is_constant() {
        parts.push(rest.clone());
    }
    let lc = p.lc().cloned().unwrap_or_else(|| rat_i(1));
    let scale = if lc == rat_i(1) { String::new() } else { format!("{lc}") };
    if parts.len() <= 1 && scale.is_empty() {
        return Ok(p.display_with(var));
    }
    Ok(format!("{scale}{}", parts.iter().map(|f| format!("({})", f.display_with(var))).collect::<String>()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Mark {
    Regular(bool),
    Zero(i64),
    Pole(i64),
    /// Sign of the base and deviation order.
    Near(bool, i64),
}

fn marks(c: &Classification) -> Option<Vec<Vec<Mark>>> {
    let Classification::Confined { pattern } = c else {
        return None;
    };
    let mark = |e: &PatternEntry| match e {
        PatternEntry::Regular { depends_on_tracker, .. } => Mark::Regular(*depends_on_tracker),
        PatternEntry::Vanishing(k) => Mark::Zero(*k),
        PatternEntry::Diverging(k) => Mark::Pole(*k),
        PatternEntry::NearValue { base, deviation } => Mark::Near(base.is_positive(), *deviation),
    };
    Some(pattern.iter().map(|p| p.iter().map(mark).collect()).collect())
}

/// Whether two confined patterns agree entry for entry in valuations, with
/// singular-value bases compared up to a positive parameter scaling.
pub fn same_pattern_up_to_scaling(a: &Classification, b: &Classification) -> bool {
    match (marks(a), marks(b)) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfinementCheck {
    pub report: SingularityReport,
    pub reference: Option<SingularityReport>,
    pub confined: bool,
    /// Confined, and matching the reference when there is one.
    pub verified: bool,
    pub consistency: String,
}

/// Classify `v` entered at `n0` for a map whose parameters follow their
/// constraint, against the reference pattern of the autonomous map.
pub fn verify_confinement_under_constraint(
    m: &MapInstance,
    v: &SingularValue,
    n0: i64,
    reference: Option<&SingularityReport>,
    cfg: &OrbitConfig,
) -> Result<ConfinementCheck, DeautoError> {
    let report = classify_singularity(m, v, n0, cfg)?;
    let confined = matches!(report.classification, Classification::Confined { .. });
    let shown = report.classification.pattern_short().unwrap_or_else(|| report.classification.name().to_string());
    let (verified, consistency) = match reference {
        None => (confined, format!("{}: {shown}", report.label)),
        Some(r) => {
            let auto = r.classification.pattern_short().unwrap_or_else(|| r.classification.name().to_string());
            let same = same_pattern_up_to_scaling(&report.classification, &r.classification);
            let rel = if same { "matches" } else { "differs from" };
            (confined && same, format!("{}: {shown} {rel} autonomous {auto}", report.label))
        }
    };
    Ok(ConfinementCheck { report, reference: reference.cloned(), confined, verified, consistency })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeautoReport {
    pub param: String,
    pub constraint: ParamSeq,
    pub values: Vec<Rational>,
    pub checks: Vec<ConfinementCheck>,
    pub confinement_verified: bool,
    pub char_poly: Poly<Rational>,
    pub char_poly_factored: String,
    pub dominant_root: RootInterval,
    pub predicted_entropy: f64,
    pub loglog: Option<LoglogRate>,
    pub consistency: Vec<String>,
}

fn order_key(v: &SingularValue) -> (bool, Rational) {
    match v {
        SingularValue::Finite(r) => (false, r.clone()),
        SingularValue::Infinity => (true, rat_i(0)),
    }
}

/// Full check of one constrained parameter: generated values, confinement of
/// every singular value at `n0` against the autonomous map when given, and
/// the entropy implied by the constraint's growth.
pub fn deauto_report(
    m: &MapInstance,
    param: &str,
    n0: i64,
    autonomous: Option<&MapInstance>,
    cfg: &OrbitConfig,
) -> Result<DeautoReport, DeautoError> {
    let seq = m
        .params
        .iter()
        .find(|(p, _)| p == param)
        .map(|(_, s)| s.clone())
        .ok_or_else(|| DeautoError::UnknownParam(param.to_string()))?;
    let values = gen_params(&seq, MULREC_INDEX_CAP)?;
    let mut vs = find_singular_values(m, n0)?;
    vs.sort_by_key(order_key);
    let refs: Option<Vec<SingularityReport>> = match autonomous {
        Some(a) => {
            let mut avs = find_singular_values(a, n0)?;
            avs.sort_by_key(order_key);
            let mut out = Vec::new();
            for v in &avs {
                out.push(classify_singularity(a, v, n0, cfg)?);
            }
            Some(out)
        }
        None => None,
    };
    let mut consistency = Vec::new();
    if let Some(r) = &refs {
        if r.len() != vs.len() {
            consistency.push(format!("{} singular values against {} for the autonomous map", vs.len(), r.len()));
        }
    }
    let mut checks = Vec::new();
    for (i, v) in vs.iter().enumerate() {
        let reference = refs.as_ref().and_then(|r| r.get(i));
        if let Some(r) = reference.filter(|r| !matches!(r.classification, Classification::Confined { .. })) {
            consistency.push(format!("{}: {} in the autonomous map; not compared", r.label, r.classification.name()));
            continue;
        }
        let c = verify_confinement_under_constraint(m, v, n0, reference, cfg)?;
        consistency.push(c.consistency.clone());
        checks.push(c);
    }
    let confinement_verified =
        !checks.is_empty() && checks.iter().all(|c| c.verified) && refs.as_ref().map_or(true, |r| r.len() == vs.len());
    let char_poly = constraint_char_poly(&seq)?;
    let char_poly_factored = factored(&char_poly, "λ")?;
    let dominant_root = dominant_root(&char_poly, &root_tolerance())?;
    let predicted_entropy = log_of_root(&dominant_root);
    let loglog = match &seq {
        ParamSeq::MulRec { .. } => Some(loglog_growth_rate(&values, 4)?),
        _ => None,
    };
    if let Some(l) = &loglog {
        if (l.rate - predicted_entropy).abs() > 1e-9 {
            consistency.push(format!(
                "log log growth {:.9} differs from the constraint's root {:.9}",
                l.rate, predicted_entropy
            ));
        }
    }
    Ok(DeautoReport {
        param: param.to_string(),
        constraint: seq,
        values,
        checks,
        confinement_verified,
        char_poly,
        char_poly_factored,
        dominant_root,
        predicted_entropy,
        loglog,
        consistency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_mapfile;
    use crate::exact::rat;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat_i(x)).collect()
    }

    #[test]
    fn linear_constraint() {
        let c = ParamSeq::LinRec { coeffs: ints(&[2, -1]), init: ints(&[1, 2]) };
        let v = gen_params(&c, 5).unwrap();
        assert_eq!(v, (-5..=5).map(|n| rat_i(1 + n)).collect::<Vec<_>>());
    }

    #[test]
    fn exponent_lattice() {
        let c = ParamSeq::MulRec { exponents: vec![0, 2, 1], init: ints(&[2, 2, 2]) };
        let v = gen_params(&c, 12).unwrap();
        let (base, e) = common_base(&v).unwrap();
        assert_eq!(base, rat_i(2));
        // e_{n+2} = 2 e_n + e_{n-1} by direct integer recursion
        let mut want = vec![1i64, 1, 1];
        for n in 3..=12 {
            want.push(2 * want[n - 2] + want[n - 3]);
        }
        assert_eq!(&e[12..], &want[..]);
        assert_eq!(v[15], rat_i(8));
        let r = loglog_growth_rate(&v, 4).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r.rate - phi.ln()).abs() < 1e-9);
        let p = constraint_char_poly(&c).unwrap();
        assert_eq!(p.display_with("λ"), "λ^3 - 2λ - 1");
        assert_eq!(factored(&p, "λ").unwrap(), "(λ + 1)(λ^2 - λ - 1)");
    }

    #[test]
    fn flat_rates() {
        assert_eq!(loglog_growth_rate(&ints(&[3; 10]), 4).unwrap().rate, 0.0);
        let geo: Vec<Rational> = (0..12).map(|n| Field::pow(&rat_i(2), n)).collect();
        assert_eq!(loglog_growth_rate(&geo, 4).unwrap().rate, 0.0);
        assert_eq!(loglog_growth_rate(&[rat_i(1), rat_i(-1)], 4), Err(DeautoError::NonPositive(1)));
        assert_eq!(loglog_growth_rate(&ints(&[2, 3, 2, 3, 2, 3]), 4), Err(DeautoError::NoCommonBase));
        assert_eq!(common_base(&[rat(1, 8), rat(4, 1)]).unwrap(), (rat_i(2), vec![-3, 2]));
    }

    #[test]
    fn late_constraint() {
        let c = ParamSeq::LinRec { coeffs: ints(&[2, -1, 2, -1]), init: ints(&[1, 1, 1, 1]) };
        let v = gen_params(&c, 8).unwrap();
        let mut want = vec![1i64; 4];
        for n in 4..=8 {
            want.push(2 * want[n - 1] - want[n - 2] + 2 * want[n - 3] - want[n - 4]);
        }
        assert_eq!(&v[8..], &ints(&want)[..]);
        let p = constraint_char_poly(&c).unwrap();
        let r = dominant_root(&p, &root_tolerance()).unwrap();
        assert!((r.mid_f64() - 1.8832).abs() < 5e-4);
    }

    #[test]
    fn tsuda_deautonomised() {
        let maps = parse_mapfile(
            "map \"n\" { kind: scalar param a: mulrec exponents=[0, 2, 1] init=[2, 2, 2] forward: y*(x - a^2/x) }
             map \"t\" { kind: scalar forward: y*(x - 1/x) }",
        )
        .unwrap();
        let r = deauto_report(&maps[0], "a", 0, Some(&maps[1]), &OrbitConfig::default()).unwrap();
        assert!(r.confinement_verified, "{:?}", r.consistency);
        assert!((r.predicted_entropy - r.loglog.unwrap().rate).abs() < 1e-12);
    }
}
