use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use crate::exact::{rat_i, Laurent, RatFunc, Rational};
use crate::growth::{dominant_root, fit_recurrence_i64, Recurrence, RootInterval};
use crate::map::{Direction, Kind, MapInstance};

use super::orbit::{epsilon_orbit, orbit_side, Coeff, Orbit, OrbitConfig, Probe, Seed, StopReason, Value};
use super::values::{find_singular_values, SingularValue};
use super::SingularityError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternEntry {
    Regular { value: Coeff, depends_on_tracker: bool },
    Vanishing(i64),
    Diverging(i64),
    /// `base + O(ε^deviation)` with `base` a singular value.
    NearValue { base: Rational, deviation: i64 },
}

pub type Point = Vec<PatternEntry>;

impl PatternEntry {
    pub fn is_regular(&self) -> bool {
        matches!(self, PatternEntry::Regular { .. })
    }

    pub fn is_recovered(&self) -> bool {
        matches!(self, PatternEntry::Regular { depends_on_tracker: true, .. })
    }

    /// Signed order in `ε`: negative for poles, the deviation for values near
    /// a singular value, zero for regular values.
    pub fn valuation(&self) -> i64 {
        match self {
            PatternEntry::Regular { .. } => 0,
            PatternEntry::Vanishing(v) | PatternEntry::Diverging(v) => *v,
            PatternEntry::NearValue { deviation, .. } => *deviation,
        }
    }

    /// Leading behaviour: the value, `0` or `∞`.
    pub fn short(&self) -> String {
        match self {
            PatternEntry::Regular { value, .. } => value.display_with("c"),
            PatternEntry::Vanishing(_) => "0".into(),
            PatternEntry::Diverging(_) => "∞".into(),
            PatternEntry::NearValue { base, .. } => base.to_string(),
        }
    }

    /// With orders in `ε`.
    pub fn long(&self) -> String {
        let pow = |v: i64| if v == 1 { "ε".to_string() } else { format!("ε^{v}") };
        match self {
            PatternEntry::Regular { value, .. } => value.display_with("c"),
            PatternEntry::Vanishing(v) | PatternEntry::Diverging(v) => pow(*v),
            PatternEntry::NearValue { base, deviation } => format!("{base}+O({})", pow(*deviation)),
        }
    }
}

impl fmt::Display for PatternEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.long())
    }
}

pub fn point_regular(p: &Point) -> bool {
    p.iter().any(PatternEntry::is_regular)
}

pub fn point_recovered(p: &Point) -> bool {
    p.iter().any(PatternEntry::is_recovered)
}

/// The component valuation of largest magnitude, poles winning ties.
pub fn point_valuation(p: &Point) -> i64 {
    p.iter().map(PatternEntry::valuation).max_by_key(|v| (v.abs(), -v.signum())).unwrap_or(0)
}

fn render(p: &Point, f: impl Fn(&PatternEntry) -> String) -> String {
    if p.len() == 1 {
        f(&p[0])
    } else {
        format!("({})", p.iter().map(f).collect::<Vec<_>>().join(", "))
    }
}

pub fn point_short(p: &Point) -> String {
    render(p, PatternEntry::short)
}

pub fn point_long(p: &Point) -> String {
    render(p, PatternEntry::long)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GrowthClass {
    Zero,
    Linear { slope: i64 },
    Exponential { rate: f64, root: RootInterval, recurrence: Recurrence },
    Unclassified,
}

impl GrowthClass {
    fn rank(&self) -> u8 {
        match self {
            GrowthClass::Zero => 0,
            GrowthClass::Linear { .. } => 1,
            GrowthClass::Unclassified => 2,
            GrowthClass::Exponential { .. } => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GrowthClass::Zero => "zero",
            GrowthClass::Linear { .. } => "linear",
            GrowthClass::Exponential { .. } => "exponential",
            GrowthClass::Unclassified => "unclassified",
        }
    }

    pub fn rate(&self) -> Option<f64> {
        match self {
            GrowthClass::Exponential { rate, .. } => Some(*rate),
            _ => None,
        }
    }
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthClass::Zero => f.write_str("zero"),
            GrowthClass::Linear { slope } => write!(f, "linear (slope {slope})"),
            GrowthClass::Exponential { rate, recurrence, .. } => {
                write!(f, "exponential (rate {rate:.12}, {})", recurrence.display())
            }
            GrowthClass::Unclassified => f.write_str("unclassified"),
        }
    }
}

/// Growth of a valuation sequence read outward from the regular window.
pub fn growth_class(vals: &[i64]) -> GrowthClass {
    let mags: Vec<i64> = vals.iter().map(|v| v.abs()).collect();
    let n = mags.len();
    if n < 3 {
        return GrowthClass::Unclassified;
    }
    let max = *mags.iter().max().expect("nonempty");
    let half = n.div_ceil(2);
    if mags[..half].contains(&max) {
        return GrowthClass::Zero;
    }
    let tail = &vals[n - half.max(3)..];
    let d: Vec<i64> = tail.windows(2).map(|w| w[1] - w[0]).collect();
    if d.windows(2).all(|w| w[0] == w[1]) && d[0] != 0 {
        return GrowthClass::Linear { slope: d[0] };
    }
    if let Ok(rec) = fit_recurrence_i64(&mags, 2) {
        let tol = Rational::new(1.into(), num_bigint::BigInt::from(1u64) << 60);
        if let Ok(root) = dominant_root(&rec.char_poly(), &tol) {
            if root.lo > rat_i(1) {
                let rate = root.mid_f64().ln();
                return GrowthClass::Exponential { rate, root, recurrence: rec };
            }
        }
    }
    GrowthClass::Unclassified
}

#[derive(Debug, Clone, PartialEq)]
pub struct Anticonfinement {
    pub window: Vec<Point>,
    /// Points after the window, nearest first.
    pub forward: Vec<Point>,
    /// Points before the window, nearest first.
    pub backward: Vec<Point>,
    pub forward_valuations: Vec<i64>,
    pub backward_valuations: Vec<i64>,
    pub forward_growth: GrowthClass,
    pub backward_growth: GrowthClass,
    pub growth: GrowthClass,
}

impl Anticonfinement {
    /// `…, backward, window, forward, …` with at most `k` tail points a side.
    pub fn display(&self, k: usize) -> String {
        let mut parts = vec!["…".to_string()];
        parts.extend(self.backward.iter().take(k).rev().map(point_long));
        parts.extend(self.window.iter().map(point_long));
        parts.extend(self.forward.iter().take(k).map(point_long));
        parts.push("…".into());
        parts.join(", ")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    Confined { pattern: Vec<Point> },
    NonConfined,
    Anticonfined(Anticonfinement),
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::Confined { .. } => "confined",
            Classification::NonConfined => "non-confined",
            Classification::Anticonfined(_) => "anticonfined",
        }
    }

    pub fn pattern_short(&self) -> Option<String> {
        match self {
            Classification::Confined { pattern } => {
                Some(format!("{{{}}}", pattern.iter().map(point_short).collect::<Vec<_>>().join(", ")))
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularityReport {
    pub label: String,
    pub singular_value: Option<SingularValue>,
    pub probe: Probe,
    pub is_probe: bool,
    pub classification: Classification,
    pub horizon: usize,
    pub steps_forward: usize,
    pub steps_backward: usize,
    pub trunc: usize,
    pub warnings: Vec<String>,
}

impl SingularityReport {
    /// A probe that came back regular on both sides carries no information
    /// about anticonfinement.
    pub fn is_vacuous_probe(&self) -> bool {
        self.is_probe && matches!(self.classification, Classification::Confined { .. })
    }
}

/// Singular values per lattice index, computed on demand.
pub struct SingularSets<'a> {
    map: &'a MapInstance,
    cache: RefCell<HashMap<i64, Vec<Rational>>>,
}

impl<'a> SingularSets<'a> {
    pub fn new(map: &'a MapInstance) -> Self {
        SingularSets { map, cache: RefCell::new(HashMap::new()) }
    }

    pub fn finite_at(&self, n: i64) -> Vec<Rational> {
        if self.map.kind == Kind::Pair {
            return vec![];
        }
        self.cache
            .borrow_mut()
            .entry(n)
            .or_insert_with(|| {
                find_singular_values(self.map, n)
                    .map(|vs| {
                        vs.into_iter()
                            .filter_map(|v| match v {
                                SingularValue::Finite(r) => Some(r),
                                SingularValue::Infinity => None,
                            })
                            .collect()
                    })
                    .unwrap_or_default()
            })
            .clone()
    }
}

enum EntryError {
    Precision,
}

fn classify_value(v: &Value, singular: &[Rational]) -> Result<PatternEntry, EntryError> {
    let val = v.valuation();
    if val < 0 {
        return Ok(PatternEntry::Diverging(val));
    }
    if val > 0 {
        return Ok(PatternEntry::Vanishing(val));
    }
    let lead = v.leading().expect("nonzero values have a leading coefficient");
    let Some(r) = lead.as_constant() else {
        return Ok(PatternEntry::Regular { value: lead.clone(), depends_on_tracker: true });
    };
    if singular.contains(&r) {
        let base = Laurent::constant(RatFunc::constant(r.clone()), v.trunc());
        let dev = v.sub(&base).map_err(|_| EntryError::Precision)?;
        if dev.is_zero() {
            // exactly on the singular value; treat the deviation as unbounded
            return Ok(PatternEntry::NearValue { base: r, deviation: i64::MAX });
        }
        return Ok(PatternEntry::NearValue { base: r, deviation: dev.valuation() });
    }
    Ok(PatternEntry::Regular { value: RatFunc::constant(r), depends_on_tracker: false })
}

struct Classified {
    /// `(index, point)` in index order.
    points: Vec<(i64, Point)>,
    seed_cur: i64,
    first_forward: i64,
    last_backward: i64,
}

/// `Err(true)` asks for more precision on the forward side, `Err(false)` on
/// the backward side.
fn classify_orbit(orbit: &Orbit, sets: &SingularSets) -> Result<Classified, (bool, usize)> {
    let seed_last = orbit.seed_index + orbit.seed_points.len() as i64 - 1;
    let mut points = Vec::new();
    for (n, p) in orbit.points() {
        let sing = sets.finite_at(n);
        let mut out = Vec::with_capacity(p.len());
        for v in p {
            match classify_value(v, &sing) {
                Ok(e) => out.push(e),
                Err(EntryError::Precision) => {
                    let forward = n > seed_last;
                    let k = if forward { (n - seed_last - 1) as usize } else { (orbit.seed_index - 1 - n) as usize };
                    return Err((forward, k));
                }
            }
        }
        points.push((n, out));
    }
    Ok(Classified {
        points,
        seed_cur: seed_last,
        first_forward: seed_last + 1,
        last_backward: orbit.seed_index - 1,
    })
}

fn classify_points(c: &Classified, orbit: &Orbit, cfg: &OrbitConfig) -> Classification {
    let regular: Vec<i64> = c.points.iter().filter(|(_, p)| point_regular(p)).map(|(n, _)| *n).collect();
    let (lo, hi) = match (regular.first(), regular.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (c.first_forward, c.last_backward),
    };
    let req = 10.min(cfg.horizon / 2).max(1);
    let need = |limited: bool| if limited { req.min(6) } else { req };
    let forward: Vec<Point> = c.points.iter().filter(|(n, _)| *n > hi).map(|(_, p)| p.clone()).collect();
    let mut backward: Vec<Point> = c.points.iter().filter(|(n, _)| *n < lo).map(|(_, p)| p.clone()).collect();
    backward.reverse();
    let ok_f = forward.len() >= need(Orbit::limited(&orbit.forward));
    let ok_b = backward.len() >= need(Orbit::limited(&orbit.backward));
    if ok_f && ok_b {
        let window: Vec<Point> = c.points.iter().filter(|(n, _)| *n >= lo && *n <= hi).map(|(_, p)| p.clone()).collect();
        let fv: Vec<i64> = forward.iter().map(point_valuation).collect();
        let bv: Vec<i64> = backward.iter().map(point_valuation).collect();
        let fg = growth_class(&fv);
        let bg = growth_class(&bv);
        let growth = combine(&fg, &bg);
        return Classification::Anticonfined(Anticonfinement {
            window,
            forward,
            backward,
            forward_valuations: fv,
            backward_valuations: bv,
            forward_growth: fg,
            backward_growth: bg,
            growth,
        });
    }
    let after: Vec<&(i64, Point)> = c.points.iter().filter(|(n, _)| *n >= c.seed_cur).collect();
    if let Some(j) = after.iter().position(|(n, p)| *n > c.seed_cur && point_recovered(p)) {
        let pattern = after[..j].iter().map(|(_, p)| p.clone()).collect();
        return Classification::Confined { pattern };
    }
    Classification::NonConfined
}

fn combine(a: &GrowthClass, b: &GrowthClass) -> GrowthClass {
    match (a, b) {
        (GrowthClass::Exponential { rate: ra, .. }, GrowthClass::Exponential { rate: rb, .. }) => {
            if ra >= rb {
                a.clone()
            } else {
                b.clone()
            }
        }
        _ if a.rank() >= b.rank() => a.clone(),
        _ => b.clone(),
    }
}

fn warn_stops(orbit: &Orbit, warnings: &mut Vec<String>) {
    for (name, side) in [("forward", &orbit.forward), ("backward", &orbit.backward)] {
        if let Some((k, why)) = side.stopped.as_ref().filter(|_| Orbit::limited(side)) {
            warnings.push(format!("{name} orbit stopped after {k} steps: {why}"));
        }
    }
}

/// Run and classify one probe, raising the truncation when a value cannot
/// be compared with a singular value.
pub fn analyze_probe(
    m: &MapInstance,
    probe: &Probe,
    label: &str,
    value: Option<SingularValue>,
    is_probe: bool,
    cfg: &OrbitConfig,
) -> SingularityReport {
    let sets = SingularSets::new(m);
    let run = |cfg: &OrbitConfig| -> (Orbit, Classification, Vec<String>) {
        let mut orbit = epsilon_orbit(m, probe, cfg);
        loop {
            match classify_orbit(&orbit, &sets) {
                Ok(c) => {
                    let class = classify_points(&c, &orbit, cfg);
                    let mut w = Vec::new();
                    warn_stops(&orbit, &mut w);
                    return (orbit, class, w);
                }
                Err((forward, k)) => {
                    let dir = if forward { Direction::Forward } else { Direction::Backward };
                    let side = if forward { &mut orbit.forward } else { &mut orbit.backward };
                    if side.trunc < cfg.trunc_cap {
                        let finer = OrbitConfig { trunc: side.trunc * 2, ..*cfg };
                        let redo = orbit_side(m, probe, dir, &finer);
                        if redo.trunc > side.trunc && redo.points.len() > k {
                            *side = redo;
                            continue;
                        }
                    }
                    side.points.truncate(k);
                    side.stopped = Some((k, StopReason::Precision));
                }
            }
        }
    };
    let (mut orbit, mut class, mut warnings) = run(cfg);
    let mut horizon = cfg.horizon;
    let cut_short = Orbit::limited(&orbit.forward) && Orbit::limited(&orbit.backward);
    if matches!(class, Classification::NonConfined) && !cut_short {
        let wide = OrbitConfig { horizon: cfg.horizon * 2, ..*cfg };
        let (o2, c2, w2) = run(&wide);
        warnings.clear();
        if c2 != class {
            warnings.push(format!(
                "classification changed from non-confined at horizon {} to {} at horizon {}",
                cfg.horizon,
                c2.name(),
                wide.horizon
            ));
        }
        orbit = o2;
        class = c2;
        warnings.extend(w2);
        horizon = wide.horizon;
    }
    SingularityReport {
        label: label.to_string(),
        singular_value: value,
        probe: probe.clone(),
        is_probe,
        classification: class,
        horizon,
        steps_forward: orbit.forward.points.len(),
        steps_backward: orbit.backward.points.len(),
        trunc: orbit.truncation(),
        warnings,
    }
}

/// Standard probe entering a scalar singular value at `n0`:
/// `x_{n0-1} = c`, `x_{n0} = v + ε` (or `1/ε` for infinity).
pub fn singular_probe(v: &SingularValue, n0: i64) -> Probe {
    let cur = match v {
        SingularValue::Finite(r) => Seed::near(r.clone()),
        SingularValue::Infinity => Seed::eps_pow(-1),
    };
    Probe::new(Seed::Tracker, cur, n0)
}

pub fn classify_singularity(
    m: &MapInstance,
    v: &SingularValue,
    n0: i64,
    cfg: &OrbitConfig,
) -> Result<SingularityReport, SingularityError> {
    if m.kind == Kind::Pair {
        return Err(SingularityError::PairMap);
    }
    let label = match v {
        SingularValue::Finite(r) => format!("x = {r}"),
        SingularValue::Infinity => "x = ∞".to_string(),
    };
    Ok(analyze_probe(m, &singular_probe(v, n0), &label, Some(v.clone()), false, cfg))
}

/// Probe for anticonfinement. Fails when the orbit is regular on both sides.
pub fn probe_anticonfined(m: &MapInstance, probe: &Probe, cfg: &OrbitConfig) -> Result<SingularityReport, SingularityError> {
    let r = analyze_probe(m, probe, &probe.describe(m.kind), None, true, cfg);
    match r.classification {
        Classification::Anticonfined(_) => Ok(r),
        _ => Err(SingularityError::NotAnticonfined(r.classification.name().to_string())),
    }
}

/// Whether two reports agree on everything that does not depend on the
/// scale of `ε`.
pub fn same_shape(a: &SingularityReport, b: &SingularityReport) -> bool {
    fn norm(c: &Classification) -> String {
        match c {
            Classification::Confined { pattern } => {
                let v: Vec<String> = pattern
                    .iter()
                    .map(|p| {
                        p.iter()
                            .map(|e| match e {
                                PatternEntry::Regular { depends_on_tracker, .. } => format!("R{depends_on_tracker}"),
                                other => format!("{}:{}", other.short(), other.valuation()),
                            })
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                format!("C[{}]", v.join(";"))
            }
            Classification::NonConfined => "N".into(),
            Classification::Anticonfined(a) => {
                format!("A{:?}{:?}{}", a.forward_valuations, a.backward_valuations, a.window.len())
            }
        }
    }
    norm(&a.classification) == norm(&b.classification)
}
