use std::fmt;

use num_traits::Signed;

use crate::exact::{rat_i, Field, Laurent, RatFunc, Rational};
use crate::map::{Direction, EvalError, Kind, MapInstance};

/// Coefficients of orbit values: rational functions of the tracker `c`.
pub type Coeff = RatFunc<Rational>;
pub type Value = Laurent<Coeff>;

/// Initial condition for one state slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Seed {
    /// The free symbol `c`.
    Tracker,
    Const(Rational),
    /// `base + scale · ε^power`.
    Eps { base: Rational, scale: Rational, power: i64 },
}

impl Seed {
    pub fn eps() -> Self {
        Seed::eps_pow(1)
    }

    pub fn eps_pow(power: i64) -> Self {
        Seed::Eps { base: rat_i(0), scale: rat_i(1), power }
    }

    pub fn near(base: Rational) -> Self {
        Seed::Eps { base, scale: rat_i(1), power: 1 }
    }

    /// The same seed with `ε` replaced by `λε`.
    pub fn rescaled(&self, lambda: &Rational) -> Self {
        match self {
            Seed::Eps { base, scale, power } => {
                let f = Field::pow(lambda, power.unsigned_abs());
                let f = if *power < 0 { f.recip() } else { f };
                Seed::Eps { base: base.clone(), scale: scale * f, power: *power }
            }
            other => other.clone(),
        }
    }

    pub fn value(&self, trunc: usize) -> Value {
        let k = |r: &Rational| RatFunc::constant(r.clone());
        match self {
            Seed::Tracker => Laurent::constant(RatFunc::var(), trunc),
            Seed::Const(r) => Laurent::constant(k(r), trunc),
            Seed::Eps { base, scale, power } => {
                let term = Laurent::exact(*power, vec![k(scale)], trunc);
                if Field::is_zero(base) {
                    term
                } else {
                    Laurent::constant(k(base), trunc).add(&term).expect("exact operands")
                }
            }
        }
    }

    pub fn is_singular(&self) -> bool {
        matches!(self, Seed::Eps { .. })
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seed::Tracker => f.write_str("c"),
            Seed::Const(r) => write!(f, "{r}"),
            Seed::Eps { base, scale, power } => {
                let e = if *power == 1 { "ε".to_string() } else { format!("ε^{power}") };
                let s = if *scale == rat_i(1) {
                    e
                } else if *scale == rat_i(-1) {
                    format!("-{e}")
                } else {
                    format!("{scale}{e}")
                };
                if Field::is_zero(base) {
                    f.write_str(&s)
                } else if s.starts_with('-') {
                    write!(f, "{base} - {}", &s[1..])
                } else {
                    write!(f, "{base} + {s}")
                }
            }
        }
    }
}

/// Where an orbit starts: `prev = x_{n0-1}`, `cur = x_{n0}` for scalar maps,
/// `(X_{n0}, Y_{n0})` for pair maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub prev: Seed,
    pub cur: Seed,
    pub n0: i64,
}

impl Probe {
    pub fn new(prev: Seed, cur: Seed, n0: i64) -> Self {
        Probe { prev, cur, n0 }
    }

    pub fn rescaled(&self, lambda: &Rational) -> Self {
        Probe { prev: self.prev.rescaled(lambda), cur: self.cur.rescaled(lambda), n0: self.n0 }
    }

    pub fn describe(&self, kind: Kind) -> String {
        match kind {
            Kind::Scalar => format!("x_{} = {}, x_{} = {}", self.n0 - 1, self.prev, self.n0, self.cur),
            Kind::Pair => format!("(X, Y)_{} = ({}, {})", self.n0, self.prev, self.cur),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitConfig {
    pub horizon: usize,
    pub trunc: usize,
    pub trunc_cap: usize,
    /// Largest allowed size of a value: the sum over its coefficients of
    /// one plus the degree in `c`.
    pub size_budget: usize,
    /// Largest allowed bit length of any rational in a coefficient.
    pub bits_budget: u64,
    /// A side ends after this many consecutive generic points.
    pub settle: usize,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig { horizon: 20, trunc: 8, trunc_cap: 64, size_budget: 1024, bits_budget: 1 << 12, settle: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopReason {
    /// The orbit returned to generic behaviour; not a limitation.
    Settled,
    Precision,
    Budget,
    Pole,
    ExactZero,
    Param(String),
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopReason::Settled => f.write_str("orbit settled into generic values"),
            StopReason::Precision => f.write_str("precision exhausted within the truncation limits"),
            StopReason::Budget => f.write_str("coefficient budget exceeded"),
            StopReason::Pole => f.write_str("division by an exact zero"),
            StopReason::ExactZero => f.write_str("orbit value is exactly zero"),
            StopReason::Param(s) => write!(f, "parameter unavailable: {s}"),
        }
    }
}

/// One direction of an orbit, outward from the seed. Each point is `[x_n]`
/// for scalar maps and `[X_n, Y_n]` for pair maps.
#[derive(Debug, Clone)]
pub struct Side {
    pub points: Vec<Vec<Value>>,
    pub trunc: usize,
    pub stopped: Option<(usize, StopReason)>,
}

#[derive(Debug, Clone)]
pub struct Orbit {
    pub kind: Kind,
    pub probe: Probe,
    /// Points at the seed: `[x_{n0-1}], [x_{n0}]` or `[(X, Y)_{n0}]`.
    pub seed_points: Vec<Vec<Value>>,
    /// Index of the first seed point.
    pub seed_index: i64,
    pub forward: Side,
    pub backward: Side,
}

impl Orbit {
    /// All points in index order with their indices.
    pub fn points(&self) -> Vec<(i64, &Vec<Value>)> {
        let mut out = Vec::new();
        let b = self.backward.points.len() as i64;
        for (i, p) in self.backward.points.iter().enumerate().rev() {
            out.push((self.seed_index - 1 - i as i64, p));
        }
        debug_assert_eq!(out.first().map(|p| p.0).unwrap_or(self.seed_index), self.seed_index - b);
        for (i, p) in self.seed_points.iter().enumerate() {
            out.push((self.seed_index + i as i64, p));
        }
        let last_seed = self.seed_index + self.seed_points.len() as i64 - 1;
        for (i, p) in self.forward.points.iter().enumerate() {
            out.push((last_seed + 1 + i as i64, p));
        }
        out
    }

    pub fn truncation(&self) -> usize {
        self.forward.trunc.max(self.backward.trunc)
    }

    /// Whether a side was cut short by a limitation rather than settling.
    pub fn limited(side: &Side) -> bool {
        side.stopped.as_ref().is_some_and(|(_, r)| *r != StopReason::Settled)
    }
}

fn over_budget(v: &Value, cfg: &OrbitConfig) -> bool {
    let size: usize = v.coeffs().iter().map(|c| c.degree() + 1).sum();
    size > cfg.size_budget
        || v.coeffs().iter().any(|c| {
            c.num().coeffs().iter().chain(c.den().coeffs()).any(|r| {
                r.numer().abs().bits() > cfg.bits_budget || r.denom().bits() > cfg.bits_budget
            })
        })
}

/// Every component finite and nonzero at leading order, with at least one
/// leading coefficient depending on `c`.
fn generic(point: &[Value]) -> bool {
    point.iter().all(|v| v.valuation() == 0)
        && point.iter().any(|v| v.leading().is_some_and(|c| !c.is_constant()))
}

fn run_side(m: &MapInstance, probe: &Probe, dir: Direction, trunc: usize, cfg: &OrbitConfig) -> Side {
    let env = m.env();
    let mut state = (probe.prev.value(trunc), probe.cur.value(trunc));
    let mut n = probe.n0;
    let mut points = Vec::new();
    let mut stopped = None;
    let mut run = 0;
    for step in 0..cfg.horizon {
        if cfg.settle > 0 && run >= cfg.settle {
            stopped = Some((step, StopReason::Settled));
            break;
        }
        let next = match m.step(&env, &trunc, &state, n, dir) {
            Ok(s) => s,
            Err(e) => {
                let why = match e {
                    EvalError::PrecisionExhausted => StopReason::Precision,
                    EvalError::DivisionByZero => StopReason::Pole,
                    other => StopReason::Param(other.to_string()),
                };
                stopped = Some((step, why));
                break;
            }
        };
        let new: Vec<Value> = match (m.kind, dir) {
            (Kind::Scalar, Direction::Forward) => vec![next.1.clone()],
            (Kind::Scalar, Direction::Backward) => vec![next.0.clone()],
            (Kind::Pair, _) => vec![next.0.clone(), next.1.clone()],
        };
        if new.iter().any(|v| v.is_zero()) {
            stopped = Some((step, StopReason::ExactZero));
            break;
        }
        if new.iter().any(|v| over_budget(v, cfg)) {
            stopped = Some((step, StopReason::Budget));
            break;
        }
        run = if generic(&new) { run + 1 } else { 0 };
        points.push(new);
        state = next;
        n += match dir {
            Direction::Forward => 1,
            Direction::Backward => -1,
        };
    }
    Side { points, trunc, stopped }
}

/// A side computed at the smallest truncation, doubling from `cfg.trunc`,
/// that avoids precision exhaustion. When the cap or the size budget stops
/// the doubling, or two doublings in a row add no points, the longest side
/// computed so far is kept.
pub fn orbit_side(m: &MapInstance, probe: &Probe, dir: Direction, cfg: &OrbitConfig) -> Side {
    let mut trunc = cfg.trunc.max(1);
    let mut best: Option<Side> = None;
    let mut stale = 0;
    loop {
        let s = run_side(m, probe, dir, trunc, cfg);
        let exhausted = matches!(s.stopped, Some((_, StopReason::Precision)));
        if !exhausted {
            if matches!(s.stopped, Some((_, StopReason::Budget))) {
                if let Some(b) = best.filter(|b| b.points.len() > s.points.len()) {
                    return b;
                }
            }
            return s;
        }
        match &best {
            Some(b) if s.points.len() <= b.points.len() => stale += 1,
            _ => stale = 0,
        }
        if best.as_ref().map_or(true, |b| s.points.len() >= b.points.len()) {
            best = Some(s);
        }
        if trunc >= cfg.trunc_cap || stale >= 2 {
            return best.expect("at least one run");
        }
        trunc = (trunc * 2).min(cfg.trunc_cap);
    }
}

/// Iterate the probe `cfg.horizon` steps each way over `Q(c)((ε))`.
pub fn epsilon_orbit(m: &MapInstance, probe: &Probe, cfg: &OrbitConfig) -> Orbit {
    let forward = orbit_side(m, probe, Direction::Forward, cfg);
    let backward = orbit_side(m, probe, Direction::Backward, cfg);
    let t = cfg.trunc;
    let (seed_points, seed_index) = match m.kind {
        Kind::Scalar => (vec![vec![probe.prev.value(t)], vec![probe.cur.value(t)]], probe.n0 - 1),
        Kind::Pair => (vec![vec![probe.prev.value(t), probe.cur.value(t)]], probe.n0),
    };
    Orbit { kind: m.kind, probe: probe.clone(), seed_points, seed_index, forward, backward }
}
