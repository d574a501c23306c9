use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{rat, Field, Fp, RatFunc, Rational};
use crate::map::{Direction, EvalError, Kind, MapInstance};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DegreeError {
    #[error("every seed hit a degenerate orbit: {0}")]
    AllSeedsDegenerate(String),
    #[error("need at least 4 iterations, got {0}")]
    TooShort(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeConfig {
    /// Iteration stops once a degree exceeds this.
    pub degree_budget: usize,
    /// Iterates computed over `Q(t)` as a cross-check of the modular run,
    /// while their degree stays within `exact_budget`.
    pub exact_steps: usize,
    pub exact_budget: usize,
}

impl Default for DegreeConfig {
    fn default() -> Self {
        DegreeConfig { degree_budget: 8192, exact_steps: 8, exact_budget: 64 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSequence {
    /// `d_0, d_1, …`; shorter than requested when the degree budget stops
    /// the iteration.
    pub degrees: Vec<usize>,
    pub seeds_used: Vec<u64>,
    /// The initial values `x_0` drawn from the seeds.
    pub initial_values: Vec<Rational>,
    /// Number of leading terms confirmed over `Q(t)`.
    pub exact_prefix: usize,
    pub warnings: Vec<String>,
}

/// The random initial value `x_0` for a seed: `p/q` with `0 < |p| ≤ 10^4`,
/// `1 ≤ q ≤ 10^4`.
pub fn seed_value(seed: u64) -> Rational {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = 0;
    while p == 0 {
        p = rng.gen_range(-10_000i64..=10_000);
    }
    let q = rng.gen_range(1i64..=10_000);
    rat(p, q)
}

type Run = Result<Vec<usize>, (usize, EvalError)>;

/// Upper bound on the degree of a rational function built from operands of
/// known degree.
#[derive(Debug, Clone, Copy)]
struct Bound(usize);

impl crate::map::Domain for Bound {
    type Ctx = ();
    fn constant(_: &Rational, _: &()) -> Result<Self, EvalError> {
        Ok(Bound(0))
    }
    fn add(&self, o: &Self) -> Result<Self, EvalError> {
        Ok(Bound(self.0.saturating_add(o.0)))
    }
    fn sub(&self, o: &Self) -> Result<Self, EvalError> {
        self.add(o)
    }
    fn mul(&self, o: &Self) -> Result<Self, EvalError> {
        self.add(o)
    }
    fn div(&self, o: &Self) -> Result<Self, EvalError> {
        self.add(o)
    }
    fn neg(&self) -> Result<Self, EvalError> {
        Ok(*self)
    }
    fn pow(&self, e: i64) -> Result<Self, EvalError> {
        Ok(Bound(self.0.saturating_mul(e.unsigned_abs() as usize)))
    }
}

/// Steps whose degree bound is this many times the budget are not attempted.
const BOUND_SLACK: usize = 4;

/// Degrees of `x_0 = r`, `x_1 = t`, … over `F(t)` (pair maps:
/// `(X_0, Y_0) = (r, t)`, max of both components).
fn iterate<F: Field>(m: &MapInstance, r: &Rational, n: usize, max_degree: usize) -> Run {
    let env = m.env();
    let x0 = RatFunc::<F>::from_rational(r).ok_or((0, EvalError::Unrepresentable))?;
    let mut state = (x0, RatFunc::<F>::var());
    let deg = |s: &(RatFunc<F>, RatFunc<F>)| match m.kind {
        Kind::Scalar => s.1.degree(),
        Kind::Pair => s.0.degree().max(s.1.degree()),
    };
    let mut out = match m.kind {
        Kind::Scalar => vec![0, 1],
        Kind::Pair => vec![deg(&state)],
    };
    let mut idx = match m.kind {
        Kind::Scalar => 1,
        Kind::Pair => 0,
    };
    while out.len() <= n {
        let (p, q) = (&state.0, &state.1);
        let b = m.step(&env, &(), &(Bound(p.degree()), Bound(q.degree())), idx, Direction::Forward);
        if b.is_ok_and(|b| b.0 .0.max(b.1 .0) > max_degree.saturating_mul(BOUND_SLACK)) {
            break;
        }
        state = m.step(&env, &(), &state, idx, Direction::Forward).map_err(|e| (out.len(), e))?;
        let d = deg(&state);
        if d > max_degree {
            break;
        }
        out.push(d);
        idx += 1;
    }
    Ok(out)
}

/// Degree sequence `d_0..d_n` as the index-wise maximum over seeds, each
/// run modulo `2^61 - 1` with the leading terms checked over `Q(t)`.
pub fn degree_sequence(m: &MapInstance, n: usize, seeds: &[u64], cfg: &DegreeConfig) -> Result<DegreeSequence, DegreeError> {
    if n < 4 {
        return Err(DegreeError::TooShort(n));
    }
    let mut runs: Vec<(u64, Rational, Vec<usize>)> = Vec::new();
    let mut warnings = Vec::new();
    let mut exact_prefix = usize::MAX;
    let mut last_err = String::new();
    for &seed in seeds {
        let r = seed_value(seed);
        let modular = match iterate::<Fp>(m, &r, n, cfg.degree_budget) {
            Ok(d) => d,
            Err((k, e)) => {
                last_err = format!("seed {seed} (x0 = {r}) at n = {k}: {e}");
                warnings.push(format!("skipped {last_err}"));
                continue;
            }
        };
        let exact_n = cfg.exact_steps.min(n);
        let exact = match iterate::<Rational>(m, &r, exact_n, cfg.exact_budget) {
            Ok(d) => d,
            Err((k, e)) => {
                last_err = format!("seed {seed} (x0 = {r}) at n = {k}: {e}");
                warnings.push(format!("skipped {last_err}"));
                continue;
            }
        };
        let common = exact.len().min(modular.len());
        if exact[..common] != modular[..common] {
            warnings.push(format!(
                "seed {seed}: modular degrees {:?} differ from exact degrees {:?}; using exact values",
                &modular[..common],
                &exact[..common]
            ));
        }
        let mut degrees = exact[..common].to_vec();
        degrees.extend_from_slice(&modular[common..]);
        exact_prefix = exact_prefix.min(common);
        runs.push((seed, r, degrees));
    }
    if runs.is_empty() {
        return Err(DegreeError::AllSeedsDegenerate(last_err));
    }
    let len = runs.iter().map(|r| r.2.len()).min().unwrap_or(0);
    if len < n + 1 {
        warnings.push(format!("degree budget {} reached: sequence stops at n = {}", cfg.degree_budget, len - 1));
    }
    let mut degrees = vec![0; len];
    for (i, d) in degrees.iter_mut().enumerate() {
        *d = runs.iter().map(|r| r.2[i]).max().unwrap_or(0);
    }
    for (seed, _, d) in &runs {
        if d[..len] != degrees[..] {
            warnings.push(format!("seed {seed}: degrees {:?} differ from the maximum over seeds", &d[..len]));
        }
    }
    Ok(DegreeSequence {
        degrees,
        seeds_used: runs.iter().map(|r| r.0).collect(),
        initial_values: runs.iter().map(|r| r.1.clone()).collect(),
        exact_prefix,
        warnings,
    })
}

/// Unreduced degree at which [`degree_oracle`] stops.
pub const ORACLE_LIMIT: usize = 1 << 9;

/// Degrees over `Q(t)` without intermediate reduction: each `x_n` is
/// rebuilt from unreduced numerator/denominator pairs and reduced once.
/// Ends early, before an unreduced degree would pass [`ORACLE_LIMIT`].
pub fn degree_oracle(m: &MapInstance, n: usize, x0: &Rational) -> Result<Vec<usize>, EvalError> {
    use crate::exact::Poly;
    #[derive(Clone)]
    struct Frac(Poly<Rational>, Poly<Rational>);
    impl crate::map::Domain for Frac {
        type Ctx = ();
        fn constant(r: &Rational, _: &()) -> Result<Self, EvalError> {
            Ok(Frac(Poly::constant(r.clone()), Poly::one()))
        }
        fn add(&self, o: &Self) -> Result<Self, EvalError> {
            Ok(Frac(self.0.mul(&o.1).add(&o.0.mul(&self.1)), self.1.mul(&o.1)))
        }
        fn sub(&self, o: &Self) -> Result<Self, EvalError> {
            Ok(Frac(self.0.mul(&o.1).sub(&o.0.mul(&self.1)), self.1.mul(&o.1)))
        }
        fn mul(&self, o: &Self) -> Result<Self, EvalError> {
            Ok(Frac(self.0.mul(&o.0), self.1.mul(&o.1)))
        }
        fn div(&self, o: &Self) -> Result<Self, EvalError> {
            if o.0.is_zero() {
                return Err(EvalError::DivisionByZero);
            }
            Ok(Frac(self.0.mul(&o.1), self.1.mul(&o.0)))
        }
        fn neg(&self) -> Result<Self, EvalError> {
            Ok(Frac(self.0.neg(), self.1.clone()))
        }
        fn pow(&self, e: i64) -> Result<Self, EvalError> {
            let (a, b) = if e < 0 { (&self.1, &self.0) } else { (&self.0, &self.1) };
            if e < 0 && a.is_zero() {
                return Err(EvalError::DivisionByZero);
            }
            Ok(Frac(a.pow(e.unsigned_abs()), b.pow(e.unsigned_abs())))
        }
    }
    let env = m.env();
    let mut state = (Frac(Poly::constant(x0.clone()), Poly::one()), Frac(Poly::var(), Poly::one()));
    let mut out = vec![0, 1];
    let mut idx = 1;
    let size = |f: &Frac| Bound(f.0.degree().unwrap_or(0).max(f.1.degree().unwrap_or(0)));
    while out.len() <= n {
        let b = m.step(&env, &(), &(size(&state.0), size(&state.1)), idx, Direction::Forward)?;
        if b.0 .0.max(b.1 .0) > ORACLE_LIMIT {
            break;
        }
        state = m.step(&env, &(), &state, idx, Direction::Forward)?;
        let r = crate::exact::ratfunc_reduce(state.1 .0.clone(), state.1 .1.clone()).ok_or(EvalError::DivisionByZero)?;
        out.push(r.degree());
        idx += 1;
    }
    Ok(out)
}
