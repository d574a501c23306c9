//! Built-in mappings with their expected results.

use std::fmt;
use std::thread;

use crate::analysis::{analyze, AnalysisConfig, AnalysisReport};
use crate::deauto::{deauto_report, factored};
use crate::dsl::{parse_expr, parse_mapfile};
use crate::exact::{rat_i, Field, Rational};
use crate::growth::{entropy_estimate, EntropyConfig, GrowthType};
use crate::map::{check_conjugacy, conjugate_map, transform::rules_equal, MapInstance, StateTransform};
use crate::sample;
use crate::singularity::{
    point_long, point_short, Anticonfinement, Classification, OrbitConfig, PatternEntry, Probe, Seed, SingularityReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Paper,
    Derived,
    Trivial,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::Paper => "PAPER",
            Tag::Derived => "DERIVED",
            Tag::Trivial => "TRIVIAL",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        match s.to_ascii_uppercase().as_str() {
            "PAPER" => Some(Tag::Paper),
            "DERIVED" => Some(Tag::Derived),
            "TRIVIAL" => Some(Tag::Trivial),
            _ => None,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Check {
    SingularValues(Vec<&'static str>),
    Confined { label: &'static str, pattern: &'static str },
    NonConfined { label: &'static str },
    NotAnticonfined { label: &'static str },
    /// Prefixes of the valuation sequences outward from the window.
    Valuations { label: &'static str, forward: Vec<i64>, backward: Vec<i64> },
    /// Every computed valuation on both sides equals `value`.
    ConstantValuation { label: &'static str, value: i64 },
    Growth { label: &'static str, growth: &'static str },
    Window { label: &'static str, points: Vec<&'static str> },
    /// Regular window points depending on the tracker.
    TrackerEntries { label: &'static str, min: usize },
    /// Leading values of the points just before and just after the window.
    Sides { label: &'static str, backward: &'static str, forward: &'static str },
    /// Prefixes of the rendered points outward from the window.
    Tails { label: &'static str, backward: Vec<&'static str>, forward: Vec<&'static str> },
    ProbeRate { label: &'static str, value: f64, tol: f64 },
    RateMatchesEntropy { label: &'static str, tol: f64 },
    Degrees(Vec<usize>),
    Recurrence { display: &'static str, valid_from: Option<usize> },
    DominantRoot { value: f64, tol: f64 },
    Entropy { value: f64, tol: f64 },
    DegreeGrowth(GrowthType),
    Verdict(&'static str),
    VerdictBound { value: f64, tol: f64 },
    /// `d_n / d_{n-1}` within relative tolerance `rel`.
    DegreeRatio { n: usize, value: f64, rel: f64 },
    /// Random-state check of `T ∘ Φ = Ψ ∘ T` against `target` (mapfile).
    Conjugacy { target: &'static str, forward: (&'static str, &'static str), inverse: (&'static str, &'static str), trials: usize },
    /// The pointwise conjugate `t ∘ Φ ∘ t⁻¹` has exactly the rules of `target`.
    ConjugateRules { target: &'static str, t: &'static str, t_inv: &'static str },
    Deauto {
        param: &'static str,
        n0: i64,
        autonomous: Option<&'static str>,
        factored: Option<&'static str>,
        root: Option<(f64, f64)>,
        loglog: Option<(f64, f64)>,
    },
    /// Log-log rate, degree entropy of `autonomous` and the growth rate of
    /// its probe at `label` agree within `tol` of `value`.
    EntropyAgreement { param: &'static str, autonomous: &'static str, label: &'static str, value: f64, tol: f64 },
    ParamValue { param: &'static str, n: i64, value: i64 },
}

impl Check {
    fn needs_report(&self) -> bool {
        !matches!(
            self,
            Check::Conjugacy { .. }
                | Check::ConjugateRules { .. }
                | Check::Deauto { .. }
                | Check::EntropyAgreement { .. }
                | Check::ParamValue { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub tag: Tag,
    pub text: &'static str,
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub description: &'static str,
    pub source: String,
    /// `None` runs the default probes.
    pub probes: Option<Vec<Probe>>,
    pub expectations: Vec<Expectation>,
}

impl CatalogEntry {
    pub fn map(&self) -> MapInstance {
        parse_mapfile(&self.source).expect("catalog sources parse").remove(0)
    }
}

fn e(tag: Tag, text: &'static str, check: Check) -> Expectation {
    Expectation { tag, text, check }
}

fn probe(prev: Seed, cur: Seed, n0: i64) -> Probe {
    Probe::new(prev, cur, n0)
}

const TSUDA: &str = "map \"tsuda\" { kind: scalar forward: y*(x - 1/x) }";
const DP2_AUTO: &str = "map \"dp2-auto\" { kind: scalar param a: const 1 forward: 2*a*x/(x^2-1) - y }";
const K2: &str = "map \"k2\" { kind: scalar forward: x^2/y }";
const K3: &str = "map \"k3\" { kind: scalar forward: x^3/y }";
const PROJECTIVE: &str =
    "map \"projective\" { kind: pair param a: const 17/5 forward: (a*(X-1)/X, a*(Y-1)/Y) backward: (a/(a-X), a/(a-Y)) }";
const ANTIMAC: &str = "map \"antimac\" { kind: pair param a: linrec coeffs=[2, -1] init=[1, 2]
  forward: (X^2*Y, 2*a/(X^2*Y*(X^4*Y^2-1)) - 1/(X^3*Y^2))
  backward: (2*a*X/(X^2-1) - Y*X^2, X/(2*a*X/(X^2-1) - Y*X^2)^2) }";

/// Pseudo-random nonzero parameter values `a_{-60}..a_{100}`.
fn generic_values() -> String {
    let mut rng = sample::rng(11);
    let vals: Vec<String> = (0..161)
        .map(|_| {
            let r = sample::random_rational(&mut rng);
            if Field::is_zero(&r) { rat_i(1) } else { r }.to_string()
        })
        .collect();
    vals.join(", ")
}

pub fn catalog() -> Vec<CatalogEntry> {
    use Check::*;
    use Tag::*;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let lam3 = (3.0 + 5f64.sqrt()) / 2.0;
    let inf_probe = || probe(Seed::Tracker, Seed::eps_pow(-1), 1);
    let near = |b: i64| Seed::near(rat_i(b));
    vec![
        CatalogEntry {
            key: "eq1-linear",
            description: "linear map x_{n+1} + x_{n-1} = 1 + (17/5) x_n",
            source: "map \"eq1-linear\" { kind: scalar param alpha: const 1 param beta: const 17/5 forward: alpha + beta*x - y }".into(),
            probes: Some(vec![inf_probe()]),
            expectations: vec![
                e(Paper, "probe (c, 1/ε) keeps valuation -1", ConstantValuation { label: "x_0 = c, x_1 = ε^-1", value: -1 }),
                e(Paper, "probe growth is zero", Growth { label: "x_0 = c, x_1 = ε^-1", growth: "zero" }),
                e(Paper, "entropy 0", Entropy { value: 0.0, tol: 1e-12 }),
            ],
        },
        CatalogEntry {
            key: "henon",
            description: "Hénon map x_{n+1} + x_{n-1} = 1 + x_n^2",
            source: "map \"henon\" { kind: scalar param alpha: const 1 param beta: const 1 forward: alpha + beta*x^2 - y }".into(),
            probes: Some(vec![inf_probe()]),
            expectations: vec![
                e(Paper, "no enterable singular values", SingularValues(vec![])),
                e(
                    Paper,
                    "probe (c, 1/ε) valuations double both ways",
                    Valuations {
                        label: "x_0 = c, x_1 = ε^-1",
                        forward: vec![-1, -2, -4, -8, -16, -32, -64],
                        backward: vec![-1, -2, -4, -8, -16, -32, -64],
                    },
                ),
                e(Paper, "verdict NON_INTEGRABLE", Verdict("NON_INTEGRABLE")),
                e(Paper, "entropy lower bound log 2", VerdictBound { value: 2f64.ln(), tol: 1e-12 }),
                e(Derived, "degrees 2^n", Degrees(vec![0, 1, 2, 4, 8, 16, 32, 64, 128])),
            ],
        },
        CatalogEntry {
            key: "eq3",
            description: "linearisable (x_{n+1} + x_n)(x_n + x_{n-1}) = a (x_n^2 - 1), a = 17/5",
            source: "map \"eq3\" { kind: scalar param a: const 17/5 forward: a*(x^2-1)/(x+y) - x }".into(),
            probes: Some(vec![]),
            expectations: vec![
                e(Paper, "x = 1 confines as {1, -1}", Confined { label: "x = 1", pattern: "{1, -1}" }),
                e(Paper, "x = -1 confines as {-1, 1}", Confined { label: "x = -1", pattern: "{-1, 1}" }),
                e(Paper, "infinity is anticonfined with valuation -1", ConstantValuation { label: "x = ∞", value: -1 }),
                e(Paper, "regular window -x0, x0", Window { label: "x = ∞", points: vec!["-c", "c"] }),
                e(
                    Paper,
                    "equivalent to the projective map in u = (x+y)/(x+1), v = (x+y)/(x-1)",
                    Conjugacy {
                        target: PROJECTIVE,
                        forward: ("(X+Y)/(X+1)", "(X+Y)/(X-1)"),
                        inverse: ("(X+Y)/(Y-X)", "X*((X+Y)/(Y-X) + 1) - (X+Y)/(Y-X)"),
                        trials: 100,
                    },
                ),
            ],
        },
        CatalogEntry {
            key: "cqiii",
            description: "triangular map (x, y) -> ((x+y)/(xy+1), a y), a = 17/5",
            source: "map \"cqiii\" { kind: pair param a: const 17/5 forward: ((X+Y)/(X*Y+1), a*Y) backward: ((Y/a - X)/(X*Y/a - 1), Y/a) }".into(),
            probes: Some(vec![
                probe(Seed::Tracker, near(1), 0),
                probe(Seed::Tracker, near(-1), 0),
                probe(Seed::eps(), Seed::Tracker, 0),
            ]),
            expectations: vec![
                e(Paper, "y = 1 is not confined", NonConfined { label: "(X, Y)_0 = (c, 1 + ε)" }),
                e(Paper, "y = -1 is not confined", NonConfined { label: "(X, Y)_0 = (c, -1 + ε)" }),
                e(Paper, "no anticonfinement at the fixed point", NotAnticonfined { label: "(X, Y)_0 = (ε, c)" }),
                e(Derived, "linear degree growth", DegreeGrowth(GrowthType::Polynomial(1))),
            ],
        },
        CatalogEntry {
            key: "cqiv",
            description: "z-variable form (y, z) of the triangular map, z = x/y^2",
            source: "map \"cqiv\" { kind: pair param a: const 17/5 forward: (a*X, (Y*X+1)/(a^2*X*(Y*X^3+1)))
              backward: (X/a, ((X/a - Y*X^2)/(Y*X^2*X/a - 1))/(X/a)^2) }"
                .into(),
            probes: Some(vec![probe(Seed::eps(), Seed::Tracker, 0), probe(near(1), Seed::Tracker, 0)]),
            expectations: vec![
                e(Paper, "(ε, z0) is anticonfined with (ε, 1/ε) both ways", ConstantValuation { label: "(X, Y)_0 = (ε, c)", value: -1 }),
                e(Paper, "window (ε, z0)", Window { label: "(X, Y)_0 = (ε, c)", points: vec!["(ε, c)"] }),
                e(Paper, "anticonfined growth zero", Growth { label: "(X, Y)_0 = (ε, c)", growth: "zero" }),
                e(Paper, "y = 1 is not confined", NonConfined { label: "(X, Y)_0 = (1 + ε, c)" }),
            ],
        },
        CatalogEntry {
            key: "cqii",
            description: "linearisable x_{n+1} x_{n-1} = x_n^2 - 1",
            source: "map \"cqii\" { kind: scalar forward: (x^2-1)/y }".into(),
            probes: Some(vec![]),
            expectations: vec![
                e(Paper, "x = 1 confines as {1, 0, -1}", Confined { label: "x = 1", pattern: "{1, 0, -1}" }),
                e(Paper, "x = -1 confines as {-1, 0, 1}", Confined { label: "x = -1", pattern: "{-1, 0, 1}" }),
                e(
                    Paper,
                    "infinity anticonfined, poles growing linearly",
                    Valuations { label: "x = ∞", forward: vec![-1, -2, -3, -4], backward: vec![-1, -2, -3, -4] },
                ),
                e(Paper, "window -1/x0, ε, x0", Window { label: "x = ∞", points: vec!["-1/c", "ε", "c"] }),
                e(Paper, "linear anticonfined growth", Growth { label: "x = ∞", growth: "linear" }),
                e(Paper, "verdict LINEARISABLE", Verdict("LINEARISABLE")),
                e(Derived, "linear degree growth", DegreeGrowth(GrowthType::Polynomial(1))),
            ],
        },
        CatalogEntry {
            key: "k2",
            description: "x_{n+1} x_{n-1} = x_n^2",
            source: K2.into(),
            probes: Some(vec![probe(Seed::eps(), Seed::Tracker, 0)]),
            expectations: vec![
                e(
                    Paper,
                    "ε^k, …, ε, x0, 1/ε, …, 1/ε^k",
                    Valuations { label: "x_-1 = ε, x_0 = c", forward: vec![-1, -2, -3, -4], backward: vec![1, 2, 3, 4] },
                ),
                e(Paper, "linear anticonfined growth", Growth { label: "x_-1 = ε, x_0 = c", growth: "linear" }),
                e(Paper, "zero entropy", Entropy { value: 0.0, tol: 1e-12 }),
                e(Derived, "linear degree growth", DegreeGrowth(GrowthType::Polynomial(1))),
            ],
        },
        CatalogEntry {
            key: "k3",
            description: "x_{n+1} x_{n-1} = x_n^3",
            source: K3.into(),
            probes: Some(vec![probe(Seed::eps(), Seed::Tracker, 0)]),
            expectations: vec![
                e(
                    Paper,
                    "exponents 1, 3, 8, 21 both ways",
                    Valuations { label: "x_-1 = ε, x_0 = c", forward: vec![-1, -3, -8, -21], backward: vec![1, 3, 8, 21] },
                ),
                e(Paper, "degree recursion d_{n+1} + d_{n-1} = 3 d_n", Recurrence { display: "d_{n+1} = 3 d_n - d_{n-1}", valid_from: None }),
                e(Derived, "entropy log((3+√5)/2)", Entropy { value: lam3.ln(), tol: 1e-6 }),
                e(Derived, "probe rate log((3+√5)/2)", ProbeRate { label: "x_-1 = ε, x_0 = c", value: lam3.ln(), tol: 1e-6 }),
                e(Paper, "verdict NON_INTEGRABLE", Verdict("NON_INTEGRABLE")),
            ],
        },
        CatalogEntry {
            key: "tanh2",
            description: "tanh form of the k = 2 map",
            source: "map \"tanh2\" { kind: scalar forward: (2*x/(1+x^2) - y)/(1 - 2*x*y/(1+x^2)) }".into(),
            probes: Some(vec![]),
            expectations: vec![
                e(Paper, "x = 1 is anticonfined", Growth { label: "x = 1", growth: "linear" }),
                e(Paper, "pattern …, -1, -1, x0, 1, 1, …", Sides { label: "x = 1", backward: "-1", forward: "1" }),
                e(
                    Paper,
                    "x = (1-y)/(1+y) turns it into x_{n+1} x_{n-1} = x_n^2",
                    ConjugateRules { target: K2, t: "(1-X)/(1+X)", t_inv: "(1-X)/(1+X)" },
                ),
                e(Derived, "linear degree growth", DegreeGrowth(GrowthType::Polynomial(1))),
            ],
        },
        CatalogEntry {
            key: "tanh3",
            description: "tanh form of the k = 3 map",
            source: "map \"tanh3\" { kind: scalar forward: ((x^3+3*x)/(1+3*x^2) - y)/(1 - (x^3+3*x)*y/(1+3*x^2)) }".into(),
            probes: Some(vec![]),
            expectations: vec![
                e(
                    Paper,
                    "x = (1-y)/(1+y) turns it into x_{n+1} x_{n-1} = x_n^3",
                    ConjugateRules { target: K3, t: "(1-X)/(1+X)", t_inv: "(1-X)/(1+X)" },
                ),
                e(Derived, "entropy log((3+√5)/2)", Entropy { value: lam3.ln(), tol: 1e-6 }),
            ],
        },
        CatalogEntry {
            key: "tsuda",
            description: "confined but non-integrable x_{n+1} = x_{n-1} (x_n - 1/x_n)",
            source: TSUDA.into(),
            probes: Some(vec![]),
            expectations: vec![
                e(
                    Paper,
                    "degrees 0, 1, 2, 4, 8, 14, 24, …",
                    Degrees(vec![0, 1, 2, 4, 8, 14, 24, 40, 66, 108, 176, 286, 464, 752, 1218]),
                ),
                e(Paper, "d_{n+1} = 2 d_n - d_{n-2} from n = 4", Recurrence { display: "d_{n+1} = 2 d_n - d_{n-2}", valid_from: Some(4) }),
                e(Paper, "dominant root (1+√5)/2", DominantRoot { value: phi, tol: 1e-9 }),
                e(Paper, "entropy log((1+√5)/2)", Entropy { value: phi.ln(), tol: 1e-6 }),
                e(Paper, "x = 1 confines as {1, 0, ∞, -1}", Confined { label: "x = 1", pattern: "{1, 0, ∞, -1}" }),
                e(Paper, "x = -1 confines as {-1, 0, ∞, 1}", Confined { label: "x = -1", pattern: "{-1, 0, ∞, 1}" }),
                e(
                    Paper,
                    "(κ, ε) anticonfined with Fibonacci exponents",
                    Valuations {
                        label: "x = 0",
                        forward: vec![-1, -1, -2, -3, -5, -8, -13],
                        backward: vec![1, 1, 2, 3, 5, 8, 13],
                    },
                ),
                e(Paper, "two regular entries κ, -κ in the window", TrackerEntries { label: "x = 0", min: 2 }),
                e(Paper, "anticonfined rate equals the entropy", RateMatchesEntropy { label: "x = 0", tol: 1e-6 }),
                e(Paper, "verdict NON_INTEGRABLE", Verdict("NON_INTEGRABLE")),
            ],
        },
        CatalogEntry {
            key: "tsuda-deauto",
            description: "x_{n+1} = x_{n-1} (x_n - a_n^2/x_n) with a_{n+2} = a_n^2 a_{n-1}",
            source: "map \"tsuda-deauto\" { kind: scalar param a: mulrec exponents=[0, 2, 1] init=[2, 2, 2] forward: y*(x - a^2/x) }".into(),
            probes: Some(vec![]),
            expectations: vec![
                e(
                    Paper,
                    "confines with the autonomous pattern shape",
                    Deauto {
                        param: "a",
                        n0: 0,
                        autonomous: Some(TSUDA),
                        factored: Some("(λ + 1)(λ^2 - λ - 1)"),
                        root: None,
                        loglog: Some((phi.ln(), 1e-9)),
                    },
                ),
                e(
                    Paper,
                    "log log a_n / n, degree entropy and anticonfined rate agree",
                    EntropyAgreement { param: "a", autonomous: TSUDA, label: "x = 0", value: phi.ln(), tol: 1e-6 },
                ),
                e(Derived, "a_3 = 2^3 by the exponent recursion", ParamValue { param: "a", n: 3, value: 8 }),
            ],
        },
        CatalogEntry {
            key: "dp2-generic",
            description: "x_{n+1} + x_{n-1} = 2 a_n x_n/(x_n^2 - 1), a_n pseudo-random",
            source: format!(
                "map \"dp2-generic\" {{ kind: scalar param a: list [{}] from=-60 forward: 2*a*x/(x^2-1) - y }}",
                generic_values()
            ),
            probes: Some(vec![]),
            expectations: vec![
                e(Paper, "x = 1 is not confined", NonConfined { label: "x = 1" }),
                e(Paper, "x = -1 is not confined", NonConfined { label: "x = -1" }),
            ],
        },
        CatalogEntry {
            key: "dp2-linear",
            description: "discrete Painlevé II, a_n = 1 + n",
            source: "map \"dp2-linear\" { kind: scalar param a: linrec coeffs=[2, -1] init=[1, 2] forward: 2*a*x/(x^2-1) - y }".into(),
            probes: None,
            expectations: vec![
                e(Paper, "x = 1 confines as {1, ∞, -1}", Confined { label: "x = 1", pattern: "{1, ∞, -1}" }),
                e(Paper, "x = -1 confines as {-1, ∞, 1}", Confined { label: "x = -1", pattern: "{-1, ∞, 1}" }),
                e(Paper, "quadratic degree growth", DegreeGrowth(GrowthType::Polynomial(2))),
                e(
                    Paper,
                    "patterns match the autonomous ones",
                    Deauto { param: "a", n0: 1, autonomous: Some(DP2_AUTO), factored: None, root: Some((1.0, 1e-12)), loglog: None },
                ),
            ],
        },
        CatalogEntry {
            key: "dp2-late",
            description: "the same map with a_{n+4} - 2a_{n+3} + a_{n+2} - 2a_{n+1} + a_n = 0",
            source: "map \"dp2-late\" { kind: scalar param a: linrec coeffs=[2, -1, 2, -1] init=[1, 2, 5, 3] forward: 2*a*x/(x^2-1) - y }".into(),
            probes: None,
            expectations: vec![
                e(Paper, "x = 1 still confines", Confined { label: "x = 1", pattern: "{1, ∞, -1, ∞, 1}" }),
                e(Paper, "x = -1 still confines", Confined { label: "x = -1", pattern: "{-1, ∞, 1, ∞, -1}" }),
                e(
                    Paper,
                    "constraint root 1.8832",
                    Deauto { param: "a", n0: 1, autonomous: None, factored: None, root: Some((1.8832, 5e-4)), loglog: None },
                ),
                e(Paper, "degree growth root 1.8832", DominantRoot { value: 1.8832, tol: 5e-4 }),
                e(Derived, "d_12 / d_11 near 1.8832", DegreeRatio { n: 12, value: 1.8832, rel: 0.1 }),
                e(Paper, "verdict NON_INTEGRABLE", Verdict("NON_INTEGRABLE")),
            ],
        },
        CatalogEntry {
            key: "dp2-pair",
            description: "discrete Painlevé II on (x_n, y_n), a_n = 1 + n",
            source: "map \"dp2-pair\" { kind: pair param a: linrec coeffs=[2, -1] init=[1, 2] forward: (Y, 2*a*Y/(Y^2-1) - X) backward: (2*a*X/(X^2-1) - Y, X) }".into(),
            probes: Some(vec![probe(Seed::Tracker, near(1), 0), probe(Seed::Tracker, near(-1), 0)]),
            expectations: vec![
                e(Paper, "y = 1 confines", Confined { label: "(X, Y)_0 = (c, 1 + ε)", pattern: "{(c, 1), (1, ∞), (∞, -1)}" }),
                e(Paper, "y = -1 confines", Confined { label: "(X, Y)_0 = (c, -1 + ε)", pattern: "{(c, -1), (-1, ∞), (∞, 1)}" }),
                e(Paper, "quadratic degree growth", DegreeGrowth(GrowthType::Polynomial(2))),
                e(
                    Paper,
                    "z = y/x^2 gives the transformed map",
                    Conjugacy { target: ANTIMAC, forward: ("X", "Y/X^2"), inverse: ("X", "Y*X^2"), trials: 100 },
                ),
            ],
        },
        CatalogEntry {
            key: "antimac",
            description: "dPII in (x, z = y/x^2), a_n = 1 + n",
            source: ANTIMAC.into(),
            probes: Some(vec![probe(Seed::eps(), Seed::Tracker, 25)]),
            expectations: vec![
                e(
                    Paper,
                    "(ε, z0) is followed by (ε^2, ε^-3) then (ε, ε^-1)",
                    Tails {
                        label: "(X, Y)_25 = (ε, c)",
                        backward: vec!["(ε, ε^-1)", "(ε, ε^-1)", "(ε, ε^-1)"],
                        forward: vec!["(ε^2, ε^-3)", "(ε, ε^-1)", "(ε, ε^-1)"],
                    },
                ),
                e(Paper, "window (ε, z0)", Window { label: "(X, Y)_25 = (ε, c)", points: vec!["(ε, c)"] }),
                e(Paper, "anticonfined growth zero", Growth { label: "(X, Y)_25 = (ε, c)", growth: "zero" }),
            ],
        },
    ]
}

pub fn lookup(key: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.key == key)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn report<'a>(r: &'a AnalysisReport, label: &str) -> Result<&'a SingularityReport, Outcome> {
    r.find(label).ok_or_else(|| outcome(false, format!("no report labelled {label}")))
}

fn anti<'a>(r: &'a AnalysisReport, label: &str) -> Result<&'a Anticonfinement, Outcome> {
    match &report(r, label)?.classification {
        Classification::Anticonfined(a) => Ok(a),
        other => Err(outcome(false, format!("{label} is {}", other.name()))),
    }
}

fn close(got: f64, want: f64, tol: f64) -> Outcome {
    outcome((got - want).abs() <= tol, format!("{got:.12} vs {want:.12} (tol {tol:e})"))
}

fn map_of(src: &str) -> Result<MapInstance, Outcome> {
    parse_mapfile(src).map(|mut v| v.remove(0)).map_err(|e| outcome(false, format!("parse: {e}")))
}

fn expr(src: &str) -> Result<crate::map::Expr, Outcome> {
    parse_expr(src).map_err(|e| outcome(false, format!("parse: {e}")))
}

fn evaluate(entry: &CatalogEntry, check: &Check, r: Option<&AnalysisReport>, ocfg: &OrbitConfig) -> Result<Outcome, Outcome> {
    let rep = || r.ok_or_else(|| outcome(false, "no analysis report"));
    let entropy = || rep()?.entropy.as_ref().ok_or_else(|| outcome(false, "no degree data"));
    Ok(match check {
        Check::SingularValues(want) => {
            let got: Vec<String> = rep()?.singular_values.iter().map(|v| v.to_string()).collect();
            outcome(got == *want, format!("{got:?}"))
        }
        Check::Confined { label, pattern } => {
            let got = report(rep()?, label)?.classification.pattern_short();
            outcome(got.as_deref() == Some(*pattern), format!("{}", got.unwrap_or_else(|| "not confined".into())))
        }
        Check::NonConfined { label } => {
            let c = &report(rep()?, label)?.classification;
            outcome(matches!(c, Classification::NonConfined), c.name())
        }
        Check::NotAnticonfined { label } => {
            let c = &report(rep()?, label)?.classification;
            outcome(!matches!(c, Classification::Anticonfined(_)), c.name())
        }
        Check::Valuations { label, forward, backward } => {
            let a = anti(rep()?, label)?;
            let ok = a.forward_valuations.starts_with(forward) && a.backward_valuations.starts_with(backward);
            outcome(ok, format!("forward {:?}, backward {:?}", a.forward_valuations, a.backward_valuations))
        }
        Check::ConstantValuation { label, value } => {
            let a = anti(rep()?, label)?;
            let all = a.forward_valuations.iter().chain(&a.backward_valuations);
            let ok = a.forward_valuations.len() >= 6 && a.backward_valuations.len() >= 6 && all.clone().all(|v| v == value);
            outcome(ok, format!("forward {:?}, backward {:?}", a.forward_valuations, a.backward_valuations))
        }
        Check::Growth { label, growth } => {
            let a = anti(rep()?, label)?;
            outcome(a.growth.name() == *growth, a.growth.to_string())
        }
        Check::Window { label, points } => {
            let a = anti(rep()?, label)?;
            let got: Vec<String> = a.window.iter().map(point_long).collect();
            outcome(got == *points, format!("{got:?}"))
        }
        Check::TrackerEntries { label, min } => {
            let a = anti(rep()?, label)?;
            let k = a
                .window
                .iter()
                .filter(|p| p.iter().any(|e| matches!(e, PatternEntry::Regular { depends_on_tracker: true, .. })))
                .count();
            outcome(k >= *min, format!("{k} in {}", a.window.iter().map(point_long).collect::<Vec<_>>().join(", ")))
        }
        Check::Sides { label, backward, forward } => {
            let a = anti(rep()?, label)?;
            let b: Vec<String> = a.backward.iter().map(point_short).collect();
            let f: Vec<String> = a.forward.iter().map(point_short).collect();
            let ok = !b.is_empty() && !f.is_empty() && b.iter().all(|s| s == backward) && f.iter().all(|s| s == forward);
            outcome(ok, format!("backward {b:?}, forward {f:?}"))
        }
        Check::Tails { label, backward, forward } => {
            let a = anti(rep()?, label)?;
            let b: Vec<String> = a.backward.iter().map(point_long).collect();
            let f: Vec<String> = a.forward.iter().map(point_long).collect();
            let ok = b.len() >= backward.len()
                && f.len() >= forward.len()
                && b.iter().zip(backward).all(|(x, y)| x == y)
                && f.iter().zip(forward).all(|(x, y)| x == y);
            outcome(ok, format!("backward {:?}, forward {:?}", &b[..b.len().min(4)], &f[..f.len().min(4)]))
        }
        Check::ProbeRate { label, value, tol } => {
            let a = anti(rep()?, label)?;
            match a.growth.rate() {
                Some(g) => close(g, *value, *tol),
                None => outcome(false, a.growth.to_string()),
            }
        }
        Check::RateMatchesEntropy { label, tol } => {
            let a = anti(rep()?, label)?;
            let e = entropy()?;
            match a.growth.rate() {
                Some(g) => close(g, e.entropy, *tol),
                None => outcome(false, a.growth.to_string()),
            }
        }
        Check::Degrees(want) => {
            let d = &entropy()?.degrees.degrees;
            outcome(d.starts_with(want), format!("{d:?}"))
        }
        Check::Recurrence { display, valid_from } => match &entropy()?.recurrence {
            Some(rec) => {
                let ok = rec.display() == *display && valid_from.map_or(true, |v| v == rec.valid_from);
                outcome(ok, format!("{} from n = {}", rec.display(), rec.valid_from))
            }
            None => outcome(false, "no recurrence"),
        },
        Check::DominantRoot { value, tol } => match &entropy()?.dominant_root {
            Some(root) => close(root.mid_f64(), *value, *tol),
            None => outcome(false, "no dominant root"),
        },
        Check::Entropy { value, tol } => close(entropy()?.entropy, *value, *tol),
        Check::DegreeGrowth(g) => {
            let got = entropy()?.growth_type;
            outcome(got == *g, got.to_string())
        }
        Check::Verdict(code) => {
            let v = &rep()?.verdict.verdict;
            outcome(v.code() == *code, v.to_string())
        }
        Check::VerdictBound { value, tol } => match rep()?.verdict.verdict {
            crate::singularity::Verdict::NonIntegrable { lower_bound } => close(lower_bound, *value, *tol),
            ref v => outcome(false, v.to_string()),
        },
        Check::DegreeRatio { n, value, rel } => {
            let d = &entropy()?.degrees.degrees;
            if d.len() <= *n || d[n - 1] == 0 {
                return Ok(outcome(false, format!("{d:?}")));
            }
            let ratio = d[*n] as f64 / d[n - 1] as f64;
            outcome((ratio / value - 1.0).abs() <= *rel, format!("{} / {} = {ratio:.6}", d[*n], d[n - 1]))
        }
        Check::Conjugacy { target, forward, inverse, trials } => {
            let t = StateTransform::new((expr(forward.0)?, expr(forward.1)?), (expr(inverse.0)?, expr(inverse.1)?));
            match check_conjugacy(&entry.map(), &t, &map_of(target)?, *trials, 0) {
                Ok(o) => outcome(
                    o.holds && o.checked >= *trials,
                    format!("{} states, counterexample {:?}", o.checked, o.counterexample),
                ),
                Err(e) => outcome(false, e.to_string()),
            }
        }
        Check::ConjugateRules { target, t, t_inv } => {
            let tr = StateTransform::pointwise(expr(t)?, expr(t_inv)?);
            let target = map_of(target)?;
            match conjugate_map(&entry.map(), &tr) {
                Ok(c) => match rules_equal(&c.forward, &target.forward, &target.param_names()) {
                    Ok(eq) => outcome(eq, format!("{}", crate::dsl::print_map(&c).trim())),
                    Err(e) => outcome(false, e.to_string()),
                },
                Err(e) => outcome(false, e.to_string()),
            }
        }
        Check::Deauto { param, n0, autonomous, factored: fac, root, loglog } => {
            let auto = autonomous.map(map_of).transpose()?;
            let d = deauto_report(&entry.map(), param, *n0, auto.as_ref(), ocfg).map_err(|e| outcome(false, e.to_string()))?;
            let mut ok = d.confinement_verified;
            let mut notes = d.consistency.clone();
            if let Some(f) = fac {
                ok &= d.char_poly_factored == *f;
                notes.push(format!("{} = {}", d.char_poly.display_with("λ"), d.char_poly_factored));
            }
            if let Some((v, tol)) = root {
                let m = d.dominant_root.mid_f64();
                ok &= (m - v).abs() <= *tol;
                notes.push(format!("root {m:.6}"));
            }
            if let Some((v, tol)) = loglog {
                let rate = d.loglog.as_ref().map_or(f64::NAN, |l| l.rate);
                ok &= (rate - v).abs() <= *tol;
                notes.push(format!("log log rate {rate:.12}"));
            }
            outcome(ok, notes.join("; "))
        }
        Check::EntropyAgreement { param, autonomous, label, value, tol } => {
            let m = entry.map();
            let d = deauto_report(&m, param, 0, None, ocfg).map_err(|e| outcome(false, e.to_string()))?;
            let ll = d.loglog.as_ref().map_or(f64::NAN, |l| l.rate);
            let auto = map_of(autonomous)?;
            let ent = entropy_estimate(&auto, &[0, 1, 2], &EntropyConfig::default())
                .map(|e| e.entropy)
                .map_err(|e| outcome(false, e.to_string()))?;
            let a = analyze(&auto, Some(&[]), &AnalysisConfig::default());
            let rate = anti(&a, label)?.growth.rate().unwrap_or(f64::NAN);
            let ok = [ll, ent, rate].iter().all(|x| (x - value).abs() <= *tol);
            outcome(ok, format!("log log {ll:.9}, degrees {ent:.9}, anticonfined {rate:.9}"))
        }
        Check::ParamValue { param, n, value } => {
            let m = entry.map();
            let got = m.env().value(param, *n).map_err(|e| outcome(false, e.to_string()))?;
            outcome(got == Rational::from_integer((*value).into()), format!("a_{n} = {got}"))
        }
    })
}

#[derive(Debug, Clone)]
pub struct EntryResult {
    pub key: &'static str,
    pub report: Option<AnalysisReport>,
    pub outcomes: Vec<(Expectation, Outcome)>,
}

impl EntryResult {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|(_, o)| o.pass)
    }
}

/// Analyse one entry and evaluate its expectations carrying a tag in `tags`
/// (all tags when empty).
pub fn run_entry(entry: &CatalogEntry, cfg: &AnalysisConfig, tags: &[Tag]) -> EntryResult {
    let selected: Vec<&Expectation> =
        entry.expectations.iter().filter(|x| tags.is_empty() || tags.contains(&x.tag)).collect();
    let report = if selected.iter().any(|x| x.check.needs_report()) {
        Some(analyze(&entry.map(), entry.probes.as_deref(), cfg))
    } else {
        None
    };
    let ocfg = cfg.orbit();
    let outcomes = selected
        .into_iter()
        .map(|x| {
            let o = evaluate(entry, &x.check, report.as_ref(), &ocfg).unwrap_or_else(|o| o);
            (x.clone(), o)
        })
        .collect();
    EntryResult { key: entry.key, report, outcomes }
}

/// Every entry, concurrently; results in catalog order.
pub fn run_all(entries: &[CatalogEntry], cfg: &AnalysisConfig, tags: &[Tag]) -> Vec<EntryResult> {
    thread::scope(|s| {
        let handles: Vec<_> = entries.iter().map(|e| s.spawn(move || run_entry(e, cfg, tags))).collect();
        handles.into_iter().map(|h| h.join().expect("catalog worker")).collect()
    })
}

/// `p` factored over the rationals; re-exported for reports.
pub fn factored_char_poly(p: &crate::exact::Poly<Rational>) -> String {
    factored(p, "λ").unwrap_or_else(|_| p.display_with("λ"))
}
