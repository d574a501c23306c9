//! The full pipeline: singular values, their classification, probes for
//! anticonfinement, degree growth and the verdict.

use crate::growth::{entropy_estimate, EntropyConfig, EntropyEstimate, GrowthType};
use crate::map::{Kind, MapInstance};
use crate::singularity::{
    analyze_probe, classify_singularity, find_singular_values, singular_probe, verdict, Classification,
    EntropyEvidence, GrowthClass, OrbitConfig, Probe, Seed, SingularValue, SingularityReport, VerdictReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisConfig {
    /// Degree iterations.
    pub steps: usize,
    /// ε-orbit length each way.
    pub horizon: usize,
    /// Initial Laurent truncation.
    pub trunc: usize,
    /// Number of random initial values for the degree sequence.
    pub seeds: usize,
    /// First seed.
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig { steps: 14, horizon: 20, trunc: 8, seeds: 3, seed: 0 }
    }
}

impl AnalysisConfig {
    pub fn orbit(&self) -> OrbitConfig {
        let d = OrbitConfig::default();
        OrbitConfig { horizon: self.horizon, trunc: self.trunc, trunc_cap: d.trunc_cap.max(self.trunc), ..d }
    }

    pub fn seed_list(&self) -> Vec<u64> {
        (0..self.seeds.max(1) as u64).map(|i| self.seed.wrapping_add(i)).collect()
    }

    pub fn entropy(&self) -> EntropyConfig {
        let d = EntropyConfig::default();
        EntropyConfig { steps: self.steps, extended_steps: self.steps.max(d.extended_steps), ..d }
    }
}

/// Lattice index at which singular values are entered.
pub const ENTRY_INDEX: i64 = 1;

/// Probes tried when none are given: `(c, 1/ε)` and `(c, ε)` for scalar
/// maps; pair maps also get `(ε, c)`.
pub fn default_probes(kind: Kind) -> Vec<Probe> {
    let mut out = vec![
        Probe::new(Seed::Tracker, Seed::eps_pow(-1), ENTRY_INDEX),
        Probe::new(Seed::Tracker, Seed::eps(), ENTRY_INDEX),
    ];
    if kind == Kind::Pair {
        out.push(Probe::new(Seed::eps(), Seed::Tracker, ENTRY_INDEX));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub name: String,
    pub kind: Kind,
    pub config: AnalysisConfig,
    pub singular_values: Vec<SingularValue>,
    /// One per singular value, in the order of `singular_values`.
    pub singularities: Vec<SingularityReport>,
    pub probes: Vec<SingularityReport>,
    pub entropy: Option<EntropyEstimate>,
    pub verdict: VerdictReport,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn all_reports(&self) -> impl Iterator<Item = &SingularityReport> {
        self.singularities.iter().chain(&self.probes)
    }

    pub fn find(&self, label: &str) -> Option<&SingularityReport> {
        self.all_reports().find(|r| r.label == label)
    }

    /// Some classification or the degree growth was left undetermined by
    /// the precision or coefficient budgets.
    pub fn limited(&self) -> bool {
        let short = |r: &SingularityReport| {
            let undecided = match &r.classification {
                Classification::NonConfined => true,
                Classification::Anticonfined(a) => matches!(a.growth, GrowthClass::Unclassified),
                Classification::Confined { .. } => false,
            };
            undecided && r.warnings.iter().any(|w| w.contains("stopped")) && r.steps_forward.min(r.steps_backward) < r.horizon / 2
        };
        self.all_reports().any(short) || self.entropy.is_none()
    }

    pub fn exit_code(&self) -> i32 {
        if self.limited() {
            3
        } else {
            0
        }
    }
}

fn label_of(v: &SingularValue) -> String {
    match v {
        SingularValue::Finite(r) => format!("x = {r}"),
        SingularValue::Infinity => "x = ∞".to_string(),
    }
}

/// Run every stage on `m`. `probes` defaults to [`default_probes`]; probes
/// that coincide with the entry of a singular value are skipped.
pub fn analyze(m: &MapInstance, probes: Option<&[Probe]>, cfg: &AnalysisConfig) -> AnalysisReport {
    let ocfg = cfg.orbit();
    let mut warnings = Vec::new();
    let singular_values = match m.kind {
        Kind::Scalar => match find_singular_values(m, ENTRY_INDEX) {
            Ok(v) => v,
            Err(e) => {
                warnings.push(format!("singular values: {e}"));
                Vec::new()
            }
        },
        Kind::Pair => {
            warnings.push("pair map: singular values are not searched for; only probes are run".into());
            Vec::new()
        }
    };
    let mut singularities = Vec::new();
    for v in &singular_values {
        match classify_singularity(m, v, ENTRY_INDEX, &ocfg) {
            Ok(r) => singularities.push(r),
            Err(e) => warnings.push(format!("{}: {e}", label_of(v))),
        }
    }
    let defaults = default_probes(m.kind);
    let entries: Vec<Probe> = singular_values.iter().map(|v| singular_probe(v, ENTRY_INDEX)).collect();
    let probes: Vec<SingularityReport> = probes
        .unwrap_or(&defaults)
        .iter()
        .filter(|p| !entries.contains(p))
        .map(|p| analyze_probe(m, p, &p.describe(m.kind), None, true, &ocfg))
        .collect();
    let entropy = match entropy_estimate(m, &cfg.seed_list(), &cfg.entropy()) {
        Ok(e) => {
            warnings.extend(e.degrees.warnings.iter().cloned());
            warnings.extend(e.warnings.iter().cloned());
            Some(e)
        }
        Err(e) => {
            warnings.push(format!("degree growth: {e}"));
            None
        }
    };
    let evidence = entropy.as_ref().map(|e| EntropyEvidence { value: e.entropy, positive: e.positive });
    let all: Vec<SingularityReport> = singularities.iter().chain(&probes).cloned().collect();
    let verdict = verdict(&all, evidence);
    warnings.extend(verdict.warnings.iter().cloned());
    AnalysisReport {
        name: m.name.clone(),
        kind: m.kind,
        config: *cfg,
        singular_values,
        singularities,
        probes,
        entropy,
        verdict,
        warnings,
    }
}

/// `Polynomial(k)` growth reported by the degree sequence, if any.
pub fn degree_growth(r: &AnalysisReport) -> Option<GrowthType> {
    r.entropy.as_ref().map(|e| e.growth_type)
}
