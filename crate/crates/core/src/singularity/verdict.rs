use std::fmt;

use super::classify::{Classification, GrowthClass, SingularityReport};

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    NonIntegrable { lower_bound: f64 },
    Linearisable,
    LinearisableOrNonIntegrable,
    InconclusiveRecommendFullDeautonomisation,
    IntegrableCandidate,
    Undetermined,
}

impl Verdict {
    pub fn code(&self) -> &'static str {
        match self {
            Verdict::NonIntegrable { .. } => "NON_INTEGRABLE",
            Verdict::Linearisable => "LINEARISABLE",
            Verdict::LinearisableOrNonIntegrable => "LINEARISABLE_OR_NON_INTEGRABLE",
            Verdict::InconclusiveRecommendFullDeautonomisation => "INCONCLUSIVE_RECOMMEND_FULL_DEAUTONOMISATION",
            Verdict::IntegrableCandidate => "INTEGRABLE_CANDIDATE",
            Verdict::Undetermined => "UNDETERMINED",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NonIntegrable { lower_bound } => write!(f, "{} (entropy >= {lower_bound:.12})", self.code()),
            other => f.write_str(other.code()),
        }
    }
}

/// Degree-growth entropy as seen by the verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEvidence {
    pub value: f64,
    /// True when the dominant root is certified to exceed 1.
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub reason: String,
    pub warnings: Vec<String>,
}

/// Combine singularity classifications with degree growth.
pub fn verdict(reports: &[SingularityReport], entropy: Option<EntropyEvidence>) -> VerdictReport {
    let live: Vec<&SingularityReport> = reports.iter().filter(|r| !r.is_vacuous_probe()).collect();
    let anti: Vec<&GrowthClass> = live
        .iter()
        .filter_map(|r| match &r.classification {
            Classification::Anticonfined(a) => Some(&a.growth),
            _ => None,
        })
        .collect();
    let nonconfined = live.iter().any(|r| matches!(r.classification, Classification::NonConfined));
    let max_rate = anti.iter().filter_map(|g| g.rate()).fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))));
    let any_linear = anti.iter().any(|g| matches!(g, GrowthClass::Linear { .. }));
    let any_unclassified = anti.iter().any(|g| matches!(g, GrowthClass::Unclassified));

    let from_entropy = |why: &str| -> (Verdict, String) {
        match entropy {
            Some(e) if e.positive => {
                (Verdict::NonIntegrable { lower_bound: e.value }, format!("{why}; degree growth is exponential"))
            }
            Some(_) if nonconfined => (
                Verdict::LinearisableOrNonIntegrable,
                format!("{why}; degree growth is polynomial but a singularity is not confined"),
            ),
            Some(_) => (Verdict::IntegrableCandidate, format!("{why}; degree growth is polynomial")),
            None => (Verdict::Undetermined, format!("{why}; no degree data")),
        }
    };

    let (verdict, reason) = if let Some(rate) = max_rate {
        (Verdict::NonIntegrable { lower_bound: rate }, "an anticonfined pattern grows exponentially".to_string())
    } else if any_linear {
        if nonconfined {
            (
                Verdict::LinearisableOrNonIntegrable,
                "linear anticonfined growth alongside a non-confined singularity".to_string(),
            )
        } else {
            (Verdict::Linearisable, "anticonfined pattern grows linearly".to_string())
        }
    } else if any_unclassified {
        from_entropy("anticonfined growth could not be classified")
    } else if !anti.is_empty() {
        if nonconfined {
            (
                Verdict::LinearisableOrNonIntegrable,
                "bounded anticonfined pattern alongside a non-confined singularity".to_string(),
            )
        } else {
            (
                Verdict::InconclusiveRecommendFullDeautonomisation,
                "only bounded anticonfined patterns and confined singularities".to_string(),
            )
        }
    } else {
        from_entropy("no anticonfined pattern")
    };

    let mut warnings = Vec::new();
    if let Some(e) = entropy {
        match &verdict {
            Verdict::NonIntegrable { lower_bound } if max_rate.is_some() && !e.positive => warnings.push(format!(
                "CONSISTENCY: anticonfined growth rate {lower_bound:.12} but degree entropy {:.12} is not positive",
                e.value
            )),
            Verdict::NonIntegrable { lower_bound } if max_rate.is_some() && *lower_bound > e.value + 1e-6 => {
                warnings.push(format!(
                    "CONSISTENCY: anticonfined growth rate {lower_bound:.12} exceeds degree entropy {:.12}",
                    e.value
                ))
            }
            Verdict::Linearisable
            | Verdict::IntegrableCandidate
            | Verdict::InconclusiveRecommendFullDeautonomisation
                if e.positive =>
            {
                warnings.push(format!(
                    "CONSISTENCY: singularity verdict {} but degree entropy {:.12} is positive",
                    verdict.code(),
                    e.value
                ))
            }
            _ => {}
        }
    }
    VerdictReport { verdict, reason, warnings }
}
