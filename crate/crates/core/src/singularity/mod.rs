//! Singularity confinement over truncated Laurent series in `ε` whose
//! coefficients are rational functions of a free symbol `c`.

mod classify;
mod orbit;
mod values;
mod verdict;

pub use classify::{
    analyze_probe, classify_singularity, growth_class, point_long, point_recovered, point_regular, point_short,
    point_valuation, probe_anticonfined, same_shape, singular_probe, Anticonfinement, Classification, GrowthClass,
    PatternEntry, Point, SingularSets, SingularityReport,
};
pub use orbit::{epsilon_orbit, orbit_side, Coeff, Orbit, OrbitConfig, Probe, Seed, Side, StopReason, Value};
pub use values::{find_singular_values, SingularValue};
pub use verdict::{verdict, EntropyEvidence, Verdict, VerdictReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SingularityError {
    #[error("automatic singular-value detection needs a scalar map")]
    PairMap,
    #[error("unsupported: singular values include roots of {0}, which are not rational")]
    IrrationalSingularValues(String),
    #[error("symbolic evaluation failed: {0}")]
    Symbolic(String),
    #[error("probe is not anticonfined: the orbit is {0}")]
    NotAnticonfined(String),
}
