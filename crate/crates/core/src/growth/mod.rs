mod degree;
mod entropy;
mod recurrence;
mod roots;

pub use degree::{degree_oracle, ORACLE_LIMIT, degree_sequence, seed_value, DegreeConfig, DegreeError, DegreeSequence};
pub use entropy::{
    classify_char_poly, entropy_estimate, entropy_tolerance, EntropyConfig, EntropyError, EntropyEstimate, GrowthType, Method,
};
pub use recurrence::{char_poly, fit_recurrence, fit_recurrence_i64, FitError, Recurrence};
pub use roots::{
    cauchy_bound, count_roots, dominant_root, isolate_real_roots, primitive_integer, rational_roots,
    root_multiplicity, roots_inside_unit_disk, squarefree, sturm_sequence, to_f64, RootError, RootInterval,
};
