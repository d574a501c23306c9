//! Second-order birational mappings: rule expressions, parameter sequences,
//! stepping in any evaluation domain, inversion and changes of variables.

pub mod expr;
pub mod model;
pub mod param;
pub mod transform;

pub use expr::{BinOp, Domain, EvalError, Expr, Var};
pub use model::{auto_invert, Direction, Kind, MapError, MapInstance, Rule};
pub use param::{ParamEnv, ParamError, ParamSeq};
pub use transform::{check_conjugacy, conjugate_map, ConjugacyOutcome, StateTransform};
