//! Exact arithmetic: rationals, a prime field, dense univariate polynomials,
//! reduced rational functions, a tower of rational-function fields for
//! symbolic work, and truncated Laurent series in ε.

mod field;
mod fp;
mod laurent;
mod modgcd;
mod multi;
mod poly;
mod ratfunc;

pub use field::{rat, rat_i, Field, Rational};
pub use fp::Fp;
pub use laurent::{Laurent, LaurentError};
pub use multi::Multi;
pub use poly::{poly_gcd, Poly};
pub use ratfunc::{ratfunc_reduce, RatFunc};
