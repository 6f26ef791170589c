//! Exact computations over small finite fields around restricted-variable
//! Chevalley–Warning statements.
//!
//! * [`field`]: GF(p^a) with an explicit modulus and table-driven arithmetic.
//! * [`mpoly`]: sparse multivariate polynomials, the Chevalley polynomial,
//!   vanishing polynomials and affine substitution.
//! * [`vset`]: power sums, ω(Y), Vandermonde classification, coset tests.
//! * [`grid`]: point sets in F_q^n, ω̲(X), subgroups, graphs of functions.
//! * [`cw`]: solution counting and per-theorem verification records.
//! * [`fuzz`]: seeded random instance generation and the fuzzing driver.
//! * [`census`]: exhaustive counts of Vandermonde sets and additive cosets.

pub mod affine;
pub mod census;
pub mod cw;
pub mod error;
pub mod field;
pub mod fuzz;
pub mod grid;
pub mod mpoly;
pub mod vset;

pub use error::{Error, Result};
pub use field::{Elem, FiniteField};
pub use grid::{GridSet, PointSet};
pub use mpoly::{MultiPoly, PolySystem};
