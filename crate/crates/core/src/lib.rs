//! Exact arithmetic for canonical heights, commuting polynomials and periodic
//! subvarieties of `(P^1)^n`, with explicit bounded-height certificates.

pub mod algebra;
pub mod bounds;
pub mod classify;
pub mod commute;
pub mod error;
pub mod experiment;
pub mod heights;
pub mod varieties;

pub use algebra::{
    algebraic_eval, isolate_roots, poly_compose, poly_iterate, AlgebraicNumber, MPoly, P1Point,
    Poly, Rational,
};
pub use error::{Error, Result};
pub use experiment::{run, ExperimentConfig, ExperimentKind, Report};
