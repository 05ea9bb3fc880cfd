//! Signatures, periodic and special subvarieties of `(P^1)^n`, the ambient variety `X` with
//! its projections `F^J`, and the gates deciding when `X^oa` is empty.

pub mod ambient;
pub mod periodic;
pub mod signature;
pub mod solve;

pub use ambient::{
    check_nondegenerate, coefficient_vanishing_check, projection_hypersurface,
    projection_hypersurface_sampled, AmbientVariety, CoefficientCheck,
};
pub use periodic::{
    build_periodic, certify_period, commuter_witness, embed_in_hypersurface, membership,
    Embedding, Generator, HypersurfaceEq, PeriodicConstant, PeriodicSubvariety,
    SpecialSubvariety, Subvariety, DV, PERIOD_CAP,
};
pub use signature::{enumerate_signatures, Signature};
