//! Bounded-height certificates, exact sampling of `X ∩ V`, and the degree bound `M` with its
//! finite collection of periodic hypersurfaces.

pub mod certificate;
pub mod growth;
pub mod sample;
pub mod verify;

pub use certificate::{
    certificate, certificate_with, chain_projections, landau_height_bound, CertifyOptions, DescentBound,
    HeightCertificate, ProjectionConstants,
};
pub use growth::{reproduce_example, reproduce_example_with, GrowthRow, GrowthTable};
pub use sample::{sample_intersection, IntersectionSample};
pub use verify::{
    affine_fixed_points, enumerate_periodic, structure_degree_bound, verify_bounded, GraphHypersurface, SampleRecord,
    SignatureOutcome, StructureReport, VarietyOutcome, VerifyReport,
};
