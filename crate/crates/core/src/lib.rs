//! Koenigs models for one-parameter semigroups of holomorphic self-maps of
//! the unit disc: model domains, boundary dynamics, topological conjugations
//! and a numerical Riemann map back to the disc.

pub mod boundary;
pub mod catalog;
pub mod conformal;
pub mod conjugation;
pub mod error;
pub mod extreal;
pub mod model;
pub mod piecewise;
pub mod repro;

pub use boundary::{
    boundary_report, classify_fixed_points, detect_contact_arcs, exceptional_closure_membership,
    life_time, radial_components, strip_components, BoundaryDescriptor, BoundaryPointClass,
    BoundaryReport, ContactArc, InitialPointClass, Side, StripComponent,
};
pub use conformal::{
    arc_preimage, boundary_trajectory, build_map, cluster_points, disc_semigroup,
    fixed_point_trajectory, generator_at, strip_map_oracle, strip_map_oracle_inv, RiemannMap,
    Trajectory, DEFAULT_RESOLUTION, LANDING_THRESHOLD, OFFSETS,
};
pub use conjugation::{
    apply_shear, apply_tau0, elliptic_group_conjugacy, elliptic_normalize, normalize_to_strip,
    pushforward_boundary, theta_lambda, transport_boundary_report, verify_conjugacy,
    ConjugacyReport, Conjugator, EllipticShear, ShearMap, TransportedReport,
};
pub use error::{ConformalError, ConjugationError, ModelError};
pub use extreal::ExtReal;
pub use model::{
    classify_type, flow, flow_unchecked, membership, validate_model, LowerBoundary, Membership,
    RadialBoundary, SemigroupModel, SemigroupType, Violation,
};
pub use piecewise::{BreakpointRule, Interval, PieceExpr, PiecewiseFn};
pub use repro::{
    reproduce, ExampleId, Finding, LabeledPoints, ReproError, ReproOutcome, ALL_EXAMPLES,
};
