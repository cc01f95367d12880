//! Quasiconvex risk measures on finite variable-exponent Bochner–Lebesgue
//! spaces: acceptance sets, support functions, the risk function `R(f, g)`,
//! its dual representation, and separation certificates.

pub mod acceptance;
pub mod duality;
pub mod error;
pub mod optim;
pub mod risk;
pub mod sampling;
pub mod separation;
pub mod space;

pub use acceptance::{
    is_acceptable, support_function, AcceptanceSet, SupportMethod, SupportOptions, SupportStatus, SupportValue,
};
pub use duality::{
    dual_representation, evaluate_risk, risk_function, sublevel_reconstruction, DualRepresentationResult,
    RiskFunctionMethod, RiskFunctionValue,
};
pub use error::{Error, Result};
pub use risk::{AxiomReport, Fixture, MeasureDescriptor, MeasureKind, RiskMeasure, Transform};
pub use separation::{project_onto_acceptance, separate, SeparationCertificate};
pub use space::{
    check_norm_axioms, ConeSpace, DualDensity, ExponentFunction, MeasureSpace, NormAxiomReport, Position, Space,
    SpaceDescriptor, StateField,
};
