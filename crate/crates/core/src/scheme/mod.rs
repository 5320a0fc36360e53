//! Fully discrete scheme: fluxes, viscous form, per-step residual and Jacobian.

pub mod assembly;
pub mod audit;
pub mod flux;
pub mod layout;
pub mod sip;

pub use assembly::{lift_gradient, Scheme, SchemeConfig, StepState};
pub use audit::{audit_flux_conditions, AuditOptions, AuditReport, AUDIT_TOLERANCE};
pub use flux::{flux_f1, flux_f2, flux_f3, flux_f4, FaceTraces, FluxFamily};
pub use layout::{Block, UnknownLayout, UnknownVector};
pub use sip::SipOperator;
