//! Independent numerical verification.
//!
//! [`optimize`], [`fd`] and [`sampling`] only see black-box objectives and
//! domains; they never reach into certificate internals. [`verify`] wires
//! certificates to those tools through their public evaluators.

pub mod continuity;
pub mod fd;
pub mod limit;
pub mod optimize;
pub mod report;
pub mod sampling;
pub mod verify;

pub use continuity::{continuity_scan, ContinuityScan, Transition};
pub use fd::fd_gradient;
pub use limit::polydisc_limit_test;
pub use optimize::{maximize_profile, Maximum, OptimizerConfig, ProfileDomain};
pub use report::VerificationReport;
pub use sampling::{sample_interior, sup_probe_points};
pub use verify::{verify_certificate, CertificateKind, ProfileCertificate, VerifyConfig};
