//! Generalized Green and Möbius functions of the coordinate hyperplane set
//! `A = {z_1 ⋯ z_k = 0}` in complex ellipsoids
//! `E = {z ∈ ℂⁿ : Σ |z_j|^{2p_j} < 1}`.
//!
//! The crate is organized in four layers:
//!
//! * [`formula`] evaluates the closed-form piecewise value `R_E(A, z)`
//!   together with the ball and polydisc special cases.
//! * [`certificates`] builds the extremal functions that witness the value:
//!   the log-plurisubharmonic `u` on the Green side and the holomorphic `f`
//!   on the Möbius side.
//! * [`oracle`] holds independent numerical checks (sampling, black-box
//!   profile maximization, finite differences, continuity scans, limits).
//! * [`gap`] covers the nonconvex machinery: the concavity-window
//!   obstruction, the explicit two-dimensional construction and a search
//!   over alternative candidate families.
//!
//! Batch entry points run on rayon when the `parallel` feature is enabled
//! (the default) and fall back to plain iterators otherwise.

// Negated comparisons are deliberate: they send NaN down the rejection path.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificates;
pub mod ellipsoid;
mod error;
pub mod formula;
pub mod gap;
pub mod oracle;
pub mod par;

pub use certificates::{GreenCertificate, HFamily, MobiusCertificate, MonomialCertificate};
pub use ellipsoid::{Ellipsoid, Membership, Point, SortedPoint};
pub use error::{Error, Result};
pub use formula::{ball_formula, evaluate, polydisc_formula, weighted_am_gm, EvalResult};
pub use oracle::report::VerificationReport;
