//! Quasi-free (Gaussian) dynamics of an open bosonic mode repeatedly coupled
//! to a chain of harmonic modes, together with a brute-force truncated
//! Fock-space master-equation integrator used as ground truth.
//!
//! The crate is organized in four layers:
//!
//! - [`model`] — physical parameters, hypothesis validation and the coupling
//!   matrices that define each interaction window.
//! - [`quasifree`] — the closed-form dual semigroup on Weyl symbols: window
//!   propagators, attenuation factors, covariance-matrix evolution and a
//!   complete-positivity certificate.
//! - [`fock`] — dense truncated-Fock-space ladder operators, the
//!   Kossakowski–Lindblad–Davies generator and an RK4 integrator for the
//!   master equation, plus Weyl operators and characteristic functions.
//! - [`scenario`] — config-driven batch runs (closed form, oracle, or
//!   cross-validation of the two pipelines) emitting CSV / JSON output.

pub mod error;
pub mod fock;
pub mod linalg;
pub mod model;
pub mod quasifree;
pub mod scenario;

pub use error::{Error, Result};
