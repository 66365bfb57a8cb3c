//! Numerical verification engine for screen generic lightlike submanifolds of
//! indefinite Sasakian statistical manifolds carrying a quarter-symmetric
//! metric connection.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`], [`expr`], [`linalg`]: dual numbers, the component expression
//!   language and generic dense linear algebra.
//! * [`fields`], [`calculus`]: smooth fields and ambient calculus.
//! * [`ambient`], [`statistical`], [`contact`], [`qs`]: the flat Sasakian
//!   model, its statistical deformation and the QS connection, each with
//!   residual verifiers.
//! * [`lightlike`], [`sgl`]: immersions, lightlike frames, Gauss–Weingarten
//!   splittings, SGL classification and the integrability, parallelism and
//!   geodesicity checks.
//! * [`oracle`]: central-difference cross-checks of the exact derivatives.
//! * [`catalog`], [`suite`], [`report`], [`sampling`]: built-in entries,
//!   suite orchestration and reports.

pub mod ambient;
pub mod calculus;
pub mod catalog;
pub mod contact;
pub mod error;
pub mod expr;
pub mod fields;
pub mod lightlike;
pub mod linalg;
pub mod oracle;
pub mod qs;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod sgl;
pub mod statistical;
pub mod suite;

pub use error::{GeomError, Result};
