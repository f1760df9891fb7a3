//! One-dimensional polyhedral metric currents.
//!
//! The crate works with finite data only: molecules (signed atomic measures
//! of total weight zero) and polyhedral 1-currents (weighted oriented
//! segments) in normed `R^d`, plus molecules on finite metric spaces.
//!
//! Main entry points:
//!
//! * [`transport::kr_norm`] and [`transport::solve_plan`] compute the
//!   Kantorovich–Rubinstein norm of a molecule together with an optimal plan
//!   and a 1-Lipschitz dual certificate.
//! * [`primitives`] builds segment currents whose boundary is a prescribed
//!   molecule, either flat or lifted into `X ⊕ R`.
//! * [`cyclefill`] completes a current into a cycle.
//! * [`decompose`] splits a current into weighted paths and loops without
//!   mass cancellation.
//! * [`sbv`] turns a current into a finite family of constant-speed curves
//!   with jumps.
//!
//! Every comparison uses the global tolerance returned by [`tol`]; see
//! [`set_tol`] for overriding it.

pub mod currents;
pub mod cyclefill;
pub mod decompose;
mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod primitives;
mod quadrature;
pub mod report;
pub mod sbv;
mod tolerance;
pub mod transport;

pub use error::{Error, Result};
pub use tolerance::{set_tol, tol, DEFAULT_TOL};
