//! Molecules and polyhedral 1-currents.

mod form;
mod molecule;
mod polyhedral;

pub use form::{LipschitzFn, MetricForm, TestFunction};
pub use molecule::{Atom, Molecule};
pub use polyhedral::{AxisBox, MassMeasure, Piece, PolyhedralCurrent};
