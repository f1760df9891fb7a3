//! SBV curves, the transport parametrization of interval unions and the
//! curve representation of polyhedral currents.

mod curve;
mod param;
mod represent;

pub use curve::{Fragment, SbvCurve, SbvJump, SbvPiece};
pub use param::{area_check, normalize_intervals, transport_param, AffinePiece, MonotoneCadlag, ScalarJump};
pub use represent::{beta, sbv_represent, CurveRepresentation};
