//! Pappus marked boxes, the modular-group action on them, and the deformed
//! representations `rho_lambda` together with numerical certificates of their
//! Anosov property.
//!
//! Geometry is generic over [`scalar::Scalar`] so the same code runs on exact
//! rationals, doubles, and MPFR floats.

pub mod anosov;
pub mod error;
pub mod linalg;
pub mod marked_box;
pub mod modular;
pub mod projective;
pub mod representation;
pub mod sampling;
pub mod scalar;
pub mod variety;

pub use error::{Error, Result};
pub use linalg::{Mat3, Vec3};
pub use marked_box::{BoxModuli, Lambda, OvermarkedBox};
pub use modular::{Cusp, FareyGeodesic, GroupWord, Letter};
pub use representation::RepresentationParams;
pub use scalar::{MpFloat, Rational, RealScalar, Scalar};
