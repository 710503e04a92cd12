//! Numerical laboratory for the equivariant J-process on the 6-sphere.
//!
//! Everything is built from quaternion algebra: the sphere S^6 sits inside
//! Im H x H, the group SO(4) = S^3 x S^3 / +-1 acts on it, and the
//! Blakers-Massey element b: S^6 -> S^3 generates a family of exotic
//! diffeomorphisms sigma^k = J_{b^k} and involutions -sigma through the
//! J-process J_alpha(x) = alpha(x) . x. The `verify` module measures, to
//! floating-point tolerance, every identity these constructions satisfy:
//! equivariance, inverse and power laws, involution composition, linear
//! action consistency, and non-degeneracy of the homotopy from b to the
//! rational map Q.

pub mod cli;
pub mod error;
pub mod manifold;
pub mod maps;
pub mod quat;
pub mod verify;

pub use error::{Error, Result};
pub use manifold::{PointS6, So4Element};
pub use quat::{PureImaginary, Quaternion};
