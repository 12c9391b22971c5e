//! Constructive tools around polynomial hulls of graphs of holomorphic
//! functions with polar singular sets: Laurent and Mittag-Leffler splitting,
//! Leja point systems, rational approximation with poles on a polar set,
//! plurisubharmonic fields that detect a graph, Wiener-criterion thinness
//! tests and walk-on-spheres harmonic measure.
//!
//! The one-variable numerics are generic over [`Real`]; `f64` and the
//! double-double [`Double`] are the two types used in practice.

pub mod double;
pub mod error;
pub mod fekete;
pub mod geometry;
pub mod hull;
pub mod laurent;
pub mod model;
pub mod poly;
pub mod potential;
pub mod pshbuild;
pub mod quadrature;
pub mod ratapprox;
pub mod scalar;
pub mod serde_ext;

pub use double::Double;
pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

/// Library version, embedded in every artifact the front end writes.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `f64` complex number.
pub type Complex64 = Complex<f64>;
/// Double-double complex number.
pub type ComplexDD = Complex<Double>;
