//! Exact and p-adic tools for integer points on spheres, their orthogonal
//! lattices, and the local orthogonal groups attached to them.

pub mod equidist;
pub mod error;
pub mod forms;
pub mod lie;
pub mod groups;
pub mod hecke;
pub mod matrix;
pub mod padic;
pub mod quadext;
pub mod scalar;
pub mod shape;
pub mod sphere;

pub use error::{Error, Result};
pub use matrix::Mat;
pub use padic::{Padic, PadicCtx};
pub use quadext::QuadExt;

pub type IntMat = Mat<i64>;
pub type RatMat = Mat<num_rational::BigRational>;
pub type PadicMat = Mat<Padic>;
pub type QuadMat = Mat<QuadExt>;
pub type FloatMat = Mat<f64>;
