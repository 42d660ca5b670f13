//! Lie algebras of the model groups, their invariant complements and the
//! p-adic exponential coordinates used for undistortedness.

pub mod algebra;
pub mod complement;
pub mod hensel;
pub mod identities;
pub mod sym;
pub mod weights;

pub use algebra::{LieModel, Named, Sl2Triple, Space};
pub use complement::{certificate_table, CertificateRow, Complement};
pub use identities::{identity_table, IdentityCheck};
pub use sym::Sym;
pub use weights::{weight_decomposition, WeightDecomposition};
