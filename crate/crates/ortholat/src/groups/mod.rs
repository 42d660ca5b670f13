//! Model groups, their Cartan decompositions, trees and isogenies.

pub mod cartan;
pub mod isogeny;
pub mod model;
pub mod sl2;
pub mod tree;
pub mod volume;

pub use cartan::{cartan, CartanFactors};
pub use model::{ModelGroup, ModelKind};
