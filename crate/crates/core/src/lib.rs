//! Field reduction, Desarguesian spreads, linear sets and blocking sets in
//! finite projective spaces, with exhaustive checkers for their intersection
//! properties.

pub mod acceptance;
pub mod bitset;
pub mod blocking;
pub mod gf;
pub mod pg;
pub mod reduction;
pub mod verify;

pub use bitset::BitSet;
pub use gf::{Elem, FieldTower};
pub use pg::{ProjSpace, Subspace};
pub use reduction::{DesarguesianSpread, PointSet};
