//! Cell-centered finite-volume discretization: MPFA-O for the fluid flux and
//! MPSA with weak symmetry for the Biot traction.

pub mod bc;
pub mod condense;
pub mod flow;
pub mod local;
pub mod material;
pub mod mech;
pub mod stencil;

pub use bc::{BcKind, BoundaryKinds, BoundaryValues};
pub use condense::{condense, CondensedOperators, SubfaceQuantities};
pub use material::{lame_from_young, Homogeneous, MaterialField};
pub use stencil::{ColumnSpace, Stencil};
