//! Even lattices, discriminant forms and 2-elementary invariants.

mod disc;
mod expr;
#[allow(clippy::module_inception)]
mod lattice;
pub mod matrix;
mod triple;

pub use disc::{DiscElement, DiscGroup};
pub use expr::LatticeExpr;
pub use lattice::{Lattice, StdLattice};
pub use triple::{EdgeKind, LatticeTriple};
