//! The metaplectic group `Mp₂(Z)` and the Weil representation on the group
//! ring of a 2-elementary discriminant form.

mod mp2;
mod rep;

pub use mp2::{Letter, Mp2, Word};
pub use rep::{WeilMatrix, WeilRep};
