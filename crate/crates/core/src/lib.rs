//! Exact and numerical tooling for even 2-elementary lattices.
//!
//! The crate covers discriminant forms and their invariants, the Weil
//! representation of the metaplectic group, the vector-valued modular form
//! `F_Λ` built from eta quotients and theta series, the Borcherds lift layer
//! (weight, Heegner divisor, truncated products), Igusa's Siegel form `χ_g`
//! and the K3-graph of lattice triples.
//!
//! Everything except the optional `parallel` feature works without `std`.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
pub mod borcherds;
pub mod error;
pub mod k3graph;
pub mod lattice;
pub mod modular;
pub mod siegel;
pub mod verify;
pub mod weil;

pub use error::{Error, Result};
