//! Exact finite-sample laboratory for Borel chromatic number problems on
//! algebraic graphs: sample universes, neighborhood lattices, box colorings,
//! forcing-style condition posets and Hamming embeddings.

pub mod campaign;
pub mod coloring;
pub mod error;
pub mod exec;
pub mod hamming;
pub mod io;
pub mod kernel;
pub mod lattice;
pub mod patterns;
pub mod poset;

pub use error::{Error, Result};
pub use exec::Parallelism;
