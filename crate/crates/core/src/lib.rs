//! Root systems of finite integer vector configurations and of smooth
//! complete toric fans.
//!
//! The pipeline runs bottom-up: [`lattice`] supplies exact integer linear
//! algebra, [`config`] validates the input vectors, [`roots`] enumerates the
//! roots and checks them against a brute-force oracle, [`classify`] splits
//! the result into irreducible components and names each one, and [`fan`]
//! applies all of it to fans. [`cli`] is the batch front-end.

pub mod classify;
pub mod cli;
pub mod config;
pub mod error;
pub mod fan;
pub mod lattice;
pub mod roots;

pub use classify::{Family, IrreducibleComponent, TypeLabel};
pub use config::{Sign, SignAssignment, VectorConfiguration};
pub use error::{Error, Result};
pub use fan::Fan;
pub use lattice::IntegerMatrix;
pub use roots::{Root, RootKind, RootSystem};
