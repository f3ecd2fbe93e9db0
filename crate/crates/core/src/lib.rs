//! Staggered space-time discontinuous Galerkin solver for two-dimensional
//! linear elastic waves in velocity–stress form.

pub mod assembly;
pub mod basis;
pub mod error;
pub mod io;
pub mod material;
pub mod mesh;
pub mod scenarios;
pub mod scheme;
pub mod solver;

pub use error::{Error, Result};
