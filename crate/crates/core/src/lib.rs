//! Minimal matroids of point-line configurations.
//!
//! The crate computes the minimal matroids above a configuration in the dependency order,
//! classifies them up to symmetry, decomposes circuit varieties into matroid varieties using
//! rewrite rules plus a table of registered geometric facts, and evaluates the rank bounds
//! attached to families of prescribed circuits.

pub mod error;
pub mod facts;
pub mod cli;
pub mod formula;
pub mod io;
pub mod known;
pub mod library;
pub mod model;
pub mod oracle;
pub mod pointset;
pub mod search;
pub mod symmetry;
pub mod variety;
pub mod xmatroid;

pub use error::{Error, Result};
pub use formula::{Formula, Hypergraph};
pub use model::{Configuration, Matroid};
pub use pointset::PointSet;
