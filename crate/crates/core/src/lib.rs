pub mod algebra;
pub mod connection;
pub mod error;
pub mod grid;
pub mod orbits;
pub mod polyfield;
pub mod riemann_hilbert;
pub mod series;
pub mod symmetry;
pub mod twistor;

pub use error::{Error, Result};
