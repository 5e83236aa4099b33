//! Zero-sum copies of bounded-degree graphs in group-coloured complete graphs.

pub mod abelian;
pub mod checks;
pub mod cli;
pub mod colouring;
pub mod engine;
pub mod error;
pub mod graphs;
pub mod io;
pub mod oracle;
pub mod realization;

pub use error::{Error, Result};
