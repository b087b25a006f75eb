//! File formats, ensemble experiments and the `statdecim` command-line tool
//! built on [`statdecim_core`].

pub mod cli;
pub mod error;
pub mod experiment;
pub mod io;
pub mod manifest;
pub mod materials;
pub mod output;

pub use error::{Error, Result};
