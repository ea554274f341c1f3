//! Parallel drivers, file formats, plots and the command line on top of
//! [`g2ml_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod models;
pub mod par;
pub mod plot;
pub mod report;

pub use error::{Error, Result};
