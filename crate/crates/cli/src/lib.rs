//! Command-line front end: JSON configuration, parameter sweeps, Husimi
//! grids and the acceptance suite.

pub mod config;
pub mod error;
pub mod husimi;
pub mod state;
pub mod sweep;
pub mod table;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
