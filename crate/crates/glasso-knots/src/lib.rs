//! File formats, the parallel simulation runner and the `glasso-knots`
//! command line on top of [`glasso_knots_core`].

#![forbid(unsafe_code)]

pub mod cli;
pub mod csvio;
pub mod error;
pub mod export;
pub mod nulltable;
pub mod simulate;

pub use cli::{run_cli, run_cli_with};
pub use csvio::{load_csv, read_csv};
pub use error::{Error, Result};
