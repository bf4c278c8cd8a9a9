//! Config-driven command-line front end: grid files, CSV curves, heatmaps
//! and run manifests.

pub mod config;
mod font;
pub mod grid_io;
pub mod render;
pub mod run;

pub use config::{load_config, parse_config, parse_time, Output, RunConfig};
pub use run::{run, Manifest};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const UNCONVERGED: i32 = 3;
}
