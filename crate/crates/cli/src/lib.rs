//! Scenario orchestration for the slitflow simulator.
//!
//! A scenario is a flat `key = value` text file (or a named builtin)
//! that fixes the optical configuration, polarization, screen grid,
//! trajectory plan and random seed. Running one emits deterministic
//! CSV data files, a fringe analysis report, gnuplot-compatible plot
//! scripts and a manifest with content digests: the same scenario and
//! seed always reproduce byte-identical data files.

pub mod error;
pub mod run;
pub mod sample;
pub mod scenario;

pub use error::CliError;
pub use run::{run_scenario, run_sweep, RunManifest};
pub use sample::sample_detections;
pub use scenario::{RunSpec, Scenario};
