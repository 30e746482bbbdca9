//! Sweep harness for the thermofield-double cost-function study: beta,
//! field and `(zeta, tau)` sweeps, oracle validation, CSV and SVG output.

pub mod cli;
pub mod config;
pub mod error;
pub mod grid;
pub mod records;
pub mod svg;
pub mod sweep;
pub mod validate;

pub use error::{HarnessError, Result};
pub use grid::BetaGrid;
pub use records::{emit_csv, load_csv, read_records, write_records, GridRecord, SweepRecord};
pub use svg::{emit_svg, render_svg};
pub use sweep::{sweep_beta, sweep_g, sweep_zeta_tau, SweepSettings, ZetaTauSweep};
pub use validate::{validate_oracles, ValidationReport};
