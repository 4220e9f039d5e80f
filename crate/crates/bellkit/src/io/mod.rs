//! File formats and command drivers.

pub mod commands;
pub mod config_file;
pub mod dataset;
pub mod report;

pub use commands::{
    cmd_analyze, cmd_fit, cmd_simulate, parse_grid, FitModel, Generator, SimulateOpts,
    DEFAULT_GRID,
};
pub use config_file::{config_echo, parse_config, read_config, ConfigFile, REQUIRED_KEYS};
pub use dataset::{parse_dataset, write_dataset, DatasetMeta, SCHEMA_VERSION};
pub use report::{build_report, ReportBundle, ScanReport};
