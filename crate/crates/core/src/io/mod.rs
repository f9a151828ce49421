//! Configuration documents, snapshot CSV files and key=value reports.

mod config;
mod csv;
mod report;

pub use config::{parse_config, read_config, ConfigDocument};
pub use csv::{
    read_snapshot_csv, write_diagnostics_csv, write_snapshot_csv, SnapshotTable,
    SNAPSHOT_HEADER,
};
pub use report::{fmt_num, render_report, write_report, Report};
