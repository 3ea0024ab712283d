//! Command-line harness: scenario files, runs and reports.

pub mod report;
pub mod runner;
pub mod scenario_file;

pub use report::{Format, Metadata, Record, ReportFile, SweepRow};
pub use runner::{run, CheckFamily, Command, RangeSpec, RunConfig, RunOutcome};
pub use scenario_file::ScenarioFile;
