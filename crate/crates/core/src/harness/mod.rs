//! Experiment grids, replicate runs, record output and verification suites.

pub mod run;
pub mod spec;
pub mod verify;

pub use run::{persist, run, sweep, write_records, RunRecord, SCHEMA_VERSION};
pub use spec::{expand_braces, parse_config, parse_horizons, read_config, ExperimentSpec, Format, Toggles};
pub use verify::{criteria, criterion, run_suite, suite_members, Criterion, CriterionResult, SUITES};
