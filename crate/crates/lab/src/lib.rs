//! Experiment runner for `roundlab-core`: seeded suites, JSON-lines records,
//! CSV summaries and tracer ledgers.

pub mod config;
pub mod record;
pub mod report;
pub mod suites;
pub mod trace;

pub use config::{ExperimentConfig, Suite};
pub use record::ResultRecord;
pub use report::{emit_report, summarize, SuiteSummary};
pub use suites::{run_suite, run_to_file};
