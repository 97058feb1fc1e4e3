//! Verification-suite driver: runs the identity sweeps over parameter
//! grids, collects exact per-case records, and emits deterministic
//! JSON/CSV/text reports.

pub mod report;
pub mod suite;

pub use report::{CaseRecord, Report, Totals};
pub use suite::{run_report_all, run_suite, SuiteConfig, SuiteKind};
