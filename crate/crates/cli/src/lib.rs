//! Verification harness for `finpart`: property suites with deterministic
//! JSON reports, count tables and a coding demo.

pub mod counts;
pub mod demo;
pub mod report;
pub mod suites;
pub mod sweep;

pub use report::{Outcome, RunReport, Witness};
pub use suites::{Exec, SuiteError};
