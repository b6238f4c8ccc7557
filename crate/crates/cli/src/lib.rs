//! Scenario files, verification suites and reports for `chowsym-core`.

pub mod checks;
pub mod expr;
pub mod genus2;
pub mod random;
pub mod report;
pub mod scenario;
