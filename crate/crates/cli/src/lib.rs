//! Library half of the `alcs` command: input parsing, cost tables and reports.

pub mod costs;
pub mod ingest;
pub mod report;
