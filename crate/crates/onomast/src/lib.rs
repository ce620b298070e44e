//! File formats, reports and the command line for `onomast-core`.
//!
//! Record files, coding tables and reports are UTF-8 CSV. The [`pipeline`]
//! module runs ingestion, filtering and cohort assembly on a fixed-size worker
//! pool; results never depend on the number of workers.

pub mod cli;
pub mod coding;
mod error;
pub mod pipeline;
pub mod records;
pub mod report;

pub use error::{Error, Result};
pub use onomast_core as core;
