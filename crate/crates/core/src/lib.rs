//! Standardization, popularity and communication statistics for historical
//! given-name corpora.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here works on
//! in-memory records and tables; file formats, reports and the command line
//! live in the `onomast` crate.
//!
//! The pipeline runs in this order:
//!
//! 1. [`standardize::truncate_name`] cuts a raw given name to its leading
//!    letters (at most eight, upper-cased).
//! 2. [`corpus::filter_records`] drops abbreviations, generic placeholders and
//!    records whose sex cannot be determined.
//! 3. [`standardize::CodingTable`] maps variants onto canonical names and
//!    [`corpus::build_cohort`] collects a birth-year × sex cohort.
//! 4. [`popstats`] and [`commstats`] compute popularity summaries, the social
//!    information `I_s` and the communication statistics C1–C4.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod commstats;
pub mod corpus;
mod error;
mod math;
pub mod popstats;
pub mod powerlaw;
pub mod standardize;
pub mod synth;

pub use error::Error;
pub use standardize::{Sex, StandardName};

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;
