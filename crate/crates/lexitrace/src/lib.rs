//! File formats and command-line front end for lexitrace.

#![allow(clippy::result_large_err)]

pub mod cli;
pub mod formats;
