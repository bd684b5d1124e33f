//! File formats, run configuration, verification suites and the command layer
//! behind the `e7lift` binary. The exact mathematics lives in `e7lift-core`;
//! this crate only moves data in and out of it.

pub mod commands;
pub mod config;
pub mod formats;
pub mod scalars;
pub mod suites;
