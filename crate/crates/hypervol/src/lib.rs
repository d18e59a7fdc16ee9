//! Command-line front end for [`hypervol_core`]: reports, CSV/JSON
//! serialization, the regular-tetrahedron sweep, randomized verification
//! suites, and a threaded Monte-Carlo driver.
//!
//! The core crate is `no_std` and holds all the mathematics; this crate adds
//! everything that needs an operating system — argument parsing, files,
//! threads — plus the stable text formats the `hypervol` binary emits.

#![forbid(unsafe_code)]

pub use hypervol_core as core;

pub mod format;
pub mod parallel;
pub mod report;
pub mod sweep;
pub mod verify;
