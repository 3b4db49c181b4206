//! Harness around the `bitdice` samplers: weight files, timed measurement
//! campaigns, analytic scans, and an entropy-targeted instance generator.
//! The `bitdice` binary is a thin command layer over this library.

pub mod bench;
pub mod gen;
pub mod harness;
pub mod io;
pub mod scans;
