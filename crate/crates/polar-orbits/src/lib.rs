//! File formats, the parallel survey driver and the command-line front end
//! for [`polar_core`].
//!
//! All tables are comma-separated with `\n` line endings and floats written
//! in shortest round-trip form, so repeated runs produce identical bytes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod grid_file;
pub mod parallel;
pub mod report;
pub mod svg;
pub mod tables;

/// Shortest decimal text that parses back to the same `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:?}")
}

/// Like [`fmt_float`], with an empty field for a missing value.
pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}
