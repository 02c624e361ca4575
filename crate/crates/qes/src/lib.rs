//! File formats, figure presets and the command-line driver on top of
//! [`qes_core`].

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod figures;
pub mod report;
pub mod table;
