//! Zero-energy quasi-exactly solvable potentials built from so(2,1)
//! realizations and a point canonical transformation onto the radial
//! equation of the extended truncated Calogero-Sutherland model.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN fails domain checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod closed_forms;
pub mod diffkit;
pub mod error;
pub mod grid;
pub mod pct;
pub mod quadrature;
pub mod so21;
pub mod tcs;
pub mod verify;

pub use closed_forms::{Convention, QesClass, QesParams};
pub use error::{Error, Result};
pub use so21::AlgebraClass;
