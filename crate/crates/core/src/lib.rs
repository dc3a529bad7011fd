//! Order-by-order quantisation of polynomial integrable systems.
//!
//! The normal star product on `Q[q, p][[hbar]]` is built in [`weyl`]; the
//! complex `C_f` with its differential and exact linear solvers lives in
//! [`koszul`]; [`lift`] drives the order-by-order extension and emits
//! certificates or obstruction reports; [`derham`] relates relative
//! differential forms to cochains.

pub mod derham;
pub mod error;
pub mod koszul;
pub mod lift;
pub mod polyring;
pub mod weyl;

pub use error::{Error, Result};
