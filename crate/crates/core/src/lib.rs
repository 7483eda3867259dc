//! Exact verification engine for the super Yangian double `DY_ħ[gl(m|n)]`
//! at central charge zero.

#![allow(clippy::needless_range_loop, clippy::type_complexity, clippy::len_without_is_empty)]

pub mod error;
pub mod exact;
pub mod gauss;
pub mod graded;
pub mod hopf;
pub mod lax;
pub mod matrix;
pub mod relations;
pub mod report;
pub mod rmatrix;
pub mod series;

pub use error::{Error, Result};
