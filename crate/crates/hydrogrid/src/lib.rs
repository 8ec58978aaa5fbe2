//! File formats, solver backends, reports and run orchestration for the
//! `hydrogrid` scheduling model.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod case_file;
pub mod error;
pub mod mps;
pub mod profile_file;
pub mod report;
pub mod run;
pub mod solver;

pub use error::{Error, Result, SolverError};
