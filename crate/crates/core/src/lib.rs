//! Annual scheduling model for renewable power grids coupled with hydrogen
//! energy hubs.
//!
//! Each quarter of the year is represented by one typical day that repeats
//! for every day of the quarter. Unit commitment, DC network flow, wind
//! curtailment and hub dispatch are decided per typical-day hour, while the
//! hub's hydrogen storage accumulates across days and is chained from one
//! quarter to the next, closing over the year.
//!
//! This crate is `no_std` (it needs `alloc`) and does no IO. It covers:
//!
//! - [`grid`]: case data, linking and validation;
//! - [`profiles`]: typical-day tables, synthesis and penetration scaling;
//! - [`formulation`]: the MILP for the hub-coupled model and its benchmark;
//! - [`solution`] and [`verify`]: solver results and an independent
//!   feasibility check;
//! - [`analysis`]: quarterly metrics, storage trajectories, comparisons.
//!
//! Solving, file formats and the command line live in the `hydrogrid` crate.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod formulation;
pub mod grid;
pub mod profiles;
pub mod solution;
pub mod verify;

pub use analysis::{
    compare_runs, compute_metrics, storage_trajectory, AnalysisError, AnnualMetrics,
    ComparisonReport, Fingerprint, QuarterMetrics, StorageTrajectory,
};
pub use formulation::{build_model, build_variables, EqTag, FormulationError, MilpModel, Variant, VariableIndex};
pub use grid::{validate_case, CaseData, CaseError, GridCase, ValidationReport};
pub use profiles::{
    penetration, scale_to_penetration, synthesize_profiles, Horizon, ProfileError, QuarterProfiles,
    SynthSpec,
};
pub use solution::{Solution, SolveStatus};
pub use verify::{verify_solution, VerificationReport};
