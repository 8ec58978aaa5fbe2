//! Solver results in model column space.

use alloc::vec::Vec;
use core::fmt;

use crate::formulation::MilpModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    /// Integer-feasible point without a proven optimality gap.
    Feasible,
    Infeasible,
    Unbounded,
    /// Time limit reached without any feasible point.
    Timeout,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::Timeout => "timeout",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "optimal" => SolveStatus::Optimal,
            "feasible" => SolveStatus::Feasible,
            "infeasible" => SolveStatus::Infeasible,
            "unbounded" => SolveStatus::Unbounded,
            "timeout" => SolveStatus::Timeout,
            _ => return None,
        })
    }

    pub fn has_values(self) -> bool {
        matches!(self, SolveStatus::Optimal | SolveStatus::Feasible)
    }
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Tolerance within which a binary value is accepted and snapped.
pub const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub status: SolveStatus,
    /// Objective in $, recomputed from `values` for solved statuses.
    pub objective: f64,
    /// One value per model column; empty unless `status.has_values()`.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SolutionError {
    #[error("column {column} should be binary but has value {value}")]
    NotIntegral { column: usize, value: f64 },
    #[error("solution has {got} values, model has {expected} columns")]
    Length { got: usize, expected: usize },
    #[error("backend objective {reported} differs from recomputed {recomputed}")]
    ObjectiveMismatch { reported: f64, recomputed: f64 },
}

impl Solution {
    pub fn without_values(status: SolveStatus) -> Self {
        Solution {
            status,
            objective: f64::NAN,
            values: Vec::new(),
        }
    }

    /// Rounds every binary column to exactly 0 or 1. Values further than
    /// [`INTEGRALITY_TOL`] from an integer are rejected.
    pub fn snap_binaries(values: &mut [f64], model: &MilpModel) -> Result<(), SolutionError> {
        if values.len() != model.n_cols() {
            return Err(SolutionError::Length {
                got: values.len(),
                expected: model.n_cols(),
            });
        }
        for (col, v) in values.iter_mut().enumerate() {
            if model.is_integer(col) {
                let rounded = libm::round(*v);
                if (*v - rounded).abs() > INTEGRALITY_TOL {
                    return Err(SolutionError::NotIntegral {
                        column: col,
                        value: *v,
                    });
                }
                *v = rounded;
            }
        }
        Ok(())
    }

    /// Builds a solved result whose objective is recomputed from `values`,
    /// after checking it against the backend's report (relative 1e-6).
    pub fn reconciled(
        status: SolveStatus,
        model: &MilpModel,
        values: Vec<f64>,
        reported: f64,
    ) -> Result<Self, SolutionError> {
        if values.len() != model.n_cols() {
            return Err(SolutionError::Length {
                got: values.len(),
                expected: model.n_cols(),
            });
        }
        let recomputed = model.objective_value(&values);
        if !relative_close(recomputed, reported, 1e-6) {
            return Err(SolutionError::ObjectiveMismatch {
                reported,
                recomputed,
            });
        }
        Ok(Solution {
            status,
            objective: recomputed,
            values,
        })
    }
}

/// `|a - b| <= rel * max(1, |a|, |b|)`
pub fn relative_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulation::{build_model, Variant};
    use crate::grid::fixtures::toy3;
    use crate::profiles::{Horizon, QuarterProfiles};
    use alloc::vec;

    fn model() -> MilpModel {
        let case = toy3();
        let p = QuarterProfiles::for_case(&case, Horizon::ANNUAL);
        build_model(&case, &p, Variant::EnergyHub).unwrap()
    }

    #[test]
    fn snapping() {
        let m = model();
        let mut x = vec![0.3; m.n_cols()];
        let u = m.index.commitment(0, 0, 0);
        for (col, v) in x.iter_mut().enumerate() {
            if m.is_integer(col) {
                *v = 1.0 - 4e-7;
            }
        }
        Solution::snap_binaries(&mut x, &m).unwrap();
        assert_eq!(x[u], 1.0);
        assert_eq!(x[m.index.generation(0, 0, 0)], 0.3);
        x[u] = 0.5;
        assert_eq!(
            Solution::snap_binaries(&mut x, &m),
            Err(SolutionError::NotIntegral {
                column: u,
                value: 0.5
            })
        );
    }

    #[test]
    fn objective_reconciliation() {
        let m = model();
        let mut x = vec![0.0; m.n_cols()];
        x[m.index.generation(0, 0, 0)] = 10.0;
        let expected = m.objective[m.index.generation(0, 0, 0)] * 10.0;
        let sol = Solution::reconciled(SolveStatus::Optimal, &m, x.clone(), expected * (1.0 + 1e-8)).unwrap();
        assert_eq!(sol.objective, expected);
        assert!(Solution::reconciled(SolveStatus::Optimal, &m, x, expected * 1.01).is_err());
    }

    #[test]
    fn status_round_trip() {
        for s in [
            SolveStatus::Optimal,
            SolveStatus::Feasible,
            SolveStatus::Infeasible,
            SolveStatus::Unbounded,
            SolveStatus::Timeout,
        ] {
            assert_eq!(SolveStatus::parse(s.as_str()), Some(s));
        }
    }
}
