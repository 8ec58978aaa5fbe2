use highs::{HighsModelStatus, HighsSolutionStatus, RowProblem, Sense};
use hydrogrid_core::SolveStatus;

use super::{RawSolution, SolveOptions, StandardForm};
use crate::error::{Result, SolverError};

/// Solves a standard-form problem with the linked HiGHS library.
pub fn solve_form(form: &StandardForm, opts: &SolveOptions) -> Result<RawSolution> {
    let mut pb = RowProblem::default();
    let cols: Vec<_> = (0..form.n_cols())
        .map(|c| {
            pb.add_column_with_integrality(
                form.cost[c],
                form.col_lower[c]..=form.col_upper[c],
                form.integer[c],
            )
        })
        .collect();
    for (r, row) in form.rows.iter().enumerate() {
        pb.add_row(
            form.row_lower[r]..=form.row_upper[r],
            row.iter().map(|&(c, a)| (cols[c], a)),
        );
    }
    let mut model = pb
        .try_optimise(Sense::Minimise)
        .map_err(|s| SolverError::BackendCrash(format!("HiGHS rejected the model: {s:?}")))?;
    if opts.verbose {
        for key in ["output_flag", "log_to_console"] {
            model
                .try_set_option(key, true)
                .map_err(|s| SolverError::BackendCrash(format!("HiGHS option {key}: {s:?}")))?;
        }
    }
    let set = |model: &mut highs::Model, key: &str, value: f64| {
        model
            .try_set_option(key, value)
            .map_err(|s| SolverError::BackendCrash(format!("HiGHS option {key}: {s:?}")))
    };
    set(&mut model, "mip_rel_gap", opts.mip_gap)?;
    if let Some(limit) = opts.time_limit {
        set(&mut model, "time_limit", limit)?;
    }
    if !form.integer.iter().any(|&i| i) {
        set(&mut model, "primal_feasibility_tolerance", 1e-9)?;
        set(&mut model, "dual_feasibility_tolerance", 1e-9)?;
    }
    let solved = model
        .try_solve()
        .map_err(|s| SolverError::BackendCrash(format!("HiGHS failed: {s:?}")))?;

    let has_point = solved.primal_solution_status() == HighsSolutionStatus::Feasible;
    let status = match solved.status() {
        HighsModelStatus::Optimal | HighsModelStatus::ModelEmpty => SolveStatus::Optimal,
        HighsModelStatus::Infeasible | HighsModelStatus::UnboundedOrInfeasible => {
            SolveStatus::Infeasible
        }
        HighsModelStatus::Unbounded => SolveStatus::Unbounded,
        HighsModelStatus::ReachedTimeLimit
        | HighsModelStatus::ReachedIterationLimit
        | HighsModelStatus::ReachedSolutionLimit
        | HighsModelStatus::ReachedInterrupt => {
            if has_point {
                SolveStatus::Feasible
            } else {
                SolveStatus::Timeout
            }
        }
        other => {
            return Err(SolverError::BackendCrash(format!("HiGHS ended with {other:?}")).into())
        }
    };
    if !status.has_values() {
        return Ok(RawSolution {
            status,
            objective: f64::NAN,
            values: Vec::new(),
        });
    }
    let values = solved.get_solution().columns().to_vec();
    Ok(RawSolution {
        status,
        objective: solved.objective_value(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(lower: f64) -> StandardForm {
        // min x + 2y  s.t.  x + y >= lower, x <= 3, y binary
        StandardForm {
            name: "t".into(),
            col_names: vec!["x".into(), "y".into()],
            col_lower: vec![0.0, 0.0],
            col_upper: vec![3.0, 1.0],
            cost: vec![1.0, 2.0],
            integer: vec![false, true],
            row_names: vec!["r".into()],
            row_lower: vec![lower],
            row_upper: vec![f64::INFINITY],
            rows: vec![vec![(0, 1.0), (1, 1.0)]],
        }
    }

    #[test]
    fn small_milp() {
        let sol = solve_form(&lp(3.5), &SolveOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Optimal);
        assert!((sol.objective - 4.5).abs() < 1e-9);
        assert!((sol.values[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_is_a_status() {
        let sol = solve_form(&lp(10.0), &SolveOptions::default()).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert!(sol.values.is_empty());
    }
}
