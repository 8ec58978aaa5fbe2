//! Plain-text solution files exchanged with external solvers:
//!
//! ```text
//! status optimal
//! objective 500
//! Pg_g0_q1_t1 50
//! ```
//!
//! Columns that are not listed are taken as zero.

use std::collections::HashMap;
use std::fmt::Write as _;

use hydrogrid_core::SolveStatus;

use super::{RawSolution, StandardForm};
use crate::error::SolverError;

pub fn write_solution(sol: &RawSolution, form: &StandardForm) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "status {}", sol.status);
    if sol.status.has_values() {
        let _ = writeln!(out, "objective {}", sol.objective);
        for (name, v) in form.col_names.iter().zip(&sol.values) {
            let _ = writeln!(out, "{name} {v}");
        }
    }
    out
}

pub fn parse_solution(text: &str, form: &StandardForm) -> Result<RawSolution, SolverError> {
    let index: HashMap<&str, usize> = form
        .col_names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut status = None;
    let mut objective = None;
    let mut values = vec![0.0; form.n_cols()];
    let mut seen = vec![false; form.n_cols()];
    for (i, line) in text.lines().enumerate() {
        let err = |message: String| SolverError::SolutionFile {
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [key, value] = fields[..] else {
            if fields.is_empty() {
                continue;
            }
            return Err(err("expected `name value`".into()));
        };
        match key {
            "status" => {
                status = Some(
                    SolveStatus::parse(value)
                        .ok_or_else(|| err(format!("unknown status `{value}`")))?,
                );
            }
            _ => {
                let v: f64 = value
                    .parse()
                    .map_err(|_| err(format!("`{value}` is not a number")))?;
                if key == "objective" {
                    objective = Some(v);
                    continue;
                }
                let c = *index
                    .get(key)
                    .ok_or_else(|| err(format!("unknown column `{key}`")))?;
                if std::mem::replace(&mut seen[c], true) {
                    return Err(err(format!("column `{key}` listed twice")));
                }
                values[c] = v;
            }
        }
    }
    let status = status.ok_or(SolverError::SolutionFile {
        line: 0,
        message: "missing status line".into(),
    })?;
    if !status.has_values() {
        return Ok(RawSolution {
            status,
            objective: f64::NAN,
            values: Vec::new(),
        });
    }
    let objective = objective.ok_or(SolverError::SolutionFile {
        line: 0,
        message: "missing objective line".into(),
    })?;
    Ok(RawSolution {
        status,
        objective,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form() -> StandardForm {
        StandardForm {
            name: "t".into(),
            col_names: vec!["x".into(), "y".into()],
            col_lower: vec![0.0; 2],
            col_upper: vec![1.0; 2],
            cost: vec![1.0; 2],
            integer: vec![false; 2],
            row_names: vec![],
            row_lower: vec![],
            row_upper: vec![],
            rows: vec![],
        }
    }

    #[test]
    fn round_trip() {
        let sol = RawSolution {
            status: SolveStatus::Optimal,
            objective: 0.1 + 0.2,
            values: vec![0.1 + 0.2, 1.0 / 3.0],
        };
        let text = write_solution(&sol, &form());
        assert_eq!(parse_solution(&text, &form()).unwrap(), sol);
    }

    #[test]
    fn sparse_listing_and_errors() {
        let sol = parse_solution("status feasible\nobjective 2\ny 2\n", &form()).unwrap();
        assert_eq!(sol.values, vec![0.0, 2.0]);
        let sol = parse_solution("status infeasible\n", &form()).unwrap();
        assert!(sol.values.is_empty());
        assert!(matches!(
            parse_solution("status optimal\nobjective 1\nz 1\n", &form()),
            Err(SolverError::SolutionFile { line: 3, .. })
        ));
        assert!(parse_solution("objective 1\n", &form()).is_err());
    }
}
