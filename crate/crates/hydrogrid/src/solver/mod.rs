//! Solver backends behind one contract: a [`MilpModel`] goes in, a
//! [`Solution`] with an internally recomputed objective comes out.

mod external;
mod form;
mod highs;
pub mod solfile;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use hydrogrid_core::solution::relative_close;
use hydrogrid_core::{MilpModel, Solution, SolveStatus};

pub use self::form::StandardForm;
pub use self::highs::solve_form;

use crate::error::{Error, Result, SolverError};

/// Environment variable naming the external solver executable.
pub const SOLVER_PATH_ENV: &str = "HYDROGRID_SOLVER_PATH";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    /// HiGHS, linked in-process.
    Highs,
    /// Executable speaking the MPS / solution-file protocol.
    External(PathBuf),
}

impl Backend {
    /// Resolves `highs` or `external`; the latter reads [`SOLVER_PATH_ENV`].
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "highs" => Ok(Backend::Highs),
            "external" => std::env::var_os(SOLVER_PATH_ENV)
                .map(|p| Backend::External(PathBuf::from(p)))
                .ok_or_else(|| {
                    SolverError::BackendMissing(format!("{SOLVER_PATH_ENV} is not set")).into()
                }),
            other => Err(Error::Config(format!(
                "unknown solver `{other}` (expected highs or external)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Backend::Highs => "highs",
            Backend::External(_) => "external",
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Backend::from_name(s)
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub backend: Backend,
    /// Relative optimality gap.
    pub mip_gap: f64,
    /// Seconds; `None` runs to completion.
    pub time_limit: Option<f64>,
    /// Re-solve the continuous part with binaries fixed, for tight row
    /// residuals. On by default.
    pub polish: bool,
    pub verbose: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            backend: Backend::Highs,
            mip_gap: 1e-4,
            time_limit: None,
            polish: true,
            verbose: false,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.mip_gap >= 0.0 && self.mip_gap.is_finite()) {
            return Err(Error::Config(format!("mip gap {} must be >= 0", self.mip_gap)));
        }
        if let Some(t) = self.time_limit {
            if !(t > 0.0) {
                return Err(Error::Config(format!("time limit {t} must be positive")));
            }
        }
        Ok(())
    }
}

/// Backend output in standard-form column order, objective as reported.
#[derive(Clone, Debug, PartialEq)]
pub struct RawSolution {
    pub status: SolveStatus,
    pub objective: f64,
    pub values: Vec<f64>,
}

fn run_backend(form: &StandardForm, opts: &SolveOptions) -> Result<RawSolution> {
    match &opts.backend {
        Backend::Highs => solve_form(form, opts),
        Backend::External(exe) => external::solve(exe, form, opts),
    }
}

/// Solves `model`. Infeasible and unbounded outcomes are returned as
/// statuses, not errors.
pub fn solve(model: &MilpModel, opts: &SolveOptions) -> Result<Solution> {
    opts.validate()?;
    let form = StandardForm::from(model);
    let raw = run_backend(&form, opts)?;
    if !raw.status.has_values() {
        return Ok(Solution::without_values(raw.status));
    }
    let mut values = raw.values;
    Solution::snap_binaries(&mut values, model).map_err(SolverError::from)?;
    let reported = raw.objective;
    let recomputed = model.objective_value(&values);
    // Snapping moves binaries by at most 1e-6, so the backend's figure must
    // still agree before any polishing.
    if !relative_close(recomputed, reported, 1e-6) {
        return Err(SolverError::from(
            hydrogrid_core::solution::SolutionError::ObjectiveMismatch {
                reported,
                recomputed,
            },
        )
        .into());
    }
    if opts.polish {
        let fixed = fixed_binary_lp(&form, &values);
        let lp = solve_form(&fixed, &lp_options(opts))?;
        if lp.status == SolveStatus::Optimal && lp.objective <= reported + 1e-9 * reported.abs().max(1.0) {
            let mut polished = lp.values;
            Solution::snap_binaries(&mut polished, model).map_err(SolverError::from)?;
            return Ok(Solution::reconciled(raw.status, model, polished, lp.objective)
                .map_err(SolverError::from)?);
        }
    }
    Ok(Solution::reconciled(raw.status, model, values, reported).map_err(SolverError::from)?)
}

/// Solves the continuous subproblem with every binary column fixed to the
/// value it has in `binaries` (other entries are ignored).
pub fn solve_fixed_binaries(
    model: &MilpModel,
    binaries: &[f64],
    opts: &SolveOptions,
) -> Result<Solution> {
    opts.validate()?;
    let form = fixed_binary_lp(&StandardForm::from(model), binaries);
    let raw = solve_form(&form, &lp_options(opts))?;
    if !raw.status.has_values() {
        return Ok(Solution::without_values(raw.status));
    }
    let mut values = raw.values;
    Solution::snap_binaries(&mut values, model).map_err(SolverError::from)?;
    Ok(Solution::reconciled(raw.status, model, values, raw.objective).map_err(SolverError::from)?)
}

fn lp_options(opts: &SolveOptions) -> SolveOptions {
    SolveOptions {
        backend: Backend::Highs,
        polish: false,
        ..opts.clone()
    }
}

fn fixed_binary_lp(form: &StandardForm, values: &[f64]) -> StandardForm {
    let mut fixed = form.clone();
    for (c, value) in values.iter().enumerate().take(fixed.n_cols()) {
        if fixed.integer[c] {
            let v = value.round();
            fixed.col_lower[c] = v;
            fixed.col_upper[c] = v;
            fixed.integer[c] = false;
        }
    }
    fixed
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backend_names() {
        assert_eq!(Backend::from_name("highs").unwrap(), Backend::Highs);
        assert!(matches!(Backend::from_name("glpk"), Err(Error::Config(_))));
    }

    #[test]
    fn options_are_checked() {
        let bad = SolveOptions {
            mip_gap: -1.0,
            ..SolveOptions::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolveOptions {
            time_limit: Some(0.0),
            ..SolveOptions::default()
        };
        assert!(bad.validate().is_err());
    }
}
