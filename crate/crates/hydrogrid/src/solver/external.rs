use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::{solfile, RawSolution, SolveOptions, StandardForm};
use crate::error::{Error, Result, SolverError};
use crate::mps::write_mps;

/// Runs `exe <model.mps> <solution.txt> --mip-gap <g> [--time-limit <s>]`
/// and reads the solution file it leaves behind.
pub fn solve(exe: &Path, form: &StandardForm, opts: &SolveOptions) -> Result<RawSolution> {
    let dir = ScratchDir::new()?;
    let mps = dir.0.join("model.mps");
    let sol = dir.0.join("solution.txt");
    write_mps(form, &mps)?;
    let mut cmd = Command::new(exe);
    cmd.arg(&mps).arg(&sol).arg("--mip-gap").arg(opts.mip_gap.to_string());
    if let Some(t) = opts.time_limit {
        cmd.arg("--time-limit").arg(t.to_string());
    }
    let output = cmd.output().map_err(|e| {
        SolverError::BackendMissing(format!("cannot run {}: {e}", exe.display()))
    })?;
    if !output.status.success() {
        return Err(SolverError::BackendCrash(format!(
            "{} exited with {}: {}",
            exe.display(),
            output.status,
            String::from_utf8_lossy(&output.stderr).trim()
        ))
        .into());
    }
    let text = fs::read_to_string(&sol).map_err(|e| Error::io(&sol, e))?;
    Ok(solfile::parse_solution(&text, form)?)
}

struct ScratchDir(PathBuf);

impl ScratchDir {
    fn new() -> Result<Self> {
        static COUNTER: AtomicUsize = AtomicUsize::new(0);
        let n = COUNTER.fetch_add(1, Ordering::Relaxed);
        let path = std::env::temp_dir().join(format!("hydrogrid-{}-{n}", std::process::id()));
        fs::create_dir_all(&path).map_err(|e| Error::io(&path, e))?;
        Ok(ScratchDir(path))
    }
}

impl Drop for ScratchDir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}
