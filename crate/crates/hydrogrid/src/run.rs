//! Run orchestration: load inputs, build, solve, verify and write the
//! artifact directory.

use std::fs;
use std::path::{Path, PathBuf};

use hydrogrid_core::analysis::{energy_balance_residuals, hourly_generation};
use hydrogrid_core::solution::relative_close;
use hydrogrid_core::{
    build_model, compare_runs, compute_metrics, scale_to_penetration, storage_trajectory,
    synthesize_profiles, verify_solution, AnnualMetrics, ComparisonReport, Fingerprint, GridCase,
    MilpModel, QuarterProfiles, Solution, SolveStatus, Variant, VerificationReport,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::case_file::load_case;
use crate::error::{Error, Result};
use crate::mps::write_mps;
use crate::profile_file::{load_profiles, load_synth_spec};
use crate::report;
use crate::solver::{solve, SolveOptions, StandardForm};

/// Electrolyzer efficiency used when a round-trip efficiency is imposed;
/// the fuel cell takes the remainder.
pub const ELECTROLYZER_EFF_FOR_ROUNDTRIP: f64 = 0.8;

/// Absolute tolerance for the verifier.
pub const VERIFY_TOL: f64 = 1e-6;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_NO_SOLUTION: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;

/// Exit code for a solved run: 2 without a usable point, 3 when the point
/// fails verification.
pub fn exit_code(status: SolveStatus, verified_clean: bool) -> u8 {
    match (status.has_values(), verified_clean) {
        (false, _) => EXIT_NO_SOLUTION,
        (true, false) => EXIT_VERIFICATION,
        (true, true) => EXIT_OK,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileSource {
    File(PathBuf),
    Synth { spec: PathBuf, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub case: PathBuf,
    pub profiles: ProfileSource,
    pub variant: Variant,
    /// Rescale wind to this annual energy share.
    pub penetration: Option<f64>,
    /// Impose this round-trip efficiency on every hub.
    pub roundtrip: Option<f64>,
    pub solve: SolveOptions,
    pub out: PathBuf,
}

/// Hub efficiencies realising `roundtrip`.
pub fn efficiency_split(roundtrip: f64) -> Result<(f64, f64)> {
    let eta_e = ELECTROLYZER_EFF_FOR_ROUNDTRIP;
    if !(roundtrip > 0.0 && roundtrip <= eta_e) {
        return Err(Error::Config(format!(
            "round-trip efficiency {roundtrip} must lie in (0, {eta_e}]"
        )));
    }
    Ok((eta_e, roundtrip / eta_e))
}

/// Case and profiles after applying the efficiency and penetration overrides.
pub fn load_inputs(cfg: &RunConfig) -> Result<(GridCase, QuarterProfiles)> {
    let mut case = load_case(&cfg.case)?;
    if let Some(rt) = cfg.roundtrip {
        let (eta_e, eta_f) = efficiency_split(rt)?;
        case = case.with_hub_efficiencies(eta_e, eta_f);
    }
    let profiles = match &cfg.profiles {
        ProfileSource::File(path) => load_profiles(path, &case)?,
        ProfileSource::Synth { spec, seed } => {
            synthesize_profiles(&load_synth_spec(spec)?, &case, *seed)?
        }
    };
    let profiles = match cfg.penetration {
        Some(level) => scale_to_penetration(&profiles, &case, level)?,
        None => profiles,
    };
    Ok((case, profiles))
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    case: &'a Path,
    profiles: &'a ProfileSource,
    variant: &'static str,
    penetration: Option<f64>,
    roundtrip: Option<f64>,
    electrolyzer_eff: Option<f64>,
    fuelcell_eff: Option<f64>,
    solver: &'static str,
    mip_gap: f64,
    time_limit: Option<f64>,
    fingerprint: String,
    columns: usize,
    rows: usize,
    status: &'static str,
    objective: Option<f64>,
    verification: Option<&'static str>,
    exit_code: u8,
}

/// Everything a solved run produced, in memory.
#[derive(Debug)]
pub struct RunOutcome {
    pub case: GridCase,
    pub profiles: QuarterProfiles,
    pub model: MilpModel,
    pub solution: Solution,
    pub verification: Option<VerificationReport>,
    pub metrics: Option<AnnualMetrics>,
    pub exit_code: u8,
}

fn write(dir: &Path, name: &str, contents: impl AsRef<[u8]>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Error::io(&path, e))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Solves one variant. I/O and configuration problems are errors; solver
/// and verification outcomes are reported through `exit_code`.
pub fn run_solve(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.solve.validate()?;
    let (case, profiles) = load_inputs(cfg)?;
    solve_inputs(cfg, case, profiles, &cfg.out)
}

fn solve_inputs(
    cfg: &RunConfig,
    case: GridCase,
    profiles: QuarterProfiles,
    out: &Path,
) -> Result<RunOutcome> {
    create_dir(out)?;
    let model = build_model(&case, &profiles, cfg.variant)?;
    write_mps(&StandardForm::from(&model), out.join("model.mps"))?;
    let solution = solve(&model, &cfg.solve)?;

    let mut verification = None;
    let mut metrics = None;
    if solution.status.has_values() {
        let report = verify_solution(&case, &profiles, &model, &solution, VERIFY_TOL);
        write(out, "verification.txt", report::verification_text(&report, VERIFY_TOL))?;
        write(out, "solution.csv", report::solution_csv(&model, &solution))?;
        let m = compute_metrics(&case, &profiles, &model.index, &solution);
        write(out, "metrics.csv", report::metrics_csv(&m))?;
        write(out, "metrics.md", report::metrics_markdown(cfg.variant.as_str(), &m))?;
        if cfg.variant == Variant::EnergyHub {
            let traj = storage_trajectory(&case, &model.index, &solution.values);
            write(out, "trajectory.csv", report::trajectory_csv(&traj, &case))?;
        }
        let hourly = hourly_generation(&case, &model.index, &solution);
        for (q, series) in hourly.iter().enumerate() {
            let svg = report::generation_svg(
                &format!("Quarter {} hourly conventional generation", q + 1),
                &[(cfg.variant.as_str(), series)],
            );
            write(out, &format!("generation_q{}.svg", q + 1), svg)?;
        }
        verification = Some(report);
        metrics = Some(m);
    }
    let code = exit_code(
        solution.status,
        verification.as_ref().is_some_and(|r| r.is_clean()),
    );
    let efficiencies = cfg.roundtrip.map(efficiency_split).transpose()?;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        case: &cfg.case,
        profiles: &cfg.profiles,
        variant: cfg.variant.as_str(),
        penetration: cfg.penetration,
        roundtrip: cfg.roundtrip,
        electrolyzer_eff: efficiencies.map(|e| e.0),
        fuelcell_eff: efficiencies.map(|e| e.1),
        solver: cfg.solve.backend.name(),
        mip_gap: cfg.solve.mip_gap,
        time_limit: cfg.solve.time_limit,
        fingerprint: Fingerprint::of(&case, &profiles).to_hex(),
        columns: model.n_cols(),
        rows: model.rows.len(),
        status: solution.status.as_str(),
        objective: solution.status.has_values().then_some(solution.objective),
        verification: verification
            .as_ref()
            .map(|r| if r.is_clean() { "clean" } else { "violated" }),
        exit_code: code,
    };
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    write(out, "manifest.json", json)?;
    Ok(RunOutcome {
        case,
        profiles,
        model,
        solution,
        verification,
        metrics,
        exit_code: code,
    })
}

#[derive(Debug)]
pub struct CompareOutcome {
    pub hub: RunOutcome,
    pub traditional: RunOutcome,
    pub comparison: Option<ComparisonReport>,
    pub exit_code: u8,
}

/// Relative slack granted to cost comparisons between two MIP solves.
pub fn cost_slack(mip_gap: f64, a: f64, b: f64) -> f64 {
    mip_gap * a.abs().max(b.abs())
}

/// Solves both variants on identical inputs into `out/eh-asm` and
/// `out/t-asm`, then writes `comparison.csv`, `comparison.md` and overlaid
/// generation plots. A hub run costlier than the benchmark beyond the
/// optimality-gap slack is an error.
pub fn run_compare(cfg: &RunConfig) -> Result<CompareOutcome> {
    cfg.solve.validate()?;
    let (case, profiles) = load_inputs(cfg)?;
    create_dir(&cfg.out)?;
    let leg = |variant: Variant| {
        let leg_cfg = RunConfig {
            variant,
            ..cfg.clone()
        };
        let dir = cfg.out.join(variant.as_str());
        solve_inputs(&leg_cfg, case.clone(), profiles.clone(), &dir)
    };
    let hub = leg(Variant::EnergyHub)?;
    let traditional = leg(Variant::Traditional)?;
    let (Some(mh), Some(mt)) = (&hub.metrics, &traditional.metrics) else {
        let exit_code = hub.exit_code.max(traditional.exit_code);
        return Ok(CompareOutcome {
            hub,
            traditional,
            comparison: None,
            exit_code,
        });
    };
    let comparison = compare_runs(mh, mt)?;
    write(&cfg.out, "comparison.csv", report::comparison_csv(&comparison))?;
    let md = format!(
        "{}\n{}\nCost saving of EH-ASM over T-ASM: {:.2}%\n",
        report::metrics_markdown("EH-ASM", mh),
        report::metrics_markdown("T-ASM", mt),
        comparison.cost_saving_pct
    );
    write(&cfg.out, "comparison.md", md)?;
    let gh = hourly_generation(&hub.case, &hub.model.index, &hub.solution);
    let gt = hourly_generation(&traditional.case, &traditional.model.index, &traditional.solution);
    for (q, (a, b)) in gh.iter().zip(&gt).enumerate() {
        let svg = report::generation_svg(
            &format!("Quarter {} hourly conventional generation", q + 1),
            &[("EH-ASM", a), ("T-ASM", b)],
        );
        write(&cfg.out, &format!("generation_q{}.svg", q + 1), svg)?;
    }
    let exit_code = hub.exit_code.max(traditional.exit_code);
    if exit_code == EXIT_OK
        && mh.total_cost > mt.total_cost + cost_slack(cfg.solve.mip_gap, mh.total_cost, mt.total_cost)
    {
        return Err(Error::Dominance {
            hub: mh.total_cost,
            traditional: mt.total_cost,
        });
    }
    Ok(CompareOutcome {
        hub,
        traditional,
        comparison: Some(comparison),
        exit_code,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub penetration: Option<f64>,
    pub roundtrip: Option<f64>,
    pub status: Option<SolveStatus>,
    pub total_cost: Option<f64>,
    pub curtailment_mwh: Option<f64>,
    pub exit_code: u8,
    pub error: Option<String>,
}

fn cell_dir(out: &Path, penetration: Option<f64>, roundtrip: Option<f64>) -> PathBuf {
    let p = penetration.map_or("base".to_string(), |v| v.to_string());
    let r = roundtrip.map_or("base".to_string(), |v| v.to_string());
    out.join(format!("pen{p}_rt{r}"))
}

/// Solves every (penetration, round-trip) cell with up to `jobs` cells in
/// flight. A failing cell is recorded in its row and the sweep continues.
/// Writes `sweep.csv` under `cfg.out`.
pub fn run_sweep(
    cfg: &RunConfig,
    penetrations: &[f64],
    roundtrips: &[f64],
    jobs: usize,
) -> Result<Vec<SweepRow>> {
    if penetrations.is_empty() || roundtrips.is_empty() {
        return Err(Error::Config(
            "a sweep needs at least one penetration and one round-trip efficiency".into(),
        ));
    }
    if jobs == 0 {
        return Err(Error::Config("--jobs must be at least 1".into()));
    }
    cfg.solve.validate()?;
    for &rt in roundtrips {
        efficiency_split(rt)?;
    }
    create_dir(&cfg.out)?;
    let cells: Vec<(f64, f64)> = penetrations
        .iter()
        .flat_map(|&p| roundtrips.iter().map(move |&r| (p, r)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(p, r)| {
                let cell = RunConfig {
                    penetration: Some(p),
                    roundtrip: Some(r),
                    out: cell_dir(&cfg.out, Some(p), Some(r)),
                    ..cfg.clone()
                };
                match run_solve(&cell) {
                    Ok(outcome) => SweepRow {
                        penetration: Some(p),
                        roundtrip: Some(r),
                        status: Some(outcome.solution.status),
                        total_cost: outcome.metrics.as_ref().map(|m| m.total_cost),
                        curtailment_mwh: outcome
                            .metrics
                            .as_ref()
                            .map(|m| m.quarters.iter().map(|q| q.wind_curtailment).sum()),
                        exit_code: outcome.exit_code,
                        error: None,
                    },
                    Err(e) => SweepRow {
                        penetration: Some(p),
                        roundtrip: Some(r),
                        status: None,
                        total_cost: None,
                        curtailment_mwh: None,
                        exit_code: EXIT_CONFIG,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect()
    });
    write(&cfg.out, "sweep.csv", sweep_csv(&rows, cfg.solve.mip_gap))?;
    Ok(rows)
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Cells whose cost drops when the round-trip efficiency drops, at equal
/// penetration, beyond the optimality-gap slack.
pub fn monotonicity_notes(rows: &[SweepRow], mip_gap: f64) -> Vec<String> {
    let mut notes = Vec::new();
    for a in rows {
        for b in rows {
            let (Some(ca), Some(cb)) = (a.total_cost, b.total_cost) else {
                continue;
            };
            if a.penetration == b.penetration
                && a.roundtrip < b.roundtrip
                && ca + cost_slack(mip_gap, ca, cb) < cb
            {
                notes.push(format!(
                    "penetration {}: cost {ca} at round-trip {} is below {cb} at {}",
                    opt(a.penetration),
                    opt(a.roundtrip),
                    opt(b.roundtrip)
                ));
            }
        }
    }
    notes
}

pub fn sweep_csv(rows: &[SweepRow], mip_gap: f64) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let write = |w: &mut csv::Writer<Vec<u8>>, rec: [String; 7]| {
        w.write_record(rec).expect("in-memory write");
    };
    write(
        &mut w,
        [
            "penetration",
            "roundtrip",
            "status",
            "total_cost",
            "curtailment_mwh",
            "exit_code",
            "note",
        ]
        .map(String::from),
    );
    for row in rows {
        write(
            &mut w,
            [
                opt(row.penetration),
                opt(row.roundtrip),
                row.status.map(|s| s.to_string()).unwrap_or_default(),
                opt(row.total_cost),
                opt(row.curtailment_mwh),
                row.exit_code.to_string(),
                row.error.clone().unwrap_or_default(),
            ],
        );
    }
    for note in monotonicity_notes(rows, mip_gap) {
        write(
            &mut w,
            [
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                format!("non-monotone: {note}"),
            ],
        );
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

/// Largest quarterly energy-balance residual and largest annual net
/// hydrogen per storage bus, both in MWh.
pub fn conservation_residuals(outcome: &RunOutcome) -> (f64, f64) {
    let balance = energy_balance_residuals(
        &outcome.case,
        &outcome.profiles,
        &outcome.model.index,
        &outcome.solution,
    )
    .into_iter()
    .fold(0.0_f64, |m, r| m.max(r.abs()));
    let cycle = if outcome.model.variant == Variant::EnergyHub {
        storage_trajectory(&outcome.case, &outcome.model.index, &outcome.solution.values)
            .annual_net_hydrogen()
            .into_iter()
            .fold(0.0_f64, |m, r| m.max(r.abs()))
    } else {
        0.0
    };
    (balance, cycle)
}

/// True when `a <= b` within the optimality-gap slack.
pub fn cost_within(a: f64, b: f64, mip_gap: f64) -> bool {
    a <= b + cost_slack(mip_gap, a, b) || relative_close(a, b, 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_total() {
        use SolveStatus::*;
        for s in [Optimal, Feasible, Infeasible, Unbounded, Timeout] {
            for clean in [true, false] {
                let code = exit_code(s, clean);
                assert!(code <= 3);
                assert_eq!(code == 0, s.has_values() && clean);
            }
        }
        assert_eq!(exit_code(Infeasible, false), 2);
        assert_eq!(exit_code(Optimal, false), 3);
    }

    #[test]
    fn roundtrip_split() {
        let (e, f) = efficiency_split(0.48).unwrap();
        assert_eq!(e, 0.8);
        assert!((f - 0.6).abs() < 1e-12);
        assert!(efficiency_split(0.9).is_err());
        assert!(efficiency_split(0.0).is_err());
    }

    #[test]
    fn monotonicity_note_flags_cheaper_low_efficiency() {
        let row = |rt: f64, cost: f64| SweepRow {
            penetration: Some(0.5),
            roundtrip: Some(rt),
            status: Some(SolveStatus::Optimal),
            total_cost: Some(cost),
            curtailment_mwh: Some(0.0),
            exit_code: 0,
            error: None,
        };
        assert!(monotonicity_notes(&[row(0.37, 101.0), row(0.48, 100.0)], 1e-4).is_empty());
        assert_eq!(monotonicity_notes(&[row(0.37, 90.0), row(0.48, 100.0)], 1e-4).len(), 1);
    }
}
