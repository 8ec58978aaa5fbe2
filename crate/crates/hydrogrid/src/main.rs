use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hydrogrid::case_file::load_case;
use hydrogrid::mps::read_mps;
use hydrogrid::profile_file::{load_profiles, load_synth_spec, save_profiles};
use hydrogrid::run::{self, ProfileSource, RunConfig};
use hydrogrid::solver::{self, solfile, Backend, SolveOptions};
use hydrogrid::{Error, Result};
use hydrogrid_core::{scale_to_penetration, synthesize_profiles, validate_case, Variant};

#[derive(Parser)]
#[command(name = "hydrogrid", version, about = "Annual scheduling of grids with hydrogen energy hubs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one variant and write its artifact directory.
    Solve {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value = "eh")]
        variant: VariantArg,
        #[arg(long)]
        penetration: Option<f64>,
        #[arg(long)]
        roundtrip: Option<f64>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve both variants on the same inputs and compare them.
    Compare {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        penetration: Option<f64>,
        #[arg(long)]
        roundtrip: Option<f64>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve every penetration x round-trip combination.
    Sweep {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value = "eh")]
        variant: VariantArg,
        /// Comma-separated list.
        #[arg(long, value_delimiter = ',')]
        penetration: Vec<f64>,
        /// Comma-separated list.
        #[arg(long, value_delimiter = ',')]
        roundtrip: Vec<f64>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a case (and optionally a profile table) without solving.
    Validate {
        #[arg(long)]
        case: PathBuf,
        #[arg(long)]
        profiles: Option<PathBuf>,
    },
    /// Write synthesized typical-day profiles as CSV.
    Synth {
        #[arg(long)]
        case: PathBuf,
        #[arg(long)]
        synth: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        penetration: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve an MPS file with HiGHS and write a solution file; the
    /// protocol expected from external solvers.
    SolveMps {
        model: PathBuf,
        solution: PathBuf,
        #[arg(long, default_value_t = 1e-4)]
        mip_gap: f64,
        #[arg(long)]
        time_limit: Option<f64>,
    },
}

#[derive(Args)]
struct Inputs {
    #[arg(long)]
    case: PathBuf,
    #[arg(long, conflicts_with = "synth", required_unless_present = "synth")]
    profiles: Option<PathBuf>,
    /// Synthesis spec (JSON) used instead of a profile table.
    #[arg(long)]
    synth: Option<PathBuf>,
    #[arg(long, default_value_t = 0, requires = "synth")]
    seed: u64,
}

impl Inputs {
    fn source(&self) -> ProfileSource {
        match (&self.profiles, &self.synth) {
            (Some(p), _) => ProfileSource::File(p.clone()),
            (None, Some(s)) => ProfileSource::Synth {
                spec: s.clone(),
                seed: self.seed,
            },
            (None, None) => unreachable!("clap requires one profile source"),
        }
    }
}

#[derive(Args)]
struct SolverArgs {
    /// `highs` (built in) or `external` (uses HYDROGRID_SOLVER_PATH).
    #[arg(long, default_value = "highs")]
    solver: String,
    #[arg(long, default_value_t = 1e-4)]
    mip_gap: f64,
    #[arg(long)]
    time_limit: Option<f64>,
    /// Show solver log output.
    #[arg(long)]
    verbose: bool,
}

impl SolverArgs {
    fn options(&self) -> Result<SolveOptions> {
        Ok(SolveOptions {
            backend: Backend::from_name(&self.solver)?,
            mip_gap: self.mip_gap,
            time_limit: self.time_limit,
            verbose: self.verbose,
            ..SolveOptions::default()
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(alias = "eh-asm")]
    Eh,
    #[value(alias = "t-asm")]
    T,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Eh => Variant::EnergyHub,
            VariantArg::T => Variant::Traditional,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(run::EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(command: Command) -> Result<u8> {
    match command {
        Command::Solve {
            inputs,
            variant,
            penetration,
            roundtrip,
            solver,
            out,
        } => {
            let cfg = RunConfig {
                case: inputs.case.clone(),
                profiles: inputs.source(),
                variant: variant.into(),
                penetration,
                roundtrip,
                solve: solver.options()?,
                out,
            };
            let outcome = run::run_solve(&cfg)?;
            println!("status: {}", outcome.solution.status);
            if let Some(m) = &outcome.metrics {
                println!("total cost: {}", m.total_cost);
            }
            if let Some(r) = &outcome.verification {
                println!(
                    "verification: {} ({} checks, max violation {:e})",
                    if r.is_clean() { "clean" } else { "violated" },
                    r.checks_evaluated,
                    r.max_violation
                );
            }
            Ok(outcome.exit_code)
        }
        Command::Compare {
            inputs,
            penetration,
            roundtrip,
            solver,
            out,
        } => {
            let cfg = RunConfig {
                case: inputs.case.clone(),
                profiles: inputs.source(),
                variant: Variant::EnergyHub,
                penetration,
                roundtrip,
                solve: solver.options()?,
                out,
            };
            let outcome = run::run_compare(&cfg)?;
            println!(
                "status: eh-asm {}, t-asm {}",
                outcome.hub.solution.status, outcome.traditional.solution.status
            );
            if let Some(c) = &outcome.comparison {
                println!(
                    "cost: eh-asm {}, t-asm {}, saving {:.4}%",
                    outcome.hub.solution.objective,
                    outcome.traditional.solution.objective,
                    c.cost_saving_pct
                );
            }
            Ok(outcome.exit_code)
        }
        Command::Sweep {
            inputs,
            variant,
            penetration,
            roundtrip,
            solver,
            jobs,
            out,
        } => {
            let cfg = RunConfig {
                case: inputs.case.clone(),
                profiles: inputs.source(),
                variant: variant.into(),
                penetration: None,
                roundtrip: None,
                solve: solver.options()?,
                out,
            };
            let rows = run::run_sweep(&cfg, &penetration, &roundtrip, jobs)?;
            print!("{}", run::sweep_csv(&rows, cfg.solve.mip_gap));
            Ok(rows.iter().map(|r| r.exit_code).max().unwrap_or(0))
        }
        Command::Validate { case, profiles } => {
            let case = load_case(&case)?;
            let report = validate_case(&case);
            for f in &report.findings {
                println!("{f}");
            }
            if let Some(p) = profiles {
                load_profiles(&p, &case)?.check(&case)?;
            }
            if report.is_empty() {
                println!("ok");
                Ok(run::EXIT_OK)
            } else {
                Ok(run::EXIT_CONFIG)
            }
        }
        Command::Synth {
            case,
            synth,
            seed,
            penetration,
            out,
        } => {
            let case = load_case(&case)?;
            let mut profiles = synthesize_profiles(&load_synth_spec(&synth)?, &case, seed)?;
            if let Some(level) = penetration {
                profiles = scale_to_penetration(&profiles, &case, level)?;
            }
            save_profiles(&out, &profiles, &case)?;
            Ok(run::EXIT_OK)
        }
        Command::SolveMps {
            model,
            solution,
            mip_gap,
            time_limit,
        } => {
            let form = read_mps(&model)?;
            let opts = SolveOptions {
                mip_gap,
                time_limit,
                ..SolveOptions::default()
            };
            opts.validate()?;
            let raw = solver::solve_form(&form, &opts)?;
            fs::write(&solution, solfile::write_solution(&raw, &form))
                .map_err(|e| Error::Io {
                    path: solution.clone(),
                    source: e,
                })?;
            Ok(run::EXIT_OK)
        }
    }
}
