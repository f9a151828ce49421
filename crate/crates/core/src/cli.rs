//! Command-line front end. Data goes to files under `--out`; messages go to stderr.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::io::{
    read_config, write_diagnostics_csv, write_report, write_snapshot_csv, ConfigDocument, Report,
};
use crate::solver::{run_simulation, RunConfig, RunOutput};
use crate::verifiers::{
    burgers_sanity, epsilon_convergence, expansion_shock_fixture, grid_convergence,
    kruzhkov_residual, l1_stability_check, lp_balance_residual, mass_balance_identity,
    sup_principle_monitor, EntropyParams, DEFAULT_EPSILON_LADDER, DEFAULT_SUP_TOL,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "exprabelo", version, about = "Finite-volume laboratory for the exp-Rabelo equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a configuration and write snapshots, diagnostics and a sup-monitor report.
    Simulate {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check one estimate on a configured run.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Run a convergence ladder.
    Sweep {
        #[command(subcommand)]
        ladder: Sweep,
    },
    /// Shock and rarefaction Riemann problems with source and viscosity off.
    BurgersSanity {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1024)]
        n_cells: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Fixture {
    ExpansionShock,
}

#[derive(Debug, Subcommand)]
enum Check {
    /// L^(alpha+1) balance for every configured alpha, plus the mass identity.
    Balance {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Kruzhkov entropy inequality, on a run or on a built-in fixture.
    Entropy {
        #[arg(required_unless_present = "fixture")]
        config: Option<PathBuf>,
        #[arg(long, value_enum, conflicts_with = "config")]
        fixture: Option<Fixture>,
        /// Fixture resolution.
        #[arg(long, default_value_t = 512)]
        n_cells: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// L1 stability between the runs of two configurations.
    Stability {
        config: PathBuf,
        #[arg(long)]
        cfg2: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Sweep {
    Epsilon {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    Grid {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Distinguishes bad input (exit 2) from failed runs and checks (exit 1).
enum Failure {
    Usage(Error),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { .. }
            | Error::InvalidParameter(_)
            | Error::InvalidGrid(_)
            | Error::Alignment { .. }
            | Error::Size { .. }
            | Error::DomainTooSmall { .. }
            | Error::Domain(_) => Failure::Usage(e),
            other => Failure::Run(other),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

/// Parse `argv` (program name first), run the command and return the exit status.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}

fn load(path: &Path) -> std::result::Result<ConfigDocument, Failure> {
    read_config(path).map_err(|e| match e {
        Error::Io { .. } => Failure::Usage(e),
        other => other.into(),
    })
}

fn prepare_out(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn emit(report: &dyn Report, dir: &Path, name: &str) -> Result<bool> {
    write_report(report, &dir.join(name))?;
    let pass = report.pass();
    eprintln!("{}: {}", name, if pass { "pass" } else { "FAIL" });
    Ok(pass)
}

fn warn(out: &RunOutput) {
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
}

fn run(cfg: &RunConfig) -> Result<RunOutput> {
    let out = run_simulation(cfg)?;
    warn(&out);
    Ok(out)
}

fn execute(cmd: Command) -> Outcome {
    match cmd {
        Command::Simulate { config, out } => {
            let doc = load(&config)?;
            prepare_out(&out)?;
            let result = run(&doc.run)?;
            for (k, snap) in result.snapshots.iter().enumerate() {
                write_snapshot_csv(&result.grid, snap, &out.join(format!("snapshot_{k:04}.csv")))?;
            }
            write_diagnostics_csv(&result.diagnostics, &out.join("diagnostics.csv"))?;
            // the sup bound is monitored, never enforced
            emit(&sup_principle_monitor(&result, DEFAULT_SUP_TOL), &out, "sup.txt")?;
            Ok(true)
        }
        Command::Verify { check } => verify(check),
        Command::Sweep { ladder } => sweep(ladder),
        Command::BurgersSanity { out, n_cells } => {
            prepare_out(&out)?;
            let r = burgers_sanity(n_cells, 1.0)?;
            Ok(emit(&r, &out, "burgers.txt")?)
        }
    }
}

fn verify(check: Check) -> Outcome {
    match check {
        Check::Balance { config, out } => {
            let doc = load(&config)?;
            prepare_out(&out)?;
            let result = run(&doc.run)?;
            let mut pass = true;
            for &alpha in &result.diagnostics.alphas {
                let r = lp_balance_residual(&result, alpha)?;
                pass &= emit(&r, &out, &format!("balance_alpha{alpha}.txt"))?;
            }
            pass &= emit(&mass_balance_identity(&result)?, &out, "mass_balance.txt")?;
            Ok(pass)
        }
        Check::Entropy {
            config,
            fixture,
            n_cells,
            out,
        } => {
            let params = EntropyParams::default();
            let report = match (fixture, config) {
                (Some(Fixture::ExpansionShock), _) => {
                    prepare_out(&out)?;
                    expansion_shock_fixture(n_cells, &params)?
                }
                (None, Some(config)) => {
                    let doc = load(&config)?;
                    prepare_out(&out)?;
                    let result = run(&doc.run.clone().with_dense_snapshots())?;
                    kruzhkov_residual(&result, None, &params)?
                }
                (None, None) => unreachable!("clap requires a config or a fixture"),
            };
            Ok(emit(&report, &out, "entropy.txt")?)
        }
        Check::Stability { config, cfg2, out } => {
            let (a, b) = (load(&config)?, load(&cfg2)?);
            same_setup(&a.run, &b.run)?;
            prepare_out(&out)?;
            let t = a.run.final_time;
            let samples: Vec<f64> = (1..=a.samples)
                .map(|k| t * k as f64 / a.samples as f64)
                .collect();
            let snaps: Vec<f64> = std::iter::once(0.0).chain(samples.iter().copied()).collect();
            let (ru, rw) = rayon::join(
                || run(&a.run.clone().with_snapshots(snaps.clone())),
                || run(&b.run.clone().with_snapshots(snaps.clone())),
            );
            let r = l1_stability_check(&ru?, &rw?, a.radius, &samples)?;
            Ok(emit(&r, &out, "stability.txt")?)
        }
    }
}

fn same_setup(a: &RunConfig, b: &RunConfig) -> Result<()> {
    let (s, t) = (&a.scheme, &b.scheme);
    let same = a.grid == b.grid
        && a.final_time == b.final_time
        && s.flux == t.flux
        && s.epsilon == t.epsilon
        && s.cfl == t.cfl
        && s.v_floor == t.v_floor
        && s.integrator == t.integrator
        && s.source == t.source;
    if same {
        Ok(())
    } else {
        Err(Error::InvalidParameter(
            "stability runs must share grid, final time and scheme".into(),
        ))
    }
}

fn sweep(ladder: Sweep) -> Outcome {
    match ladder {
        Sweep::Epsilon { config, out } => {
            let doc = load(&config)?;
            prepare_out(&out)?;
            let eps = doc.epsilons.unwrap_or_else(|| DEFAULT_EPSILON_LADDER.to_vec());
            let r = epsilon_convergence(&doc.run, &eps)?;
            Ok(emit(&r, &out, "convergence.txt")?)
        }
        Sweep::Grid { config, out } => {
            let doc = load(&config)?;
            prepare_out(&out)?;
            let n = doc.run.grid.n_cells();
            let cells = doc.cells.unwrap_or_else(|| vec![n, 2 * n, 4 * n]);
            let r = grid_convergence(&doc.run, &cells)?;
            Ok(emit(&r, &out, "convergence.txt")?)
        }
    }
}
