//! Command-line front end for `renyidep`.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a solve did not
//! converge (results are still printed), 3 `verify` found a failure.

pub mod args;
mod commands;
pub mod error;
pub mod format;
pub mod render;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use renyidep::{JointPmf, SimParams};

use args::{Cli, Command};
use commands::Computed;
use error::{CliError, EXIT_NONCONVERGED, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};
use render::{render_record, render_table, Field, Format, Record};
use verify::{run_suite, VerifyOptions};

fn load(path: &std::path::Path, err: &mut dyn Write) -> error::Result<JointPmf> {
    let j = format::load_joint(path)?;
    if j.renormalized() {
        let _ = writeln!(err, "warning: {} did not sum to 1; renormalized", path.display());
    }
    Ok(j)
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(c: Computed, single: bool, fmt: Format, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = if single {
        render_record(&c.records[0], fmt)
    } else {
        render_table(&c.records, fmt)
    };
    let _ = write!(out, "{text}");
    if c.converged {
        EXIT_OK
    } else {
        let _ = writeln!(err, "warning: solver did not converge within --max-iters");
        EXIT_NONCONVERGED
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> error::Result<i32> {
    let fmt = cli.format;
    match &cli.command {
        Command::Measure { file, measure, alpha, oracle, solver } => {
            let j = load(file, err)?;
            let c = commands::measure(&j, *measure, *alpha, *oracle, &solver.config())?;
            Ok(emit(c, true, fmt, out, err))
        }
        Command::Sweep { file, alpha_min, alpha_max, steps, measure, solver } => {
            let grid = commands::alpha_grid(*alpha_min, *alpha_max, *steps)?;
            let j = load(file, err)?;
            let c = commands::sweep(&j, &grid, *measure, &solver.config())?;
            Ok(emit(c, false, fmt, out, err))
        }
        Command::RateRegion { file, rho, solver } => {
            let j = load(file, err)?;
            let c = commands::region(&j, *rho, &solver.config())?;
            Ok(emit(c, true, fmt, out, err))
        }
        Command::Simulate { file, n, rx, ry, rho, trials, exact, solver } => {
            let j = load(file, err)?;
            let params = SimParams {
                n: *n,
                rx: *rx,
                ry: *ry,
                rho: *rho,
                trials: *trials,
                seed: solver.seed,
                exact: *exact,
            };
            let c = commands::simulate(&j, &params, &solver.config())?;
            Ok(emit(c, true, fmt, out, err))
        }
        Command::Verify { solver, inject_k_offset } => {
            let cfg = solver.config();
            cfg.validate().map_err(CliError::from)?;
            let opts = VerifyOptions { cfg, k_offset: *inject_k_offset };
            let results = run_suite(&opts);
            let failed = results.iter().filter(|r| !r.passed).count();
            if fmt == Format::Human {
                for r in &results {
                    let status = if r.passed { "PASS" } else { "FAIL" };
                    let _ = writeln!(out, "{status} [{}] {}: {}", r.module, r.name, r.detail);
                }
                let _ = writeln!(out, "{} of {} checks passed", results.len() - failed, results.len());
            } else {
                let rows: Vec<Record> = results
                    .iter()
                    .map(|r| {
                        Record::new()
                            .with("module", Field::Text(r.module.into()))
                            .with("item", Field::Text(r.name.into()))
                            .with("passed", Field::Bool(r.passed))
                            .with("detail", Field::Text(r.detail.clone()))
                    })
                    .collect();
                let _ = write!(out, "{}", render_table(&rows, fmt));
            }
            Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    }
}
