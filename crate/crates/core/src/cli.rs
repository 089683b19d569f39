//! Command implementations behind the `squeezetrap` binary.
//!
//! Data files go to `output.path` (or to `out` when no path is configured);
//! human-readable summaries go to `log`. Each command returns the process exit
//! status: 0 on success, 1 for failed checks, invalid input or unstable modes,
//! 2 when an integration diverges.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use crate::config::{EquilibriumSystem, OutputFormat, RunConfig};
use crate::dynamics;
use crate::equilibria::{self, RootRecord, RootSearch};
use crate::error::Error;
use crate::floquet;
use crate::trap::TrapKind;
use crate::verify::{run_checks, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_DIVERGENCE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Simulate,
    Equilibria,
    Spectrum,
    Stability,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Divergence { .. } => EXIT_DIVERGENCE,
        _ => EXIT_FAILURE,
    }
}

/// Runs a command; `config` is required by everything except `verify`.
pub fn execute(
    cmd: Command,
    config: Option<&RunConfig>,
    filter: Option<&str>,
    out: &mut dyn Write,
    log: &mut dyn Write,
) -> i32 {
    let result = match (cmd, config) {
        (Command::Verify, _) => return cmd_verify(filter, log),
        (_, None) => Err(Error::InvalidArgument("this command needs --config".into())),
        (Command::Simulate, Some(c)) => cmd_simulate(c, out, log),
        (Command::Equilibria, Some(c)) => cmd_equilibria(c, out, log),
        (Command::Spectrum, Some(c)) => cmd_spectrum(c, out, log),
        (Command::Stability, Some(c)) => cmd_stability(c, out, log),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(log, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn cmd_verify(filter: Option<&str>, log: &mut dyn Write) -> i32 {
    let reports = run_checks(&VerifyOptions {
        filter,
        ..Default::default()
    });
    let failed = reports.iter().filter(|r| !r.passed()).count();
    for r in &reports {
        let _ = writeln!(log, "{r}");
    }
    let _ = writeln!(log, "{} checks, {} failed", reports.len(), failed);
    if reports.is_empty() {
        let _ = writeln!(log, "no check matches the filter");
        return EXIT_FAILURE;
    }
    if failed == 0 {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn with_output<F>(c: &RunConfig, out: &mut dyn Write, write: F) -> Result<(), Error>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match c.output_path() {
        Some(path) => {
            let mut file = BufWriter::new(File::create(path)?);
            write(&mut file)?;
            file.flush()?;
        }
        None => write(out)?,
    }
    Ok(())
}

pub fn cmd_simulate(c: &RunConfig, out: &mut dyn Write, log: &mut dyn Write) -> Result<(), Error> {
    match dynamics::integrate(&c.initial, c.t0, c.t1, &c.params, c.tol) {
        Ok(traj) => {
            with_output(c, out, |w| traj.write_csv(w))?;
            let last = traj.last().map_or(f64::NAN, |s| s.energy);
            writeln!(
                log,
                "steps: {}  rejected: {}  max residual: {:.3e}  energy drift: {:.3e}  final energy: {}",
                traj.stats.accepted,
                traj.stats.rejected,
                traj.max_residual(),
                traj.max_relative_energy_drift(),
                dynamics::fmt_f64(last)
            )?;
            Ok(())
        }
        Err(d) => {
            with_output(c, out, |w| d.partial.write_csv(w))?;
            writeln!(log, "partial trajectory with {} samples written", d.partial.samples.len())?;
            Err(d.into())
        }
    }
}

#[derive(serde::Serialize)]
struct RootsDocument<'a> {
    system: &'static str,
    starts: usize,
    converged: usize,
    roots: &'a [RootRecord],
}

pub fn cmd_equilibria(c: &RunConfig, out: &mut dyn Write, log: &mut dyn Write) -> Result<(), Error> {
    let e = &c.document.equilibria;
    let system = match e.system {
        EquilibriumSystem::Auto if c.params.geometry.kind == TrapKind::Combined => EquilibriumSystem::Combined,
        EquilibriumSystem::Auto => EquilibriumSystem::Pseudopotential,
        s => s,
    };
    let (name, sys, search) = match system {
        EquilibriumSystem::Combined => {
            let sys = equilibria::combined_system(e.t, &c.params);
            let points = equilibria::solve_linear(&sys);
            let n = points.len();
            (
                "combined",
                sys,
                RootSearch {
                    points,
                    starts: 1,
                    converged: n,
                },
            )
        }
        _ => {
            let sys = equilibria::pseudopotential_system(&c.params);
            let search = equilibria::solve_multistart(&sys, &e.multistart());
            ("pseudopotential", sys, search)
        }
    };
    let roots = equilibria::records(&sys, &search.points);
    let format = c.document.output.format.unwrap_or(OutputFormat::Json);
    with_output(c, out, |w| match format {
        OutputFormat::Csv => equilibria::write_roots_csv(&roots, w),
        OutputFormat::Json => {
            let doc = RootsDocument {
                system: name,
                starts: search.starts,
                converged: search.converged,
                roots: &roots,
            };
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            writeln!(w)
        }
    })?;
    writeln!(
        log,
        "{name} system: {} root(s) from {} start(s), {} converged",
        roots.len(),
        search.starts,
        search.converged
    )?;
    Ok(())
}

pub fn cmd_spectrum(c: &RunConfig, out: &mut dyn Write, log: &mut dyn Write) -> Result<(), Error> {
    let s = &c.document.spectrum;
    let lines = floquet::spectrum(&c.params, s.max_m, s.max_l)?;
    with_output(c, out, |w| floquet::write_spectrum_csv(&lines, w))?;
    let (mu_a, mu_r) = floquet::floquet_frequencies(&c.params)?;
    writeln!(log, "{} levels; mu_a = {mu_a:.10e}, mu_r = {mu_r:.10e}", lines.len())?;
    Ok(())
}

pub fn cmd_stability(c: &RunConfig, out: &mut dyn Write, log: &mut dyn Write) -> Result<(), Error> {
    let map = floquet::stability_map(&c.document.stability.grid())?;
    with_output(c, out, |w| floquet::write_stability_csv(&map, w))?;
    let stable = map.iter().filter(|r| r.stable).count();
    writeln!(log, "{} grid points, {} stable", map.len(), stable)?;
    Ok(())
}
