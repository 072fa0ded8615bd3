//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input or I/O failure,
//! 3 numerical failure (blow-up or non-convergence).

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::config::{parse_config, ScenarioConfig};
use crate::output;
use crate::solver::{self, FieldSnapshot};
use crate::thermo::{self, GasParams};
use crate::waves::WavePattern;
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "rarelab", version, about = "Rarefaction waves of a viscous, radiative, reactive gas")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file (JSON).
    pub config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Suppress progress messages.
    #[arg(long)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the scenario and write the diagnostics time series and snapshots.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Write the smooth approximate wave at time T.
    Wave {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: f64,
    },
    /// Write the exact Riemann fan at time T.
    Riemann {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: f64,
    },
    /// Tabulate the Hessian of p̃ over a (v, θ) grid for several radiation constants.
    ConvexityMap {
        #[command(flatten)]
        common: Common,
        /// Radiation constants, comma separated.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        a_list: Vec<f64>,
        /// Volume range `lo,hi`.
        #[arg(long, value_parser = parse_range, default_value = "0.2,5")]
        v_range: (f64, f64),
        /// Temperature range `lo,hi`.
        #[arg(long, value_parser = parse_range, default_value = "0.2,5")]
        theta_range: (f64, f64),
        /// Points per axis.
        #[arg(long, default_value_t = 41)]
        points: usize,
    },
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BlowUp { .. } | Error::NoConvergence(_) | Error::Internal(_) => EXIT_NUMERIC,
        Error::Domain(_) | Error::NotRarefaction(_) | Error::InvalidScenario(_) | Error::Io { .. } => EXIT_INVALID,
    }
}

fn load(path: &Path) -> crate::Result<ScenarioConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    Ok(parse_config(&text)?)
}

fn say(quiet: bool, msg: impl AsRef<str>) {
    if !quiet {
        eprintln!("{}", msg.as_ref());
    }
}

fn execute(cmd: Command) -> crate::Result<()> {
    match cmd {
        Command::Simulate { common } => simulate(&common),
        Command::Wave { common, t } => profile(&common, t, false),
        Command::Riemann { common, t } => profile(&common, t, true),
        Command::ConvexityMap { common, a_list, v_range, theta_range, points } => {
            convexity_map(&common, &a_list, v_range, theta_range, points)
        }
    }
}

/// File name of a snapshot at time `t`.
pub fn snapshot_name(prefix: &str, t: f64) -> String {
    format!("{prefix}_t{t:?}.csv")
}

fn simulate(common: &Common) -> crate::Result<()> {
    let cfg = load(&common.config)?;
    let mut state = cfg.initial_state()?;
    say(
        common.quiet,
        format!("simulating {} nodes to t = {}", cfg.grid.n, cfg.time.t_end),
    );
    let out_dir = common.out.clone();
    let quiet = common.quiet;
    let outcome = solver::run(&mut state, &cfg.time, |snap, profile| {
        let path = out_dir.join(snapshot_name("snapshot", snap.t));
        say(quiet, format!("t = {}: {}", snap.t, path.display()));
        output::write_snapshot_csv(snap, profile, &path)
    });
    let series = common.out.join("timeseries.csv");
    output::write_timeseries_csv(&outcome.records, &series)?;
    if let Some(err) = outcome.error {
        return Err(err);
    }
    say(
        common.quiet,
        format!("{} steps, {} records written to {}", state.steps(), outcome.records.len(), series.display()),
    );
    if state.z_violations() > 0 {
        say(common.quiet, format!("warning: z left [0, 1] after {} steps", state.z_violations()));
    }
    Ok(())
}

fn profile(common: &Common, t: f64, exact: bool) -> crate::Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidScenario(format!("--t must be a finite time >= 0, got {t}")));
    }
    let cfg = load(&common.config)?;
    let rd = cfg.riemann_data()?;
    let grid = cfg.grid()?;
    let pattern = WavePattern::new(&cfg.gas, &rd, cfg.wave.options())?;
    let profile = if exact { pattern.sample_fan(t, &grid)? } else { pattern.sample_smooth(t, &grid)? };
    let snap = FieldSnapshot::from_profile(&profile);
    let name = snapshot_name(if exact { "riemann" } else { "wave" }, t);
    let path = common.out.join(name);
    output::write_snapshot_csv(&snap, &profile, &path)?;
    say(common.quiet, format!("wrote {}", path.display()));
    Ok(())
}

fn parse_range(text: &str) -> std::result::Result<(f64, f64), String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [lo, hi] => {
            let lo = lo.parse::<f64>().map_err(|e| format!("{lo}: {e}"))?;
            let hi = hi.parse::<f64>().map_err(|e| format!("{hi}: {e}"))?;
            Ok((lo, hi))
        }
        _ => Err(format!("expected lo,hi, got {text:?}")),
    }
}

pub const CONVEXITY_HEADER: &str = "v,theta,a,det,p_vv,p_ss,convex";

/// Convexity table over a `points × points` grid for each radiation constant.
pub fn convexity_csv(gas: &GasParams, a_list: &[f64], v: (f64, f64), theta: (f64, f64), points: usize) -> crate::Result<String> {
    if points < 2 {
        return Err(Error::InvalidScenario(format!("--points must be >= 2, got {points}")));
    }
    for (name, (lo, hi)) in [("--v-range", v), ("--theta-range", theta)] {
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::InvalidScenario(format!("{name} must satisfy 0 < lo < hi, got {lo},{hi}")));
        }
    }
    let vs = thermo::linspace(v.0, v.1, points);
    let ths = thermo::linspace(theta.0, theta.1, points);
    let mut out = String::from(CONVEXITY_HEADER);
    out.push('\n');
    for &a in a_list {
        let gp = gas.with_radiation(a).validate()?;
        for &vv in &vs {
            for &th in &ths {
                let h = thermo::hessian_at(&gp, vv, th);
                out.push_str(&format!("{vv:?},{th:?},{a:?},{:?},{:?},{:?},{}\n", h.det, h.p_vv, h.p_ss, h.convex));
            }
        }
    }
    Ok(out)
}

fn convexity_map(common: &Common, a_list: &[f64], v: (f64, f64), theta: (f64, f64), points: usize) -> crate::Result<()> {
    let cfg = load(&common.config)?;
    let text = convexity_csv(&cfg.gas, a_list, v, theta, points)?;
    let path = common.out.join("convexity_map.csv");
    output::write_text(&path, &text)?;
    let convex = text.lines().skip(1).filter(|l| l.ends_with(",true")).count();
    let total = text.lines().count() - 1;
    say(common.quiet, format!("{convex}/{total} points convex; wrote {}", path.display()));
    Ok(())
}
