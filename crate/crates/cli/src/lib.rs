//! `run` and `scan` subcommands behind the `noonsim` binary.

pub mod document;
mod error;

use std::fmt::Write as _;

use noon_core::{
    apply_pulse, parse, run_sequence_with, Level, Program, PulseDuration, RunOptions, Step,
    Truncation,
};
use rayon::prelude::*;

pub use document::{fmt_real, ResultDocument};
pub use error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct RunArgs {
    pub outcome: Option<Level>,
    pub dump_states: bool,
    pub format: Format,
    /// Photon number of the NOON target scored in the final diagnostics.
    pub noon_n: usize,
    pub leakage_limit: f64,
}

impl Default for RunArgs {
    fn default() -> Self {
        RunArgs {
            outcome: None,
            dump_states: false,
            format: Format::Json,
            noon_n: 8,
            leakage_limit: 1e-6,
        }
    }
}

fn run_options(outcome: Option<Level>, leakage_limit: f64) -> RunOptions {
    RunOptions {
        leakage_limit,
        outcome_override: outcome,
    }
}

fn parse_program(text: &str) -> Result<Program, CliError> {
    let program = parse(text)?;
    if program.steps.is_empty() {
        return Err(CliError::Usage("program has no steps to run".into()));
    }
    Ok(program)
}

/// Executes a program and renders the result document.
pub fn cmd_run(text: &str, args: &RunArgs) -> Result<String, CliError> {
    let program = parse_program(text)?;
    let result = run_sequence_with(
        &program.steps,
        &program.trunc,
        &run_options(args.outcome, args.leakage_limit),
    )?;
    let doc = ResultDocument::build(&program, &result, args.noon_n, args.dump_states)?;
    match args.format {
        Format::Json => Ok(doc.to_json()),
        Format::Csv => {
            if args.dump_states {
                return Err(CliError::Usage(
                    "state dumps are only available with --format json".into(),
                ));
            }
            let opt = |v: Option<f64>| v.map(fmt_real).unwrap_or_default();
            let mut out =
                String::from("step,kind,duration,predicted_infidelity,leakage,p_excited,p_ground,outcome,probability\n");
            for s in &doc.steps {
                let (outcome, prob) = match &s.measurement {
                    Some(m) => (m.outcome, fmt_real(m.probability)),
                    None => ("", String::new()),
                };
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    s.index,
                    s.kind,
                    opt(s.duration),
                    opt(s.predicted_infidelity),
                    fmt_real(s.leakage),
                    fmt_real(s.p_excited),
                    fmt_real(s.p_ground),
                    outcome,
                    prob
                )
                .unwrap();
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanArgs {
    /// Index of the pulse step whose duration is scanned.
    pub step: usize,
    pub t_start: f64,
    pub t_stop: f64,
    pub samples: usize,
    /// Basis state `|q, n_x, n_y⟩` whose population is reported as `fidelity`.
    pub target: Option<(Level, usize, usize)>,
    pub outcome: Option<Level>,
    pub leakage_limit: f64,
}

/// Sample times: `samples` evenly spaced points from `t_start` to `t_stop`
/// inclusive; a single sample sits at `t_start`.
pub fn scan_times(t_start: f64, t_stop: f64, samples: usize) -> Vec<f64> {
    if samples == 1 {
        return vec![t_start];
    }
    let step = (t_stop - t_start) / (samples - 1) as f64;
    (0..samples)
        .map(|i| {
            if i == samples - 1 {
                t_stop
            } else {
                t_start + i as f64 * step
            }
        })
        .collect()
}

fn check_target(trunc: &Truncation, target: Option<(Level, usize, usize)>) -> Result<(), CliError> {
    if let Some((_, nx, ny)) = target {
        trunc
            .check_fock(nx, ny)
            .map_err(|e| CliError::Usage(format!("--target: {e}")))?;
    }
    Ok(())
}

/// Re-runs one pulse over a range of durations, starting from the state the
/// preceding steps produce. Emits CSV rows ordered by `t`.
pub fn cmd_scan(text: &str, args: &ScanArgs) -> Result<String, CliError> {
    let program = parse_program(text)?;
    let spec = match program.steps.get(args.step) {
        None => {
            return Err(CliError::Usage(format!(
                "step {} out of range (program has {} steps)",
                args.step,
                program.steps.len()
            )))
        }
        Some(Step::SidebandPulse(p)) => *p,
        Some(other) => {
            return Err(CliError::Usage(format!(
                "step {} is a {}, not a pulse",
                args.step,
                other.kind()
            )))
        }
    };
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    if !(args.t_start.is_finite()
        && args.t_stop.is_finite()
        && args.t_start >= 0.0
        && args.t_stop >= args.t_start)
    {
        return Err(CliError::Usage(
            "time range must satisfy 0 <= t-start <= t-stop".into(),
        ));
    }
    check_target(&program.trunc, args.target)?;

    let prefix = run_sequence_with(
        &program.steps[..args.step],
        &program.trunc,
        &run_options(args.outcome, args.leakage_limit),
    )?;
    let start = prefix.final_state;

    let rows: Vec<String> = scan_times(args.t_start, args.t_stop, args.samples)
        .into_par_iter()
        .map(|t| -> Result<String, CliError> {
            let out = apply_pulse(&start, &spec.with_duration(PulseDuration::Seconds(t)))?;
            let pe = out.state.level_population(Level::Excited);
            let pg = out.state.level_population(Level::Ground);
            let mut row = format!(
                "{},{},{},{}",
                fmt_real(t),
                fmt_real(pe),
                fmt_real(pg),
                fmt_real(out.leakage)
            );
            if let Some((q, nx, ny)) = args.target {
                row.push(',');
                row.push_str(&fmt_real(out.state.amp(q, nx, ny).norm_sqr()));
            }
            Ok(row)
        })
        .collect::<Result<_, _>>()?;

    let mut out = String::from("t,p_excited,p_ground,leakage");
    if args.target.is_some() {
        out.push_str(",fidelity");
    }
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

/// Parses `q,nx,ny`, e.g. `g,4,0`.
pub fn parse_target(s: &str) -> Result<(Level, usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [q, nx, ny] = parts.as_slice() else {
        return Err(format!("expected q,nx,ny, found '{s}'"));
    };
    let level = match *q {
        "g" => Level::Ground,
        "e" => Level::Excited,
        other => return Err(format!("invalid qubit level '{other}'")),
    };
    let nx = nx.parse().map_err(|_| format!("invalid nx '{nx}'"))?;
    let ny = ny.parse().map_err(|_| format!("invalid ny '{ny}'"))?;
    Ok((level, nx, ny))
}
