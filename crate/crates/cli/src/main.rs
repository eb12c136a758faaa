use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use noon_cli::{cmd_run, cmd_scan, parse_target, CliError, Format, RunArgs, ScanArgs};
use noon_core::Level;

#[derive(Parser)]
#[command(
    name = "noonsim",
    version,
    about = "Simulate four-phonon sideband pulse programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Outcome {
    G,
    E,
}

impl From<Outcome> for Level {
    fn from(o: Outcome) -> Level {
        match o {
            Outcome::G => Level::Ground,
            Outcome::E => Level::Excited,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a pulse program and emit a result document.
    Run {
        program: PathBuf,
        /// Measurement outcome to post-select, overriding `measure` lines.
        #[arg(long)]
        outcome: Option<Outcome>,
        /// Include per-step state amplitudes.
        #[arg(long)]
        dump_states: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        /// N of the NOON state scored in the final diagnostics.
        #[arg(long, default_value_t = 8)]
        noon_n: usize,
        #[arg(long, default_value_t = 1e-6)]
        leakage_limit: f64,
    },
    /// Sweep the duration of one pulse step and tabulate populations.
    Scan {
        program: PathBuf,
        /// Zero-based index of the pulse step to sweep.
        #[arg(long)]
        step: usize,
        #[arg(long, default_value_t = 0.0)]
        t_start: f64,
        #[arg(long)]
        t_stop: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        /// Basis state `q,nx,ny` whose population is reported as `fidelity`.
        #[arg(long, value_parser = parse_target)]
        target: Option<(Level, usize, usize)>,
        #[arg(long)]
        outcome: Option<Outcome>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long, default_value_t = 1e-6)]
        leakage_limit: f64,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            program,
            outcome,
            dump_states,
            out,
            format,
            noon_n,
            leakage_limit,
        } => {
            let text = read(&program)?;
            let args = RunArgs {
                outcome: outcome.map(Level::from),
                dump_states,
                format: if format == FormatArg::Csv {
                    Format::Csv
                } else {
                    Format::Json
                },
                noon_n,
                leakage_limit,
            };
            let doc = cmd_run(&text, &args)?;
            emit(&doc, out.as_deref())?;
            Ok(())
        }
        Command::Scan {
            program,
            step,
            t_start,
            t_stop,
            samples,
            target,
            outcome,
            out,
            format,
            leakage_limit,
        } => {
            if format != FormatArg::Csv {
                return Err(CliError::Usage("scan output is CSV only".into()));
            }
            let text = read(&program)?;
            let args = ScanArgs {
                step,
                t_start,
                t_stop,
                samples,
                target,
                outcome: outcome.map(Level::from),
                leakage_limit,
            };
            let table = cmd_scan(&text, &args)?;
            emit(&table, out.as_deref())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
