use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qprivacy::exec::Execution;
use qprivacy::harness::{run, CheckFamily, Command, Format, RangeSpec, RunConfig};

/// Privacy and monogamy computations for quantum channel scenarios.
///
/// Exit status: 0 when every check passes, 1 when an inequality fails,
/// 2 for usage or configuration errors.
#[derive(Parser)]
#[command(name = "qprivacy", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Privacy report and checks for one scenario file.
    Compute(Common),
    /// Monte Carlo verification over random scenarios.
    Verify(Common),
    /// Table of leg quantities over a channel parameter range.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long, value_name = "PATH")]
    scenario: Option<PathBuf>,
    #[arg(long, value_name = "N", default_value_t = 1000)]
    trials: u64,
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Subsystem dimensions for random scenarios, reference first.
    #[arg(long, value_name = "a,b,c", value_delimiter = ',', default_value = "2,2,2")]
    dims: Vec<usize>,
    /// Largest environment dimension for random channels.
    #[arg(long, value_name = "k", default_value_t = 2)]
    env_dim: usize,
    /// Slack for exact inequalities (default 1e-8).
    #[arg(long, value_name = "t", allow_negative_numbers = true)]
    tolerance: Option<f64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "FMT", default_value = "text", value_parser = parse_format)]
    format: Format,
    /// Comma-separated check families to run.
    #[arg(long, value_name = "LIST", value_delimiter = ',', value_parser = parse_family)]
    checks: Option<Vec<CheckFamily>>,
    /// Named channel for `sweep`.
    #[arg(long, value_name = "NAME")]
    channel: Option<String>,
    /// Parameter range `start:stop:step` for `sweep`.
    #[arg(long, value_name = "RANGE", value_parser = parse_range)]
    range: Option<RangeSpec>,
    /// Run trials on one thread.
    #[arg(long)]
    sequential: bool,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: qprivacy::Error| e.to_string())
}

fn parse_family(s: &str) -> Result<CheckFamily, String> {
    s.parse().map_err(|e: qprivacy::Error| e.to_string())
}

fn parse_range(s: &str) -> Result<RangeSpec, String> {
    s.parse().map_err(|e: qprivacy::Error| e.to_string())
}

fn config(command: Command, c: Common) -> RunConfig {
    RunConfig {
        command,
        scenario: c.scenario,
        dims: c.dims,
        env_dim: c.env_dim,
        trials: c.trials,
        seed: c.seed,
        tolerance: c.tolerance,
        checks: c.checks,
        channel: c.channel,
        range: c.range,
        execution: if c.sequential { Execution::Sequential } else { Execution::default() },
        out: c.out,
        format: c.format,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.command {
        Cmd::Compute(c) => config(Command::Compute, c),
        Cmd::Verify(c) => config(Command::Verify, c),
        Cmd::Sweep(c) => config(Command::Sweep, c),
    };
    match run(&cfg) {
        Ok(outcome) => {
            let s = &outcome.report.summary;
            match &cfg.out {
                Some(path) => eprintln!("wrote {}: {} checks, {} failures", path.display(), s.checks, s.failures),
                None => print!("{}", outcome.rendered),
            }
            if outcome.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
