use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use ffspecial::config::{JobConfig, Overrides, Task};
use ffspecial::harness::run;
use ffspecial::report::{ErrorInfo, Outcome, Report, Status};
use ffspecial::selftest::{selftest, SelftestConfig};
use ffspecial::Error;

/// Verified computations of deformed zeta values, polylogarithms and Anderson modules.
#[derive(Parser, Debug)]
#[command(name = "ffspecial", version)]
struct Cli {
    /// A task name (powersum, qpoly, zeta, polylog, thm11, star, lvalue, gauss-thakur,
    /// module-g, gc, rigid, division-tower) or `selftest`.
    command: String,
    /// JSON job config; required for tasks.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Precision floor in whole theta-digits.
    #[arg(long)]
    floor: Option<i64>,
    /// Truncation degree in the t-variables for products.
    #[arg(long)]
    tmax: Option<u32>,
    /// Seed for randomized checks; the same seed gives the same report bytes.
    #[arg(long)]
    seed: Option<u64>,
}

fn config_error(e: &Error) -> Report {
    let out = Outcome { error: Some(ErrorInfo::from(e)), ..Outcome::default() };
    Report::new(serde_json::Value::Null, 0, out)
}

fn load(cli: &Cli, task: Task) -> Result<JobConfig, Error> {
    let path = cli.config.as_ref().ok_or_else(|| Error::Config("--config is required for tasks".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg = JobConfig::from_json(&text)?;
    if cfg.task != task {
        return Err(Error::Config(format!("config is for task '{}', not '{}'", cfg.task.name(), task.name())));
    }
    Ok(cfg.with_overrides(Overrides { floor: cli.floor, tmax: cli.tmax, seed: cli.seed }))
}

fn emit(cli: &Cli, text: &str) -> bool {
    match &cli.out {
        Some(p) => match std::fs::write(p, text) {
            Ok(()) => true,
            Err(e) => {
                eprintln!("cannot write {}: {e}", p.display());
                false
            }
        },
        None => {
            print!("{text}");
            true
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (text, code) = if cli.command == "selftest" {
        let mut cfg = SelftestConfig::default();
        if let Some(f) = cli.floor {
            cfg.v_floor = f;
        }
        if let Some(s) = cli.seed {
            cfg.seed = s;
        }
        match selftest(cfg, None) {
            Ok(rep) => {
                eprint!("{}", rep.summary());
                (rep.to_json(), rep.exit_code)
            }
            Err(e) => {
                let rep = config_error(&e);
                (rep.to_json(), rep.exit_code)
            }
        }
    } else {
        let rep = match Task::parse(&cli.command).and_then(|t| load(&cli, t)) {
            Ok(cfg) => run(&cfg),
            Err(e) => config_error(&e),
        };
        (rep.to_json(), rep.exit_code)
    };
    eprintln!("elapsed {:.3}s", start.elapsed().as_secs_f64());
    if !emit(&cli, &text) {
        return ExitCode::from(Status::ConfigError.exit_code() as u8);
    }
    ExitCode::from(code as u8)
}
