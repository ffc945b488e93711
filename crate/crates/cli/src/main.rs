use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use supercoset::{export_json, parse_model, run_command, Command, Options};

/// Check supergroups, coset spaces and actions described in a model file.
#[derive(Parser, Debug)]
#[command(name = "supercoset", version)]
struct Cli {
    command: Command,
    /// Model file.
    model: PathBuf,
    /// Entity to run on; may be omitted when the model has only one candidate.
    target: Option<String>,
    /// Jet order.
    #[arg(long)]
    order: Option<u32>,
    /// Coset representatives as `;`-separated lists, e.g. `a=1,b=1;a=2,b=1`.
    #[arg(long)]
    reps: Option<String>,
    /// A point of the action's space, e.g. `y=1,eta=0`.
    #[arg(long)]
    point: Option<String>,
    /// Write the JSON report here; `-` prints it instead of the summary.
    #[arg(long)]
    json: Option<PathBuf>,
}

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { PASS });
        }
    };
    ExitCode::from(match execute(&cli) {
        Ok(true) => PASS,
        Ok(false) => FAIL,
        Err(msg) => {
            eprintln!("error: {msg}");
            USAGE
        }
    })
}

fn execute(cli: &Cli) -> Result<bool, String> {
    let path = cli.model.display();
    let text = fs::read_to_string(&cli.model).map_err(|e| format!("{path}: {e}"))?;
    let model = parse_model(&text).map_err(|d| format!("{path}:{d}"))?;
    let mut opts = Options { order: cli.order, ..Options::default() };
    if let Some(r) = &cli.reps {
        opts.reps = Some(Options::parse_reps(r).map_err(|d| format!("--reps: {}", d.message))?);
    }
    if let Some(p) = &cli.point {
        opts.point = Some(Options::parse_point(p).map_err(|d| format!("--point: {}", d.message))?);
    }
    let report = run_command(&model, cli.command, cli.target.as_deref(), &opts).map_err(|e| e.to_string())?;
    match &cli.json {
        Some(p) if p.as_os_str() == "-" => print!("{}", export_json(&report)),
        Some(p) => {
            fs::write(p, export_json(&report)).map_err(|e| format!("{}: {e}", p.display()))?;
            print!("{}", report.summary());
        }
        None => print!("{}", report.summary()),
    }
    Ok(report.passed())
}
