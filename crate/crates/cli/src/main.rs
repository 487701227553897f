use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use wildchar_cli::{run, Command, Flags};

/// Stokes data, dimensions and numeric checks for wild character varieties.
#[derive(Debug, Parser)]
#[command(name = "wildchar", version)]
struct Args {
    /// analyze, dims, verify, deform or quiver.
    command: String,
    /// Spec file (JSON); `-` reads stdin.
    #[arg(long)]
    input: PathBuf,
    /// Report destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Numeric tolerance for verify.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    no_center_correction: bool,
    /// Merge tolerance for singular directions, in radians.
    #[arg(long)]
    dir_tol: Option<f64>,
    /// Family file for deform.
    #[arg(long)]
    family: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Write through a sibling temporary file and rename it into place.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().context("output path has no file name")?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming onto {}", path.display()))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let command: Command = match args.command.parse() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match execute(command, &args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<wildchar_cli::CliError>()
                .map(|e| e.exit_code())
                .unwrap_or(1);
            ExitCode::from(code as u8)
        }
    }
}

fn execute(command: Command, args: &Args) -> Result<u8> {
    let spec = read(&args.input)?;
    let family = args.family.as_deref().map(read).transpose()?;
    let flags = Flags {
        seed: args.seed,
        tol: args.tol,
        trials: args.trials,
        no_center_correction: args.no_center_correction,
        dir_tol: args.dir_tol,
    };
    let outcome = run(command, &spec, family.as_deref(), &flags)?;
    let text = outcome.envelope.to_canonical();
    match &args.out {
        Some(path) => write_atomic(path, &text)?,
        None => io::stdout().lock().write_all(text.as_bytes()).context("writing stdout")?,
    }
    for w in &outcome.envelope.warnings {
        eprintln!("warning: {w}");
    }
    Ok(outcome.exit_code() as u8)
}
