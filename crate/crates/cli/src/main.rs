mod args;
mod commands;
mod envelope;
mod error;
mod input;
mod plot;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, IoArgs};
use envelope::{write_atomic, CommandEcho, ResultEnvelope};
use error::{CliError, CliResult};

fn read_input(io: &IoArgs) -> CliResult<Option<Value>> {
    let text = match (&io.input, &io.json) {
        (Some(p), _) if p.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
        (Some(p), _) => std::fs::read_to_string(p).map_err(|e| CliError::Schema(format!("{}: {e}", p.display())))?,
        (None, Some(s)) => s.clone(),
        (None, None) => return Ok(None),
    };
    serde_json::from_str(&text).map(Some).map_err(|e| CliError::Schema(format!("malformed JSON: {e}")))
}

/// Commands driven by flags alone.
fn takes_input(c: &Command) -> bool {
    !matches!(c, Command::Construct(_) | Command::CylBound(_) | Command::CylExperiment(_))
}

fn output_path(io: &IoArgs, default_name: &str) -> Option<PathBuf> {
    io.out.clone().or_else(|| io.out_dir.as_ref().map(|d| d.join(default_name)))
}

fn write_grid(path: &Path, rows: &[[f64; 4]]) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io_err = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(["s", "t", "re", "im"]).map_err(io_err)?;
    for r in rows {
        w.write_record(r.iter().map(|x| x.to_string())).map_err(io_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    write_atomic(path, &bytes)?;
    Ok(())
}

fn run_plot(cli: &Cli, a: &args::PlotArgs) -> CliResult<()> {
    let value = read_input(&cli.io)?.ok_or_else(|| CliError::Schema("plot needs an envelope (--input or --json)".into()))?;
    let env: ResultEnvelope = serde_json::from_value(value).map_err(|e| CliError::Schema(format!("not an envelope: {e}")))?;
    let svg = plot::render(&serde_json::to_value(&env).expect("envelope serializes"), a.style, a.size)?;
    match output_path(&cli.io, "plot.svg") {
        Some(p) => write_atomic(&p, svg.as_bytes())?,
        None if !cli.io.quiet => print!("{svg}"),
        None => {}
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    if let Command::Plot(a) = &cli.command {
        return run_plot(cli, a);
    }
    let input = read_input(&cli.io)?;
    if input.is_some() && !takes_input(&cli.command) {
        return Err(CliError::Schema(format!("{} takes no JSON input", cli.command.name())));
    }
    let out = commands::dispatch(&cli.command, &input)?;
    let mut diagnostics = out.diagnostics;
    if let Some(msg) = &out.nonconverged {
        if cli.io.strict {
            return Err(CliError::Nonconvergence(msg.clone()));
        }
        eprintln!("warning: solver did not converge: {msg}");
        diagnostics["nonconverged"] = json!(msg);
    }
    let echo = CommandEcho { name: cli.command.name().to_string(), flags: cli.command.flags(), input };
    let env = ResultEnvelope::new(echo, out.outputs, diagnostics);
    let text = env.to_json();
    let path = output_path(&cli.io, &format!("{}.json", cli.command.name()));
    if let Some(rows) = &out.grid {
        if let Some(csv) = cli.io.csv.clone().or_else(|| path.as_ref().map(|p| p.with_extension("csv"))) {
            write_grid(&csv, rows)?;
        }
    }
    if let Some(p) = &path {
        write_atomic(p, text.as_bytes())?;
    }
    if !cli.io.quiet {
        print!("{text}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hypflat: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
