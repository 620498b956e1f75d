use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use fracspec::experiments::{run, Command, ExperimentConfig};
use fracspec::Error;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Convergence,
    Condition,
    Mfet,
    Solve,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Convergence => Command::Convergence,
            Cmd::Condition => Command::Condition,
            Cmd::Mfet => Command::Mfet,
            Cmd::Solve => Command::Solve,
        }
    }
}

/// Spectral solvers for two-sided fractional diffusion: experiment harness.
#[derive(Debug, Parser)]
#[command(name = "fracspec", version)]
struct Args {
    command: Cmd,
    /// JSON experiment config; omitted means all defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    alpha: Option<Vec<f64>>,
    #[arg(long = "N", value_delimiter = ',', num_args = 1..)]
    n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', num_args = 1.., value_parser = clap::value_parser!(u8).range(1..=3))]
    scheme: Option<Vec<u8>>,
    #[arg(long)]
    problem: Option<String>,
    /// Override any top-level config key: `--set key=<json>`.
    #[arg(long = "set", value_name = "KEY=JSON")]
    set: Vec<String>,
}

enum Failure {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn load_config(args: &Args) -> Result<(Command, ExperimentConfig), Failure> {
    let mut doc = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
            serde_json::from_str::<Value>(&text)
                .map_err(|e| Failure::Usage(format!("config {} is not valid JSON: {e}", path.display())))?
        }
        None => Value::Object(Map::new()),
    };
    let obj = doc
        .as_object_mut()
        .ok_or_else(|| Failure::Usage("config must be a JSON object".into()))?;
    let command: Command = args.command.into();
    let name = format!("{:?}", args.command).to_lowercase();
    if let Some(c) = obj.get("command") {
        if c.as_str() != Some(name.as_str()) {
            return Err(Failure::Usage(format!("invalid value for key `command`: config says {c}, invoked as {name}")));
        }
    }
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--set expects KEY=JSON, got `{kv}`")))?;
        let v: Value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
        obj.insert(k.to_string(), v);
    }
    if let Some(a) = &args.alpha {
        obj.insert("alphas".into(), serde_json::json!(a));
    }
    if let Some(n) = &args.n {
        obj.insert("N".into(), serde_json::json!(n));
    }
    if let Some(s) = &args.scheme {
        obj.insert("schemes".into(), serde_json::json!(s));
    }
    if let Some(p) = &args.problem {
        obj.remove("inline");
        obj.insert("problem".into(), Value::String(p.clone()));
    }
    if let Some(o) = &args.out {
        obj.insert("output".into(), Value::String(o.display().to_string()));
    }
    let cfg = ExperimentConfig::from_json(&doc.to_string())?;
    Ok((command, cfg))
}

fn execute(args: &Args) -> Result<(), Failure> {
    let (command, cfg) = load_config(args)?;
    let (csv, summary) = run(command, &cfg)?;
    match &cfg.output {
        Some(path) => std::fs::write(path, csv).map_err(|e| Failure::Io(format!("cannot write {path}: {e}")))?,
        None => print!("{csv}"),
    }
    if let Some(s) = summary {
        if cfg.output.is_some() {
            print!("{s}");
        } else {
            for line in s.lines() {
                println!("# {line}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("fracspec: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("fracspec: numerical failure: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Io(m)) => {
            eprintln!("fracspec: {m}");
            ExitCode::from(1)
        }
    }
}
