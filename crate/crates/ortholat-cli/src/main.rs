mod args;
mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command};

/// Version of the JSON report layout, bumped with the schema files.
pub const SCHEMA_VERSION: &str = "1";

pub struct Output {
    /// Plain summary printed on stdout.
    pub text: String,
    pub result: Value,
    pub series: Option<Series>,
}

pub struct Series {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

pub enum CliError {
    Lib(ortholat::Error),
    Invalid(String),
    Io(String),
    /// The command ran but a check failed; the report is still written.
    Failed(String, Box<Output>),
}

impl CliError {
    pub fn failed(msg: &str, result: Value) -> Self {
        CliError::Failed(msg.into(), Box::new(Output { text: msg.into(), result, series: None }))
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_precision() => 3,
            CliError::Lib(ortholat::Error::Invalid(_)) | CliError::Invalid(_) => 2,
            CliError::Lib(_) | CliError::Io(_) | CliError::Failed(..) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Lib(e) => e.to_string(),
            CliError::Invalid(m) | CliError::Io(m) | CliError::Failed(m, _) => m.clone(),
        }
    }
}

impl From<ortholat::Error> for CliError {
    fn from(e: ortholat::Error) -> Self {
        CliError::Lib(e)
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    use commands::*;
    match &cli.command {
        Command::Sphere(a) => sphere(a),
        Command::Shape(a) => shape_cmd(a),
        Command::ChoosePrime(a) => choose_prime_cmd(a),
        Command::ClassifyForm(a) => classify_cmd(a, cli.seed),
        Command::Cartan(a) => cartan_cmd(a, cli.seed),
        Command::BallVolume(a) => volume_cmd(a),
        Command::TreeCosets(a) => tree_cmd(a),
        Command::Lie(c) => lie_cmd(c),
        Command::Hecke(c) => hecke_cmd(c),
        Command::Equidist(c) => equidist_cmd(c, cli.seed),
    }
}

fn envelope(cli: &Cli, out: &Output, seconds: f64, threads: usize) -> Value {
    json!({
        "header": {
            "version": env!("CARGO_PKG_VERSION"),
            "schema": SCHEMA_VERSION,
            "command": cli.command.name(),
            "config": cli.command,
            "seed": cli.seed,
            "threads": threads,
            "timing": {"seconds": seconds},
        },
        "result": out.result,
    })
}

fn report_path(cli: &Cli) -> Option<PathBuf> {
    cli.out.clone().or_else(|| {
        std::env::var_os("ORTHOLAT_OUT_DIR").map(|d| PathBuf::from(d).join(format!("{}.json", cli.command.name())))
    })
}

fn write_outputs(cli: &Cli, out: &Output, report: &Value) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    if let Some(path) = report_path(cli) {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(io)?;
        }
        let s = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
        std::fs::write(&path, s + "\n").map_err(io)?;
    }
    if let Some(path) = &cli.csv {
        let Some(series) = &out.series else {
            return Err(CliError::Invalid(format!("{} has no CSV series", cli.command.name())));
        };
        let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(e.to_string()))?;
        w.write_record(&series.header).map_err(|e| CliError::Io(e.to_string()))?;
        for r in &series.rows {
            w.write_record(r).map_err(|e| CliError::Io(e.to_string()))?;
        }
        w.flush().map_err(io)?;
    }
    let mut stdout = std::io::stdout().lock();
    let text = if cli.json { serde_json::to_string_pretty(report).unwrap_or_default() } else { out.text.clone() };
    writeln!(stdout, "{text}").map_err(io)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 || rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            eprintln!("error: invalid --threads");
            return ExitCode::from(2);
        }
    }
    let threads = rayon::current_num_threads();
    let start = Instant::now();
    let res = run(&cli);
    let seconds = start.elapsed().as_secs_f64();
    let (out, err) = match res {
        Ok(out) => (Some(out), None),
        Err(CliError::Failed(msg, out)) => (Some(*out), Some((msg, 1))),
        Err(e) => (None, Some((e.message(), e.exit_code()))),
    };
    if let Some(out) = out {
        let report = envelope(&cli, &out, seconds, threads);
        if let Err(e) = write_outputs(&cli, &out, &report) {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.exit_code());
        }
    }
    match err {
        None => ExitCode::SUCCESS,
        Some((msg, code)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
