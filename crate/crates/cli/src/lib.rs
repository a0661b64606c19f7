//! Command-line front end: argument parsing, dispatch and report rendering.

pub mod args;
pub mod commands;
pub mod report;

use std::collections::BTreeMap;
use std::fs;

use clap::error::ErrorKind;
use clap::Parser;
use lp_certify::Precision;
use serde_json::Value;

use args::{Cli, Command, ConstantsCommand, Format};
pub use report::{validate, Failure, Report, RunConfig, Status, Table, SCHEMA};

/// Environment variable overriding the default working precision in digits.
pub const PRECISION_ENV: &str = "LP_CERTIFY_PRECISION";

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn precision_digits(flag: Option<u32>, env: Option<String>) -> Result<u32, Failure> {
    let digits = match (flag, env) {
        (Some(d), _) => d,
        (None, Some(v)) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(Some(PRECISION_ENV.into()), format!("{PRECISION_ENV} must be a positive integer, got '{v}'")))?,
        (None, None) => Precision::DEFAULT_DIGITS,
    };
    if !(16..=10_000).contains(&digits) {
        return Err(Failure::usage(Some("precision".into()), format!("precision must lie in 16..=10000 digits, got {digits}")));
    }
    Ok(digits)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Test(_) => "test",
        Command::Zeros(_) => "zeros",
        Command::Constants(ConstantsCommand::QInf { .. }) => "constants q-inf",
        Command::Constants(ConstantsCommand::CN { .. }) => "constants c-n",
        Command::Constants(ConstantsCommand::Interleaving { .. }) => "constants interleaving",
        Command::Constants(ConstantsCommand::Roots { .. }) => "constants roots",
        Command::VerifyInequalities(_) => "verify-inequalities",
        Command::Census(_) => "census",
    }
}

fn tolerances(cmd: &Command) -> BTreeMap<String, f64> {
    let mut t = BTreeMap::new();
    match cmd {
        Command::Zeros(z) => {
            t.insert("real_tol".into(), z.real_tol);
        }
        Command::Constants(ConstantsCommand::QInf { tol } | ConstantsCommand::CN { tol, .. } | ConstantsCommand::Interleaving { tol, .. }) => {
            t.insert("tol".into(), *tol);
        }
        _ => {}
    }
    t
}

fn dispatch(cmd: &Command, prec: Precision) -> Result<Report, Failure> {
    match cmd {
        Command::Test(a) => commands::test(a, prec),
        Command::Zeros(a) => commands::zeros(a, prec),
        Command::Constants(c) => commands::constants(c),
        Command::VerifyInequalities(a) => commands::verify_inequalities(a, prec),
        Command::Census(a) => commands::census(a, prec),
    }
}

/// Renders `table` as CSV with a header row.
pub fn csv_text(table: &Table) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&table.columns).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV cells are UTF-8")
}

fn pretty(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                if v.is_object() || (v.is_array() && !v.as_array().unwrap().is_empty()) {
                    out.push_str(&format!("{pad}{k}:\n"));
                    pretty(v, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(v)));
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                if v.is_object() || v.is_array() {
                    out.push_str(&format!("{pad}-\n"));
                    pretty(v, indent + 1, out);
                } else {
                    out.push_str(&format!("{pad}- {}\n", scalar(v)));
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(_) => "[]".into(),
        other => other.to_string(),
    }
}

fn render(report: &Report, config: &RunConfig) -> String {
    match config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.envelope(config)).expect("reports serialize to JSON");
            s.push('\n');
            s
        }
        Format::Csv => match &report.table {
            Some(t) => csv_text(t),
            None => {
                let mut t = Table::new("error", &["status", "code", "kind", "field", "message"]);
                let e = &report.result["error"];
                t.push(vec![
                    report.status.name().into(),
                    report.exit_code().to_string(),
                    scalar(&e["kind"]),
                    e.get("field").map(scalar).unwrap_or_default(),
                    scalar(&e["message"]),
                ]);
                csv_text(&t)
            }
        },
        Format::Pretty => {
            let mut out = format!("{} [{}]\n", report.command, report.status.name());
            pretty(&report.result, 1, &mut out);
            out
        }
    }
}

/// Writes the plot table of a census, interleaving or section-constant report.
pub fn emit_plot_data(report: &Report, path: &str) -> Result<(), Failure> {
    let table = report
        .plot
        .as_ref()
        .ok_or_else(|| Failure::usage(Some("plot-data".into()), format!("'{}' reports have no plot data; use census, constants c-n or constants interleaving", report.command)))?;
    fs::write(path, csv_text(table)).map_err(|e| Failure::io(format!("cannot write {path}: {e}")))
}

fn default_config() -> RunConfig {
    RunConfig { precision_digits: Precision::DEFAULT_DIGITS, tolerances: BTreeMap::new(), format: Format::Json, deterministic: true }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_env(argv, std::env::var(PRECISION_ENV).ok())
}

/// As `run`, with the precision environment variable passed explicitly.
pub fn run_with_env<I, T>(argv: I, precision_env: Option<String>) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let code = if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { report::EXIT_USAGE } else { 0 };
                return RunOutput { code, stdout: if code == 0 { text.clone() } else { String::new() }, stderr: if code == 0 { String::new() } else { text } };
            }
            let report = Failure::usage(None, text.trim_end()).into_report("usage");
            return RunOutput { code: report::EXIT_USAGE, stdout: render(&report, &default_config()), stderr: text };
        }
    };
    let format = if cli.global.csv { Format::Csv } else { cli.global.format };
    let name = command_name(&cli.command);
    let mut config = RunConfig { format, tolerances: tolerances(&cli.command), ..default_config() };
    let outcome = precision_digits(cli.global.precision, precision_env).and_then(|digits| {
        config.precision_digits = digits;
        let report = dispatch(&cli.command, Precision::from_digits(digits))?;
        if let Some(path) = &cli.global.plot_data {
            emit_plot_data(&report, path)?;
        }
        Ok(report)
    });
    let report = outcome.unwrap_or_else(|f| f.into_report(name));
    let stderr = match report.result.get("error") {
        Some(e) => format!("lp-certify: {}\n", scalar(&e["message"])),
        None => String::new(),
    };
    RunOutput { code: report.exit_code(), stdout: render(&report, &config), stderr }
}
