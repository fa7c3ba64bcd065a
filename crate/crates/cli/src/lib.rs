//! Library side of the `gyrokit` command: settings, scenarios, output and
//! the verification suite. `main.rs` only wires these to the process.

pub mod config;
pub mod output;
pub mod scenario;
pub mod verify;

use clap::error::ErrorKind;
use clap::parser::ValueSource;
use clap::{Arg, ArgAction, ArgMatches, Command};
use config::Settings;
use scenario::{CaseTag, Format, Key, Scenario};
use std::ffi::OsString;
use std::path::PathBuf;
use verify::{Fault, Suite, VerifyOptions};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    /// Unusable input: bad flags, bad config, or physics assumptions not met.
    #[error("invalid parameters: {0}")]
    Invalid(String),
    /// The closed form broke down while being evaluated.
    #[error("runtime singularity: {0}")]
    Runtime(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Runtime(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn from_core(e: gyrokit_core::Error, t: Option<f64>) -> CliError {
        if e.is_invalid_input() {
            CliError::Invalid(e.to_string())
        } else if let Some(t) = t {
            CliError::Runtime(format!("{e} (at t = {t})"))
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

/// Exit code of a verification run with at least one failed check.
pub const EXIT_VERIFY_FAILED: i32 = 1;

const VERIFY_KEYS: &[Key] = &[
    Key { name: "case", help: "suite to run: all, specfun, integrals, lagrange, poinsot, herpolhode, viscous", default: Some("all") },
    Key { name: "seed", help: "random seed; falls back to GYROKIT_SEED, then 0", default: None },
    Key { name: "inject-fault", help: "perturb one closed form to prove the suite can fail", default: None },
    Key { name: "json", help: "print the report as JSON", default: None },
    Key { name: "output", help: "report file (standard output when absent)", default: None },
];

fn help_with_default(k: &Key) -> String {
    match k.default {
        Some(d) => format!("{} [default: {d}]", k.help),
        None => k.help.to_string(),
    }
}

fn config_arg() -> Arg {
    Arg::new("config").long("config").value_name("FILE").help("key=value settings file; flags take precedence")
}

pub fn command() -> Command {
    let mut cmd = Command::new("gyrokit")
        .about("Closed-form rigid-body rotation about a fixed point")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true);
    for tag in CaseTag::ALL {
        let mut sub = Command::new(tag.name()).about(tag.about()).arg(config_arg());
        for k in tag.keys() {
            sub = sub.arg(
                Arg::new(k.name)
                    .long(k.name)
                    .value_name("VALUE")
                    .allow_negative_numbers(true)
                    .help(help_with_default(&k)),
            );
        }
        cmd = cmd.subcommand(sub);
    }
    let mut verify = Command::new("verify")
        .about("Check every closed form against independent evaluations on random draws")
        .arg(config_arg());
    for k in VERIFY_KEYS {
        let arg = Arg::new(k.name).long(k.name).help(help_with_default(k));
        verify = verify.arg(if k.name == "json" { arg.action(ArgAction::SetTrue) } else { arg.value_name("VALUE") });
    }
    cmd.subcommand(verify)
}

/// Config file first, then every flag given on the command line on top.
fn merged_settings(m: &ArgMatches, names: &[&str]) -> Result<Settings, CliError> {
    let mut settings = match m.get_one::<String>("config") {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read config {path}: {e}")))?;
            config::parse(&text)?
        }
        None => Settings::new(),
    };
    for &name in names {
        if m.value_source(name) != Some(ValueSource::CommandLine) {
            continue;
        }
        let value = if name == "json" { "true".to_string() } else { m.get_one::<String>(name).cloned().unwrap_or_default() };
        settings.insert(name.to_string(), value);
    }
    Ok(settings)
}

/// What the process should do once a command has run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub path: Option<PathBuf>,
    pub exit_code: i32,
}

pub fn verify_options(settings: &Settings, env_seed: Option<&str>) -> Result<(VerifyOptions, bool, Option<PathBuf>), CliError> {
    for k in settings.keys() {
        if !VERIFY_KEYS.iter().any(|key| key.name == k) {
            return Err(CliError::Invalid(format!("unknown setting {k:?} for verify")));
        }
    }
    let seed = match settings.get("seed").map(String::as_str).or(env_seed) {
        Some(s) => s.trim().parse().map_err(|_| CliError::Invalid(format!("seed {s:?} is not an unsigned integer")))?,
        None => 0,
    };
    let mut opts = VerifyOptions::new(seed);
    match settings.get("case").map(String::as_str).unwrap_or("all") {
        "all" => {}
        name => {
            let suite = Suite::parse(name).ok_or_else(|| CliError::Invalid(format!("unknown case {name:?}")))?;
            opts.suites = vec![suite];
        }
    }
    if let Some(name) = settings.get("inject-fault") {
        let fault = Fault::parse(name).ok_or_else(|| {
            let known: Vec<&str> = Fault::ALL.iter().map(|f| f.name()).collect();
            CliError::Invalid(format!("unknown fault {name:?}; known: {}", known.join(", ")))
        })?;
        opts.fault = Some(fault);
    }
    let json = match settings.get("json").map(String::as_str) {
        None | Some("false") => false,
        Some("true") => true,
        Some(other) => return Err(CliError::Invalid(format!("json must be true or false, got {other:?}"))),
    };
    Ok((opts, json, settings.get("output").map(PathBuf::from)))
}

/// Parses `args` (program name first) and runs the command. The seed
/// fallback is passed in rather than read here so tests stay hermetic.
pub fn run<I, T>(args: I, env_seed: Option<&str>) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Ok(Outcome { text: e.to_string(), path: None, exit_code: 0 });
        }
        Err(e) => return Err(CliError::Invalid(e.to_string())),
    };
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    if name == "verify" {
        let names: Vec<&str> = VERIFY_KEYS.iter().map(|k| k.name).collect();
        let settings = merged_settings(sub, &names)?;
        let (opts, json, path) = verify_options(&settings, env_seed)?;
        let report = verify::verify_all(&opts);
        let text = if json { report.to_json() } else { report.to_text() };
        let exit_code = if report.passed { 0 } else { EXIT_VERIFY_FAILED };
        return Ok(Outcome { text, path, exit_code });
    }
    let tag = CaseTag::ALL.into_iter().find(|t| t.name() == name).expect("every case has a subcommand");
    let keys = tag.keys();
    let names: Vec<&str> = keys.iter().map(|k| k.name).collect();
    let scenario = Scenario::from_settings(tag, &merged_settings(sub, &names)?)?;
    let table = scenario::run_scenario(&scenario)?;
    let text = match scenario.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    Ok(Outcome { text, path: scenario.output, exit_code: 0 })
}
