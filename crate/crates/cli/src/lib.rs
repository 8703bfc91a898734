//! Driver behind the `specenc` binary: configuration, subcommands and the
//! invariant suites run by `verify`.

pub mod commands;
pub mod config;
pub mod verify;

use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use specenc_core::Error;

pub use config::{parse_config, FileConfig, RunConfig, THREADS_ENV};

pub const EXIT_OK: i32 = 0;
/// A check failed, or the numerics did not produce a result.
pub const EXIT_FAIL: i32 = 1;
/// Malformed arguments or configuration.
pub const EXIT_USAGE: i32 = 2;
/// Missing or unreadable files.
pub const EXIT_ENV: i32 = 3;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: String) -> Self {
        CliError { code, message }
    }

    pub fn from_clap(e: clap::Error) -> Self {
        use clap::error::ErrorKind;
        let code = match e.kind() {
            ErrorKind::DisplayHelp
            | ErrorKind::DisplayVersion
            | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_OK,
            _ => EXIT_USAGE,
        };
        CliError::new(code, e.render().to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_ENV,
            Error::Parse(_)
            | Error::InvalidParameter(_)
            | Error::DimensionMismatch { .. }
            | Error::UnsupportedDimension(_)
            | Error::OnPositiveAxis { .. }
            | Error::Domain(_) => EXIT_USAGE,
            _ => EXIT_FAIL,
        };
        CliError::new(code, e.to_string())
    }
}

/// `value` as a JSON object with `schema_version` added.
pub fn with_schema<T: Serialize>(value: &T) -> Value {
    let mut v = serde_json::to_value(value).expect("serialisable output");
    if let Value::Object(m) = &mut v {
        m.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    }
    v
}

/// Pretty JSON to `path`, or to stdout.
pub fn emit_json(value: &Value, path: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("serialisable output") + "\n";
    emit_text(&text, path)
}

pub fn emit_text(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::new(EXIT_ENV, format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, S>(argv: I, env_threads: Option<String>) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cfg = match parse_config(argv, env_threads) {
        Ok(c) => c,
        Err(e) => {
            if e.code == EXIT_OK {
                print!("{}", e.message);
            } else {
                eprint!("{}", e.message);
                if !e.message.ends_with('\n') {
                    eprintln!();
                }
            }
            return e.code;
        }
    };
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build_global();
    match commands::dispatch(&cfg) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}
