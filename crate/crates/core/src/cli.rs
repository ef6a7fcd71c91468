//! Command-line front end: identity listing, verification runs and count tables.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{self, IdentityEntry, Mismatch, Status, VerifyReport};
use crate::combinat::{self, Family};
use crate::error::QsError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// List identity ids with their references.
    List,
    /// Verify one identity.
    Verify,
    /// Verify every registered identity.
    VerifyAll,
    /// Tabulate family counts and check them against enumeration.
    Counts,
    /// Re-derive one identity from its corollary specialization.
    Derivation,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "qseries", version, about = "Exact q-series identity checks")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Identity id, required by `verify` and `derivation`.
    #[arg(long = "identity", global = true)]
    pub identity_id: Option<String>,
    /// Exponent bound below which coefficients are compared.
    #[arg(
        long,
        global = true,
        default_value_t = 50,
        env = "QSERIES_DEFAULT_ORDER",
        value_parser = clap::value_parser!(i64).range(1..)
    )]
    pub order: i64,
    /// `json` prints one object per line.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Spread `verify-all` over worker threads. Output order is unchanged.
    #[arg(long, global = true)]
    pub parallel: bool,
    /// Largest weight in the counts table.
    #[arg(long, global = true, default_value_t = 20, value_parser = clap::value_parser!(u32).range(0..=combinat::MAX_N as i64))]
    pub max_n: u32,
}

/// Wire form of a report. Keys and their order are part of the output contract.
#[derive(Serialize)]
struct JsonReport<'a> {
    id: &'a str,
    order: i64,
    status: Status,
    first_mismatch: Option<&'a Mismatch>,
    elapsed_ms: u64,
}

pub fn report_json(r: &VerifyReport) -> String {
    serde_json::to_string(&JsonReport {
        id: &r.id,
        order: r.order,
        status: r.status,
        first_mismatch: r.first_mismatch.as_ref(),
        elapsed_ms: r.elapsed_ms,
    })
    .expect("report serializes")
}

pub fn report_text(r: &VerifyReport) -> String {
    let status = match r.status {
        Status::Equal => "equal",
        Status::Mismatch => "mismatch",
        Status::Error => "error",
    };
    let mut line = format!("{:<30} {:<8} order={} {} ms", r.id, status, r.order, r.elapsed_ms);
    if let Some(label) = &r.reading {
        line.push_str(&format!(" reading=\"{label}\""));
    }
    if let Some(m) = &r.first_mismatch {
        line.push_str(&format!(" first mismatch at q^{}: lhs {} rhs {}", m.exponent, m.lhs, m.rhs));
    }
    if let Some(msg) = &r.message {
        line.push_str(&format!(" ({msg})"));
    }
    line
}

fn emit(out: &mut dyn Write, format: Format, r: &VerifyReport) -> std::io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", report_json(r)),
        Format::Text => writeln!(out, "{}", report_text(r)),
    }?;
    out.flush()
}

fn usage_error(err: &mut dyn Write, e: &QsError) -> i32 {
    let _ = writeln!(err, "error: {e}");
    EXIT_USAGE
}

/// Runs `config` against `entries`. Reports go to `out`, diagnostics to `err`.
pub fn run(config: &RunConfig, entries: &[IdentityEntry], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_inner(config, entries, out, err) {
        Ok(code) => code,
        // the reader went away, as with `| head`
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_FAILED,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAILED
        }
    }
}

fn run_inner(
    config: &RunConfig,
    entries: &[IdentityEntry],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<i32> {
    let mut all_equal = true;
    let mut record = |out: &mut dyn Write, r: &VerifyReport| -> std::io::Result<()> {
        all_equal &= r.status == Status::Equal;
        emit(out, config.format, r)
    };
    match config.command {
        Command::List => {
            let mut sorted: Vec<&IdentityEntry> = entries.iter().collect();
            sorted.sort_by_key(|e| e.id);
            for e in sorted {
                match config.format {
                    Format::Text => writeln!(out, "{:<14} {}", e.id, e.reference)?,
                    Format::Json => writeln!(
                        out,
                        "{}",
                        serde_json::json!({ "id": e.id, "reference": e.reference })
                    )?,
                }
            }
        }
        Command::Verify | Command::Derivation => {
            let Some(id) = config.identity_id.as_deref() else {
                return Ok(usage_error(
                    err,
                    &QsError::InvalidArgument("--identity is required".into()),
                ));
            };
            let entry = match catalog::find(entries, id) {
                Ok(e) => e,
                Err(e) => return Ok(usage_error(err, &e)),
            };
            let report = if config.command == Command::Verify {
                catalog::verify_entry(entry, config.order)
            } else {
                match catalog::derivation_entry(entry, config.order) {
                    Ok(r) => r,
                    Err(e @ QsError::MissingSpecialization(_)) => return Ok(usage_error(err, &e)),
                    Err(e) => {
                        let _ = writeln!(err, "error: {e}");
                        return Ok(EXIT_FAILED);
                    }
                }
            };
            record(out, &report)?;
        }
        Command::VerifyAll => {
            if config.parallel {
                for r in catalog::verify_entries(entries, config.order, true) {
                    record(out, &r)?;
                }
            } else {
                // Sequential runs stream each report as soon as it is ready.
                let mut sorted: Vec<&IdentityEntry> = entries.iter().collect();
                sorted.sort_by_key(|e| e.id);
                for e in sorted {
                    record(out, &catalog::verify_entry(e, config.order))?;
                }
            }
        }
        Command::Counts => {
            let order = i64::from(config.max_n) + 1;
            let mut columns = Vec::new();
            for f in Family::ALL {
                match combinat::count_series(f, order) {
                    Ok(s) => columns.push(s),
                    Err(e) => {
                        let _ = writeln!(err, "error: {e}");
                        return Ok(EXIT_FAILED);
                    }
                }
            }
            if config.format == Format::Text {
                let names: String = Family::ALL.iter().map(|f| format!(" {:>24}", f.name())).collect();
                writeln!(out, "  n{names}")?;
            }
            for n in 0..order {
                let cells: Vec<String> =
                    columns.iter().map(|s| s.coeff(n).map(|c| c.to_string()).unwrap_or_default()).collect();
                match config.format {
                    Format::Text => writeln!(out, "{n:>3}{}", cells.iter().map(|c| format!(" {c:>24}")).collect::<String>())?,
                    Format::Json => {
                        let mut row = serde_json::Map::new();
                        row.insert("n".into(), n.into());
                        for (f, c) in Family::ALL.iter().zip(&cells) {
                            let v = c.parse::<u64>().map(Into::into).unwrap_or_else(|_| c.clone().into());
                            row.insert(f.name().into(), v);
                        }
                        writeln!(out, "{}", serde_json::Value::Object(row))?;
                    }
                }
            }
            for f in Family::ALL {
                let r = combinat::count_check(f, order).unwrap_or_else(|e| VerifyReport {
                    id: format!("count-{}", f.name()),
                    order,
                    status: Status::Error,
                    first_mismatch: None,
                    elapsed_ms: 0,
                    reading: None,
                    message: Some(e.to_string()),
                });
                record(out, &r)?;
            }
        }
    }
    Ok(if all_equal { EXIT_OK } else { EXIT_FAILED })
}

/// Parses `args` (program name first) and runs against the built-in registry.
pub fn run_with(args: impl IntoIterator<Item = impl Into<OsString> + Clone>, entries: &[IdentityEntry], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config, entries, out, err),
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            EXIT_USAGE
        }
        Err(e) => {
            // --help and --version
            let _ = write!(out, "{}", e.render());
            EXIT_OK
        }
    }
}

pub fn main_with_args(args: impl IntoIterator<Item = impl Into<OsString> + Clone>) -> i32 {
    let entries = catalog::registry();
    run_with(args, &entries, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(std::iter::once("qseries").chain(args.iter().copied()), &catalog::registry(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn list_prints_one_line_per_entry() {
        let (code, out, _) = run_args(&["list"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), catalog::registry().len());
    }

    #[test]
    fn unknown_identity_and_bad_flags_exit_2() {
        assert_eq!(run_args(&["verify", "--identity", "nope"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "--order", "0", "--identity", "A1-a"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
    }

    #[test]
    fn json_report_has_exact_keys() {
        let (code, out, _) = run_args(&["verify", "--identity", "A1-a", "--order", "20", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut want = vec!["id", "order", "status", "first_mismatch", "elapsed_ms"];
        want.sort();
        let mut got = keys.clone();
        got.sort();
        assert_eq!(got, want);
        assert_eq!(v["status"], "equal");
        assert!(v["first_mismatch"].is_null());
    }

    #[test]
    fn counts_table_small() {
        let (code, out, _) = run_args(&["counts", "--max-n", "4"]);
        assert_eq!(code, EXIT_OK);
        // overpartitions of 4: 14; distinct: 9
        assert!(out.lines().nth(5).unwrap().split_whitespace().take(3).eq(["4", "14", "9"]));
    }
}
