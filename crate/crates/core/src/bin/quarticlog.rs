//! `quarticlog verify | sweep | import`.
//!
//! Exit codes: 0 PASS or CONSISTENT, 2 FAIL, 3 SKIPPED, 64 usage, 65 malformed
//! certificate, 66 certificate identity violated, 70 internal error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use quarticlog::certificate::{export_certificate, import_certificate};
use quarticlog::field::check_q;
use quarticlog::report::{csv_header, csv_row, json_line, render, Format, Summary};
use quarticlog::sweep::{sweep, SweepConfig};
use quarticlog::verify::{
    verify_certificate, verify_theorem_with_certificate, Status, VerificationRecord, VerifyOptions, MAX_PRECISION,
};
use quarticlog::Error;

const EXIT_FAIL: u8 = 2;
const EXIT_SKIPPED: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_SCHEMA: u8 = 65;
const EXIT_INVARIANT: u8 = 66;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(name = "quarticlog", version, about = "Verify 2-adic logarithm valuations of units of Q((-q)^(1/4))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Working 2-adic precision in bits; raised automatically up to 256 when results
    /// sit at the precision boundary.
    #[arg(long, env = "QUARTICLOG_PRECISION_BITS", default_value_t = 128,
          value_parser = clap::value_parser!(u32).range(32..=4096))]
    precision_bits: u32,
    /// Wall-clock budget per q for the unit search, in seconds.
    #[arg(long, default_value_t = 120.0)]
    timeout: f64,
    /// Fill the `seconds` column.
    #[arg(long)]
    timings: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl Common {
    fn options(&self) -> VerifyOptions {
        VerifyOptions {
            precision_bits: self.precision_bits,
            max_precision_bits: self.precision_bits.max(MAX_PRECISION),
            timeout: Some(Duration::from_secs_f64(self.timeout.max(0.0))),
            timings: self.timings,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify a single prime q ≡ 3 (mod 4).
    Verify {
        #[arg(long)]
        q: u64,
        /// Write the certificate found by the search to this file.
        #[arg(long, value_name = "FILE")]
        export: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Verify every prime q ≡ 3 (mod 4) in a range.
    Sweep {
        #[arg(long, default_value_t = 3)]
        q_min: u64,
        #[arg(long)]
        q_max: u64,
        /// Worker threads (defaults to the available parallelism).
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Verify an externally supplied unit certificate.
    Import {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Pass | Status::Consistent => 0,
        Status::Fail => EXIT_FAIL,
        Status::Skipped => EXIT_SKIPPED,
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => EXIT_SCHEMA,
        Error::NotAUnit(_) => EXIT_INVARIANT,
        _ => EXIT_INTERNAL,
    }
}

fn print_single(r: &VerificationRecord, format: Format) {
    print!("{}", render(std::slice::from_ref(r), format));
    for c in r.failed_checks() {
        eprintln!("check {} failed: {}", c.name, c.detail);
    }
    if let Some(n) = &r.note {
        eprintln!("note: {n}");
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Verify { q, export, common } => {
            if let Err(e) = check_q(q) {
                eprintln!("usage: {e}");
                return Ok(EXIT_USAGE);
            }
            let (r, cert) = verify_theorem_with_certificate(q, &common.options())?;
            if let (Some(path), Some(cert)) = (export, &cert) {
                if let Err(e) = std::fs::write(&path, export_certificate(cert)) {
                    eprintln!("cannot write {}: {e}", path.display());
                    return Ok(EXIT_INTERNAL);
                }
            }
            print_single(&r, common.format);
            Ok(status_code(r.status))
        }
        Command::Sweep { q_min, q_max, jobs, common } => {
            let cfg = SweepConfig {
                q_min,
                q_max,
                jobs: jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
                verify: common.options(),
            };
            let stdout = std::io::stdout();
            let mut header_done = false;
            let records = sweep(&cfg, |r| {
                let mut out = stdout.lock();
                let line = match common.format {
                    Format::Csv => {
                        if !header_done {
                            let _ = writeln!(out, "{}", csv_header());
                            header_done = true;
                        }
                        csv_row(r)
                    }
                    Format::Json => json_line(r),
                };
                let _ = writeln!(out, "{line}");
                let _ = out.flush();
            })?;
            let summary = Summary::of(&records);
            eprintln!("{}", summary.line());
            Ok(if summary.fail > 0 { EXIT_FAIL } else { 0 })
        }
        Command::Import { file, common } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", file.display());
                    return Ok(EXIT_USAGE);
                }
            };
            let cert = import_certificate(&text)?;
            let r = verify_certificate(&cert, &common.options())?;
            print_single(&r, common.format);
            Ok(status_code(r.status))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
