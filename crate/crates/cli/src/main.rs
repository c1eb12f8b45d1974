mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use cobarlab_core::{detect_field, Error, FieldTag, F2, Q};
use commands::{run, Command};
use report::{Config, Failure, FailureRecord, Report};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    #[value(name = "F2", alias = "f2")]
    F2,
    #[value(name = "Q", alias = "q")]
    Q,
}

/// Exact cobar, double cobar and homotopy G-algebra computations.
#[derive(Parser, Debug)]
#[command(name = "cobarlab", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Coalgebra document (or twisting family for `hirsch-check`).
    input: PathBuf,
    /// Coefficient field; overrides the `field` line of the input.
    #[arg(long, value_enum)]
    field: Option<FieldArg>,
    /// Maximum degree N (at least 2).
    #[arg(long, default_value_t = 8)]
    maxdeg: i32,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Seed for randomized sweeps.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn init_threads() {
    if let Some(n) = std::env::var("COBARLAB_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Check failures exit 1, anything wrong with the input exits 2.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::OracleBreach { .. } | Error::IdentityFailure(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    init_threads();
    let mut config =
        Config { input: args.input.display().to_string(), field: String::new(), maxdeg: args.maxdeg, seed: args.seed };
    let command = args.command.name().to_string();
    let fail = |config: Config, e: Error| {
        let rec = FailureRecord {
            command: command.clone(),
            config,
            error: Failure { kind: e.kind().into(), message: e.to_string() },
            pass: false,
        };
        print!("{}", if args.format == Format::Json { rec.json() } else { rec.tsv() });
        eprintln!("error: {e}");
        ExitCode::from(exit_code(&e))
    };

    let text = match std::fs::read_to_string(&args.input) {
        Ok(t) => t,
        Err(e) => {
            return fail(config, Error::Parse { line: 0, msg: format!("cannot read {}: {e}", args.input.display()) });
        }
    };
    let field = match args.field {
        Some(FieldArg::F2) => FieldTag::F2,
        Some(FieldArg::Q) => FieldTag::Q,
        None => match detect_field(&text) {
            Ok(f) => f.unwrap_or(FieldTag::Q),
            Err(e) => return fail(config, e),
        },
    };
    config.field = field.to_string();

    let outcome = match field {
        FieldTag::F2 => run::<F2>(args.command, &text, args.maxdeg, args.seed),
        FieldTag::Q => run::<Q>(args.command, &text, args.maxdeg, args.seed),
    };
    match outcome {
        Ok(o) => {
            let report = Report { command, config, tables: o.tables, pass: o.pass };
            print!("{}", if args.format == Format::Json { report.json() } else { report.tsv() });
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(config, e),
    }
}
