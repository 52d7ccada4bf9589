//! Command-line front end: verify construction spec files, print the
//! summary tables of the built-in constructions, and query the section
//! oracle directly.
//!
//! Exit codes: 0 when everything passes, 1 when a verification check
//! fails, 2 on input errors (I/O, syntax, schema).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tricover::constructions::{builtin, run_pipeline, BuiltinName, PipelineError};
use tricover::linsys::{h0, sample_configuration, CfgOptions};

use tricover_cli::expr::parse_class_expr;
use tricover_cli::output::{report_json, report_text, row_json, table_text};
use tricover_cli::specfile::{parse_spec, RawSpec};

#[derive(Parser)]
#[command(
    name = "tricover",
    version,
    about = "Verification engine for triple-cover constructions over blown-up planes"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for the point-configuration sampler.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of independent configurations per section count.
    #[arg(long, global = true)]
    trials: Option<u32>,
    /// Field modulus for the interpolation oracle (a prime above 10^6).
    #[arg(long, global = true)]
    prime: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification pipeline on a spec file.
    Verify { path: PathBuf },
    /// Run all built-in constructions and print the two summary tables.
    Table {
        /// Restrict to a single named construction.
        #[arg(long)]
        only: Option<String>,
    },
    /// Evaluate the section oracle on a class expression.
    H0 {
        /// Class expression, e.g. "-K", "2*l - e2 - e3" or "K + L01".
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Spec file providing the surface (and bundle names, if present).
        #[arg(long)]
        spec: PathBuf,
    },
}

enum CliError {
    /// A verification check failed (exit 1).
    Check(String),
    /// Bad input: I/O, syntax, schema (exit 2).
    Input(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Verify { path } => verify(cli, path),
        Command::Table { only } => table(cli, only.as_deref()),
        Command::H0 { expr, spec } => section_count(cli, expr, spec),
    }
}

fn load_spec(path: &Path) -> Result<RawSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_spec(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn options(cli: &Cli, raw: Option<&RawSpec>) -> Result<CfgOptions, CliError> {
    let defaults = CfgOptions::default();
    let opts = CfgOptions {
        prime: cli
            .prime
            .or(raw.and_then(|r| r.prime))
            .unwrap_or(defaults.prime),
        seed: cli
            .seed
            .or(raw.and_then(|r| r.seed))
            .unwrap_or(defaults.seed),
        trials: cli
            .trials
            .or(raw.and_then(|r| r.trials))
            .unwrap_or(defaults.trials),
    };
    if opts.trials == 0 {
        return Err(CliError::Input("trials must be at least 1".into()));
    }
    if !tricover::fp::is_prime(opts.prime) || opts.prime <= tricover::linsys::MIN_PRIME {
        return Err(CliError::Input(format!(
            "modulus {} is not a prime above {}",
            opts.prime,
            tricover::linsys::MIN_PRIME
        )));
    }
    Ok(opts)
}

fn verify(cli: &Cli, path: &Path) -> Result<(), CliError> {
    let raw = load_spec(path)?;
    let opts = options(cli, Some(&raw))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "spec".into());
    let spec = raw
        .into_construction(&name)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;

    match run_pipeline(&spec, &opts) {
        Ok(report) => {
            match cli.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report_json(&report)).expect("serializable")
                ),
                Format::Text => {
                    print!("{}", report_text(&report));
                    println!("PASS");
                }
            }
            Ok(())
        }
        Err(PipelineError::Stage { stage, detail }) => {
            Err(CliError::Check(format!("{name}: stage {stage}: {detail}")))
        }
        Err(other) => Err(CliError::Input(other.to_string())),
    }
}

fn table(cli: &Cli, only: Option<&str>) -> Result<(), CliError> {
    let opts = options(cli, None)?;
    let names: Vec<BuiltinName> = match only {
        Some(name) => vec![name
            .parse()
            .map_err(|e: PipelineError| CliError::Input(e.to_string()))?],
        None => BuiltinName::all().to_vec(),
    };

    let mut reports = Vec::new();
    let mut mismatches = Vec::new();
    for name in &names {
        let spec = builtin(*name);
        let report = match run_pipeline(&spec, &opts) {
            Ok(r) => r,
            Err(PipelineError::Stage { stage, detail }) => {
                return Err(CliError::Check(format!("{name}: stage {stage}: {detail}")))
            }
            Err(other) => return Err(CliError::Input(other.to_string())),
        };
        if let Some(expected) = spec.expected_row {
            if report.row() != expected {
                mismatches.push(format!(
                    "{name}: realised {} differs from expected {expected}",
                    report.row()
                ));
            }
        }
        reports.push((*name, report));
    }

    match cli.format {
        Format::Json => {
            let rows: Vec<_> = reports.iter().map(|(_, r)| row_json(r)).collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&rows).expect("serializable")
            );
        }
        Format::Text => {
            let family: Vec<(String, _)> = reports
                .iter()
                .filter(|(n, _)| *n != BuiltinName::Thm2)
                .map(|(n, r)| (n.to_string(), r.row()))
                .collect();
            let single: Vec<(String, _)> = reports
                .iter()
                .filter(|(n, _)| *n == BuiltinName::Thm2)
                .map(|(n, r)| (n.to_string(), r.row()))
                .collect();
            if !family.is_empty() {
                println!("{}", table_text(&family));
            }
            if !single.is_empty() {
                println!("{}", table_text(&single));
            }
            if mismatches.is_empty() {
                println!("all rows match the expected values");
            }
        }
    }

    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(mismatches.join("; ")))
    }
}

fn section_count(cli: &Cli, expr: &str, spec_path: &Path) -> Result<(), CliError> {
    let raw = load_spec(spec_path)?;
    let opts = options(cli, Some(&raw))?;
    let class =
        parse_class_expr(expr, &raw.surface, raw.bundles.as_ref()).map_err(CliError::Input)?;
    let cfg = sample_configuration(&raw.surface, opts.prime, opts.seed)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let dim = h0(&class, &cfg, opts.trials).map_err(|e| CliError::Input(e.to_string()))?;
    match cli.format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "expr": expr,
                "class": class.to_string(),
                "h0": dim,
                "trials": opts.trials,
                "prime": opts.prime,
                "seed": opts.seed,
            })
        ),
        Format::Text => println!(
            "h0({expr}) = {dim}   [class {class}, trials {}, prime {}, seed {}]",
            opts.trials, opts.prime, opts.seed
        ),
    }
    Ok(())
}
