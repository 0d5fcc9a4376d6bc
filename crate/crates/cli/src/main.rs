//! `kstab`: exact K-stability reports for toric Fano varieties.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kstab::document::{
    catalog_document, catalog_names, curve_samples_csv, deltak_csv, deltak_table, CurveDocument,
    InputDocument, ReportDocument,
};
use kstab::oracle::cross_check;
use kstab::quantized::DEFAULT_SEARCH_RADIUS;
use kstab::rat::{format_rat, parse_rat};
use kstab::{Error, ToricFano};

/// Radius used by `--oracle` box searches; the closed forms are checked
/// against every primitive direction inside it.
const ORACLE_RADIUS: i64 = 4;

#[derive(Debug, Parser)]
#[command(name = "kstab", version, about = "Exact K-stability invariants of toric Fano varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// JSON input document, `-` for stdin, or a catalog name such as `F1`.
    #[arg(long, short)]
    input: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stability invariants and verdict.
    Report {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Half-width of the box of directions searched as a cross-check.
        #[arg(long, default_value_t = DEFAULT_SEARCH_RADIUS)]
        search_radius: i64,
        /// Run the brute-force oracles and abort on any disagreement.
        #[arg(long)]
        oracle: bool,
        /// Seed for the oracle's random bases.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Finite-level delta_k table.
    Deltak {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated positive levels.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        k_list: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_RADIUS)]
        search_radius: i64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// List the built-in instances, or print one as an input document.
    Catalog { name: Option<String> },
    /// Volume curve along one direction with the slice barycenter check.
    Curve {
        #[command(flatten)]
        input: InputArgs,
        /// Comma-separated primitive direction.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        u: Vec<i64>,
        /// Lower end of the slice, `0 <= eps < tau`.
        #[arg(long, default_value = "0")]
        eps: String,
        /// Write float samples of the curve for plotting to this CSV file.
        #[arg(long)]
        samples_csv: Option<PathBuf>,
        /// Number of sample intervals.
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotFano(_) | Error::NotFullDimensional | Error::OriginNotInterior => 2,
        Error::DimensionCap(_) => 3,
        Error::OracleMismatch(_) => 4,
        _ => 1,
    }
}

fn load(arg: &str) -> Result<ToricFano, Error> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::InvalidInput(format!("stdin: {e}")))?;
        s
    } else if let Ok(doc) = catalog_document(arg) {
        return doc.build();
    } else {
        fs::read_to_string(arg).map_err(|e| Error::InvalidInput(format!("{arg}: {e}")))?
    };
    InputDocument::parse(&text)?.build()
}

fn run(cli: Cli) -> Result<String, Error> {
    match cli.command {
        Command::Report { input, format, search_radius, oracle, seed } => {
            let x = load(&input.input)?;
            let report = ReportDocument::compute(&x, search_radius)?;
            if oracle {
                cross_check(&x, ORACLE_RADIUS.min(search_radius), seed)?;
            }
            Ok(match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
                Format::Text => report.to_text(),
            })
        }
        Command::Deltak { input, k_list, search_radius, format } => {
            let x = load(&input.input)?;
            let rows = deltak_table(&x, &k_list, search_radius)?;
            Ok(match format {
                Format::Csv | Format::Text => deltak_csv(&rows),
                Format::Json => {
                    let rows: Vec<_> = rows
                        .iter()
                        .map(|r| {
                            serde_json::json!({
                                "k": r.k,
                                "N_k": r.n_k,
                                "S_k": format_rat(&r.s_k),
                                "delta_k": format_rat(&r.delta_k),
                                "witness": r.witness,
                                "gap": format_rat(&r.gap),
                                "warning": r.warning,
                            })
                        })
                        .collect();
                    let mut s = serde_json::to_string_pretty(&rows).expect("rows serialize");
                    s.push('\n');
                    s
                }
            })
        }
        Command::Catalog { name } => match name {
            Some(n) => Ok(catalog_document(&n)?.to_json()),
            None => Ok(catalog_names().iter().map(|n| format!("{n}\n")).collect()),
        },
        Command::Curve { input, u, eps, samples_csv, samples } => {
            let x = load(&input.input)?;
            let eps = parse_rat(&eps)?;
            let (doc, curve) = CurveDocument::compute(&x, &u, &eps)?;
            if let Some(path) = samples_csv {
                fs::write(&path, curve_samples_csv(&curve, samples))
                    .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
            }
            Ok(doc.to_json())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
