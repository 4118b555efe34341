use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rhom::format::{Format, Kind};
use rhom::oracle::{run_claim, ClaimId, OracleOptions, Provenance};
use rhom::Variant;
use rhom_cli::{
    analyze_path, batch_error, batch_inputs, render, AnalyzeError, AnalyzeOptions, LogBase,
    OutputFormat,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_ORACLE: u8 = 3;

/// Dependence measures for discrete joint distributions.
#[derive(Parser)]
#[command(name = "rhom", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct MeasureArgs {
    /// Input format; inferred from the file extension when omitted.
    #[arg(long)]
    format: Option<Format>,
    /// Whether the matrix holds counts or probabilities.
    #[arg(long)]
    kind: Option<Kind>,
    /// Comma-separated measures; defaults to every applicable one.
    #[arg(long, value_delimiter = ',')]
    measures: Option<Vec<String>>,
    /// Use ordinal supports 0..r-1 and 0..c-1 when the input has none.
    #[arg(long)]
    default_supports: bool,
    #[arg(long, default_value = "definition1")]
    rho_m_variant: Variant,
    #[arg(long, default_value = "nats")]
    log_base: LogBase,
    /// Sample size for the chi-squared family; overrides the count total.
    #[arg(long)]
    sample_size: Option<f64>,
}

impl MeasureArgs {
    fn options(&self) -> AnalyzeOptions {
        AnalyzeOptions {
            format: self.format,
            kind: self.kind,
            measures: self.measures.clone(),
            default_supports: self.default_supports,
            variant: self.rho_m_variant,
            log_base: self.log_base,
            sample_size: self.sample_size,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute dependence measures for one table.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long, default_value = "json")]
        output: OutputFormat,
    },
    /// Analyze every .csv/.json file in a directory, one JSON line per file.
    Batch {
        dir: PathBuf,
        #[command(flatten)]
        measure: MeasureArgs,
    },
    /// Run a brute-force oracle (or `all`) and write the provenance file.
    Oracle {
        claim: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        m: usize,
        /// Trials per claim; cov-max counts configurations, each enumerating n! couplings.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "provenance.json")]
        provenance: PathBuf,
    },
}

fn exit_for(err: &AnalyzeError) -> ExitCode {
    ExitCode::from(match err {
        AnalyzeError::Usage(_) => EXIT_USAGE,
        AnalyzeError::Io(_) | AnalyzeError::Data(_) => EXIT_DATA,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Analyze {
            input,
            measure,
            output,
        } => match analyze_path(&input, &measure.options()) {
            Ok(report) => {
                let _ = out.write_all(render(&report, output).as_bytes());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("rhom: {e}");
                exit_for(&e)
            }
        },
        Command::Batch { dir, measure } => {
            let files = match batch_inputs(&dir) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("rhom: cannot list {}: {e}", dir.display());
                    return ExitCode::from(EXIT_DATA);
                }
            };
            let opts = measure.options();
            let mut failed = false;
            for path in files {
                let line = match analyze_path(&path, &opts) {
                    Ok(report) => serde_json::to_string(&report),
                    Err(e) => {
                        if matches!(e, AnalyzeError::Usage(_)) {
                            eprintln!("rhom: {e}");
                            return ExitCode::from(EXIT_USAGE);
                        }
                        failed = true;
                        serde_json::to_string(&batch_error(&path, &e))
                    }
                };
                let _ = writeln!(out, "{}", line.expect("report serializes"));
            }
            if failed {
                ExitCode::from(EXIT_DATA)
            } else {
                ExitCode::SUCCESS
            }
        }
        Command::Oracle {
            claim,
            n,
            m,
            trials,
            seed,
            provenance,
        } => {
            let claims: Vec<ClaimId> = if claim == "all" {
                ClaimId::ALL.to_vec()
            } else {
                match claim.parse() {
                    Ok(c) => vec![c],
                    Err(e) => {
                        eprintln!("rhom: {e}");
                        return ExitCode::from(EXIT_USAGE);
                    }
                }
            };
            let mut record = Provenance::default();
            for id in claims {
                let default_trials = match id {
                    ClaimId::CovMax => 200,
                    _ => 10_000,
                };
                let opts = OracleOptions {
                    n,
                    m,
                    trials: trials.unwrap_or(default_trials),
                    seed,
                };
                match run_claim(id, &opts) {
                    Ok(report) => {
                        let _ = writeln!(out, "{}", report.summary());
                        record.insert(report);
                    }
                    Err(e) => {
                        eprintln!("rhom: {}: {e}", id.as_str());
                        return ExitCode::from(EXIT_USAGE);
                    }
                }
            }
            if let Err(e) = record.write(&provenance) {
                eprintln!("rhom: cannot write {}: {e}", provenance.display());
                return ExitCode::from(EXIT_DATA);
            }
            if record.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_ORACLE)
            }
        }
    }
}
