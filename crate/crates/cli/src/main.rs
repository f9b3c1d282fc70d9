use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use splmat_cli::commands::{self, CliError, Format};
use splmat_cli::server;
use splmat_core::calibration::RESIDUAL_TOLERANCE;

#[derive(Debug, Parser)]
#[command(
    name = "splmat",
    version,
    about = "Fuzzy-logic software product line maturity assessment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Assess a questionnaire file (respondents are averaged).
    Assess {
        input: PathBuf,
        /// Reduction-tree configuration (JSON).
        #[arg(long, env = "SPLMAT_CONFIG")]
        config: Option<PathBuf>,
        /// Write the report here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Search reduction-tree shapes against expected results.
    Calibrate {
        /// `builtin` or a JSON file of targets.
        #[arg(long, default_value = "builtin")]
        targets: String,
    },
    /// Reliability analysis of a CSV response matrix.
    Analyze { csv: PathBuf },
    /// Print the fuzzy variables and rule base as JSON.
    Model,
    /// Run the HTTP API.
    Serve {
        #[arg(long, default_value_t = server::DEFAULT_PORT)]
        port: u16,
    },
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => commands::write_file(path, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}"))),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Assess {
            input,
            config,
            output,
            format,
        } => {
            let text = commands::cmd_assess(&input, config.as_deref(), format)?;
            emit(&text, output.as_ref())?;
        }
        Command::Calibrate { targets } => {
            let (result, text) = commands::cmd_calibrate(&targets)?;
            emit(&text, None)?;
            if !result.within(RESIDUAL_TOLERANCE) {
                eprintln!(
                    "error: best residual {:.4} exceeds tolerance {RESIDUAL_TOLERANCE}",
                    result.residual
                );
                return Ok(ExitCode::from(1));
            }
        }
        Command::Analyze { csv } => {
            let (_, text) = commands::cmd_analyze(&csv)?;
            emit(&text, None)?;
        }
        Command::Model => emit(&commands::cmd_model(), None)?,
        Command::Serve { port } => {
            let runtime =
                tokio::runtime::Runtime::new().map_err(|e| CliError::Io(e.to_string()))?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind(("0.0.0.0", port))
                    .await
                    .map_err(|e| CliError::Io(format!("cannot bind port {port}: {e}")))?;
                eprintln!(
                    "listening on http://{}",
                    listener
                        .local_addr()
                        .map_err(|e| CliError::Io(e.to_string()))?
                );
                server::serve(listener, async {
                    let _ = tokio::signal::ctrl_c().await;
                })
                .await
                .map_err(|e| CliError::Io(e.to_string()))
            })?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
