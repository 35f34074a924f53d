//! `sw`: operator tooling for the conversation practice service.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use sw_core::knowledge::{ChunkParams, DEFAULT_TOP_K};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "sw", version, about = "Conversation practice service tooling")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Embedder {
    /// Deterministic offline token-hash embeddings.
    Stub,
    /// The configured OpenAI-compatible embeddings endpoint (`SW_*` env).
    Live,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chunk and embed a directory of .txt/.md guidance files into an index file.
    Ingest {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = ChunkParams::default().chunk_size)]
        chunk_size: usize,
        #[arg(long, default_value_t = ChunkParams::default().overlap)]
        overlap: usize,
        #[arg(long, value_enum, default_value_t = Embedder::Stub)]
        embedder: Embedder,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Rank the chunks of an index file against a query.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long)]
        text: String,
        #[arg(long, default_value_t = DEFAULT_TOP_K)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Embedder::Stub)]
        embedder: Embedder,
        /// Print the results as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a scripted conversation (one user line per script line) offline
    /// and print the transcript and feedback report.
    Chat {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        script: PathBuf,
        /// Index built with the stub embedder, used to ground feedback.
        #[arg(long)]
        index: Option<PathBuf>,
    },
    /// Run the HTTP API until interrupted.
    Serve {
        /// TOML config file; `SW_*` environment variables override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| CliError::domain("runtime", e))?;
    match cli.command {
        Command::Ingest { corpus, out, chunk_size, overlap, embedder, json } => {
            let params = ChunkParams::new(chunk_size, overlap).map_err(CliError::usage)?;
            runtime.block_on(commands::ingest(&corpus, &out, params, embedder, json))
        }
        Command::Query { index, text, k, embedder, json } => {
            if k == 0 {
                return Err(CliError::usage("--k must be at least 1"));
            }
            runtime.block_on(commands::query(&index, &text, k, embedder, json))
        }
        Command::Chat { scenario, script, index } => {
            runtime.block_on(commands::chat(&scenario, &script, index.as_deref()))
        }
        Command::Serve { config } => runtime.block_on(commands::serve(config.as_deref())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            err.exit_code()
        }
    }
}
