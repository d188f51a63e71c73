//! `groundchain` command-line tool.
//!
//! Exit codes: 0 on success, 2 for usage, configuration or missing-file
//! errors, 3 for malformed or inconsistent data.

mod commands;
mod options;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use options::Options;

#[derive(Debug, Parser)]
#[command(name = "groundchain", version, about = "Abductive answer selection over grounding and abstract facts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build BM25 indexes for both knowledge bases
    Index,
    /// Answer questions and write predictions
    Answer {
        /// Keep every candidate's graph and subgraph in the predictions
        #[arg(long)]
        dump_graphs: bool,
        /// Write each candidate's 0-1 program in LP format to this directory
        #[arg(long)]
        dump_model: Option<PathBuf>,
    },
    /// Tune the weights by Bayesian optimization
    Train,
    /// Score predictions against gold answers and explanations
    Eval {
        #[arg(long)]
        predictions: PathBuf,
        /// Micro-average explanation F1 instead of per-question macro
        #[arg(long)]
        micro: bool,
        /// Bucket lower bounds for gold explanation length
        #[arg(long, value_delimiter = ',')]
        length_edges: Option<Vec<f64>>,
        /// Bucket lower bounds for choice term overlap
        #[arg(long, value_delimiter = ',')]
        overlap_edges: Option<Vec<f64>>,
        /// Bucket lower bounds for unique hypothesis terms
        #[arg(long, value_delimiter = ',')]
        terms_edges: Option<Vec<f64>>,
    },
    /// Print the explanation chosen for each candidate of a question
    Explain {
        /// Question to explain (all questions if omitted)
        #[arg(long)]
        question_id: Option<String>,
        #[arg(long)]
        dump_model: Option<PathBuf>,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<groundchain::Error>() {
        Some(e) if e.is_data_error() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = cli.options.resolve().and_then(|opts| {
        if let Some(jobs) = opts.jobs {
            rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()?;
        }
        match cli.command {
            Command::Index => commands::index(&opts),
            Command::Answer { dump_graphs, dump_model } => commands::answer(&opts, dump_graphs, dump_model.as_deref()),
            Command::Train => commands::train(&opts),
            Command::Eval { predictions, micro, length_edges, overlap_edges, terms_edges } => {
                commands::eval(&opts, &predictions, micro, [length_edges, overlap_edges, terms_edges])
            }
            Command::Explain { question_id, dump_model } => {
                commands::explain(&opts, question_id.as_deref(), dump_model.as_deref())
            }
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
