mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "jsl", version, about = "Distributivity of finite join-semilattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Check that each model is a poset and a join-semilattice
    Validate {
        /// Model file, or the name of a built-in model
        model: String,
    },
    /// Run every checker and the model's `expect` lines
    Classify { model: String },
    /// List the ideal families and compare them with the checkers
    Ideals { model: String },
    /// Arrow table with undefinedness certificates
    Arrow { model: String },
    /// Enumerate all models up to a size and verify the implication chain
    Atlas {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        /// Worker threads; 0 uses every core
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Smallest models satisfying a boolean expression over flag names
    Search {
        #[arg(long)]
        pred: String,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Classify every `*.jsl` file in a directory and check expectations
    Corpus { dir: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { model } => commands::validate(&model, cli.format),
        Command::Classify { model } => commands::classify(&model, cli.format),
        Command::Ideals { model } => commands::ideals(&model, cli.format),
        Command::Arrow { model } => commands::arrow(&model, cli.format),
        Command::Atlas { max_n, workers } => commands::atlas(max_n, workers, cli.format),
        Command::Search { pred, max_n, workers } => commands::search(&pred, max_n, workers, cli.format),
        Command::Corpus { dir } => commands::corpus(&dir, cli.format),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
