//! `chiral`: validate finite inverse semigroups and twists, build their germ
//! groupoids, and decide mirror self-duality.

mod commands;
mod load;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "chiral", version, about = "Mirror symmetry checks for finite inverse semigroups")]
struct Cli {
    /// Worker threads for the parallel kernels (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the semigroup axioms, and the twist and representation if given.
    Validate(Inputs),
    /// Build the universal or germ groupoid and export it.
    Build {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value_t = Model::Universal)]
        which: Model,
    },
    /// Enumerate mirror morphisms and report the chirality index.
    Chirality {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value_t = Level::Groupoid)]
        level: Level,
        /// Groupoid model for the groupoid level.
        #[arg(long, value_enum, default_value_t = Model::Universal)]
        model: Model,
    },
    /// Run every construction and identification check in order.
    Bridge(Inputs),
    /// Build the twisted convolution algebra and check the opposite identifications.
    Algebra {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum, default_value_t = Model::Universal)]
        model: Model,
    },
    /// Export a derived object as JSON.
    Export {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, value_enum)]
        object: Object,
    },
    /// Validate random single-entry mutations of the input table.
    Fuzz {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long, default_value_t = 100)]
        rounds: usize,
    },
    /// List or write the built-in example corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusAction {
    List,
    Write {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Args, Debug, Clone)]
struct Inputs {
    /// Semigroup file.
    #[arg(long)]
    input: PathBuf,
    /// Twist file (default: trivial twist).
    #[arg(long)]
    twist: Option<PathBuf>,
    /// Representation file (default: Wagner–Preston).
    #[arg(long)]
    rep: Option<PathBuf>,
    /// Weight table (default: every morphism weighs 1).
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Run searches beyond the size guardrail.
    #[arg(long)]
    force: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Model {
    Universal,
    Germ,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Level {
    Semigroup,
    Represented,
    Groupoid,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Object {
    Semigroup,
    Mirror,
    Representation,
    MirrorRepresentation,
    Twist,
    MirrorTwist,
    Characters,
    Cocycle,
    Algebra,
}

/// What a command decided, separate from how it is printed.
pub enum Outcome {
    Ok,
    Failed,
}

pub const EXIT_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match commands::run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(EXIT_FAILURE),
        Err(commands::CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(commands::CliError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
