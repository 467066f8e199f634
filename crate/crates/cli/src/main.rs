//! `lumpkit`: generate, compress, analyze and verify Markov chains with
//! absorbing target classes.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "lumpkit",
    version,
    about = "Minimal lumping of Markov chains with target classes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a chain document for one of the built-in families.
    Gen(GenArgs),
    /// Compute the coarsest lumpable partition and its quotient chain.
    Compress {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = lumpkit_core::DEFAULT_EPSILON)]
        epsilon: f64,
        /// Write the quotient chain document here.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write a Graphviz rendering of the chain coloured by block.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print only the Markov complexity.
    Complexity {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = lumpkit_core::DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Tabulate the probability of having reached each target class by step m.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        tau: usize,
        #[command(flatten)]
        start: Start,
    },
    /// Check the compression against preservation and, optionally, brute force.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = lumpkit_core::DEFAULT_EPSILON)]
        epsilon: f64,
        /// Also compare with exhaustive search (chains of at most 12 states).
        #[arg(long)]
        oracle: bool,
    },
    /// Estimate reach probabilities by sampling trajectories.
    Simulate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        tau: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        /// Start state label; uniform over all states when omitted.
        #[arg(long)]
        init: Option<String>,
    },
}

#[derive(Args)]
struct Input {
    /// Chain document to read; standard input when omitted or "-".
    #[arg(short, long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
#[group(multiple = false)]
struct Start {
    /// Start state label.
    #[arg(long)]
    init: Option<String>,
    /// Start uniformly over all states (the default).
    #[arg(long)]
    uniform: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Negbin,
    Consecutive,
    Gamblers,
    Hypercube,
    Coupon,
    Pairs,
}

#[derive(Args)]
struct GenArgs {
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    /// Win probability, as `a/b` (exact) or a decimal (float).
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    /// Comma-separated probabilities (coupon objects, or pair transitions).
    #[arg(long, value_delimiter = ',')]
    probs: Vec<String>,
    /// Treat all target states as one class.
    #[arg(long)]
    merged: bool,
    /// Pair chain with history-free probabilities p(m -> k).
    #[arg(long)]
    collapse: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => commands::gen(&args),
        Command::Compress {
            input,
            epsilon,
            output,
            dot,
        } => commands::compress(&input, epsilon, output.as_deref(), dot.as_deref()),
        Command::Complexity { input, epsilon } => commands::complexity(&input, epsilon),
        Command::Analyze { input, tau, start } => {
            commands::analyze(&input, tau, start.init.as_deref())
        }
        Command::Verify {
            input,
            epsilon,
            oracle,
        } => commands::verify(&input, epsilon, oracle),
        Command::Simulate {
            input,
            tau,
            trials,
            seed,
            init,
        } => commands::simulate(&input, tau, trials, seed, init.as_deref()),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            let _ = stdout.flush();
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(failure) => {
            eprintln!("lumpkit: {}", failure.message.replace('\n', " "));
            ExitCode::from(failure.code)
        }
    }
}
