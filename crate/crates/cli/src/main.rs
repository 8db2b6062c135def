//! `permcode` — build and verify permutation codes at distance `n - 1`.
//!
//! Every command is deterministic: no randomness is consulted anywhere,
//! which is what the `PERMCODE_SEEDLESS=1` guard asserts (the binary links
//! no random number generator, so the assertion holds by construction).
//! Exit codes: 0 success, 1 verification failure, 2 usage or parameter
//! error.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use permcode_cli::commands::{self, OutputFormat, OutputOpts};

#[derive(Parser)]
#[command(
    name = "permcode",
    version,
    about = "Constructions and brute-force verification for permutation codes of minimum distance n-1"
)]
struct Cli {
    /// Worker threads for the pairwise verification scan.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum FormatArg {
    #[default]
    Text,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => OutputFormat::Text,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(clap::Args)]
struct EmitArgs {
    /// Output file; the code goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Artifact format.
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
}

impl EmitArgs {
    fn opts(&self, threads: usize) -> OutputOpts {
        OutputOpts {
            out: self.out.clone(),
            format: self.format.into(),
            threads,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build a code, self-verify it, and emit it.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Verify a code file against its claims (or --r) and report
    /// distance, idempotency and the fixed-point census.
    Verify {
        path: PathBuf,
        /// Expected regularity; overrides the file's claim.
        #[arg(long)]
        r: Option<usize>,
    },
    /// Glue ingredient codes (one file per occurring block size) along a
    /// design.
    Compose {
        pbd: PathBuf,
        #[arg(required = true)]
        ingredients: Vec<PathBuf>,
        /// Shared regularity of the ingredients and the result.
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Full pipeline: pick parameters, build ingredients, compose, verify.
    Synthesize {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Build an r-regular code of length n, adjoin the identity, and
    /// print the resulting size bound r*n + 1.
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        r: usize,
    },
}

#[derive(Subcommand)]
enum ConstructKind {
    /// (q-2)-regular code of prime-power length q from field squares.
    MolsIpc {
        #[arg(long)]
        q: u64,
        /// Also write the underlying squares as a latin v1 file.
        #[arg(long)]
        squares_out: Option<PathBuf>,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// (q-1)-regular code of length q^2+1 by subfield-coset extension.
    Baer {
        #[arg(long)]
        q: u64,
        #[command(flatten)]
        emit: EmitArgs,
    },
    /// Code of composite length n at the least-prime-power-factor floor,
    /// by direct products of field squares.
    Macneish {
        #[arg(long)]
        n: u64,
        /// Also write the underlying squares as a latin v1 file.
        #[arg(long)]
        squares_out: Option<PathBuf>,
        #[command(flatten)]
        emit: EmitArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    let threads = cli.threads.max(1);
    let outcome = match cli.command {
        Command::Construct { kind } => match kind {
            ConstructKind::MolsIpc { q, squares_out, emit } => {
                commands::construct_mols_ipc(q, squares_out, &emit.opts(threads))
            }
            ConstructKind::Baer { q, emit } => {
                commands::construct_baer(q, &emit.opts(threads))
            }
            ConstructKind::Macneish { n, squares_out, emit } => {
                commands::construct_macneish(n, squares_out, &emit.opts(threads))
            }
        },
        Command::Verify { path, r } => commands::verify(&path, r, threads),
        Command::Compose { pbd, ingredients, r, emit } => {
            commands::compose(&pbd, &ingredients, r, &emit.opts(threads))
        }
        Command::Synthesize { n, r, emit } => {
            commands::synthesize(n, r, &emit.opts(threads))
        }
        Command::Bound { n, r } => commands::bound(n, r, threads),
    };
    eprintln!("{}", outcome.report);
    if let Some(path) = &outcome.artifact_path {
        eprintln!("wrote {}", path.display());
    }
    std::process::exit(outcome.exit_code);
}
