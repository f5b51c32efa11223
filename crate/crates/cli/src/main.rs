//! `qrv`: node splitting, component classification, generators of prime
//! ideals and their numerical verification, from the command line.
//!
//! Every subcommand prints one JSON object `{status, payload, diagnostics}`
//! on stdout and exits with status 0 iff `status` is `"ok"`.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "qrv", version, about = "Node splitting for quiver representation varieties")]
struct Cli {
    /// Worker threads for randomized checks (output does not depend on it).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List vertices and whether each is a node.
    Nodes { file: PathBuf },
    /// Split a node; with --dim and --rank also split the dimension vector.
    Split {
        file: PathBuf,
        #[arg(long)]
        vertex: String,
        #[arg(long)]
        dim: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Irreducible components of rep_A(d) for a radical square zero algebra.
    Components {
        file: PathBuf,
        #[arg(long)]
        dim: String,
        /// Also list nonempty strata that are not components.
        #[arg(long)]
        all: bool,
    },
    /// Generators of the prime ideal of C_r, or of the relative
    /// construction at a node when --extra is given.
    Ideal {
        file: PathBuf,
        #[arg(long)]
        dim: String,
        /// A rank vector `v:n,...`, or with --vertex a single rank.
        #[arg(long)]
        rank: String,
        #[arg(long, default_value = "plain")]
        format: String,
        /// JSON list of polynomials on the split side.
        #[arg(long, requires = "vertex")]
        extra: Option<PathBuf>,
        #[arg(long)]
        vertex: Option<String>,
        /// Also write the exported text to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized and brute-force checks.
    Verify(VerifyArgs),
    /// The algebra obtained by deleting arrows according to a weight.
    Reduce {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Membership,
    Codim,
    Containment,
    Oracle,
    Endo,
    Semistable,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// Algebra file; not needed with --sweep.
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "membership")]
    suite: Suite,
    #[arg(long)]
    dim: Option<String>,
    #[arg(long)]
    rank: Option<String>,
    /// Second rank vector for the containment suite.
    #[arg(long)]
    rank2: Option<String>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = qrv_core::exactla::DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, env = "QRV_SEED", default_value_t = 0)]
    seed: u64,
    /// Polynomials to test instead of the emitted generators (membership).
    #[arg(long)]
    generators: Option<PathBuf>,
    /// Split vertex (endo).
    #[arg(long)]
    vertex: Option<String>,
    /// Weight (semistable); all balanced weights within --max-weight when absent.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Field size for brute-force enumeration (semistable).
    #[arg(long, default_value_t = 2)]
    q: u64,
    /// Run over every small instance instead of one file.
    #[arg(long)]
    sweep: bool,
    #[arg(long)]
    max_vertices: Option<usize>,
    #[arg(long)]
    max_arrows: Option<usize>,
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long, default_value_t = 2)]
    max_weight: i64,
}

/// What a command produced: `ok == false` still carries a payload.
pub struct Outcome {
    pub ok: bool,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    pub fn ok(payload: Value) -> Self {
        Outcome { ok: true, payload, diagnostics: Vec::new() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("could not configure {n} worker threads: {e}");
        }
    }
    let outcome = commands::run(&cli.command).unwrap_or_else(|e| Outcome {
        ok: false,
        payload: Value::Null,
        diagnostics: e.chain().map(|c| c.to_string()).collect(),
    });
    let mut diagnostics = outcome.diagnostics;
    if !outcome.ok && diagnostics.is_empty() {
        diagnostics.push("check failed".into());
    }
    for d in &diagnostics {
        eprintln!("{d}");
    }
    let doc = json!({
        "status": if outcome.ok { "ok" } else { "error" },
        "payload": outcome.payload,
        "diagnostics": diagnostics,
    });
    // A closed pipe on stdout is not worth a panic.
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
