//! `apsets`: batch experiments over almost periodic integer sets.

mod commands;
mod config;
mod selftest;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "apsets", version, about = "Circle-method diagnostics for integer sets")]
struct Cli {
    /// Write the report here instead of stdout (required for `generate`).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for the parallel kernels (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Kfree,
    Beatty,
    Periodic,
    Sifted,
    Full,
}

/// A set given either as a file written by `generate` or inline.
#[derive(Args, Debug, Clone, Default)]
pub struct SetArgs {
    /// Set file written by `generate`.
    #[arg(long)]
    pub set: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<FamilyKind>,
    /// Power for k-free sets.
    #[arg(long)]
    pub k: Option<u32>,
    /// Radicand for Beatty sets floor(a·sqrt(r)).
    #[arg(long)]
    pub r: Option<u64>,
    /// Modulus for periodic sets.
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub residues: Vec<u64>,
    /// Sifted sets drop every multiple of a prime up to this bound.
    #[arg(long)]
    pub bound: Option<u64>,
    /// Truncation limit (for a set file: truncate to this limit).
    #[arg(long)]
    pub x: Option<u64>,
}

/// The second summand set of `represent`; defaults to the first.
#[derive(Args, Debug, Clone, Default)]
pub struct SetArgsB {
    #[arg(id = "b_set", long = "b-set")]
    pub set: Option<PathBuf>,
    #[arg(id = "b_family", long = "b-family", value_enum)]
    pub family: Option<FamilyKind>,
    #[arg(id = "b_k", long = "b-k")]
    pub k: Option<u32>,
    #[arg(id = "b_r", long = "b-r")]
    pub r: Option<u64>,
    #[arg(id = "b_q", long = "b-q")]
    pub q: Option<u64>,
    #[arg(id = "b_residues", long = "b-residues", value_delimiter = ',')]
    pub residues: Vec<u64>,
    #[arg(id = "b_bound", long = "b-bound")]
    pub bound: Option<u64>,
    #[arg(id = "b_x", long = "b-x")]
    pub x: Option<u64>,
}

impl From<SetArgsB> for SetArgs {
    fn from(b: SetArgsB) -> Self {
        SetArgs {
            set: b.set,
            family: b.family,
            k: b.k,
            r: b.r,
            q: b.q,
            residues: b.residues,
            bound: b.bound,
            x: b.x,
        }
    }
}

#[derive(ValueEnum, Serialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum MainKind {
    /// n / sqrt(6), for the sqrt(2), sqrt(3) Beatty pair.
    Beatty,
    /// Truncated singular series from the sets' local densities.
    Rational,
    /// n.
    Identity,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a set and write it with a JSON sidecar.
    Generate(SetArgs),
    /// Minor-arc energy over a schedule of Q.
    Energy {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        q_schedule: Vec<f64>,
        /// `farey` or `sequence:beatty<r>`.
        #[arg(long, default_value = "farey")]
        arcs: String,
    },
    /// Extremality partial sums and the gap to 1/density.
    Extremality {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        q_max: u64,
        /// Use the exact limiting coefficients of the k-free set instead of a
        /// generated set.
        #[arg(long)]
        theoretical_kfree: Option<u32>,
    },
    /// Fourier coefficients over a candidate list.
    Spectrum {
        #[command(flatten)]
        set: SetArgs,
        /// Comma list of `a/q`, decimals, `farey:<Q>` or `beatty:<r>:<Q>`.
        #[arg(long, value_delimiter = ',', required = true)]
        candidates: Vec<String>,
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
    },
    /// Exact representation counts against a main term.
    Represent {
        #[command(flatten)]
        a: SetArgs,
        #[command(flatten)]
        b: SetArgsB,
        #[arg(long, value_enum, default_value_t = MainKind::Beatty)]
        main: MainKind,
        /// Q for `--main rational`.
        #[arg(long)]
        main_q: Option<u64>,
        #[arg(long)]
        from: Option<u64>,
        #[arg(long)]
        to: Option<u64>,
    },
    /// Run the built-in example checks.
    Selftest,
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| anyhow::anyhow!("thread pool: {e}"))?;
    }
    let out = table::Sink::new(cli.output.clone(), cli.format);
    match cli.command {
        Command::Generate(set) => commands::generate(&out, set),
        Command::Energy {
            set,
            q_schedule,
            arcs,
        } => commands::energy(&out, set, q_schedule, arcs),
        Command::Extremality {
            set,
            q_max,
            theoretical_kfree,
        } => commands::extremality(&out, set, q_max, theoretical_kfree),
        Command::Spectrum {
            set,
            candidates,
            threshold,
        } => commands::spectrum(&out, set, candidates, threshold),
        Command::Represent {
            a,
            b,
            main,
            main_q,
            from,
            to,
        } => commands::represent(&out, a, b.into(), main, main_q, from, to),
        Command::Selftest => return selftest::run(&out),
    }
    .map(|()| true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: usage: {}", one_line(first.trim_start_matches("error: ")));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: selftest: one or more checks failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {}", one_line(&format!("{e:#}")));
            ExitCode::FAILURE
        }
    }
}
