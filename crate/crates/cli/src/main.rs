mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::Format;

#[derive(Parser, Debug)]
#[command(
    name = "torus-ech",
    version,
    about = "ECH invariants of T(p,q) torus-knot boundaries"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Write the artifact to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Worker threads for parallel stages (defaults to all cores).
    #[arg(long, global = true, env = "ECH_THREADS", hide_env_values = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Knot {
    #[arg(long)]
    pub p: i64,
    #[arg(long)]
    pub q: i64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generators of the chain complex up to a degree cutoff.
    Generators {
        #[command(flatten)]
        knot: Knot,
        #[arg(long)]
        max_degree: i64,
    },
    /// Conley-Zehnder indices of orbit iterates in the orbibundle trivialization.
    CzTable {
        #[command(flatten)]
        knot: Knot,
        #[arg(long, default_value = "2")]
        max_action: String,
    },
    /// Homology ranks of the full complex.
    Homology {
        #[command(flatten)]
        knot: Knot,
        #[arg(long)]
        max_index: i64,
        /// Degree cutoff; defaults to the smallest one valid for the index window.
        #[arg(long)]
        max_degree: Option<i64>,
        /// Also verify that the boundary matrix squares to zero.
        #[arg(long)]
        check_d_squared: bool,
    },
    /// Homology of the subcomplex below a knot-filtration level.
    KnotFiltered {
        #[command(flatten)]
        knot: Knot,
        #[arg(long)]
        max_index: i64,
        /// Filtration level such as `12`, `12+d` or `25/2-3*d`.
        #[arg(long, allow_hyphen_values = true)]
        level: String,
        #[arg(long)]
        max_degree: Option<i64>,
    },
    /// Action and linking spectra with Weyl-law error terms.
    Spectrum {
        #[command(flatten)]
        knot: Knot,
        #[arg(long)]
        k_max: u64,
        /// Shorthand for `--format csv`.
        #[arg(long)]
        csv: bool,
        #[arg(long, value_enum, default_value_t = Rotation::Delta)]
        rotation: Rotation,
    },
    /// The sequence N_k(p,q) with repeat counts.
    Nseq {
        #[command(flatten)]
        knot: Knot,
        #[arg(long)]
        k_max: u64,
    },
    /// Spectral obstruction to a cobordism between two knot boundaries.
    Obstruct {
        #[arg(long, value_name = "P,Q")]
        from: String,
        #[arg(long, value_name = "P,Q")]
        to: String,
        #[arg(long)]
        k_max: u64,
    },
    /// Quantitative mean-action bounds.
    Bounds {
        #[command(subcommand)]
        kind: BoundKind,
    },
    /// Toric lattice-path model.
    Toric {
        #[command(subcommand)]
        kind: ToricKind,
    },
    /// Scan of the Weyl-law error term e_k.
    Weyl {
        #[command(flatten)]
        knot: Knot,
        #[arg(long, default_value_t = 1)]
        k_min: u64,
        #[arg(long)]
        k_max: u64,
        /// Write `k,e_k_lower,e_k_upper` rows to FILE.
        #[arg(long, value_name = "FILE")]
        plot_data: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rotation {
    /// rot(b) = pq
    Exact,
    /// rot(b) = pq + δ
    Delta,
}

#[derive(Subcommand, Debug)]
pub enum BoundKind {
    ActionLinking {
        #[command(flatten)]
        knot: Knot,
        /// Excess rotation Δ > 0.
        #[arg(long)]
        delta: String,
        /// Contact volume V.
        #[arg(long)]
        volume: String,
        #[arg(long, default_value = "1")]
        action_b: String,
    },
    Calabi {
        #[command(flatten)]
        knot: Knot,
        /// Offset d ∈ (−1/pq, 0].
        #[arg(long, allow_hyphen_values = true)]
        d: String,
        #[arg(long)]
        calabi: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ToricKind {
    /// Vertex list of the path representing a generator.
    Path {
        #[command(flatten)]
        knot: Knot,
        #[arg(long)]
        current: String,
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
    },
    /// The two corner roundings of an h-labelled path.
    Round {
        #[command(flatten)]
        knot: Knot,
        #[arg(long)]
        current: String,
    },
}

fn main() -> ExitCode {
    let mut cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("torus-ech: cannot size thread pool: {e}");
            return ExitCode::FAILURE;
        }
    }
    if let Command::Spectrum { csv: true, .. } = cli.command {
        cli.format = Format::Csv;
    }
    let report = match commands::run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("torus-ech: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    match report.emit(cli.format, cli.output.as_deref()) {
        Ok(()) if report.ok => ExitCode::SUCCESS,
        Ok(()) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("torus-ech: {e}");
            ExitCode::FAILURE
        }
    }
}
