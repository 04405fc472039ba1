//! `twoelem`: batch front end for lattice invariants, q-series of `F_Λ`,
//! Borcherds lift data, Siegel theta evaluations and the K3-graph.

mod commands;
mod graph_io;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use twoelem::arith::qseries::parse_q;
use twoelem::arith::Q;

#[derive(Parser, Debug)]
#[command(name = "twoelem", version, about = "Computations for even 2-elementary lattices")]
struct Cli {
    /// Series truncation as `p/q` (exclusive bound on q-exponents).
    #[arg(long, global = true, default_value = "10", value_parser = parse_order)]
    order: Q,
    /// Working precision in bits for numerical evaluations (at least 53).
    #[arg(long, global = true, default_value_t = 128, value_parser = parse_prec)]
    prec: usize,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; `dot` applies to graph export only.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Invariants (r, l, δ), σ, signature, 1_Λ and the genera g, k.
    LatticeInfo { expr: String },
    /// Runs a self-check suite; exits 0 iff every check passes.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(twoelem::verify::Suite::NAMES))]
        suite: String,
    },
    /// Writes the K3-graph generated by the table of complements.
    ExportGraph {
        /// Transition depth from the table vertices; unbounded by default.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Reads a JSON graph export, validates it and writes it back out.
    ImportGraph { path: PathBuf },
    /// Components of `F_Λ` below `--order`.
    Qseries { expr: String },
    /// Borcherds lift data.
    Borcherds {
        #[command(subcommand)]
        cmd: BorcherdsCmd,
    },
    /// Theta constants and `χ_g` on the Siegel upper half-space.
    Siegel {
        #[command(subcommand)]
        cmd: SiegelCmd,
    },
}

#[derive(Subcommand, Debug)]
enum BorcherdsCmd {
    /// Weight (closed form and `c_0(0)/2`) and Heegner divisor of the lift of `F_Λ`.
    Report { expr: String },
}

#[derive(Subcommand, Debug)]
enum SiegelCmd {
    /// Evaluates at `Σ`, given as JSON rows of `[re, im]` pairs, e.g. `[[[0.1,1.2]]]`.
    Eval {
        #[arg(long)]
        sigma: String,
    },
}

fn parse_order(s: &str) -> Result<Q, String> {
    match parse_q(s) {
        Some(q) if q > Q::from(0) => Ok(q),
        Some(_) => Err("order must be positive".into()),
        None => Err(format!("expected p/q, got {s:?}")),
    }
}

fn parse_prec(s: &str) -> Result<usize, String> {
    let p: usize = s.parse().map_err(|_| format!("expected a bit count, got {s:?}"))?;
    if p < 53 {
        return Err("precision must be at least 53 bits".into());
    }
    Ok(p)
}

/// `TWOELEM_THREADS` caps the worker pool used inside library calls.
fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("TWOELEM_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).with_context(|| format!("TWOELEM_THREADS must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut h = std::io::stdout().lock();
            h.write_all(text.as_bytes())?;
            h.flush()?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    configure_threads()?;
    let format = cli.format;
    let pick = |default: Format| -> Result<Format> {
        match format.unwrap_or(default) {
            Format::Dot => bail!("--format dot applies to graph export only"),
            f => Ok(f),
        }
    };
    let (text, code) = match cli.cmd {
        Cmd::LatticeInfo { expr } => (commands::lattice_info(&expr, pick(Format::Text)?)?, ExitCode::SUCCESS),
        Cmd::Verify { suite } => {
            let (text, ok) = commands::verify(&suite, pick(Format::Json)?)?;
            (text, if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::ExportGraph { depth } => (commands::export_graph(depth, format.unwrap_or(Format::Dot))?, ExitCode::SUCCESS),
        Cmd::ImportGraph { path } => (commands::import_graph(&path, format.unwrap_or(Format::Json))?, ExitCode::SUCCESS),
        Cmd::Qseries { expr } => (commands::qseries(&expr, cli.order, pick(Format::Text)?)?, ExitCode::SUCCESS),
        Cmd::Borcherds { cmd: BorcherdsCmd::Report { expr } } => (commands::borcherds_report(&expr, pick(Format::Text)?)?, ExitCode::SUCCESS),
        Cmd::Siegel { cmd: SiegelCmd::Eval { sigma } } => (commands::siegel_eval(&sigma, cli.prec, pick(Format::Text)?)?, ExitCode::SUCCESS),
    };
    emit(&cli.out, &text)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
