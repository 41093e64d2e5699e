//! `padicalc`: JSON-in/JSON-out command line for exact p-adic measure,
//! local-factor, weight, polygon, Schur-Weyl, and ordinarity computations.
//!
//! Exit codes: 0 success, 2 schema violation, 3 mathematical precondition
//! failure. Identical inputs and seed produce byte-identical output.

use clap::{Parser, Subcommand, ValueEnum};
use padicalc_cli::commands;
use padicalc_cli::{CliError, CliResult};
use padicalc_core::weights::InvolutionKind;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "padicalc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a character against a stored measure.
    Measure {
        #[command(subcommand)]
        action: MeasureAction,
    },
    /// Kubota-Leopoldt value at an even integer, on its Teichmuller branch.
    Kl {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        /// Relative precision; default 20, overridable via PADICALC_PRECISION.
        #[arg(long = "N")]
        n_prec: Option<u32>,
    },
    /// Ordinary modified Euler factor at p as a reduced rational function.
    EulerP {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        chi: PathBuf,
        /// Also evaluate at integer s = m.
        #[arg(long)]
        at: Option<i64>,
    },
    /// Doubling normalizer product of abelian L-factors.
    Dnorm {
        #[arg(long)]
        chi: PathBuf,
        #[arg(long)]
        n: u32,
        /// Also evaluate at integer s = m.
        #[arg(long)]
        at: Option<i64>,
    },
    /// Weight involutions and critical-set membership.
    Weights {
        #[arg(value_enum)]
        kind: WeightsKind,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Newton/Hodge polygons and the Panchishkin midpoint check.
    Polygon {
        #[arg(value_enum)]
        which: PolygonKind,
        #[arg(long = "in")]
        input: PathBuf,
        /// Write an SVG plot of the polygon(s).
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write a TSV vertex table of the polygon(s).
        #[arg(long)]
        tsv: Option<PathBuf>,
    },
    /// Schur-Weyl polynomial operators.
    Schurweyl {
        #[command(subcommand)]
        action: SchurweylAction,
    },
    /// Ordinarity bookkeeping at p.
    Ordinary {
        #[command(subcommand)]
        action: OrdinaryAction,
    },
    /// Run the acceptance suite and print a pass/fail table.
    Acceptance {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum MeasureAction {
    /// Evaluate the integral of a character against the measure.
    Eval {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long = "char")]
        character: PathBuf,
    },
}

#[derive(Subcommand)]
enum SchurweylAction {
    /// Dimension decomposition counts for all u' <= u, d' <= d.
    Check {
        #[arg(long)]
        u: usize,
        #[arg(long)]
        d: u32,
    },
    /// Expand the minor-product polynomial in canonical monomial order.
    Poly {
        /// Comma-separated A-block exponents.
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
        rtilde: Vec<u32>,
        /// Comma-separated D-block exponents.
        #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
        stilde: Vec<u32>,
    },
}

#[derive(Subcommand)]
enum OrdinaryAction {
    /// Eigenvalue valuations, ordinarity, anti-ordinarity, theta-regularity.
    Check {
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long)]
        kappa: PathBuf,
        #[arg(long)]
        sig: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightsKind {
    Star,
    D,
    Flat,
    Dagger,
    Critical,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolygonKind {
    Newton,
    Hodge,
    Panchishkin,
}

fn default_precision() -> u32 {
    std::env::var("PADICALC_PRECISION")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(20)
}

fn run(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Measure { action } => match action {
            MeasureAction::Eval { measure, character } => {
                commands::measure_eval(measure, character)
            }
        },
        Command::Kl { p, k, n_prec } => {
            commands::kl(*p, *k, n_prec.unwrap_or_else(default_precision))
        }
        Command::EulerP { rep, chi, at } => commands::euler_p(rep, chi, *at),
        Command::Dnorm { chi, n, at } => commands::dnorm(chi, *n, *at),
        Command::Weights { kind, input } => match kind {
            WeightsKind::Star => commands::weights_involution(input, InvolutionKind::Star),
            WeightsKind::D => commands::weights_involution(input, InvolutionKind::D),
            WeightsKind::Flat => commands::weights_involution(input, InvolutionKind::Flat),
            WeightsKind::Dagger => commands::weights_involution(input, InvolutionKind::Dagger),
            WeightsKind::Critical => commands::weights_critical(input),
        },
        Command::Polygon { which, input, svg, tsv } => {
            let (svg, tsv) = (svg.as_deref(), tsv.as_deref());
            match which {
                PolygonKind::Newton => commands::polygon_newton(input, svg, tsv),
                PolygonKind::Hodge => commands::polygon_hodge(input, svg, tsv),
                PolygonKind::Panchishkin => commands::polygon_panchishkin(input, svg, tsv),
            }
        }
        Command::Schurweyl { action } => match action {
            SchurweylAction::Check { u, d } => commands::schurweyl_check(*u, *d),
            SchurweylAction::Poly { rtilde, stilde } => commands::schurweyl_poly(rtilde, stilde),
        },
        Command::Ordinary { action } => match action {
            OrdinaryAction::Check { alpha, kappa, sig } => {
                commands::ordinary_check(alpha, kappa, sig)
            }
        },
        Command::Acceptance { seed } => commands::acceptance(*seed),
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &output) {
                    eprintln!("{}", CliError::Schema(e.to_string()));
                    std::process::exit(2);
                }
            } else {
                print!("{output}");
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
