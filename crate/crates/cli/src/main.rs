use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tscat_cli::commands::{self, EndSelector, GridArgs, GridOp, ModeSpec, Outcome, Range, WindingTarget};
use tscat_cli::config::Config;
use tscat_core::Result;

#[derive(Parser, Debug)]
#[command(name = "tscat", version, about = "Resonances and scattering coefficients of twisted hyperbolic ends")]
struct Cli {
    /// JSON configuration file; without it one funnel of length 2 pi and one cusp are used.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List resonances as `re,im,multiplicity`.
    Resonances {
        /// `funnel:i`, `cusp:i` or `all`.
        #[arg(long, default_value = "all")]
        end: String,
        #[arg(long, allow_hyphen_values = true)]
        radius: Option<f64>,
        /// Restrict a funnel to one mode `j:k`.
        #[arg(long, allow_hyphen_values = true)]
        mode: Option<String>,
    },
    /// Evaluate a coefficient on a rectangular grid of s.
    Grid {
        /// smatrix, reduced, symbol, poisson or product.
        #[arg(long)]
        op: String,
        /// Real parts `a:b:n`.
        #[arg(long, allow_hyphen_values = true)]
        re: String,
        /// Imaginary parts `a:b:n`.
        #[arg(long, allow_hyphen_values = true)]
        im: String,
        #[arg(long, default_value_t = 0)]
        funnel: usize,
        #[arg(long, allow_hyphen_values = true)]
        mode: Option<String>,
        /// Funnel radius for `poisson`.
        #[arg(long)]
        r: Option<f64>,
        /// Truncation radius for `product`.
        #[arg(long)]
        radius: Option<f64>,
        /// Multiset CSV for `product`.
        #[arg(long)]
        multiset: Option<PathBuf>,
    },
    /// Winding number of a scattering quantity around a circle.
    Winding {
        /// reduced or scattering.
        #[arg(long, default_value = "scattering")]
        target: String,
        #[arg(long, default_value_t = 0)]
        funnel: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "0:0")]
        mode: String,
        /// Centre `a+bi`.
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 512)]
        nodes: usize,
    },
    /// Run the numerical checks and print a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Number of resonances of a funnel in a disk.
    Count {
        #[arg(long, default_value_t = 0)]
        funnel: usize,
        #[arg(long)]
        radius: f64,
    },
    /// Print the effective configuration as JSON.
    Config,
}

fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let mode = |m: &Option<String>| m.as_deref().map(str::parse::<ModeSpec>).transpose();
    match &cli.command {
        Command::Resonances { end, radius, mode: m } => {
            commands::resonances(&cfg, end.parse::<EndSelector>()?, *radius, mode(m)?)
        }
        Command::Grid { op, re, im, funnel, mode: m, r, radius, multiset } => {
            let args = GridArgs { funnel: *funnel, mode: mode(m)?, r: *r, radius: *radius, multiset: multiset.clone() };
            commands::grid(&cfg, op.parse::<GridOp>()?, re.parse::<Range>()?, im.parse::<Range>()?, &args)
        }
        Command::Winding { target, funnel, mode: m, center, radius, nodes } => commands::winding(
            &cfg,
            target.parse::<WindingTarget>()?,
            *funnel,
            m.parse()?,
            commands::parse_complex(center)?,
            *radius,
            *nodes,
        ),
        Command::Verify { suite } => commands::verify(&cfg, suite),
        Command::Count { funnel, radius } => commands::count(&cfg, *funnel, *radius),
        Command::Config => {
            cfg.eval_options()?;
            Ok(Outcome { text: cfg.to_json() + "\n", code: 0 })
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.text) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}

