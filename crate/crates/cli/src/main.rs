//! `dzeta`: JSON specifications in, JSON reports out.

mod commands;
mod error;
mod report;
mod selftest;
mod spec;

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dzeta_core::assembler::Policy;
use dzeta_core::ffield::DEFAULT_BUDGET;
use serde_json::Value;

use commands::{ProductOp, WittOp};
use error::CliError;
use report::Report;

#[derive(Parser)]
#[command(
    name = "dzeta",
    version,
    about = "Automorphism classes, Witt vectors and assembler K0 from JSON specs"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Largest field size any enumeration may touch.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Coverage policy for box products; overrides the assembler files.
    #[arg(long, global = true, value_enum)]
    policy: Option<PolicyArg>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Add wall-clock time to the report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Default,
    Literal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

/// A JSON document: a file path, `-` for stdin, or inline JSON text.
#[derive(Args)]
struct Geo {
    #[arg(long)]
    variety: String,
    #[arg(long)]
    q: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Class of the automorphism on the degree-n stratum.
    Psi {
        #[command(flatten)]
        geo: Geo,
        #[arg(long)]
        auto: String,
        #[arg(long)]
        n: u32,
    },
    /// Classes for n = 1..=N with a permutativity verdict.
    PsiProfile {
        #[command(flatten)]
        geo: Geo,
        #[arg(long)]
        auto: String,
        #[arg(long = "max-n")]
        max_n: u32,
    },
    /// Joint orbit types of Frobenius and the automorphism on the degree-n stratum.
    Census {
        #[command(flatten)]
        geo: Geo,
        #[arg(long)]
        auto: String,
        #[arg(long)]
        n: u32,
    },
    /// Degree census and the sign profile it determines, n = 1..=N.
    EtaProfile {
        #[command(flatten)]
        geo: Geo,
        #[arg(long = "max-n")]
        max_n: u32,
    },
    /// Zeta series coefficients of t^0..t^T.
    Zeta {
        #[command(flatten)]
        geo: Geo,
        #[arg(long)]
        terms: u32,
    },
    /// Truncated Witt vector arithmetic.
    Witt {
        #[command(subcommand)]
        op: WittCmd,
    },
    /// Disjoint covers and K0 of a finite assembler.
    K0 {
        #[arg(long)]
        assembler: String,
    },
    /// Box or smash product of two finite assemblers.
    Product {
        #[command(subcommand)]
        op: ProductCmd,
    },
    /// Runs the built-in fixture suite; exits 1 if any check fails.
    Selftest,
}

#[derive(Subcommand)]
enum WittCmd {
    Add {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    Mul {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Burnside to ghost coordinates.
    Ghost {
        #[arg(long)]
        input: String,
    },
    /// Ghost to Burnside coordinates; fails on non-integral input.
    FromGhost {
        #[arg(long)]
        input: String,
    },
}

#[derive(Subcommand)]
enum ProductCmd {
    Box {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    Smash {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
}

fn load(arg: &str, name: &str) -> Result<Value, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::schema(name, format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::schema(name, format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::schema(name, format!("malformed JSON: {e}")))
}

fn run(cmd: Cmd, g: &Global) -> Result<(Report, bool), CliError> {
    let budget = g.budget;
    let geo = |geo: &Geo, auto: Option<&str>| {
        let v = load(&geo.variety, "variety")?;
        let a = auto.map(|a| load(a, "auto")).transpose()?;
        commands::geo_inputs(&v, a.as_ref(), geo.q, budget)
    };
    let report = match cmd {
        Cmd::Psi { geo: x, auto, n } => commands::psi(geo(&x, Some(&auto))?, n, budget)?,
        Cmd::PsiProfile {
            geo: x,
            auto,
            max_n,
        } => commands::psi_profile(geo(&x, Some(&auto))?, max_n, budget)?,
        Cmd::Census { geo: x, auto, n } => commands::census(geo(&x, Some(&auto))?, n, budget)?,
        Cmd::EtaProfile { geo: x, max_n } => commands::eta_profile(geo(&x, None)?, max_n, budget)?,
        Cmd::Zeta { geo: x, terms } => commands::zeta(geo(&x, None)?, terms, budget)?,
        Cmd::Witt { op } => match op {
            WittCmd::Add { lhs, rhs } => {
                commands::witt_binary(WittOp::Add, &load(&lhs, "lhs")?, &load(&rhs, "rhs")?)?
            }
            WittCmd::Mul { lhs, rhs } => {
                commands::witt_binary(WittOp::Mul, &load(&lhs, "lhs")?, &load(&rhs, "rhs")?)?
            }
            WittCmd::Ghost { input } => commands::witt_ghost(&load(&input, "input")?)?,
            WittCmd::FromGhost { input } => commands::witt_from_ghost(&load(&input, "input")?)?,
        },
        Cmd::K0 { assembler } => commands::k0_cmd(&load(&assembler, "assembler")?)?,
        Cmd::Product { op } => {
            let flag = g.policy.map(|p| match p {
                PolicyArg::Default => Policy::ExcludeDegenerate,
                PolicyArg::Literal => Policy::Literal,
            });
            let (op, left, right) = match op {
                ProductCmd::Box { left, right } => (ProductOp::Box, left, right),
                ProductCmd::Smash { left, right } => (ProductOp::Smash, left, right),
            };
            commands::product(op, &load(&left, "left")?, &load(&right, "right")?, flag)?
        }
        Cmd::Selftest => return Ok(selftest::run()),
    };
    Ok((report, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global;
    if let Some(k) = g.threads {
        if k == 0 {
            eprintln!("dzeta: --threads must be at least 1");
            return ExitCode::from(error::EXIT_VALIDATION as u8);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .expect("thread pool is configured once");
    }
    let start = Instant::now();
    match run(cli.cmd, &g) {
        Ok((mut report, ok)) => {
            if g.timing {
                report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            match g.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.to_json()).expect("report serializes")
                ),
                Format::Table => print!("{}", report.to_table()),
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("dzeta: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
