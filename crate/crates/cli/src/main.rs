mod commands;
mod input;
mod text;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use germ_core::json::error_to_json;
use germ_core::newton::{CONDUCTOR_CAP_ENV, DEFAULT_CONDUCTOR_CAP};
use germ_core::Error;

#[derive(Parser, Debug)]
#[command(name = "germ", version, about = "Invariants and bi-Lipschitz contact equivalence of plane curve germs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Minimum certified truncation of each expanded branch (in its own parameter).
    #[arg(long, global = true, default_value = "0")]
    pub trunc: String,
    /// Largest cyclotomic conductor the expansion may introduce.
    #[arg(long, global = true, env = CONDUCTOR_CAP_ENV, default_value_t = DEFAULT_CONDUCTOR_CAP)]
    pub conductor_cap: u32,
    /// Cross-validate symbolic results against the numeric oracle; disagreement exits with 3.
    #[arg(long, global = true)]
    pub check: bool,
    #[command(flatten)]
    pub oracle: OracleRange,
}

#[derive(Args, Debug, Clone)]
pub struct OracleRange {
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub t_min: f64,
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub t_max: f64,
    /// Sample count for the log-log regression.
    #[arg(long, global = true, default_value_t = 16)]
    pub samples: usize,
    /// Angular samples per slice when searching for the nearest curve point.
    #[arg(long, global = true, default_value_t = germ_core::oracle::DEFAULT_CONJ_SAMPLES)]
    pub conj_samples: usize,
    /// Largest allowed |slope - symbolic value| under --check and in `oracle`.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub tolerance: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// Germ sources are inline JSON, a path to a JSON file, or a bare polynomial expression.
#[derive(Subcommand, Debug)]
enum Command {
    /// Puiseux characteristic of every factor and the intersection matrix.
    Invariants { germ: String },
    /// Newton-Puiseux expansion of a polynomial germ.
    Expand { germ: String },
    /// Order of the germ along an arc.
    Order {
        germ: String,
        /// `{"p": p, "y": ...}`, `{"e": e, "v": ...}`, or the shorthand `p: y(t)`.
        #[arg(long)]
        arc: String,
    },
    /// Contact of an arc with the zero set of the germ.
    Contact {
        germ: String,
        #[arg(long)]
        arc: String,
    },
    /// Intersection number of two germs.
    Intersect { germ: String, other: String },
    /// Decides bi-Lipschitz contact equivalence and prints a certificate.
    Equiv { germ: String, other: String },
    /// Checks a factor bijection between two germs.
    Verify {
        germ: String,
        other: String,
        /// Comma-separated `sigma[i]` for each factor `i` of the first germ.
        #[arg(long, value_delimiter = ',')]
        sigma: Vec<usize>,
    },
    /// Numeric regression estimates next to the symbolic order and contacts.
    Oracle {
        germ: String,
        #[arg(long)]
        arc: String,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Inconsistent(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Invariants { germ } => commands::invariants(germ, &cli.opts),
        Command::Expand { germ } => commands::expand(germ, &cli.opts),
        Command::Order { germ, arc } => commands::order(germ, arc, &cli.opts),
        Command::Contact { germ, arc } => commands::contact(germ, arc, &cli.opts),
        Command::Intersect { germ, other } => commands::intersect(germ, other, &cli.opts),
        Command::Equiv { germ, other } => commands::equiv(germ, other, &cli.opts),
        Command::Verify { germ, other, sigma } => commands::verify(germ, other, sigma, &cli.opts),
        Command::Oracle { germ, arc } => commands::oracle(germ, arc, &cli.opts),
    };
    let (value, code) = match result {
        Ok(v) => (v, 0),
        Err(e) => (error_to_json(&e), exit_code(&e)),
    };
    match cli.opts.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("JSON output")),
        Format::Text => print!("{}", text::render(&value)),
    }
    ExitCode::from(code)
}
