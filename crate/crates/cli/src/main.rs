//! `qalens`: exact lens space invariants and surgery classification from the
//! command line. Every subcommand prints text by default and a versioned JSON
//! report with `--json`.

mod commands;
mod parse;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Report;

#[derive(Debug, Parser)]
#[command(name = "qalens", version, about = "Exact invariants of lens spaces and surgeries between them")]
struct Cli {
    /// Print a JSON report (schema qalens.report/v1) instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Correction terms of L(p,q), indexed by Spin^c structure.
    #[command(allow_negative_numbers = true)]
    Dinv { p: u64, q: i64 },
    /// Dedekind sum s(q,p).
    #[command(allow_negative_numbers = true)]
    Dedekind { q: i64, p: u64 },
    /// Continued fraction of p/q, 0 < q < p.
    #[command(allow_negative_numbers = true)]
    Cf { p: u64, q: i64 },
    /// Evaluate [a1, a2, ...] = a1 + 1/(a2 + ...).
    #[command(allow_negative_numbers = true)]
    CfEval {
        #[arg(required = true)]
        terms: Vec<u64>,
    },
    /// Casson-Walker invariant of L(p,q).
    #[command(allow_negative_numbers = true)]
    Lambda { p: u64, q: i64 },
    /// Solve for lambda(Y) and A(K) from surgeries a/b on one knot.
    Cw {
        /// `a/b:target`, target a connected sum such as `5,4` or `3,2#2,1` or `S3`.
        #[arg(long = "surgery", required = true, allow_hyphen_values = true)]
        surgeries: Vec<String>,
    },
    /// Whether the forms a/p and b/p on Z/p are isometric.
    #[command(allow_negative_numbers = true)]
    LkformEquiv { a: i64, b: i64, p: u64 },
    /// Distance between slopes `a,b` and `c,d`.
    SlopeDist {
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
    /// Residue classes of a negative definite 2-handle cobordism.
    ResidueTable {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, allow_hyphen_values = true)]
        gen_square: i64,
    },
    /// Correction terms forced by a linking form, a sum and a lower bound.
    SolveD {
        #[arg(long, allow_hyphen_values = true)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        sum: String,
        #[arg(long, allow_hyphen_values = true)]
        lower: String,
        #[arg(long)]
        model: String,
        #[arg(long)]
        radius: u64,
    },
    /// Check the mod 2 identity for d(L(p,1)) for every p up to --max.
    ParityCheck {
        #[arg(long)]
        max: u64,
    },
    /// Find p with -1 a square mod p and mod p+1.
    Lp1Search {
        #[arg(long)]
        max: u64,
    },
    /// Classify formal L-spaces of a given determinant with a derivation.
    Classify {
        #[arg(long)]
        det: u64,
        /// Rule to switch off; may be repeated.
        #[arg(long = "disable")]
        disable: Vec<String>,
    },
    /// Connected sums of two-bridge links of a given determinant.
    Census {
        #[arg(long)]
        det: u64,
    },
    /// Determinant of the pretzel link P(e1,e2,e3).
    #[command(allow_negative_numbers = true)]
    Pretzel { e1: i64, e2: i64, e3: i64 },
}

fn run(cmd: &Command) -> qalens::Result<Report> {
    use Command::*;
    match cmd {
        Dinv { p, q } => commands::dinv(*p, *q),
        Dedekind { q, p } => commands::dedekind(*q, *p),
        Cf { p, q } => commands::cf(*p, *q),
        CfEval { terms } => commands::cf_eval(terms),
        Lambda { p, q } => commands::lambda(*p, *q),
        Cw { surgeries } => commands::cw(surgeries),
        LkformEquiv { a, b, p } => commands::lkform_equiv(*a, *b, *p),
        SlopeDist { first, second } => commands::slope_dist(first, second),
        ResidueTable { source, target, gen_square } => commands::residue_table(source, target, *gen_square),
        SolveD { form, sum, lower, model, radius } => commands::solve_d(form, sum, lower, model, *radius),
        ParityCheck { max } => commands::parity_check(*max),
        Lp1Search { max } => commands::lp1_search(*max),
        Classify { det, disable } => commands::classify(*det, disable),
        Census { det } => commands::census(*det),
        Pretzel { e1, e2, e3 } => commands::pretzel(*e1, *e2, *e3),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            let out = if cli.json {
                let mut doc = serde_json::to_string_pretty(&report.to_json()).expect("reports serialize");
                doc.push('\n');
                doc
            } else {
                report.text
            };
            // a closed pipe downstream is not an error here
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
