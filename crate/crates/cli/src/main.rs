//! `gvc`: run identity checks on a field theory and report the results.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gvc_core::mutate::{flip, negative_control};
use gvc_core::parser::{parse_theory_with, ParseOptions};
use gvc_core::report::{verify, Check, VerificationReport};
use gvc_core::theories::{builtin, catalog};

#[derive(Parser)]
#[command(name = "gvc", version, about = "Noether identity, Koszul-Tate and BRST checks for graded Lagrangian theories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a theory and run checks.
    Verify(VerifyArgs),
    /// List built-in theories.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mutate {
    None,
    /// Flip the first sign of the BRST (else gauge, else NI) statement.
    Sign,
}

#[derive(clap::Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["builtin", "theory"]))]
struct VerifyArgs {
    /// Built-in theory name (see `gvc list`).
    #[arg(long)]
    builtin: Option<String>,
    /// Path to a theory file.
    #[arg(long)]
    theory: Option<PathBuf>,
    /// Comma-separated checks: ni, stages, kt, extended, gauge, brst, antibracket, triviality, or all.
    #[arg(long, default_value = "ni,kt,gauge,brst")]
    check: String,
    /// Jet order cap; overrides the theory file.
    #[arg(long)]
    jet_order: Option<u8>,
    /// Cap for theories that set none.
    #[arg(long, env = "GVC_JET_ORDER", hide = true)]
    default_jet_order: Option<u8>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "none")]
    mutate: Mutate,
    /// Residual terms shown per entry.
    #[arg(long, default_value_t = 8)]
    max_terms: usize,
}

/// Failure before any check ran; exit code 2.
struct Setup(String);

impl<E: std::fmt::Display> From<E> for Setup {
    fn from(e: E) -> Setup {
        Setup(e.to_string())
    }
}

fn load_source(args: &VerifyArgs) -> Result<String, Setup> {
    if let Some(name) = &args.builtin {
        let f = builtin(name).ok_or_else(|| {
            let names: Vec<_> = catalog().iter().map(|f| f.name).collect();
            Setup(format!("unknown built-in `{name}`; available: {}", names.join(", ")))
        })?;
        return Ok(f.source.to_string());
    }
    let path = args.theory.as_ref().expect("clap enforces one input");
    std::fs::read_to_string(path).map_err(|e| Setup(format!("{}: {e}", path.display())))
}

fn run_verify(args: &VerifyArgs) -> Result<VerificationReport, Setup> {
    let checks = Check::parse_list(&args.check)?;
    let mut src = load_source(args)?;
    let mut mutation = None;
    if args.mutate == Mutate::Sign {
        let site = negative_control(&src).ok_or_else(|| Setup("no sign to mutate".into()))?;
        let what = if site.insert { "negated term" } else { "flipped sign" };
        mutation = Some(format!("{what} at {}:{} in `{}` statement", site.line, site.col, site.kind));
        src = flip(&src, &site);
    }
    let file = parse_theory_with(&src, ParseOptions { jet_order: args.jet_order, default_jet_order: args.default_jet_order })?;
    let mut report = verify(&file.theory, &checks, args.max_terms)?;
    report.mutation = mutation;
    Ok(report)
}

fn render(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Text => report.to_text(),
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for f in catalog() {
                println!("{:<10} {}", f.name, f.summary);
            }
            ExitCode::SUCCESS
        }
        Command::Verify(args) => match run_verify(&args) {
            Err(Setup(msg)) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Ok(report) => {
                let text = render(&report, args.format);
                match &args.out {
                    Some(p) => {
                        if let Err(e) = std::fs::write(p, text) {
                            eprintln!("error: {}: {e}", p.display());
                            return ExitCode::from(2);
                        }
                    }
                    None => print!("{text}"),
                }
                if report.passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                }
            }
        },
    }
}
