//! `snp`: parse, classify, rewrite and evaluate SNP sentences.
//!
//! Exit codes: 0 positive verdict, 1 negative verdict, 2 usage or input
//! error, 3 a configured cap was exceeded.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use snp_core::Error;

#[derive(Parser)]
#[command(name = "snp", version, about = "Tools for monotone SNP sentences and amalgamation classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
pub struct Opts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Size bound for models, equiv and closure (default 3), or the
    /// enumeration cap for forbidden families (default 6).
    #[arg(long, global = true)]
    pub max_size: Option<usize>,
    /// Cap on the shared part of amalgamation diagrams (default 8).
    #[arg(long, global = true)]
    pub max_b0: Option<usize>,
    /// Cap on branching nodes of one expansion search (default 10^7).
    #[arg(long, global = true)]
    pub max_expansions: Option<u64>,
    /// Worker threads for the amalgamation check.
    #[arg(long = "jobs", value_name = "N", global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    jobs_raw: u16,
    #[arg(skip)]
    pub jobs: usize,
    /// Print witness structures and expansions.
    #[arg(long, global = true)]
    pub witness: bool,
    /// Require amalgams to keep the two new points distinct.
    #[arg(long, global = true)]
    pub strong: bool,
    /// Signature file declaring input symbols of sentences.
    #[arg(long, global = true)]
    pub sig: Option<PathBuf>,
    /// Write the resulting sentence(s) here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a sentence and print it in normal form.
    Parse { file: PathBuf },
    /// Report whether a sentence is monotone, monadic, connected, guarded.
    Classify { file: PathBuf },
    /// Decide whether a sentence is in ASNP.
    CheckAsnp { file: PathBuf },
    /// Decide the amalgamation property for a family of structures (or the
    /// existential-only clauses of a .snp sentence).
    CheckAp { file: PathBuf },
    /// Rewrite a monotone sentence into a connected one.
    RewriteConnected { file: PathBuf },
    /// Split a guarded sentence into connected ones.
    SplitGmsnp { file: PathBuf },
    /// Translate a connected guarded sentence and compute its family.
    TranslateGmsnp { file: PathBuf },
    /// Build an ASNP sentence from a CSP description.
    CspToAsnp { file: PathBuf },
    /// Evaluate a sentence on every structure of a file.
    Eval { sentence: PathBuf, structures: PathBuf },
    /// List the models of a sentence up to --max-size.
    Models { file: PathBuf },
    /// Compare two sentences on all structures up to --max-size.
    Equiv { first: PathBuf, second: PathBuf },
    /// Check closure under disjoint unions and inverse homomorphisms.
    Closure { file: PathBuf },
}

fn exit_code(e: &Error) -> u8 {
    if e.is_cap() {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut opts = cli.opts;
    opts.jobs = opts.jobs_raw as usize;
    let format = opts.format;
    let result = commands::Context::new(opts).and_then(|cx| {
        use commands::*;
        match &cli.command {
            Command::Parse { file } => parse(&cx, file),
            Command::Classify { file } => classify_cmd(&cx, file),
            Command::CheckAsnp { file } => check_asnp(&cx, file),
            Command::CheckAp { file } => check_ap(&cx, file),
            Command::RewriteConnected { file } => rewrite(&cx, file),
            Command::SplitGmsnp { file } => split(&cx, file),
            Command::TranslateGmsnp { file } => translate(&cx, file),
            Command::CspToAsnp { file } => csp(&cx, file),
            Command::Eval { sentence, structures } => eval(&cx, sentence, structures),
            Command::Models { file } => models(&cx, file),
            Command::Equiv { first, second } => equiv(&cx, first, second),
            Command::Closure { file } => closure(&cx, file),
        }
    });
    match result {
        Ok(out) => {
            match format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
            }
            ExitCode::from(out.code as u8)
        }
        Err(f) => {
            let message = match (&f.path, &f.error) {
                (Some(p), Error::Parse { line, column, message }) => {
                    format!("{}:{line}:{column}: {message}", p.display())
                }
                (Some(p), e) => format!("{}: {e}", p.display()),
                (None, e) => e.to_string(),
            };
            let code = exit_code(&f.error);
            eprintln!("error: {message}");
            if format == Format::Json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&serde_json::json!({ "error": message, "exit_code": code }))
                        .expect("serializable")
                );
            }
            ExitCode::from(code)
        }
    }
}
