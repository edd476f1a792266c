//! The `vpstream` command.
//!
//! Exit codes: 0 for acceptance or a clean report, 1 for rejection or a
//! violation, 2 for usage, input or machine errors.

mod bench;
mod check;
mod eval;
mod tokens;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use vpstream::streamability::SearchBounds;
use vpstream::vpt::enumerate_domain;
use vpstream::{parse_vpt, reduce, serialize_vpt, Vpt};

use crate::bench::Family;
use crate::check::PropertyArg;
use crate::tokens::Mode;

#[derive(Parser)]
#[command(name = "vpstream", version, about = "Streaming evaluation of visibly pushdown transducers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a machine.
    Validate { path: PathBuf },
    /// Evaluate the input read from standard input, emitting output as early as possible.
    Eval {
        path: PathBuf,
        /// Keep every run's output until the end of the input.
        #[arg(long)]
        no_factorize: bool,
        /// Write one CSV row of memory figures per input symbol.
        #[arg(long, value_name = "CSV")]
        telemetry: Option<PathBuf>,
        /// Skip the bounded functionality check.
        #[arg(long = "unsafe")]
        skip_check: bool,
        /// Read every non-whitespace character as a symbol.
        #[arg(long, conflicts_with = "xml")]
        chars: bool,
        /// Read XML: `<a>` is the call `a`, `</a>` the return `/a`, text words are internal symbols.
        #[arg(long)]
        xml: bool,
    },
    /// Report the streamability of a machine.
    Check {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        property: PropertyArg,
        #[arg(long, default_value_t = SearchBounds::default().max_height)]
        max_height: usize,
        #[arg(long, default_value_t = SearchBounds::default().max_len)]
        max_len: usize,
    },
    /// Write the reduced machine to a file, or to standard output.
    Reduce { path: PathBuf, out: Option<PathBuf> },
    /// List the accepted words up to a length, with their outputs.
    Enum {
        path: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Print memory figures for a family of inputs as CSV.
    Bench {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "cnrn")]
        family: Family,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
        /// Custom family: word before the repeated part.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        prefix: String,
        /// Custom family: repeated part, `n` times.
        #[arg(long, default_value = "")]
        pump: String,
        /// Custom family: word after the repeated part.
        #[arg(long, default_value = "")]
        suffix: String,
    },
}

fn load(path: &Path) -> Result<Vpt> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_vpt(&text).with_context(|| format!("{} is not a valid machine", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Validate { path } => {
            let vpt = load(&path)?;
            let m = vpt.metrics();
            writeln!(
                out,
                "ok: {} states, {} stack symbols, {} rules, {} input symbols",
                vpt.num_states(),
                vpt.stack_symbols().len(),
                vpt.rules().len(),
                vpt.symbols().len()
            )?;
            writeln!(out, "longest rule output: {}", m.max_output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { path, no_factorize, telemetry, skip_check, chars, xml } => {
            let vpt = load(&path)?;
            let mode = if xml {
                Mode::Xml
            } else if chars {
                Mode::Chars
            } else {
                Mode::Tokens
            };
            let args = eval::EvalArgs {
                factorize: !no_factorize,
                telemetry: telemetry.as_deref(),
                skip_functional_check: skip_check,
                mode,
            };
            eval::run(&vpt, io::stdin().lock(), &mut out, &args)
        }
        Command::Check { path, property, max_height, max_len } => {
            let vpt = load(&path)?;
            check::run(&vpt, property, SearchBounds::new(max_height, max_len), &mut out)
        }
        Command::Reduce { path, out: target } => {
            let text = serialize_vpt(&reduce(&load(&path)?));
            match target {
                Some(target) => fs::write(&target, text).with_context(|| format!("cannot write {}", target.display()))?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Enum { path, max_len } => {
            let vpt = load(&path)?;
            for (word, output) in enumerate_domain(&vpt, max_len) {
                let output: String = if output.is_empty() { "ε".into() } else { output.iter().collect() };
                writeln!(out, "{} {output}", vpt.show_word_compact(&word))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { path, family, n_max, prefix, pump, suffix } => {
            let vpt = load(&path)?;
            let pattern = bench::pattern(&vpt, family, &prefix, &pump, &suffix)?;
            bench::run(&vpt, &pattern, n_max, &mut out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
