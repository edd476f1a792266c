//! `vpstream eval`: streaming evaluation of standard input.

use std::fs::File;
use std::io::{self, BufRead, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use vpstream::eval::{EvalOptions, Evaluator, MemoryReport, Outcome, Status};
use vpstream::error::EvalError;
use vpstream::vpt::{check_functional_bounded, FunctionalCheck};
use vpstream::{reduce, Vpt};

use crate::tokens::{Mode, TokenStream};

/// Inputs up to this length are checked for functionality before evaluation.
pub const FUNCTIONAL_CHECK_LEN: usize = 6;

pub const TELEMETRY_HEADER: [&str; 8] = ["pos", "symbol", "hc", "nodes", "edges", "label_tokens", "out_neq", "emitted"];

pub struct EvalArgs<'a> {
    pub factorize: bool,
    pub telemetry: Option<&'a Path>,
    pub skip_functional_check: bool,
    pub mode: Mode,
}

pub fn run(vpt: &Vpt, input: impl BufRead, out: &mut impl Write, args: &EvalArgs) -> Result<ExitCode> {
    let vpt = reduce(vpt);
    if !args.skip_functional_check {
        if let FunctionalCheck::CounterExample { word, first, second } = check_functional_bounded(&vpt, FUNCTIONAL_CHECK_LEN) {
            bail!(
                "the machine is not functional: `{}` has outputs {:?} and {:?} (use --unsafe to skip this check)",
                vpt.show_word(&word),
                first.iter().collect::<String>(),
                second.iter().collect::<String>()
            );
        }
    }
    let mut telemetry = match args.telemetry {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = csv::Writer::from_writer(file);
            w.write_record(TELEMETRY_HEADER)?;
            Some(w)
        }
        None => None,
    };
    if vpt.initial().is_empty() {
        writeln!(out)?;
        eprintln!("rejected: the machine accepts no word");
        return Ok(ExitCode::from(1));
    }
    let mut ev = Evaluator::with_options(&vpt, EvalOptions { factorize: args.factorize })?;
    let mut printer = Printer { spaced: args.mode != Mode::Chars, first: true };
    for token in TokenStream::new(input, args.mode) {
        let token = token.context("cannot read standard input")?;
        let step = ev.step_token(&token);
        if let Some(w) = telemetry.as_mut() {
            write_row(w, &ev.memory_snapshot())?;
        }
        match step {
            Ok(emitted) => printer.print(out, &emitted)?,
            Err(EvalError::UnknownSymbol(e)) => {
                printer.end(out)?;
                eprintln!("rejected: {e}");
                return Ok(ExitCode::from(1));
            }
            Err(e) => bail!(e),
        }
        if ev.status() == Status::Rejected {
            printer.end(out)?;
            eprintln!("rejected at position {}", ev.rejected_at().unwrap_or_default() + 1);
            return Ok(ExitCode::from(1));
        }
        out.flush()?;
    }
    if let Some(mut w) = telemetry {
        w.flush()?;
    }
    match ev.finish()? {
        Outcome::Accept(rest) => {
            printer.print(out, &rest)?;
            printer.end(out)?;
            Ok(ExitCode::SUCCESS)
        }
        Outcome::Reject => {
            printer.end(out)?;
            eprintln!("rejected at the end of the input (position {})", ev.scan().position);
            Ok(ExitCode::from(1))
        }
    }
}

fn write_row(w: &mut csv::Writer<File>, r: &MemoryReport) -> Result<()> {
    w.write_record([
        r.position.to_string(),
        r.symbol.clone().unwrap_or_default(),
        r.hc.to_string(),
        r.node_count.to_string(),
        r.edge_count.to_string(),
        r.label_tokens_total.to_string(),
        r.out_neq.to_string(),
        r.emitted_total.to_string(),
    ])?;
    Ok(())
}

/// Output symbols separated by spaces, or run together in `--chars` mode.
struct Printer {
    spaced: bool,
    first: bool,
}

impl Printer {
    fn print(&mut self, out: &mut impl Write, word: &[char]) -> io::Result<()> {
        for c in word {
            if self.spaced && !self.first {
                out.write_all(b" ")?;
            }
            write!(out, "{c}")?;
            self.first = false;
        }
        Ok(())
    }

    fn end(&mut self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out)?;
        out.flush()
    }
}
