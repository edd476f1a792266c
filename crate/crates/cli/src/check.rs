//! `vpstream check`: streamability verdicts.

use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::ValueEnum;
use vpstream::streamability::{
    check_bm, check_htp, check_mtp, classify_streamability, SearchBounds, StreamabilityError, Verdict,
};
use vpstream::vpt::{check_functional_bounded, FunctionalCheck};
use vpstream::{reduce, Vpt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PropertyArg {
    Bm,
    Htp,
    Mtp,
    All,
}

pub fn run(vpt: &Vpt, property: PropertyArg, bounds: SearchBounds, out: &mut impl Write) -> Result<ExitCode> {
    let vpt = reduce(vpt);
    let verdicts: Vec<(&str, Verdict)> = match property {
        PropertyArg::All => {
            let report = classify_streamability(&vpt, bounds).map_err(|e| match e {
                StreamabilityError::NotFunctional { len } => {
                    anyhow!("the machine is not functional (counterexample of length {len})")
                }
                other => anyhow!(other),
            })?;
            vec![("bm", report.bm), ("htp", report.hbm), ("mtp", report.obm)]
        }
        single => {
            if let FunctionalCheck::CounterExample { word, .. } = check_functional_bounded(&vpt, bounds.max_len.min(8)) {
                return Err(anyhow!("the machine is not functional (counterexample `{}`)", vpt.show_word(&word)));
            }
            match single {
                PropertyArg::Bm => vec![("bm", check_bm(&vpt))],
                PropertyArg::Htp => vec![("htp", check_htp(&vpt, bounds))],
                PropertyArg::Mtp => vec![("mtp", check_mtp(&vpt, bounds))],
                PropertyArg::All => unreachable!(),
            }
        }
    };
    let mut violated = false;
    for (name, verdict) in &verdicts {
        writeln!(out, "{name}: {verdict}")?;
        if let Some(w) = verdict.witness() {
            violated = true;
            for line in w.describe(&vpt).lines() {
                writeln!(out, "  {line}")?;
            }
        }
    }
    Ok(if violated { ExitCode::from(1) } else { ExitCode::SUCCESS })
}
