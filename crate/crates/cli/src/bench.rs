//! `vpstream bench`: memory telemetry over families of inputs.

use std::io::Write;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use vpstream::eval::{Evaluator, Outcome, Status};
use vpstream::vpt::SymbolId;
use vpstream::{reduce, Vpt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// c^n r^n
    Cnrn,
    /// c c^n r^n r'
    Ccnrnrp,
    /// prefix · pump^n · suffix
    Custom,
}

pub const BENCH_HEADER: [&str; 9] =
    ["n", "length", "accepted", "peak_hc", "peak_nodes", "peak_edges", "peak_label_tokens", "peak_out_neq", "emitted"];

pub struct Pattern {
    pub prefix: Vec<SymbolId>,
    pub pump: Vec<SymbolId>,
    pub suffix: Vec<SymbolId>,
    /// Each `pump` copy is matched by one copy of `close`, placed after the suffix.
    pub close: Vec<SymbolId>,
}

impl Pattern {
    pub fn word(&self, n: usize) -> Vec<SymbolId> {
        let mut w = self.prefix.clone();
        for _ in 0..n {
            w.extend_from_slice(&self.pump);
        }
        for _ in 0..n {
            w.extend_from_slice(&self.close);
        }
        w.extend_from_slice(&self.suffix);
        w
    }
}

fn symbols(vpt: &Vpt, text: &str) -> Result<Vec<SymbolId>> {
    vpt.parse_word(text).with_context(|| format!("in `{text}`"))
}

pub fn pattern(vpt: &Vpt, family: Family, prefix: &str, pump: &str, suffix: &str) -> Result<Pattern> {
    Ok(match family {
        Family::Cnrn => Pattern { prefix: vec![], pump: symbols(vpt, "c")?, close: symbols(vpt, "r")?, suffix: vec![] },
        Family::Ccnrnrp => Pattern {
            prefix: symbols(vpt, "c")?,
            pump: symbols(vpt, "c")?,
            close: symbols(vpt, "r")?,
            suffix: symbols(vpt, "r'")?,
        },
        Family::Custom => {
            if pump.trim().is_empty() {
                bail!("--family custom needs a non-empty --pump");
            }
            Pattern {
                prefix: symbols(vpt, prefix)?,
                pump: symbols(vpt, pump)?,
                close: vec![],
                suffix: symbols(vpt, suffix)?,
            }
        }
    })
}

/// One CSV row per `n` in `1..=n_max`, with the peaks over all prefixes.
pub fn run(vpt: &Vpt, pattern: &Pattern, n_max: usize, out: impl Write) -> Result<()> {
    let vpt = reduce(vpt);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BENCH_HEADER)?;
    for n in 1..=n_max {
        let word = pattern.word(n);
        let m = measure(&vpt, &word)?;
        let mut row = vec![n.to_string(), word.len().to_string(), m.accepted.to_string()];
        row.extend(m.peaks.iter().map(ToString::to_string));
        row.push(m.emitted.to_string());
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

struct Measure {
    accepted: bool,
    /// hc, nodes, edges, label tokens, out_neq.
    peaks: [usize; 5],
    emitted: usize,
}

fn measure(vpt: &Vpt, word: &[SymbolId]) -> Result<Measure> {
    let mut m = Measure { accepted: false, peaks: [0; 5], emitted: 0 };
    if vpt.initial().is_empty() {
        return Ok(m);
    }
    let mut ev = Evaluator::start(vpt)?;
    for &a in word {
        ev.step(a)?;
        let r = ev.memory_snapshot();
        for (p, v) in m.peaks.iter_mut().zip([r.hc, r.node_count, r.edge_count, r.label_tokens_total, r.out_neq]) {
            *p = (*p).max(v);
        }
        if ev.status() != Status::Running {
            m.emitted = ev.emitted_len();
            return Ok(m);
        }
    }
    m.accepted = matches!(ev.finish()?, Outcome::Accept(_));
    m.emitted = ev.emitted_len();
    Ok(m)
}
