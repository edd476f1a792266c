//! Counterexamples and their independent replay.

use std::fmt::Write as _;

use crate::delay::{delta, show, DelayPair, Word};
use crate::nested_words::{scan_kinds, ScanState};
use crate::vpt::fst::FstMachine;
use crate::vpt::machine::{Action, Configuration, RuleId, StateId, SymbolId, Vpt};
use crate::vpt::naive::dconfigs_after;
use crate::vpt::reduce::is_co_accessible;

use super::Property;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Fst(FstWitness),
    Twin(TwinWitness),
    Pump(PumpWitness),
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Fst(_) => "twinning loop in the bounded-height FST",
            Witness::Twin(w) => match w.property {
                Property::Htp => "horizontal twinning loop",
                Property::Mtp => "matched twinning loops",
            },
            Witness::Pump(_) => "unbounded domain height",
        }
    }

    /// Renders the witness with the names of `vpt`, the machine it was
    /// found on (a bounded-height FST witness uses the symbols of `vpt`).
    pub fn describe(&self, vpt: &Vpt) -> String {
        match self {
            Witness::Fst(w) => w.render(vpt.symbols(), |_| None),
            Witness::Twin(w) => w.describe(vpt),
            Witness::Pump(w) => w.describe(vpt),
        }
    }
}

/// Two runs of a finite-state transducer on `u1·u2`, both looping on `u2`,
/// with `Δ(v1, w1) ≠ Δ(v1v2, w1w2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FstWitness {
    pub u1: Vec<usize>,
    pub u2: Vec<usize>,
    /// Indices into the rules of the machine, one per input symbol.
    pub runs: [Vec<usize>; 2],
    /// `[v1, v2]` and `[w1, w2]`.
    pub outputs: [[Word; 2]; 2],
    pub before: DelayPair,
    pub after: DelayPair,
}

/// Two runs of a VPT on `u1·u2` (HTP) or `u1·u2·u3·u4` (MTP) satisfying
/// the premises of the property, with `before ≠ after`.
///
/// For HTP, `before = Δ(v1, w1)` and `after = Δ(v1v2, w1w2)`; for MTP,
/// `before = Δ(v1v3, w1w3)` and `after = Δ(v1v2v3v4, w1w2w3w4)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinWitness {
    pub property: Property,
    pub parts: Vec<Vec<SymbolId>>,
    pub starts: [StateId; 2],
    pub runs: [Vec<RuleId>; 2],
    /// Output of each run on each part.
    pub outputs: [Vec<Word>; 2],
    pub before: DelayPair,
    pub after: DelayPair,
}

/// Prefixes `prefix · pump^k` are accessible and their current height
/// grows by `gain` with every copy of `pump`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PumpWitness {
    pub prefix: Vec<SymbolId>,
    pub pump: Vec<SymbolId>,
    pub state: StateId,
    pub gain: usize,
}

fn concat(words: &[Word]) -> Word {
    words.concat()
}

impl TwinWitness {
    pub fn word(&self) -> Vec<SymbolId> {
        self.parts.concat()
    }

    pub fn describe(&self, vpt: &Vpt) -> String {
        let mut s = String::new();
        for (i, part) in self.parts.iter().enumerate() {
            let _ = writeln!(s, "u{} = {}", i + 1, show_input(vpt, part));
        }
        for (k, name) in ["v", "w"].iter().enumerate() {
            let parts: Vec<String> = self.outputs[k].iter().enumerate().map(|(i, o)| format!("{name}{}={}", i + 1, show(o))).collect();
            let _ = writeln!(s, "run {} from {}: {}", k + 1, vpt.state_name(self.starts[k]), parts.join(" "));
        }
        let _ = writeln!(s, "delay before: {}", self.before);
        let _ = write!(s, "delay after:  {}", self.after);
        s
    }
}

impl FstWitness {
    pub fn describe(&self, fst: &FstMachine) -> String {
        self.render(fst.symbols(), |r| Some(fst.states()[fst.rules()[r].source].clone()))
    }

    fn render(&self, symbols: &[String], loop_state: impl Fn(usize) -> Option<String>) -> String {
        let word = |w: &[usize]| -> String {
            if w.is_empty() {
                "ε".to_string()
            } else {
                w.iter().map(|&a| symbols[a].as_str()).collect::<Vec<_>>().join(" ")
            }
        };
        let mut s = String::new();
        let _ = writeln!(s, "u1 = {}", word(&self.u1));
        let _ = writeln!(s, "u2 = {}", word(&self.u2));
        for (k, name) in ["v", "w"].iter().enumerate() {
            let _ = write!(s, "run {}: {name}1={} {name}2={}", k + 1, show(&self.outputs[k][0]), show(&self.outputs[k][1]));
            if let Some(q) = self.runs[k].get(self.u1.len()).and_then(|&r| loop_state(r)) {
                let _ = write!(s, " looping at {q}");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "delay before: {}", self.before);
        let _ = write!(s, "delay after:  {}", self.after);
        s
    }
}

impl PumpWitness {
    pub fn describe(&self, vpt: &Vpt) -> String {
        format!(
            "prefix = {}\npump = {} (at state {}, +{} height per copy)",
            show_input(vpt, &self.prefix),
            show_input(vpt, &self.pump),
            vpt.state_name(self.state),
            self.gain
        )
    }
}

fn show_input(vpt: &Vpt, word: &[SymbolId]) -> String {
    if word.is_empty() {
        "ε".to_string()
    } else {
        vpt.show_word(word)
    }
}

/// Replays a finite-state witness: both runs start in initial states, read
/// `u1·u2`, return to their state after `u1`, and produce the stated
/// outputs and delays.
pub fn replay_fst(fst: &FstMachine, w: &FstWitness) -> Result<(), String> {
    let word: Vec<usize> = w.u1.iter().chain(&w.u2).copied().collect();
    for k in 0..2 {
        let run = &w.runs[k];
        if run.len() != word.len() {
            return Err(format!("run {} has {} steps for {} symbols", k + 1, run.len(), word.len()));
        }
        let rules: Vec<_> = run.iter().map(|&r| fst.rules().get(r).ok_or("rule index out of range")).collect::<Result<_, _>>()?;
        let start = rules.first().map(|r| r.source).ok_or("empty run")?;
        if !fst.initial().contains(&start) {
            return Err(format!("run {} does not start in an initial state", k + 1));
        }
        for (j, rule) in rules.iter().enumerate() {
            if rule.symbol != word[j] {
                return Err(format!("run {} reads the wrong symbol at {j}", k + 1));
            }
            if j > 0 && rules[j - 1].target != rule.source {
                return Err(format!("run {} is not connected at {j}", k + 1));
            }
        }
        let at = |i: usize| if i == 0 { start } else { rules[i - 1].target };
        if at(w.u1.len()) != at(word.len()) {
            return Err(format!("run {} does not loop on u2", k + 1));
        }
        let v1: Word = rules[..w.u1.len()].iter().flat_map(|r| r.output.iter().copied()).collect();
        let v2: Word = rules[w.u1.len()..].iter().flat_map(|r| r.output.iter().copied()).collect();
        if [v1, v2] != w.outputs[k] {
            return Err(format!("run {} produces other outputs than stated", k + 1));
        }
    }
    let [v, ww] = &w.outputs;
    let before = delta(&v[0], &ww[0]);
    let after = delta(&concat(v), &concat(ww));
    if before != w.before || after != w.after {
        return Err("stated delays do not match the outputs".to_string());
    }
    if before == after {
        return Err("the delays are equal".to_string());
    }
    Ok(())
}

/// Replays one run, returning the configuration at every part boundary
/// (including the start) and the output on each part.
fn replay_run(
    vpt: &Vpt,
    parts: &[Vec<SymbolId>],
    start: StateId,
    run: &[RuleId],
) -> Result<(Vec<Configuration>, Vec<Word>), String> {
    let mut config = Configuration { state: start, stack: Vec::new() };
    let mut configs = vec![config.clone()];
    let mut outputs = Vec::new();
    let mut steps = run.iter();
    for part in parts {
        let mut out = Word::new();
        for &a in part {
            let id = *steps.next().ok_or("run is shorter than the input")?;
            let rule = vpt.rules().get(id.index()).ok_or("rule index out of range")?;
            if rule.source != config.state || rule.symbol != a {
                return Err(format!("rule {} does not apply", vpt.show_rule(rule)));
            }
            match rule.action {
                Action::Push(g) => config.stack.push(g),
                Action::Pop(g) => {
                    if config.stack.pop() != Some(g) {
                        return Err(format!("rule {} pops a symbol that is not on top", vpt.show_rule(rule)));
                    }
                }
                Action::Internal => {}
            }
            config.state = rule.target;
            out.extend_from_slice(&rule.output);
        }
        configs.push(config.clone());
        outputs.push(out);
    }
    if steps.next().is_some() {
        return Err("run is longer than the input".to_string());
    }
    Ok((configs, outputs))
}

fn well_nested(vpt: &Vpt, word: &[SymbolId]) -> bool {
    scan_kinds(word.iter().map(|&a| vpt.kind(a))).is_well_nested()
}

/// Replays a twinning witness through the run semantics of `vpt`.
pub fn replay_twin(vpt: &Vpt, w: &TwinWitness) -> Result<(), String> {
    let expected_parts = match w.property {
        Property::Htp => 2,
        Property::Mtp => 4,
    };
    if w.parts.len() != expected_parts {
        return Err(format!("{} parts instead of {expected_parts}", w.parts.len()));
    }
    let mut runs = Vec::new();
    for k in 0..2 {
        if !vpt.initial().contains(&w.starts[k]) {
            return Err(format!("run {} does not start in an initial state", k + 1));
        }
        let (configs, outputs) = replay_run(vpt, &w.parts, w.starts[k], &w.runs[k]).map_err(|e| format!("run {}: {e}", k + 1))?;
        if outputs != w.outputs[k] {
            return Err(format!("run {} produces other outputs than stated", k + 1));
        }
        let c = &configs;
        let end = match w.property {
            Property::Htp => {
                if c[1] != c[2] {
                    return Err(format!("run {} does not loop on u2", k + 1));
                }
                &c[1]
            }
            Property::Mtp => {
                if c[1].state != c[2].state || !c[2].stack.starts_with(&c[1].stack) {
                    return Err(format!("run {} does not loop on u2", k + 1));
                }
                if c[3].stack != c[2].stack || c[3].state != c[4].state || c[4].stack != c[1].stack {
                    return Err(format!("run {} does not loop on u4", k + 1));
                }
                &c[4]
            }
        };
        if !is_co_accessible(vpt, end.state, &end.stack) {
            return Err(format!("run {} ends the loops in a configuration that is not co-accessible", k + 1));
        }
        runs.push(outputs);
    }
    match w.property {
        Property::Htp => {
            if !well_nested(vpt, &w.parts[1]) {
                return Err("u2 is not well-nested".to_string());
            }
        }
        Property::Mtp => {
            if !well_nested(vpt, &w.parts[2]) {
                return Err("u3 is not well-nested".to_string());
            }
            if !well_nested(vpt, &[w.parts[1].clone(), w.parts[3].clone()].concat()) {
                return Err("u2·u4 is not well-nested".to_string());
            }
        }
    }
    let (v, ww) = (&runs[0], &runs[1]);
    let (before, after) = match w.property {
        Property::Htp => (delta(&v[0], &ww[0]), delta(&concat(v), &concat(ww))),
        Property::Mtp => (
            delta(&[v[0].clone(), v[2].clone()].concat(), &[ww[0].clone(), ww[2].clone()].concat()),
            delta(&concat(v), &concat(ww)),
        ),
    };
    if before != w.before || after != w.after {
        return Err("stated delays do not match the outputs".to_string());
    }
    if before == after {
        return Err("the delays are equal".to_string());
    }
    Ok(())
}

/// Checks that `prefix · pump^k` is an accessible prefix for `k ≤ 3` and
/// that its current height grows by `gain` each time.
pub fn replay_pump(vpt: &Vpt, w: &PumpWitness) -> Result<(), String> {
    if w.gain == 0 {
        return Err("the pump does not raise the stack".to_string());
    }
    let mut word = w.prefix.clone();
    let mut last: Option<ScanState> = None;
    for k in 0..=3 {
        if k > 0 {
            word.extend_from_slice(&w.pump);
        }
        let configs = dconfigs_after(vpt, &word);
        if configs.is_empty() {
            return Err(format!("prefix with {k} pumps is not accessible"));
        }
        if !configs.iter().any(|c| c.state == w.state && c.stack.len() == word_height(vpt, &word)) {
            return Err(format!("state {} is not reached after {k} pumps", vpt.state_name(w.state)));
        }
        let scan = scan_kinds(word.iter().map(|&a| vpt.kind(a)));
        if !scan.valid {
            return Err("the pumped prefix is not a nested-word prefix".to_string());
        }
        if let Some(prev) = last {
            if scan.hc != prev.hc + w.gain {
                return Err("the current height does not grow by the stated gain".to_string());
            }
        }
        last = Some(scan);
    }
    Ok(())
}

fn word_height(vpt: &Vpt, word: &[SymbolId]) -> usize {
    scan_kinds(word.iter().map(|&a| vpt.kind(a))).hc
}
