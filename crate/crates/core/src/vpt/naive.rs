//! Run-set semantics: every run is tracked explicitly.
//!
//! This is the reference the streaming evaluator and the analyses are
//! tested against. It is exponential in the worst case and meant for short
//! words.

use std::collections::BTreeSet;

use crate::delay::Word;
use crate::error::NotFunctional;
use crate::nested_words::SymbolKind;
use crate::vpt::machine::{Action, DConfiguration, SymbolId, Vpt};

/// The d-configurations of the empty prefix.
pub fn initial_dconfigs(vpt: &Vpt) -> BTreeSet<DConfiguration> {
    vpt.initial().iter().map(|&q| DConfiguration { state: q, stack: Vec::new(), residual: Word::new() }).collect()
}

/// Extends every d-configuration of `current` by one symbol; blocked runs vanish.
pub fn update_dconfigs(current: &BTreeSet<DConfiguration>, symbol: SymbolId, vpt: &Vpt) -> BTreeSet<DConfiguration> {
    let mut next = BTreeSet::new();
    for dc in current {
        for rule in vpt.rules_from(dc.state, symbol) {
            let mut stack = dc.stack.clone();
            match rule.action {
                Action::Push(g) => stack.push(g),
                Action::Pop(g) => {
                    if stack.last() != Some(&g) {
                        continue;
                    }
                    stack.pop();
                }
                Action::Internal => {}
            }
            let mut residual = dc.residual.clone();
            residual.extend_from_slice(&rule.output);
            next.insert(DConfiguration { state: rule.target, stack, residual });
        }
    }
    next
}

/// The d-configurations reached after reading `word`.
pub fn dconfigs_after(vpt: &Vpt, word: &[SymbolId]) -> BTreeSet<DConfiguration> {
    word.iter().fold(initial_dconfigs(vpt), |current, &a| update_dconfigs(&current, a, vpt))
}

/// Outputs of the accepting d-configurations of a set.
pub fn accepting_outputs(vpt: &Vpt, configs: &BTreeSet<DConfiguration>) -> BTreeSet<Word> {
    configs.iter().filter(|dc| dc.stack.is_empty() && vpt.is_final(dc.state)).map(|dc| dc.residual.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NaiveOutcome {
    Accept(Word),
    Reject,
}

pub fn naive_eval(vpt: &Vpt, word: &[SymbolId]) -> Result<NaiveOutcome, NotFunctional> {
    let outputs = accepting_outputs(vpt, &dconfigs_after(vpt, word));
    let mut iter = outputs.into_iter();
    match (iter.next(), iter.next()) {
        (None, _) => Ok(NaiveOutcome::Reject),
        (Some(v), None) => Ok(NaiveOutcome::Accept(v)),
        (Some(first), Some(second)) => Err(NotFunctional { word: word.to_vec(), first, second }),
    }
}

/// Depth-first walk over all words of length ≤ `max_len` in lexicographic
/// order, skipping words on which no run survives. `visit` sees each word
/// with its d-configurations and returns false to stop the walk.
pub fn explore<F>(vpt: &Vpt, max_len: usize, mut visit: F)
where
    F: FnMut(&[SymbolId], &BTreeSet<DConfiguration>) -> bool,
{
    fn go<F>(vpt: &Vpt, max_len: usize, word: &mut Vec<SymbolId>, configs: &BTreeSet<DConfiguration>, visit: &mut F) -> bool
    where
        F: FnMut(&[SymbolId], &BTreeSet<DConfiguration>) -> bool,
    {
        if !visit(word, configs) {
            return false;
        }
        if word.len() == max_len {
            return true;
        }
        // All runs share the stack height; pending calls must be closable in time.
        let remaining = max_len - word.len();
        let height = configs.iter().next().map_or(0, |dc| dc.stack.len());
        for a in vpt.symbol_ids() {
            let new_height = match vpt.kind(a) {
                SymbolKind::Call => height + 1,
                SymbolKind::Return => height.saturating_sub(1),
                _ => height,
            };
            if new_height + 1 > remaining {
                continue;
            }
            let next = update_dconfigs(configs, a, vpt);
            if next.is_empty() {
                continue;
            }
            word.push(a);
            let keep_going = go(vpt, max_len, word, &next, visit);
            word.pop();
            if !keep_going {
                return false;
            }
        }
        true
    }
    let start = initial_dconfigs(vpt);
    if start.is_empty() {
        return;
    }
    go(vpt, max_len, &mut Vec::new(), &start, &mut visit);
}

/// Accepted words of length ≤ `max_len` with their outputs, in
/// lexicographic order of words. A word with several outputs appears once
/// per output.
pub fn enumerate_domain(vpt: &Vpt, max_len: usize) -> Vec<(Vec<SymbolId>, Word)> {
    let mut found = Vec::new();
    explore(vpt, max_len, |word, configs| {
        for out in accepting_outputs(vpt, configs) {
            found.push((word.to_vec(), out));
        }
        true
    });
    found
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionalCheck {
    FunctionalUpTo(usize),
    CounterExample { word: Vec<SymbolId>, first: Word, second: Word },
}

/// Looks for a word of length ≤ `max_len` with two different outputs.
pub fn check_functional_bounded(vpt: &Vpt, max_len: usize) -> FunctionalCheck {
    let mut result = FunctionalCheck::FunctionalUpTo(max_len);
    explore(vpt, max_len, |word, configs| {
        let outs = accepting_outputs(vpt, configs);
        if outs.len() > 1 {
            let mut it = outs.into_iter();
            let (first, second) = (it.next().unwrap(), it.next().unwrap());
            result = FunctionalCheck::CounterExample { word: word.to_vec(), first, second };
            return false;
        }
        true
    });
    result
}
