//! Whether the domain of a reduced VPT has bounded height.
//!
//! The states that occur in accessible configurations with stack height
//! `k` are `L₀ = WM(I)` and `Lₖ₊₁ = WM(push targets of Lₖ)`, where `WM`
//! closes a set under well-matched paths. In a reduced machine every such
//! configuration is co-accessible, so the domain height is the largest `k`
//! with `Lₖ ≠ ∅`. It is unbounded iff the graph `q → q'` ("a well-matched
//! path from `q` then a call into `q'`") has a cycle reachable from `L₀`.

use std::collections::{BTreeSet, VecDeque};

use crate::vpt::machine::{Action, StateId, SymbolId, Vpt};
use crate::vpt::summary::well_matched_summary;

use super::witness::{replay_pump, PumpWitness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeightBound {
    /// Every word of the domain has height at most this.
    Bounded(usize),
    Unbounded(PumpWitness),
}

/// Computes the exact domain height bound of a reduced machine.
///
/// The pump witness of an unbounded answer is replayed before it is returned.
///
/// # Panics
///
/// Panics if the pump witness fails replay, which means `vpt` is not reduced.
pub fn domain_height_bounded(vpt: &Vpt) -> HeightBound {
    let wm = well_matched_summary(vpt);
    let n = vpt.num_states();
    // Ascend edges q → q' with the word that realizes them.
    let mut up: Vec<Vec<(StateId, Vec<SymbolId>)>> = vec![Vec::new(); n];
    for q in vpt.state_ids() {
        let mut seen = BTreeSet::new();
        for s in wm.targets(q) {
            for rule in vpt.rules().iter().filter(|r| r.source == s && matches!(r.action, Action::Push(_))) {
                for t in wm.targets(rule.target) {
                    if seen.insert(t) {
                        let mut word = wm.witness(q, s).expect("s is a target").to_vec();
                        word.push(rule.symbol);
                        word.extend_from_slice(wm.witness(rule.target, t).expect("t is a target"));
                        up[q.index()].push((t, word));
                    }
                }
            }
        }
    }
    let mut level: BTreeSet<StateId> = vpt.initial().iter().flat_map(|&i| wm.targets(i)).collect();
    if level.is_empty() {
        return HeightBound::Bounded(0);
    }
    // A path of n ascents repeats a state, so more than n levels mean a cycle.
    for height in 0..=n {
        let next: BTreeSet<StateId> = level.iter().flat_map(|q| up[q.index()].iter().map(|(t, _)| *t)).collect();
        if next.is_empty() {
            return HeightBound::Bounded(height);
        }
        level = next;
    }
    let witness = pump(vpt, &wm_prefixes(vpt, &wm), &up);
    if let Err(e) = replay_pump(vpt, &witness) {
        panic!("pump witness failed replay ({e}); is the machine reduced?");
    }
    HeightBound::Unbounded(witness)
}

/// For each state of `L₀`, a shortest word reaching it from an initial state.
fn wm_prefixes(vpt: &Vpt, wm: &crate::vpt::summary::WellMatched) -> Vec<Option<Vec<SymbolId>>> {
    let mut best: Vec<Option<Vec<SymbolId>>> = vec![None; vpt.num_states()];
    for &i in vpt.initial() {
        for t in wm.targets(i) {
            let w = wm.witness(i, t).expect("t is a target");
            if best[t.index()].as_ref().is_none_or(|b| b.len() > w.len()) {
                best[t.index()] = Some(w.to_vec());
            }
        }
    }
    best
}

/// Finds a state on an ascend cycle reachable from `L₀`, with a prefix
/// reaching it and the cycle's word.
fn pump(vpt: &Vpt, start: &[Option<Vec<SymbolId>>], up: &[Vec<(StateId, Vec<SymbolId>)>]) -> PumpWitness {
    let n = vpt.num_states();
    // Breadth-first over the ascend graph, remembering how each state was reached.
    let mut prefix: Vec<Option<(Vec<SymbolId>, usize)>> = vec![None; n];
    let mut queue = VecDeque::new();
    for q in 0..n {
        if let Some(w) = &start[q] {
            prefix[q] = Some((w.clone(), 0));
            queue.push_back(q);
        }
    }
    let mut order = Vec::new();
    while let Some(q) = queue.pop_front() {
        order.push(q);
        for (t, w) in &up[q] {
            if prefix[t.index()].is_none() {
                let (p, h) = prefix[q].clone().expect("visited");
                prefix[t.index()] = Some(([p, w.clone()].concat(), h + 1));
                queue.push_back(t.index());
            }
        }
    }
    for q in order {
        if let Some((pump, gain)) = cycle_from(up, q) {
            let (prefix, _) = prefix[q].clone().expect("visited");
            return PumpWitness { prefix, pump, state: StateId(q as u32), gain };
        }
    }
    unreachable!("more levels than states imply an ascend cycle")
}

/// A shortest ascend cycle through `q`, as a word and its number of ascents.
fn cycle_from(up: &[Vec<(StateId, Vec<SymbolId>)>], q: usize) -> Option<(Vec<SymbolId>, usize)> {
    let mut back: Vec<Option<(usize, usize)>> = vec![None; up.len()];
    let mut queue = VecDeque::from([q]);
    let mut seen = vec![false; up.len()];
    seen[q] = true;
    while let Some(x) = queue.pop_front() {
        for (k, (t, _)) in up[x].iter().enumerate() {
            let t = t.index();
            if t == q {
                let mut steps = vec![(x, k)];
                let mut cur = x;
                while cur != q {
                    let (prev, j) = back[cur].expect("visited");
                    steps.push((prev, j));
                    cur = prev;
                }
                steps.reverse();
                let word = steps.iter().flat_map(|&(s, j)| up[s][j].1.iter().copied()).collect();
                return Some((word, steps.len()));
            }
            if !seen[t] {
                seen[t] = true;
                back[t] = Some((x, k));
                queue.push_back(t);
            }
        }
    }
    None
}
