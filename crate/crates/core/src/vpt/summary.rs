//! Well-matched reachability between states.

use crate::vpt::machine::{Action, StateId, SymbolId, Vpt};

/// The pairs `(p, q)` such that some well-nested word leads from `p` to `q`
/// without touching the stack below, each with a shortest such word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellMatched {
    n: usize,
    words: Vec<Option<Vec<SymbolId>>>,
}

impl WellMatched {
    pub fn contains(&self, p: StateId, q: StateId) -> bool {
        self.words[p.index() * self.n + q.index()].is_some()
    }

    /// A shortest well-nested word from `p` to `q`.
    pub fn witness(&self, p: StateId, q: StateId) -> Option<&[SymbolId]> {
        self.words[p.index() * self.n + q.index()].as_deref()
    }

    /// States reachable from `p`, in id order.
    pub fn targets(&self, p: StateId) -> impl Iterator<Item = StateId> + '_ {
        let row = &self.words[p.index() * self.n..(p.index() + 1) * self.n];
        row.iter().enumerate().filter(|(_, w)| w.is_some()).map(|(q, _)| StateId(q as u32))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.words.iter().enumerate().filter(|(_, w)| w.is_some()).map(move |(i, _)| {
            (StateId((i / self.n) as u32), StateId((i % self.n) as u32))
        })
    }
}

/// Least relation containing `(q, q)` and closed under internal steps,
/// composition, and wrapping `c · WM · r` with a matching push and pop.
pub fn well_matched_summary(vpt: &Vpt) -> WellMatched {
    let n = vpt.num_states();
    let mut words: Vec<Option<Vec<SymbolId>>> = vec![None; n * n];
    for q in 0..n {
        words[q * n + q] = Some(Vec::new());
    }
    let offer = |words: &mut Vec<Option<Vec<SymbolId>>>, p: usize, q: usize, w: Vec<SymbolId>| -> bool {
        let slot = &mut words[p * n + q];
        match slot {
            Some(old) if old.len() <= w.len() => false,
            _ => {
                *slot = Some(w);
                true
            }
        }
    };
    let internals: Vec<_> = vpt.rules().iter().filter(|r| r.action == Action::Internal).collect();
    let pushes: Vec<_> = vpt.rules().iter().filter(|r| matches!(r.action, Action::Push(_))).collect();
    let mut pops_from: Vec<Vec<_>> = vec![Vec::new(); n];
    for rule in vpt.rules() {
        if let Action::Pop(_) = rule.action {
            pops_from[rule.source.index()].push(rule);
        }
    }

    let mut changed = true;
    while changed {
        changed = false;
        for rule in &internals {
            for p in 0..n {
                if let Some(w) = &words[p * n + rule.source.index()] {
                    let mut w = w.clone();
                    w.push(rule.symbol);
                    changed |= offer(&mut words, p, rule.target.index(), w);
                }
            }
        }
        for push in &pushes {
            let Action::Push(gamma) = push.action else { unreachable!() };
            for mid in 0..n {
                let Some(inner) = words[push.target.index() * n + mid].clone() else { continue };
                for pop in &pops_from[mid] {
                    if pop.action == Action::Pop(gamma) {
                        let mut w = Vec::with_capacity(inner.len() + 2);
                        w.push(push.symbol);
                        w.extend_from_slice(&inner);
                        w.push(pop.symbol);
                        changed |= offer(&mut words, push.source.index(), pop.target.index(), w);
                    }
                }
            }
        }
        for p in 0..n {
            for m in 0..n {
                if p == m {
                    continue;
                }
                let Some(left) = words[p * n + m].clone() else { continue };
                for q in 0..n {
                    if m == q {
                        continue;
                    }
                    if let Some(right) = &words[m * n + q] {
                        let mut w = left.clone();
                        w.extend_from_slice(right);
                        changed |= offer(&mut words, p, q, w);
                    }
                }
            }
        }
    }
    WellMatched { n, words }
}
