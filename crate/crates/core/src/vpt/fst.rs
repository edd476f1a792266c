//! Finite-state transducers and the bounded-height restriction of a VPT.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::ops::Range;

use crate::delay::Word;
use crate::error::StateExplosion;
use crate::vpt::machine::{Action, Configuration, Vpt};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FstRule {
    pub source: usize,
    pub symbol: usize,
    pub output: Word,
    pub target: usize,
}

/// A real-time finite-state transducer over a flat alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FstMachine {
    symbols: Vec<String>,
    states: Vec<String>,
    initial: Vec<usize>,
    is_final: Vec<bool>,
    rules: Vec<FstRule>,
    by_source: Vec<Range<usize>>,
}

impl FstMachine {
    /// # Panics
    ///
    /// Panics if a rule or an initial/final state refers to a missing index.
    pub fn new(
        symbols: Vec<String>,
        states: Vec<String>,
        initial: impl IntoIterator<Item = usize>,
        finals: impl IntoIterator<Item = usize>,
        mut rules: Vec<FstRule>,
    ) -> FstMachine {
        let n = states.len();
        let initial: Vec<usize> = initial.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut is_final = vec![false; n];
        for f in finals {
            is_final[f] = true;
        }
        assert!(initial.iter().all(|&q| q < n), "initial state out of range");
        for r in &rules {
            assert!(r.source < n && r.target < n && r.symbol < symbols.len(), "rule out of range");
        }
        rules.sort();
        rules.dedup();
        let mut by_source = vec![0..0; n];
        let mut start = 0;
        for (q, range) in by_source.iter_mut().enumerate() {
            let end = start + rules[start..].iter().take_while(|r| r.source == q).count();
            *range = start..end;
            start = end;
        }
        FstMachine { symbols, states, initial, is_final, rules, by_source }
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.is_final[q]
    }

    pub fn rules(&self) -> &[FstRule] {
        &self.rules
    }

    pub fn rules_from(&self, q: usize) -> &[FstRule] {
        &self.rules[self.by_source[q].clone()]
    }

    /// Positions in [`FstMachine::rules`] of the rules leaving `q`.
    pub fn rule_range(&self, q: usize) -> Range<usize> {
        self.by_source[q].clone()
    }

    pub fn max_output(&self) -> usize {
        self.rules.iter().map(|r| r.output.len()).max().unwrap_or(0)
    }

    /// Outputs of all accepting runs on `word`.
    pub fn outputs(&self, word: &[usize]) -> BTreeSet<Word> {
        let mut current: BTreeSet<(usize, Word)> = self.initial.iter().map(|&q| (q, Word::new())).collect();
        for &a in word {
            let mut next = BTreeSet::new();
            for (q, out) in &current {
                for rule in self.rules_from(*q).iter().filter(|r| r.symbol == a) {
                    let mut o = out.clone();
                    o.extend_from_slice(&rule.output);
                    next.insert((rule.target, o));
                }
            }
            current = next;
        }
        current.into_iter().filter(|(q, _)| self.is_final[*q]).map(|(_, o)| o).collect()
    }

    /// Keeps the states that are both accessible and co-accessible. Returns
    /// the trimmed machine and, for each of its states, the old index.
    pub fn trim(&self) -> (FstMachine, Vec<usize>) {
        let n = self.num_states();
        let mut forward = vec![false; n];
        let mut work: Vec<usize> = self.initial.clone();
        for &q in &work {
            forward[q] = true;
        }
        while let Some(q) = work.pop() {
            for r in self.rules_from(q) {
                if !forward[r.target] {
                    forward[r.target] = true;
                    work.push(r.target);
                }
            }
        }
        let mut backward = self.is_final.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for r in &self.rules {
                if backward[r.target] && !backward[r.source] {
                    backward[r.source] = true;
                    changed = true;
                }
            }
        }
        let kept: Vec<usize> = (0..n).filter(|&q| forward[q] && backward[q]).collect();
        let mut map = vec![usize::MAX; n];
        for (new, &old) in kept.iter().enumerate() {
            map[old] = new;
        }
        let rules = self
            .rules
            .iter()
            .filter(|r| map[r.source] != usize::MAX && map[r.target] != usize::MAX)
            .map(|r| FstRule { source: map[r.source], target: map[r.target], ..r.clone() })
            .collect();
        let fst = FstMachine::new(
            self.symbols.clone(),
            kept.iter().map(|&q| self.states[q].clone()).collect(),
            self.initial.iter().filter(|&&q| map[q] != usize::MAX).map(|&q| map[q]),
            kept.iter().enumerate().filter(|(_, &q)| self.is_final[q]).map(|(new, _)| new),
            rules,
        );
        (fst, kept)
    }
}

/// `FST(T, k)` together with the configuration behind each of its states.
#[derive(Clone, Debug)]
pub struct BoundedFst {
    pub fst: FstMachine,
    pub configs: Vec<Configuration>,
}

/// The restriction of `vpt` to stack heights ≤ `k`, with reachable
/// configurations as states. Symbols keep the indices of `vpt`'s symbols.
pub fn fst_of(vpt: &Vpt, k: usize) -> FstMachine {
    fst_of_with_budget(vpt, k, usize::MAX).expect("unbounded budget").fst
}

pub fn fst_of_with_budget(vpt: &Vpt, k: usize, max_states: usize) -> Result<BoundedFst, StateExplosion> {
    let mut configs: Vec<Configuration> = Vec::new();
    let mut index: HashMap<Configuration, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &q in vpt.initial() {
        let c = Configuration { state: q, stack: Vec::new() };
        if !index.contains_key(&c) {
            index.insert(c.clone(), configs.len());
            configs.push(c.clone());
            queue.push_back(c);
        }
    }
    let mut rules = Vec::new();
    while let Some(config) = queue.pop_front() {
        let source = index[&config];
        for a in vpt.symbol_ids() {
            for rule in vpt.rules_from(config.state, a) {
                let mut stack = config.stack.clone();
                match rule.action {
                    Action::Push(g) => {
                        if stack.len() == k {
                            continue;
                        }
                        stack.push(g);
                    }
                    Action::Pop(g) => {
                        if stack.pop() != Some(g) {
                            continue;
                        }
                    }
                    Action::Internal => {}
                }
                let next = Configuration { state: rule.target, stack };
                let target = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        if configs.len() >= max_states {
                            return Err(StateExplosion { limit: max_states, height: k });
                        }
                        index.insert(next.clone(), configs.len());
                        configs.push(next.clone());
                        queue.push_back(next);
                        configs.len() - 1
                    }
                };
                rules.push(FstRule { source, symbol: a.index(), output: rule.output.clone(), target });
            }
        }
    }
    let names = configs.iter().map(|c| c.show(vpt)).collect();
    let finals: Vec<usize> =
        configs.iter().enumerate().filter(|(_, c)| c.stack.is_empty() && vpt.is_final(c.state)).map(|(i, _)| i).collect();
    let fst = FstMachine::new(vpt.symbols().to_vec(), names, 0..vpt.initial().len().min(configs.len()), finals, rules);
    Ok(BoundedFst { fst, configs })
}
