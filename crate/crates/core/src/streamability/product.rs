//! Pairs of runs on a common input, explored within bounds.
//!
//! [`Accessible`] holds the runs from initial states on a common prefix
//! `u1`, identified by their pair of states, their pair of stacks and the
//! delay between their outputs. The twinning searches continue from there
//! with a [`Queue`] of their own states, cheapest first.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::delay::{delta_extend, DelayPair, Word};
use crate::vpt::machine::{Action, RuleId, StackId, StateId, SymbolId, Vpt};

pub(crate) type Pair = (StateId, StateId);

/// Stop exploring after this many table entries.
pub(crate) const ENTRY_BUDGET: usize = 2_000_000;

/// A piece of input read by both runs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Segment {
    pub word: Vec<SymbolId>,
    pub runs: [Vec<RuleId>; 2],
    pub out: [Word; 2],
}

impl Segment {
    pub fn then(&self, other: &Segment) -> Segment {
        let cat = |a: &[RuleId], b: &[RuleId]| [a, b].concat();
        let catw = |a: &Word, b: &Word| [a.as_slice(), b.as_slice()].concat();
        Segment {
            word: [self.word.as_slice(), other.word.as_slice()].concat(),
            runs: [cat(&self.runs[0], &other.runs[0]), cat(&self.runs[1], &other.runs[1])],
            out: [catw(&self.out[0], &other.out[0]), catw(&self.out[1], &other.out[1])],
        }
    }

    /// One symbol read by both runs.
    pub fn step(vpt: &Vpt, a: SymbolId, r1: RuleId, r2: RuleId) -> Segment {
        Segment {
            word: vec![a],
            runs: [vec![r1], vec![r2]],
            out: [vpt.rule(r1).output.clone(), vpt.rule(r2).output.clone()],
        }
    }
}

/// Pairs of rules reading `a` from `p` and from `q`.
pub(crate) fn rule_pairs(vpt: &Vpt, p: StateId, q: StateId, a: SymbolId) -> Vec<(RuleId, RuleId)> {
    let mut out = Vec::new();
    for r1 in vpt.rule_ids_from(p, a) {
        for r2 in vpt.rule_ids_from(q, a) {
            out.push((r1, r2));
        }
    }
    out
}

/// A search entry: a state reached at some cost, and how.
pub(crate) struct Entry<S, C, T> {
    pub state: S,
    pub cost: C,
    pub parent: Option<usize>,
    pub step: T,
}

/// Entries by increasing cost, each state kept at its lowest cost.
pub(crate) struct Queue<S, C, T> {
    pub entries: Vec<Entry<S, C, T>>,
    best: HashMap<S, C>,
    heap: BinaryHeap<Reverse<(C, usize)>>,
}

impl<S: Clone + Eq + Hash, C: Copy + Ord, T> Queue<S, C, T> {
    pub fn new() -> Self {
        Queue { entries: Vec::new(), best: HashMap::new(), heap: BinaryHeap::new() }
    }

    pub fn offer(&mut self, entry: Entry<S, C, T>) {
        if self.best.get(&entry.state).is_some_and(|&c| c <= entry.cost) {
            return;
        }
        self.best.insert(entry.state.clone(), entry.cost);
        self.heap.push(Reverse((entry.cost, self.entries.len())));
        self.entries.push(entry);
    }

    /// The cheapest entry not superseded by a cheaper one for its state.
    pub fn pop(&mut self) -> Option<(usize, C)> {
        while let Some(Reverse((cost, i))) = self.heap.pop() {
            if self.best.get(&self.entries[i].state) == Some(&cost) {
                return Some((i, cost));
            }
        }
        None
    }

    /// Steps from the first entry to entry `i`, in order.
    pub fn path(&self, mut i: usize) -> Vec<&Entry<S, C, T>> {
        let mut path = vec![&self.entries[i]];
        while let Some(p) = self.entries[i].parent {
            path.push(&self.entries[p]);
            i = p;
        }
        path.reverse();
        path
    }
}

/// One node of the accessibility search.
#[derive(Clone, Debug)]
pub(crate) struct AccNode {
    pub pair: Pair,
    pub stack: Vec<(StackId, StackId)>,
    pub delay: DelayPair,
    pub len: usize,
    parent: Option<(usize, SymbolId, RuleId, RuleId)>,
}

type AccKey = (Pair, Vec<(StackId, StackId)>, DelayPair);

/// Pairs of runs from initial states on common prefixes, breadth-first.
pub(crate) struct Accessible {
    pub nodes: Vec<AccNode>,
    pub truncated: bool,
}

impl Accessible {
    pub fn compute(vpt: &Vpt, max_len: usize, max_height: usize, delay_cap: usize) -> Accessible {
        let mut nodes: Vec<AccNode> = Vec::new();
        let mut seen: HashSet<AccKey> = HashSet::new();
        let mut queue = VecDeque::new();
        for &i in vpt.initial() {
            for &j in vpt.initial() {
                let node = AccNode { pair: (i, j), stack: Vec::new(), delay: DelayPair::empty(), len: 0, parent: None };
                seen.insert((node.pair, Vec::new(), DelayPair::empty()));
                nodes.push(node);
                queue.push_back(nodes.len() - 1);
            }
        }
        let mut truncated = false;
        while let Some(x) = queue.pop_front() {
            if nodes[x].len == max_len {
                continue;
            }
            if nodes.len() > ENTRY_BUDGET {
                truncated = true;
                break;
            }
            let (p, q) = nodes[x].pair;
            for a in vpt.symbol_ids() {
                for (r1, r2) in rule_pairs(vpt, p, q, a) {
                    let mut stack = nodes[x].stack.clone();
                    match (vpt.rule(r1).action, vpt.rule(r2).action) {
                        (Action::Push(g1), Action::Push(g2)) => {
                            if stack.len() == max_height {
                                continue;
                            }
                            stack.push((g1, g2));
                        }
                        (Action::Pop(g1), Action::Pop(g2)) => {
                            if stack.pop() != Some((g1, g2)) {
                                continue;
                            }
                        }
                        (Action::Internal, Action::Internal) => {}
                        _ => unreachable!("both rules read the same symbol"),
                    }
                    let delay = delta_extend(&nodes[x].delay, &vpt.rule(r1).output, &vpt.rule(r2).output);
                    if delay.max_len() > delay_cap {
                        continue;
                    }
                    let pair = (vpt.rule(r1).target, vpt.rule(r2).target);
                    if !seen.insert((pair, stack.clone(), delay.clone())) {
                        continue;
                    }
                    let len = nodes[x].len + 1;
                    nodes.push(AccNode { pair, stack, delay, len, parent: Some((x, a, r1, r2)) });
                    queue.push_back(nodes.len() - 1);
                }
            }
        }
        Accessible { nodes, truncated }
    }

    /// Initial states of both runs leading to node `x`.
    pub fn starts(&self, mut x: usize) -> Pair {
        while let Some((p, ..)) = self.nodes[x].parent {
            x = p;
        }
        self.nodes[x].pair
    }

    /// The input and runs leading to node `x`.
    pub fn segment(&self, vpt: &Vpt, mut x: usize) -> Segment {
        let mut steps = Vec::new();
        while let Some((p, a, r1, r2)) = self.nodes[x].parent {
            steps.push((a, r1, r2));
            x = p;
        }
        steps.reverse();
        steps.into_iter().fold(Segment::default(), |seg, (a, r1, r2)| seg.then(&Segment::step(vpt, a, r1, r2)))
    }

    /// Nodes with distinct (pair, delay, current height), first found first.
    pub fn distinct(&self) -> Vec<usize> {
        let mut seen = HashSet::new();
        (0..self.nodes.len())
            .filter(|&x| {
                let n = &self.nodes[x];
                seen.insert((n.pair, n.delay.clone(), n.stack.len()))
            })
            .collect()
    }
}
