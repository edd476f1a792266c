//! Trimming a VPT so that every accessible configuration is co-accessible.
//!
//! For a stack content σ let `co(σ)` be the set of states `q` such that
//! `(q, σ)` can still reach acceptance:
//!
//! * `co(⊥)` holds the states with a well-matched path to a final state;
//! * `co(σγ)` holds the states `q` with a well-matched path to some `t`
//!   that pops `γ` into a state of `co(σ)`.
//!
//! `co(σγ)` only depends on `co(σ)` and `γ`, so it can be tracked on the
//! stack. The reduced machine pairs each state with the current `co` set
//! and each stack symbol with the set below it, and drops every pair whose
//! state is not in its set. Machines that are already reduced and whose
//! `co` sets do not depend on the stack come out unchanged up to rule order.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::vpt::machine::{Action, Rule, StackId, StateId, Vpt};
use crate::vpt::summary::{well_matched_summary, WellMatched};

type StateSet = BTreeSet<StateId>;

/// Co-accessibility sets reachable from `co(⊥)`, with their successors.
struct CoSets {
    sets: Vec<StateSet>,
    /// `next[(a, γ)]` is the index of `co(σγ)` when `co(σ)` has index `a`.
    next: HashMap<(usize, StackId), usize>,
}

fn co_step(vpt: &Vpt, wm: &WellMatched, below: &StateSet, gamma: StackId) -> StateSet {
    let poppers: StateSet = vpt
        .rules()
        .iter()
        .filter(|r| r.action == Action::Pop(gamma) && below.contains(&r.target))
        .map(|r| r.source)
        .collect();
    vpt.state_ids().filter(|&q| wm.targets(q).any(|t| poppers.contains(&t))).collect()
}

fn co_sets(vpt: &Vpt, wm: &WellMatched) -> CoSets {
    let bottom: StateSet = vpt.state_ids().filter(|&q| wm.targets(q).any(|f| vpt.is_final(f))).collect();
    let mut sets = vec![bottom];
    let mut index: HashMap<StateSet, usize> = HashMap::from([(sets[0].clone(), 0)]);
    let mut next = HashMap::new();
    let mut i = 0;
    while i < sets.len() {
        for gamma in vpt.stack_ids() {
            let above = co_step(vpt, wm, &sets[i], gamma);
            let j = *index.entry(above.clone()).or_insert_with(|| {
                sets.push(above);
                sets.len() - 1
            });
            next.insert((i, gamma), j);
        }
        i += 1;
    }
    CoSets { sets, next }
}

/// The result of [`reduce_with_origins`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub vpt: Vpt,
    /// Original state of each reduced state.
    pub state_origin: Vec<StateId>,
    /// Original stack symbol of each reduced stack symbol.
    pub stack_origin: Vec<StackId>,
}

pub fn reduce(vpt: &Vpt) -> Vpt {
    reduce_with_origins(vpt).vpt
}

pub fn reduce_with_origins(vpt: &Vpt) -> Reduction {
    let wm = well_matched_summary(vpt);
    let co = co_sets(vpt, &wm);

    // Annotated states (q, a) with q ∈ co.sets[a]; annotated stack symbols (γ, a_below).
    let mut states: Vec<(StateId, usize)> = Vec::new();
    let mut state_ix: HashMap<(StateId, usize), u32> = HashMap::new();
    for (a, set) in co.sets.iter().enumerate() {
        for &q in set {
            state_ix.insert((q, a), states.len() as u32);
            states.push((q, a));
        }
    }
    let mut stack: Vec<(StackId, usize)> = Vec::new();
    let mut stack_ix: HashMap<(StackId, usize), u32> = HashMap::new();
    for a in 0..co.sets.len() {
        for g in vpt.stack_ids() {
            stack_ix.insert((g, a), stack.len() as u32);
            stack.push((g, a));
        }
    }
    let st = |q: StateId, a: usize| state_ix.get(&(q, a)).map(|&i| StateId(i));

    let mut rules = Vec::new();
    for (ix, &(q, a)) in states.iter().enumerate() {
        let source = StateId(ix as u32);
        for rule in vpt.rules().iter().filter(|r| r.source == q) {
            match rule.action {
                Action::Internal => {
                    if let Some(target) = st(rule.target, a) {
                        rules.push(Rule { source, target, ..rule.clone() });
                    }
                }
                Action::Push(g) => {
                    let above = co.next[&(a, g)];
                    if let Some(target) = st(rule.target, above) {
                        let pushed = StackId(stack_ix[&(g, a)]);
                        rules.push(Rule { source, target, action: Action::Push(pushed), ..rule.clone() });
                    }
                }
                Action::Pop(g) => {
                    for below in 0..co.sets.len() {
                        if co.next[&(below, g)] != a {
                            continue;
                        }
                        if let Some(target) = st(rule.target, below) {
                            let popped = StackId(stack_ix[&(g, below)]);
                            rules.push(Rule { source, target, action: Action::Pop(popped), ..rule.clone() });
                        }
                    }
                }
            }
        }
    }
    let initial: BTreeSet<StateId> = vpt.initial().iter().filter_map(|&q| st(q, 0)).collect();
    let finals: BTreeSet<StateId> = vpt.finals().filter_map(|q| st(q, 0)).collect();
    let names: Vec<String> = states.iter().map(|&(q, a)| format!("{}~{a}", vpt.state_name(q))).collect();
    let stack_names: Vec<String> = stack.iter().map(|&(g, a)| format!("{}~{a}", vpt.stack_name(g))).collect();

    let annotated = RawMachine { names, stack_names, initial, finals, rules };
    let kept = annotated.trim(vpt);

    // Name reduced states after their originals, numbering variants only when needed.
    let state_names = readable_names(kept.states.iter().map(|&s| (states[s].0, states[s].1)), |q| vpt.state_name(q));
    let stack_names = readable_names(kept.stack.iter().map(|&s| (stack[s].0, stack[s].1)), |g| vpt.stack_name(g));
    let state_origin: Vec<StateId> = kept.states.iter().map(|&s| states[s].0).collect();
    let stack_origin: Vec<StackId> = kept.stack.iter().map(|&s| stack[s].0).collect();

    let build = |mut names: Vec<String>, stack_names: Vec<String>, rules: Vec<Rule>, initial: BTreeSet<StateId>, finals: BTreeSet<StateId>| {
        // `Vpt` ids follow name order; renumber accordingly.
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by(|&x, &y| names[x].cmp(&names[y]));
        let mut state_map = vec![StateId(0); names.len()];
        for (new, &old) in order.iter().enumerate() {
            state_map[old] = StateId(new as u32);
        }
        let mut stack_order: Vec<usize> = (0..stack_names.len()).collect();
        stack_order.sort_by(|&x, &y| stack_names[x].cmp(&stack_names[y]));
        let mut stack_map = vec![StackId(0); stack_names.len()];
        for (new, &old) in stack_order.iter().enumerate() {
            stack_map[old] = StackId(new as u32);
        }
        let rules = rules
            .into_iter()
            .map(|r| Rule {
                source: state_map[r.source.index()],
                target: state_map[r.target.index()],
                action: match r.action {
                    Action::Push(g) => Action::Push(stack_map[g.index()]),
                    Action::Pop(g) => Action::Pop(stack_map[g.index()]),
                    Action::Internal => Action::Internal,
                },
                ..r
            })
            .collect();
        let sorted_names: Vec<String> = order.iter().map(|&i| std::mem::take(&mut names[i])).collect();
        let sorted_stack: Vec<String> = stack_order.iter().map(|&i| stack_names[i].clone()).collect();
        let initial = initial.into_iter().map(|q| state_map[q.index()]).collect();
        let finals = finals.into_iter().map(|q| state_map[q.index()]).collect();
        (Vpt::from_parts(vpt.alphabet().clone(), sorted_names, initial, finals, sorted_stack, rules), order, stack_order)
    };

    if kept.states.is_empty() {
        // Empty domain: one inert state keeps the machine well-formed.
        let name = vpt.state_name(StateId(0)).to_string();
        let empty = Vpt::from_parts(vpt.alphabet().clone(), vec![name], BTreeSet::new(), BTreeSet::new(), Vec::new(), Vec::new());
        return Reduction { vpt: empty, state_origin: vec![StateId(0)], stack_origin: Vec::new() };
    }
    let (reduced, order, stack_order) = build(state_names, stack_names, kept.rules, kept.initial, kept.finals);
    Reduction {
        vpt: reduced,
        state_origin: order.iter().map(|&i| state_origin[i]).collect(),
        stack_origin: stack_order.iter().map(|&i| stack_origin[i]).collect(),
    }
}

/// Names `base` when a base occurs once, `base~k` (k = 1, 2, …) otherwise.
fn readable_names<'a, T: Copy + Ord>(items: impl Iterator<Item = (T, usize)>, base: impl Fn(T) -> &'a str) -> Vec<String> {
    let items: Vec<(T, usize)> = items.collect();
    let mut variants: BTreeMap<T, Vec<usize>> = BTreeMap::new();
    for &(t, a) in &items {
        variants.entry(t).or_default().push(a);
    }
    let mut taken: HashSet<String> = HashSet::new();
    let mut names = Vec::with_capacity(items.len());
    for &(t, a) in &items {
        let list = &variants[&t];
        let mut name = if list.len() == 1 {
            base(t).to_string()
        } else {
            let k = list.iter().position(|&x| x == a).unwrap() + 1;
            format!("{}~{k}", base(t))
        };
        while !taken.insert(name.clone()) {
            name.push('\'');
        }
        names.push(name);
    }
    names
}

/// The annotated machine before trimming, with indices as ids.
struct RawMachine {
    names: Vec<String>,
    stack_names: Vec<String>,
    initial: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    rules: Vec<Rule>,
}

struct Trimmed {
    /// Kept raw states, ascending; new id = position.
    states: Vec<usize>,
    stack: Vec<usize>,
    initial: BTreeSet<StateId>,
    finals: BTreeSet<StateId>,
    rules: Vec<Rule>,
}

impl RawMachine {
    /// Keeps the accessible states and the rules some accessible
    /// configuration can actually fire.
    fn trim(self, original: &Vpt) -> Trimmed {
        let scratch = Vpt::from_parts(
            original.alphabet().clone(),
            self.names.clone(),
            self.initial.clone(),
            self.finals.clone(),
            self.stack_names.clone(),
            self.rules.clone(),
        );
        // `from_parts` does not renumber, but the names above are not sorted;
        // only rule lists and the summary are used, both id-based.
        let wm = well_matched_summary(&scratch);
        let n = self.names.len();
        let mut accessible = vec![false; n];
        let mut work: Vec<StateId> = self.initial.iter().copied().collect();
        for &q in &work {
            accessible[q.index()] = true;
        }
        let mut pops_by_symbol: HashMap<StackId, Vec<&Rule>> = HashMap::new();
        for rule in &self.rules {
            if let Action::Pop(g) = rule.action {
                pops_by_symbol.entry(g).or_default().push(rule);
            }
        }
        let mut usable: HashSet<usize> = HashSet::new();
        while let Some(p) = work.pop() {
            for (ix, rule) in self.rules.iter().enumerate().filter(|(_, r)| r.source == p) {
                usable.insert(ix);
                let mut reach = vec![rule.target];
                if let Action::Push(g) = rule.action {
                    for t in wm.targets(rule.target) {
                        for pop in pops_by_symbol.get(&g).into_iter().flatten() {
                            if pop.source == t {
                                reach.push(pop.target);
                            }
                        }
                    }
                }
                for q in reach {
                    if !accessible[q.index()] {
                        accessible[q.index()] = true;
                        work.push(q);
                    }
                }
            }
        }
        // A pop rule is usable only if its symbol can be on top when its source is reached.
        let mut usable_pops: HashSet<usize> = HashSet::new();
        for &ix in &usable {
            let rule = &self.rules[ix];
            if let Action::Push(g) = rule.action {
                for t in wm.targets(rule.target) {
                    for (jx, pop) in self.rules.iter().enumerate() {
                        if pop.source == t && pop.action == Action::Pop(g) {
                            usable_pops.insert(jx);
                        }
                    }
                }
            }
        }
        let keep_rule = |ix: usize| match self.rules[ix].action {
            Action::Pop(_) => usable_pops.contains(&ix),
            _ => usable.contains(&ix),
        };
        let kept_rules: Vec<&Rule> = (0..self.rules.len()).filter(|&ix| keep_rule(ix)).map(|ix| &self.rules[ix]).collect();

        let states: Vec<usize> = (0..n).filter(|&q| accessible[q]).collect();
        let mut state_map = vec![None; n];
        for (new, &old) in states.iter().enumerate() {
            state_map[old] = Some(StateId(new as u32));
        }
        let used_stack: BTreeSet<usize> = kept_rules
            .iter()
            .filter_map(|r| match r.action {
                Action::Push(g) | Action::Pop(g) => Some(g.index()),
                Action::Internal => None,
            })
            .collect();
        let stack: Vec<usize> = used_stack.into_iter().collect();
        let stack_map: HashMap<usize, StackId> = stack.iter().enumerate().map(|(new, &old)| (old, StackId(new as u32))).collect();
        let rules = kept_rules
            .into_iter()
            .map(|r| Rule {
                source: state_map[r.source.index()].unwrap(),
                target: state_map[r.target.index()].unwrap(),
                action: match r.action {
                    Action::Push(g) => Action::Push(stack_map[&g.index()]),
                    Action::Pop(g) => Action::Pop(stack_map[&g.index()]),
                    Action::Internal => Action::Internal,
                },
                ..r.clone()
            })
            .collect();
        let remap = |set: &BTreeSet<StateId>| set.iter().filter_map(|q| state_map[q.index()]).collect();
        Trimmed { initial: remap(&self.initial), finals: remap(&self.finals), states, stack, rules }
    }
}

/// True iff the configuration `(q, stack)` can reach acceptance.
pub fn is_co_accessible(vpt: &Vpt, q: StateId, stack: &[StackId]) -> bool {
    let wm = well_matched_summary(vpt);
    let co = co_sets(vpt, &wm);
    let a = stack.iter().fold(0, |a, &g| co.next[&(a, g)]);
    co.sets[a].contains(&q)
}

/// True iff every accessible configuration of `vpt` is co-accessible.
///
/// Tracks, per stack content σ, the states reachable with σ and `co(σ)`;
/// both evolve deterministically with each pushed symbol.
pub fn is_reduced(vpt: &Vpt) -> bool {
    let wm = well_matched_summary(vpt);
    let co = co_sets(vpt, &wm);
    let close = |set: &StateSet| -> StateSet { set.iter().flat_map(|&q| wm.targets(q)).collect() };
    let start = close(&vpt.initial().iter().copied().collect());
    let mut seen: HashSet<(StateSet, usize)> = HashSet::new();
    let mut work = vec![(start, 0usize)];
    while let Some((reach, a)) = work.pop() {
        if reach.is_empty() || !seen.insert((reach.clone(), a)) {
            continue;
        }
        if !reach.is_subset(&co.sets[a]) {
            return false;
        }
        for g in vpt.stack_ids() {
            let pushed: StateSet = vpt
                .rules()
                .iter()
                .filter(|r| r.action == Action::Push(g) && reach.contains(&r.source))
                .map(|r| r.target)
                .collect();
            work.push((close(&pushed), co.next[&(a, g)]));
        }
    }
    true
}
