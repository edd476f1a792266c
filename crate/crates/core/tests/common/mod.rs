//! Random machines and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use vpstream::vpt::{Action, FstMachine, FstRule, StackId, StateId, SymbolId};
use vpstream::Vpt;

pub type Word = Vec<char>;

/// Δ(u, v), written out independently of the library.
pub fn delta(u: &[char], v: &[char]) -> (Word, Word) {
    let k = u.iter().zip(v).take_while(|(a, b)| a == b).count();
    (u[k..].to_vec(), v[k..].to_vec())
}

pub fn lcp<'a>(mut words: impl Iterator<Item = &'a Word>) -> Option<Word> {
    let first = words.next()?.clone();
    Some(words.fold(first, |acc, w| {
        let k = acc.iter().zip(w).take_while(|(a, b)| a == b).count();
        acc[..k].to_vec()
    }))
}

fn random_output(rng: &mut impl Rng) -> String {
    let len = rng.gen_range(0..=2);
    (0..len).map(|_| if rng.gen_bool(0.5) { 'x' } else { 'y' }).collect()
}

fn rule_count(rng: &mut impl Rng) -> usize {
    match rng.gen_range(0..20) {
        0..=6 => 0,
        7..=15 => 1,
        _ => 2,
    }
}

/// A random VPT over calls {c}, returns {r, s}, internals {a}.
pub fn random_vpt(rng: &mut impl Rng, max_states: usize, max_stack: usize) -> Vpt {
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_stack);
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let stack: Vec<String> = (0..k).map(|i| format!("g{i}")).collect();
    let mut b = Vpt::builder().calls(["c"]).returns(["r", "s"]).internals(["a"]).states(states.clone()).stack(stack.clone());
    let count = rng.gen_range(1..=n.min(2));
    let initial: Vec<String> = states.choose_multiple(rng, count).cloned().collect();
    let mut finals: Vec<String> = states.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
    if finals.is_empty() {
        finals.push(states.choose(rng).unwrap().clone());
    }
    b = b.initial(initial).finals(finals);
    for src in &states {
        for _ in 0..rule_count(rng) {
            let (g, t) = (stack.choose(rng).unwrap(), states.choose(rng).unwrap());
            b = b.push(src, "c", &random_output(rng), g, t);
        }
        for ret in ["r", "s"] {
            for _ in 0..rule_count(rng) {
                let (g, t) = (stack.choose(rng).unwrap(), states.choose(rng).unwrap());
                b = b.pop(src, ret, &random_output(rng), g, t);
            }
        }
        for _ in 0..rule_count(rng) {
            b = b.internal(src, "a", &random_output(rng), states.choose(rng).unwrap());
        }
    }
    b.build().expect("generated machines are valid")
}

/// A random trimmed FST over {a, b}; `None` if trimming leaves nothing.
pub fn random_trimmed_fst(rng: &mut impl Rng, max_states: usize) -> Option<FstMachine> {
    let n = rng.gen_range(1..=max_states);
    let mut rules = Vec::new();
    for source in 0..n {
        for symbol in 0..2 {
            for _ in 0..rule_count(rng) {
                rules.push(FstRule { source, symbol, output: random_output(rng).chars().collect(), target: rng.gen_range(0..n) });
            }
        }
    }
    let initial: BTreeSet<usize> = (0..rng.gen_range(1..=n.min(2))).map(|_| rng.gen_range(0..n)).collect();
    let finals: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    trim(n, &initial, &finals, &rules)
}

fn reach(n: usize, start: impl IntoIterator<Item = usize>, edges: impl Fn(usize) -> Vec<usize>) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = start.into_iter().collect();
    for &q in &queue {
        seen[q] = true;
    }
    while let Some(q) = queue.pop_front() {
        for t in edges(q) {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    seen
}

fn trim(n: usize, initial: &BTreeSet<usize>, finals: &BTreeSet<usize>, rules: &[FstRule]) -> Option<FstMachine> {
    let acc = reach(n, initial.iter().copied(), |q| rules.iter().filter(|r| r.source == q).map(|r| r.target).collect());
    let co = reach(n, finals.iter().copied(), |q| rules.iter().filter(|r| r.target == q).map(|r| r.source).collect());
    let keep: Vec<usize> = (0..n).filter(|&q| acc[q] && co[q]).collect();
    if keep.is_empty() {
        return None;
    }
    let index = |q: usize| keep.iter().position(|&k| k == q);
    let kept_rules = rules
        .iter()
        .filter_map(|r| Some(FstRule { source: index(r.source)?, symbol: r.symbol, output: r.output.clone(), target: index(r.target)? }))
        .collect();
    Some(FstMachine::new(
        vec!["a".into(), "b".into()],
        keep.iter().map(|q| format!("s{q}")).collect(),
        initial.iter().filter_map(|&q| index(q)),
        finals.iter().filter_map(|&q| index(q)),
        kept_rules,
    ))
}

/// Pairs of runs `(state, output)` reachable on every word of length
/// `≤ max_len`, checking the twinning property on each loop `u2` after each
/// `u1`. Returns whether a violation was found.
pub fn fst_twinning_violated_brute(fst: &FstMachine, max_len: usize) -> bool {
    type Run = (usize, Word);
    let step = |(q, out): &Run, a: usize| -> Vec<Run> {
        fst.rules_from(*q)
            .iter()
            .filter(|r| r.symbol == a)
            .map(|r| (r.target, [out.clone(), r.output.clone()].concat()))
            .collect()
    };
    let step_pairs = |set: &BTreeSet<(Run, Run)>, a: usize| -> BTreeSet<(Run, Run)> {
        let mut next = BTreeSet::new();
        for (x, y) in set {
            for nx in step(x, a) {
                for ny in step(y, a) {
                    next.insert((nx.clone(), ny));
                }
            }
        }
        next
    };
    // After u1: pairs of runs from initial states.
    let mut start = BTreeSet::new();
    for &i in fst.initial() {
        for &j in fst.initial() {
            start.insert(((i, vec![]), (j, vec![])));
        }
    }
    let mut stack = vec![(start, 0usize)];
    while let Some((after_u1, len1)) = stack.pop() {
        // Loops u2 from every pair reached after u1, with 1 ≤ |u2| ≤ max_len − |u1|.
        for ((p, v1), (q, w1)) in &after_u1 {
            let mut frontier: Vec<BTreeSet<(Run, Run)>> = vec![[((*p, vec![]), (*q, vec![]))].into_iter().collect()];
            for _ in len1..max_len {
                let mut next_frontier = Vec::new();
                for set in &frontier {
                    for a in 0..2 {
                        let next = step_pairs(set, a);
                        if next.is_empty() {
                            continue;
                        }
                        for ((p2, v2), (q2, w2)) in &next {
                            if p2 == p && q2 == q {
                                let before = delta(v1, w1);
                                let after = delta(&[v1.clone(), v2.clone()].concat(), &[w1.clone(), w2.clone()].concat());
                                if before != after {
                                    return true;
                                }
                            }
                        }
                        next_frontier.push(next);
                    }
                }
                frontier = next_frontier;
            }
        }
        if len1 < max_len {
            for a in 0..2 {
                let next = step_pairs(&after_u1, a);
                if !next.is_empty() {
                    stack.push((next, len1 + 1));
                }
            }
        }
    }
    false
}

/// Pairs `(q, q')` such that some well-matched word leads from `q` to `q'`.
pub fn well_matched_pairs(vpt: &Vpt) -> HashSet<(StateId, StateId)> {
    let mut wm: HashSet<(StateId, StateId)> = vpt.state_ids().map(|q| (q, q)).collect();
    loop {
        let mut added = Vec::new();
        for rule in vpt.rules() {
            if rule.action == Action::Internal {
                for &(p, q) in &wm {
                    if q == rule.source && !wm.contains(&(p, rule.target)) {
                        added.push((p, rule.target));
                    }
                }
            }
        }
        for call in vpt.rules() {
            let Action::Push(g) = call.action else { continue };
            for ret in vpt.rules() {
                if ret.action != Action::Pop(g) {
                    continue;
                }
                if wm.contains(&(call.target, ret.source)) {
                    for &(p, q) in &wm {
                        if q == call.source && !wm.contains(&(p, ret.target)) {
                            added.push((p, ret.target));
                        }
                    }
                }
            }
        }
        let before = wm.len();
        wm.extend(added);
        // Transitive closure.
        let pairs: Vec<_> = wm.iter().copied().collect();
        for &(a, b) in &pairs {
            for &(c, d) in &pairs {
                if b == c {
                    wm.insert((a, d));
                }
            }
        }
        if wm.len() == before {
            return wm;
        }
    }
}

/// States `q` such that `(q, stack)` can reach acceptance, `stack` listed bottom first.
pub fn co_accessible_states(vpt: &Vpt, wm: &HashSet<(StateId, StateId)>, stack: &[StackId]) -> BTreeSet<StateId> {
    let mut good: BTreeSet<StateId> =
        vpt.state_ids().filter(|&q| vpt.finals().any(|f| wm.contains(&(q, f)))).collect();
    for &g in stack {
        good = vpt
            .state_ids()
            .filter(|&q| {
                vpt.rules().iter().any(|r| {
                    r.action == Action::Pop(g) && good.contains(&r.target) && wm.contains(&(q, r.source))
                })
            })
            .collect();
    }
    good
}

/// Configurations reachable from the initial ones with stack height ≤ `max_height`.
pub fn accessible_configurations(vpt: &Vpt, max_height: usize) -> BTreeSet<(StateId, Vec<StackId>)> {
    let mut seen: BTreeSet<(StateId, Vec<StackId>)> = vpt.initial().iter().map(|&q| (q, vec![])).collect();
    let mut queue: VecDeque<_> = seen.iter().cloned().collect();
    while let Some((q, stack)) = queue.pop_front() {
        for rule in vpt.rules().iter().filter(|r| r.source == q) {
            let next = match rule.action {
                Action::Internal => Some(stack.clone()),
                Action::Push(g) if stack.len() < max_height => Some([stack.clone(), vec![g]].concat()),
                Action::Pop(g) if stack.last() == Some(&g) => Some(stack[..stack.len() - 1].to_vec()),
                _ => None,
            };
            if let Some(next) = next {
                if seen.insert((rule.target, next.clone())) {
                    queue.push_back((rule.target, next));
                }
            }
        }
    }
    seen
}

/// Every word of length ≤ `max_len` whose prefixes keep `live` true, in
/// depth-first order, with the state `f` folds along the word.
pub fn live_words<S: Clone>(
    symbols: &[SymbolId],
    max_len: usize,
    start: S,
    mut step: impl FnMut(&S, SymbolId) -> Option<S>,
    mut visit: impl FnMut(&[SymbolId], &S),
) {
    let mut stack = vec![(Vec::new(), start)];
    while let Some((word, state)) = stack.pop() {
        visit(&word, &state);
        if word.len() == max_len {
            continue;
        }
        for &a in symbols.iter().rev() {
            if let Some(next) = step(&state, a) {
                let mut w = word.clone();
                w.push(a);
                stack.push((w, next));
            }
        }
    }
}

fn well_nested(vpt: &Vpt, word: &[SymbolId]) -> bool {
    let mut depth = 0i64;
    for &a in word {
        depth += match vpt.kind(a) {
            vpstream::SymbolKind::Call => 1,
            vpstream::SymbolKind::Return => -1,
            vpstream::SymbolKind::Internal | vpstream::SymbolKind::Unknown => 0,
        };
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

type Run = (StateId, Vec<StackId>, Word);

/// Every run of `vpt` on `word` from `start`, stacks kept within `max_height`.
fn runs_on(vpt: &Vpt, start: &Run, word: &[SymbolId], max_height: usize) -> Vec<Run> {
    let mut current = vec![(start.0, start.1.clone(), Word::new())];
    for &a in word {
        let mut next = Vec::new();
        for (q, stack, out) in &current {
            for rule in vpt.rules_from(*q, a) {
                let mut stack = stack.clone();
                match rule.action {
                    Action::Push(g) if stack.len() < max_height => stack.push(g),
                    Action::Push(_) => continue,
                    Action::Pop(g) => {
                        if stack.pop() != Some(g) {
                            continue;
                        }
                    }
                    Action::Internal => {}
                }
                next.push((rule.target, stack, [out.as_slice(), &rule.output].concat()));
            }
        }
        current = next;
    }
    current
}

fn all_words(vpt: &Vpt, max_len: usize) -> Vec<Vec<SymbolId>> {
    let mut words = vec![Vec::new()];
    let mut last = vec![Vec::new()];
    for _ in 0..max_len {
        last = last.iter().flat_map(|w: &Vec<SymbolId>| vpt.symbol_ids().map(move |a| [w.as_slice(), &[a]].concat())).collect();
        words.extend(last.iter().cloned());
    }
    words
}

/// Output tuples of single runs from an initial state on `parts`, where the
/// run is back in its state after `loops[k].0` and `loops[k].1` parts.
fn loop_runs(vpt: &Vpt, parts: &[&[SymbolId]], loops: &[(usize, usize)], max_height: usize) -> Vec<Vec<Word>> {
    let mut partial: Vec<(Vec<Run>, Vec<Word>)> =
        vpt.initial().iter().map(|&i| (vec![(i, vec![], vec![])], vec![])).collect();
    for (k, part) in parts.iter().enumerate() {
        let mut next = Vec::new();
        for (history, outs) in &partial {
            let here = history.last().unwrap();
            for run in runs_on(vpt, here, part, max_height) {
                let closes = loops.iter().any(|&(from, to)| to == k + 1 && history[from].0 != run.0);
                if closes {
                    continue;
                }
                let mut outs = outs.clone();
                outs.push(run.2.clone());
                let mut history = history.clone();
                history.push((run.0, run.1, vec![]));
                next.push((history, outs));
            }
        }
        partial = next;
    }
    partial.into_iter().map(|(_, outs)| outs).collect()
}

/// Brute force over all words `u1·u2` of length ≤ `max_len`.
pub fn htp_violated_brute(vpt: &Vpt, max_len: usize, max_height: usize) -> bool {
    for word in all_words(vpt, max_len) {
        for cut in 0..word.len() {
            let (u1, u2) = word.split_at(cut);
            if !well_nested(vpt, u2) {
                continue;
            }
            let tuples = loop_runs(vpt, &[u1, u2], &[(1, 2)], max_height);
            for a in &tuples {
                for b in &tuples {
                    if delta(&a[0], &b[0]) != delta(&a.concat(), &b.concat()) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Brute force over all words `u1·u2·u3·u4` of length ≤ `max_len`.
pub fn mtp_violated_brute(vpt: &Vpt, max_len: usize, max_height: usize) -> bool {
    for word in all_words(vpt, max_len) {
        let n = word.len();
        for i in 0..=n {
            for j in i..=n {
                for k in j..=n {
                    let (u1, u2, u3, u4) = (&word[..i], &word[i..j], &word[j..k], &word[k..]);
                    if u2.is_empty() && u4.is_empty() {
                        continue;
                    }
                    if !well_nested(vpt, u3) || !well_nested(vpt, &[u2, u4].concat()) {
                        continue;
                    }
                    let tuples = loop_runs(vpt, &[u1, u2, u3, u4], &[(1, 2), (3, 4)], max_height);
                    for a in &tuples {
                        for b in &tuples {
                            let short = |t: &Vec<Word>| [t[0].clone(), t[2].clone()].concat();
                            if delta(&short(a), &short(b)) != delta(&a.concat(), &b.concat()) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
    }
    false
}

/// The union of two random deterministic machines, the first reading `e1`
/// last and the second `e2`. Functional by construction, with the two
/// branches running side by side until the marker.
pub fn random_union_vpt(rng: &mut impl Rng, max_states: usize, max_stack: usize) -> Vpt {
    let k = rng.gen_range(1..=max_stack);
    let stack: Vec<String> = (0..k).map(|i| format!("g{i}")).collect();
    let mut b = Vpt::builder().calls(["c"]).returns(["r", "s"]).internals(["a", "e1", "e2"]).stack(stack.clone());
    let mut states = vec!["f1".to_string(), "f2".to_string()];
    let mut initial = Vec::new();
    for (branch, marker, end) in [("x", "e1", "f1"), ("y", "e2", "f2")] {
        let n = rng.gen_range(1..=max_states);
        let names: Vec<String> = (0..n).map(|i| format!("{branch}{i}")).collect();
        initial.push(names[0].clone());
        for src in &names {
            if rng.gen_bool(0.7) {
                b = b.push(src, "c", &random_output(rng), stack.choose(rng).unwrap(), names.choose(rng).unwrap());
            }
            for ret in ["r", "s"] {
                for g in &stack {
                    if rng.gen_bool(0.5) {
                        b = b.pop(src, ret, &random_output(rng), g, names.choose(rng).unwrap());
                    }
                }
            }
            if rng.gen_bool(0.6) {
                b = b.internal(src, "a", &random_output(rng), names.choose(rng).unwrap());
            }
            if rng.gen_bool(0.4) {
                b = b.internal(src, marker, &random_output(rng), end);
            }
        }
        states.extend(names);
    }
    b.states(states).initial(initial).finals(["f1", "f2"]).build().expect("generated machines are valid")
}
