//! The twinning property of finite-state transducers, decided exactly.
//!
//! The search walks the graph whose nodes are a pair of states together
//! with the delay between the two runs, starting from the initial pairs
//! with delay `(ε, ε)`. The property fails iff some node reaches a node
//! with the same pair of states and a different delay.
//!
//! Nodes on a path of the breadth-first tree are pairwise distinct, so a
//! pair of states occurring twice on such a path carries two different
//! delays: that is a counterexample. Every new node is checked against its
//! ancestors, hence no tree path exceeds `|Q|²` nodes and delays stay below
//! `|Q|²·M`, within the `3·|Q|²·M` allowed by the delay bound for twinned
//! machines. When the graph closes without such a repetition, loops through
//! cross edges are looked for explicitly.

use std::collections::{HashMap, VecDeque};

use crate::delay::{delta, delta_extend, DelayPair, Word};
use crate::vpt::fst::FstMachine;

use super::witness::{replay_fst, FstWitness, Witness};
use super::Verdict;

type Pair = (usize, usize);

struct Node {
    pair: Pair,
    delay: DelayPair,
    /// Tree parent and the two rules taken from it.
    parent: Option<(usize, usize, usize)>,
}

/// Decides the twinning property of `fst`.
///
/// States that are not both accessible and co-accessible are ignored, as
/// the property quantifies over a trimmed machine.
pub fn check_fst_twinning(fst: &FstMachine) -> Verdict {
    let (trimmed, kept) = fst.trim();
    match search(&trimmed) {
        None => Verdict::Holds,
        Some(mut w) => {
            for run in &mut w.runs {
                for r in run.iter_mut() {
                    *r = original_rule(fst, &trimmed, &kept, *r);
                }
            }
            match replay_fst(fst, &w) {
                Ok(()) => Verdict::Violated(Witness::Fst(w)),
                Err(e) => Verdict::Unknown(format!("witness failed replay: {e}")),
            }
        }
    }
}

fn original_rule(fst: &FstMachine, trimmed: &FstMachine, kept: &[usize], r: usize) -> usize {
    let rule = &trimmed.rules()[r];
    let (source, target) = (kept[rule.source], kept[rule.target]);
    fst.rules()
        .iter()
        .position(|o| o.source == source && o.target == target && o.symbol == rule.symbol && o.output == rule.output)
        .expect("trimmed rules come from the machine")
}

fn search(fst: &FstMachine) -> Option<FstWitness> {
    let mut nodes: Vec<Node> = Vec::new();
    let mut index: HashMap<(Pair, DelayPair), usize> = HashMap::new();
    let mut edges: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    let mut queue = VecDeque::new();
    for &p in fst.initial() {
        for &q in fst.initial() {
            let key = ((p, q), DelayPair::empty());
            index.insert(key, nodes.len());
            nodes.push(Node { pair: (p, q), delay: DelayPair::empty(), parent: None });
            edges.push(Vec::new());
            queue.push_back(nodes.len() - 1);
        }
    }
    while let Some(x) = queue.pop_front() {
        let (p, q) = nodes[x].pair;
        for (i, r1) in fst.rules_from(p).iter().enumerate() {
            for (j, r2) in fst.rules_from(q).iter().enumerate() {
                if r1.symbol != r2.symbol {
                    continue;
                }
                let (ri, rj) = (rule_index(fst, p, i), rule_index(fst, q, j));
                let delay = delta_extend(&nodes[x].delay, &r1.output, &r2.output);
                let pair = (r1.target, r2.target);
                let y = match index.get(&(pair, delay.clone())) {
                    Some(&y) => y,
                    None => {
                        if let Some(depth) = ancestor_with_pair(&nodes, x, pair) {
                            let mut path = tree_path(&nodes, x);
                            path.push((ri, rj));
                            return Some(build(fst, &path, depth));
                        }
                        index.insert((pair, delay.clone()), nodes.len());
                        nodes.push(Node { pair, delay, parent: Some((x, ri, rj)) });
                        edges.push(Vec::new());
                        queue.push_back(nodes.len() - 1);
                        nodes.len() - 1
                    }
                };
                edges[x].push((y, ri, rj));
            }
        }
    }
    // The graph is finite: look for a node reaching its pair with another delay.
    let mut delays_per_pair: HashMap<Pair, usize> = HashMap::new();
    for node in &nodes {
        *delays_per_pair.entry(node.pair).or_default() += 1;
    }
    for x in 0..nodes.len() {
        if delays_per_pair[&nodes[x].pair] < 2 {
            continue;
        }
        if let Some(loop_path) = find_return(&nodes, &edges, x) {
            let mut path = tree_path(&nodes, x);
            let u1_len = path.len();
            path.extend(loop_path);
            return Some(build(fst, &path, u1_len));
        }
    }
    None
}

fn rule_index(fst: &FstMachine, q: usize, i: usize) -> usize {
    fst.rule_range(q).start + i
}

/// Rules along the tree path from an initial pair to `x`.
fn tree_path(nodes: &[Node], mut x: usize) -> Vec<(usize, usize)> {
    let mut path = Vec::new();
    while let Some((parent, r1, r2)) = nodes[x].parent {
        path.push((r1, r2));
        x = parent;
    }
    path.reverse();
    path
}

/// Breadth-first search from `x` for a node with the same pair and a
/// different delay; returns the rules of the loop.
fn find_return(nodes: &[Node], edges: &[Vec<(usize, usize, usize)>], x: usize) -> Option<Vec<(usize, usize)>> {
    let mut back: HashMap<usize, (usize, usize, usize)> = HashMap::new();
    let mut queue = VecDeque::from([x]);
    let mut seen = vec![false; nodes.len()];
    seen[x] = true;
    while let Some(y) = queue.pop_front() {
        for &(z, r1, r2) in &edges[y] {
            if nodes[z].pair == nodes[x].pair && nodes[z].delay != nodes[x].delay {
                let mut path = vec![(r1, r2)];
                let mut cur = y;
                while cur != x {
                    let (prev, a, b) = back[&cur];
                    path.push((a, b));
                    cur = prev;
                }
                path.reverse();
                return Some(path);
            }
            if !seen[z] {
                seen[z] = true;
                back.insert(z, (y, r1, r2));
                queue.push_back(z);
            }
        }
    }
    None
}

/// Depth of the ancestor of `x` (or `x` itself) with the given pair.
fn ancestor_with_pair(nodes: &[Node], mut x: usize, pair: Pair) -> Option<usize> {
    let mut chain = vec![x];
    while let Some((parent, _, _)) = nodes[x].parent {
        chain.push(parent);
        x = parent;
    }
    chain.reverse();
    chain.iter().position(|&y| nodes[y].pair == pair)
}

fn build(fst: &FstMachine, path: &[(usize, usize)], u1_len: usize) -> FstWitness {
    let rules = fst.rules();
    let runs = [path.iter().map(|p| p.0).collect::<Vec<_>>(), path.iter().map(|p| p.1).collect()];
    let word: Vec<usize> = runs[0].iter().map(|&r| rules[r].symbol).collect();
    let out = |run: &[usize]| -> Word { run.iter().flat_map(|&r| rules[r].output.iter().copied()).collect() };
    let outputs = [
        [out(&runs[0][..u1_len]), out(&runs[0][u1_len..])],
        [out(&runs[1][..u1_len]), out(&runs[1][u1_len..])],
    ];
    let before = delta(&outputs[0][0], &outputs[1][0]);
    let after = delta(&outputs[0].concat(), &outputs[1].concat());
    FstWitness { u1: word[..u1_len].to_vec(), u2: word[u1_len..].to_vec(), runs, outputs, before, after }
}
