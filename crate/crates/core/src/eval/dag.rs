//! The layered DAG that shares stack contents between candidate runs.
//!
//! Layer `d` holds the nodes at depth `d`: a node is a state together with
//! the stack symbol on top at that depth (`None` for ⊥ at depth 0). Each
//! node stores its incoming edges as a map from parent node to label; the
//! parents of depth-0 nodes are the root `#`.

use std::collections::{BTreeMap, BTreeSet};

use crate::delay::{common_prefix_len, Word};
use crate::error::EvalError;
use crate::vpt::machine::{Action, DConfiguration, StackId, StateId, SymbolId, Vpt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeKey {
    pub state: StateId,
    /// Stack symbol pushed at this depth; `None` at depth 0.
    pub symbol: Option<StackId>,
}

/// Parent key standing for the root `#`.
pub(crate) const ROOT: NodeKey = NodeKey { state: StateId(u32::MAX), symbol: None };

pub type Layer = BTreeMap<NodeKey, BTreeMap<NodeKey, Word>>;

/// One edge, for inspection.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    /// `None` for the root.
    pub source: Option<(NodeKey, usize)>,
    pub target: (NodeKey, usize),
    pub label: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalDag {
    layers: Vec<Layer>,
}

fn add_edge(layer: &mut Layer, child: NodeKey, parent: NodeKey, label: Word) -> Result<(), EvalError> {
    let incoming = layer.entry(child).or_default();
    match incoming.get(&parent) {
        Some(existing) if *existing != label => Err(EvalError::Conflict {
            first: existing.clone(),
            second: label,
        }),
        Some(_) => Ok(()),
        None => {
            incoming.insert(parent, label);
            Ok(())
        }
    }
}

impl EvalDag {
    /// Root edges labelled ε to `(q0, ⊥, 0)` for every initial state.
    pub fn new(vpt: &Vpt) -> EvalDag {
        let mut layer = Layer::new();
        for &q in vpt.initial() {
            layer.entry(NodeKey { state: q, symbol: None }).or_default().insert(ROOT, Word::new());
        }
        EvalDag { layers: vec![layer] }
    }

    /// Builds a DAG from explicit layers, e.g. to inspect factorization.
    pub fn from_layers(layers: Vec<Layer>) -> EvalDag {
        EvalDag { layers }
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// True when no node is left.
    pub fn is_dead(&self) -> bool {
        self.layers.last().is_none_or(|l| l.is_empty())
    }

    /// Depth of the leaves, i.e. the current height of the input read.
    pub fn leaf_depth(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn update_call(&mut self, c: SymbolId, vpt: &Vpt) -> Result<(), EvalError> {
        let mut next = Layer::new();
        for leaf in self.layers.last().expect("at least one layer").keys() {
            for rule in vpt.rules_from(leaf.state, c) {
                if let Action::Push(g) = rule.action {
                    add_edge(&mut next, NodeKey { state: rule.target, symbol: Some(g) }, *leaf, rule.output.clone())?;
                }
            }
        }
        self.layers.push(next);
        self.prune_above(self.layers.len() - 1);
        Ok(())
    }

    pub fn update_return(&mut self, r: SymbolId, vpt: &Vpt) -> Result<(), EvalError> {
        let i = self.leaf_depth();
        if i == 0 {
            return Err(EvalError::PopOnEmpty);
        }
        let mut next = Layer::new();
        for (leaf, leaf_in) in &self.layers[i] {
            for rule in vpt.rules_from(leaf.state, r) {
                if rule.action != Action::Pop(leaf.symbol.expect("leaves above depth 0 carry a symbol")) {
                    continue;
                }
                for (parent, v0) in leaf_in {
                    let key = NodeKey { state: rule.target, symbol: parent.symbol };
                    for (grandparent, v1) in &self.layers[i - 1][parent] {
                        let mut label = Word::with_capacity(v1.len() + v0.len() + rule.output.len());
                        label.extend_from_slice(v1);
                        label.extend_from_slice(v0);
                        label.extend_from_slice(&rule.output);
                        add_edge(&mut next, key, *grandparent, label)?;
                    }
                }
            }
        }
        self.layers.truncate(i - 1);
        self.layers.push(next);
        self.prune_above(i - 1);
        Ok(())
    }

    pub fn update_internal(&mut self, a: SymbolId, vpt: &Vpt) -> Result<(), EvalError> {
        let i = self.leaf_depth();
        let mut next = Layer::new();
        for (leaf, incoming) in &self.layers[i] {
            for rule in vpt.rules_from(leaf.state, a) {
                let key = NodeKey { state: rule.target, symbol: leaf.symbol };
                for (parent, label) in incoming {
                    let mut label = label.clone();
                    label.extend_from_slice(&rule.output);
                    add_edge(&mut next, key, *parent, label)?;
                }
            }
        }
        self.layers[i] = next;
        self.prune_above(i);
        Ok(())
    }

    /// Removes childless nodes from the layers above `depth`, upwards,
    /// stopping at the first layer that loses nothing.
    fn prune_above(&mut self, depth: usize) {
        for d in (0..depth).rev() {
            let (upper, lower) = self.layers.split_at_mut(d + 1);
            let parents: BTreeSet<NodeKey> = lower[0].values().flat_map(|inc| inc.keys().copied()).collect();
            let layer = &mut upper[d];
            let before = layer.len();
            layer.retain(|k, _| parents.contains(k));
            if layer.len() == before {
                break;
            }
        }
    }

    /// Bottom-up factorization followed by emission of the root lcp.
    ///
    /// Every non-root node passes the longest common prefix of its outgoing
    /// labels on to all of its incoming labels; the common prefix of the
    /// root labels is then removed and returned.
    pub fn factorize_and_emit(&mut self) -> Word {
        for d in (0..self.layers.len().saturating_sub(1)).rev() {
            let (upper, lower) = self.layers.split_at_mut(d + 1);
            let mut groups: BTreeMap<NodeKey, Vec<&mut Word>> = BTreeMap::new();
            for incoming in lower[0].values_mut() {
                for (parent, label) in incoming.iter_mut() {
                    groups.entry(*parent).or_default().push(label);
                }
            }
            for (parent, mut labels) in groups {
                let k = labels[1..].iter().fold(labels[0].len(), |k, l| k.min(common_prefix_len(&labels[0][..k], l)));
                if k == 0 {
                    continue;
                }
                let prefix: Word = if labels.len() == 1 {
                    std::mem::take(labels[0])
                } else {
                    let prefix = labels[0][..k].to_vec();
                    for label in labels.iter_mut() {
                        label.drain(..k);
                    }
                    prefix
                };
                for label in upper[d].get_mut(&parent).expect("parent exists").values_mut() {
                    label.extend_from_slice(&prefix);
                }
            }
        }
        let Some(top) = self.layers.first_mut() else { return Word::new() };
        let mut labels: Vec<&mut Word> = top.values_mut().flat_map(|inc| inc.values_mut()).collect();
        if labels.is_empty() {
            return Word::new();
        }
        let k = labels[1..].iter().fold(labels[0].len(), |k, l| k.min(common_prefix_len(&labels[0][..k], l)));
        if labels.len() == 1 {
            return std::mem::take(labels[0]);
        }
        let prefix = labels[0][..k].to_vec();
        for label in labels.iter_mut() {
            label.drain(..k);
        }
        prefix
    }

    /// Root labels of depth-0 nodes whose state is final.
    pub fn final_labels(&self, vpt: &Vpt) -> Vec<&Word> {
        if self.layers.len() != 1 {
            return Vec::new();
        }
        self.layers[0].iter().filter(|(k, _)| vpt.is_final(k.state)).flat_map(|(_, inc)| inc.values()).collect()
    }

    /// One d-configuration per root-to-leaf branch.
    pub fn decode(&self) -> BTreeSet<DConfiguration> {
        // Paths from the root to each node of the current layer: (stack, label).
        let mut paths: BTreeMap<NodeKey, BTreeSet<(Vec<StackId>, Word)>> = BTreeMap::new();
        for (d, layer) in self.layers.iter().enumerate() {
            let mut next: BTreeMap<NodeKey, BTreeSet<(Vec<StackId>, Word)>> = BTreeMap::new();
            for (node, incoming) in layer {
                for (parent, label) in incoming {
                    let prefixes = if d == 0 {
                        BTreeSet::from([(Vec::new(), Word::new())])
                    } else {
                        paths.get(parent).cloned().unwrap_or_default()
                    };
                    for (mut stack, mut word) in prefixes {
                        stack.extend(node.symbol);
                        word.extend_from_slice(label);
                        next.entry(*node).or_default().insert((stack, word));
                    }
                }
            }
            paths = next;
        }
        paths
            .into_iter()
            .flat_map(|(node, ps)| {
                ps.into_iter().map(move |(stack, residual)| DConfiguration { state: node.state, stack, residual })
            })
            .collect()
    }

    /// All edges, layer by layer, in canonical order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (d, layer) in self.layers.iter().enumerate() {
            for (node, incoming) in layer {
                for (parent, label) in incoming {
                    out.push(Edge {
                        source: (d > 0).then(|| (*parent, d - 1)),
                        target: (*node, d),
                        label: label.clone(),
                    });
                }
            }
        }
        out
    }

    pub fn node_count(&self) -> usize {
        self.layers.iter().map(|l| l.len()).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.layers.iter().flat_map(|l| l.values()).map(|inc| inc.len()).sum()
    }

    pub fn label_tokens(&self) -> usize {
        self.layers.iter().flat_map(|l| l.values()).flat_map(|inc| inc.values()).map(|w| w.len()).sum()
    }

    /// Longest root-to-leaf label length.
    pub fn out_neq(&self) -> usize {
        let mut longest: BTreeMap<NodeKey, usize> = BTreeMap::new();
        for (d, layer) in self.layers.iter().enumerate() {
            let mut next = BTreeMap::new();
            for (node, incoming) in layer {
                let best = incoming
                    .iter()
                    .map(|(parent, label)| if d == 0 { label.len() } else { longest[parent] + label.len() })
                    .max()
                    .unwrap_or(0);
                next.insert(*node, best);
            }
            longest = next;
        }
        longest.values().copied().max().unwrap_or(0)
    }

    /// Number of root-to-leaf branches, saturating.
    pub fn branch_count(&self) -> u64 {
        let mut count: BTreeMap<NodeKey, u64> = BTreeMap::new();
        for (d, layer) in self.layers.iter().enumerate() {
            let mut next = BTreeMap::new();
            for (node, incoming) in layer {
                let c = incoming
                    .keys()
                    .map(|parent| if d == 0 { 1 } else { count[parent] })
                    .fold(0u64, |a, b| a.saturating_add(b));
                next.insert(*node, c);
            }
            count = next;
        }
        count.values().fold(0u64, |a, &b| a.saturating_add(b))
    }

    /// Largest number of nodes in a single layer.
    pub fn max_layer_size(&self) -> usize {
        self.layers.iter().map(|l| l.len()).max().unwrap_or(0)
    }

    /// Longest single edge label.
    pub fn max_label(&self) -> usize {
        self.layers.iter().flat_map(|l| l.values()).flat_map(|inc| inc.values()).map(|w| w.len()).max().unwrap_or(0)
    }

    /// Checks the shape invariants: every non-leaf node has a child, every
    /// edge starts at an existing node.
    pub fn check_shape(&self) -> Result<(), String> {
        for d in 0..self.layers.len() {
            for (node, incoming) in &self.layers[d] {
                if incoming.is_empty() {
                    return Err(format!("node {node:?} at depth {d} has no incoming edge"));
                }
                if d > 0 && incoming.keys().any(|p| !self.layers[d - 1].contains_key(p)) {
                    return Err(format!("node {node:?} at depth {d} has a dangling parent"));
                }
                if (d == 0) != node.symbol.is_none() {
                    return Err(format!("node {node:?} at depth {d} has the wrong kind of stack symbol"));
                }
            }
            if d + 1 < self.layers.len() {
                let parents: BTreeSet<&NodeKey> = self.layers[d + 1].values().flat_map(|inc| inc.keys()).collect();
                if self.layers[d].keys().any(|k| !parents.contains(k)) {
                    return Err(format!("childless node above the leaves at depth {d}"));
                }
            }
        }
        Ok(())
    }
}
