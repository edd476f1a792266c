//! Bounded search for violations of the matched twinning property.
//!
//! A violation is a pair of runs on `u1·u2·u3·u4` where `u3` and `u2·u4`
//! are well-nested, each run goes from `p` back to `p` on `u2` while
//! pushing, and from `q` back to `q` on `u4` while popping what `u2`
//! pushed, and `Δ(v1v3, w1w3) ≠ Δ(v1v2v3v4, w1w2w3w4)`.
//!
//! After `u1`, both copies of the word are read at once: the short one
//! `u1·u3` and the long one `u1·u2·u3·u4`. A search state holds the phase,
//! the pairs of states at the loop ends, the current pair, the pairs of
//! stack symbols pushed since `u2` began, and the delay of each copy.
//! Inputs reaching the same state have the same continuations, so each
//! state is expanded once, from its cheapest input.

use crate::delay::{delta, delta_extend, DelayPair, Word};
use crate::vpt::machine::{Action, RuleId, StackId, SymbolId, Vpt};

use super::product::{rule_pairs, Accessible, Entry, Pair, Queue, Segment, ENTRY_BUDGET};
use super::witness::{replay_twin, TwinWitness, Witness};
use super::{deepening, Property, SearchBounds, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Phase {
    /// Reading `u2`, long copy only.
    Up,
    /// Reading `u3`, both copies.
    Middle,
    /// Reading `u4`, long copy only.
    Down,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    phase: Phase,
    /// Pair before `u2`.
    loop_start: Pair,
    /// Pair after `u3`, once known.
    loop_end: Option<Pair>,
    current: Pair,
    /// Pushed since `u2` began.
    stack: Vec<(StackId, StackId)>,
    /// Height of `stack` when `u3` began.
    middle_base: usize,
    /// Height of the stack left by `u1`.
    base: usize,
    /// `Δ` on `u1·u3` so far.
    short: DelayPair,
    /// `Δ` on `u1·u2·u3·u4` so far.
    long: DelayPair,
}

/// `(|u1·u2·u3·u4|, |u1|, |u2·u4|)`, compared in that order.
type Cost = (usize, usize, usize);

enum Step {
    Start(usize),
    Read(SymbolId, RuleId, RuleId),
    Switch,
}

impl State {
    fn is_violation(&self, cost: Cost) -> bool {
        self.phase == Phase::Down
            && self.loop_end == Some(self.current)
            && self.stack.is_empty()
            && cost.2 > 0
            && self.short != self.long
    }

    fn read(&self, vpt: &Vpt, r1: RuleId, r2: RuleId, max_height: usize) -> Option<State> {
        let (rule1, rule2) = (vpt.rule(r1), vpt.rule(r2));
        let mut next = self.clone();
        match (rule1.action, rule2.action) {
            (Action::Push(g1), Action::Push(g2)) => {
                if self.base + self.stack.len() >= max_height {
                    return None;
                }
                next.stack.push((g1, g2));
            }
            (Action::Pop(g1), Action::Pop(g2)) => {
                let floor = if self.phase == Phase::Middle { self.middle_base } else { 0 };
                if self.stack.len() <= floor || next.stack.pop() != Some((g1, g2)) {
                    return None;
                }
            }
            _ => {}
        }
        next.current = (rule1.target, rule2.target);
        next.long = delta_extend(&self.long, &rule1.output, &rule2.output);
        if self.phase == Phase::Middle {
            next.short = delta_extend(&self.short, &rule1.output, &rule2.output);
        }
        Some(next)
    }

    fn switch(&self) -> Option<State> {
        let mut next = self.clone();
        match self.phase {
            Phase::Up if self.current == self.loop_start => {
                next.phase = Phase::Middle;
                next.middle_base = self.stack.len();
            }
            Phase::Middle if self.stack.len() == self.middle_base => {
                next.phase = Phase::Down;
                next.loop_end = Some(self.current);
            }
            _ => return None,
        }
        Some(next)
    }
}

/// Searches for a violation of the matched twinning property with
/// `|u1·u2·u3·u4| ≤ max_len` and height ≤ `max_height`.
///
/// `vpt` must be reduced. Among the violations found, one with the
/// shortest total input is reported, ties broken by the shortest `u1`,
/// then the shortest `u2·u4`.
pub fn check_mtp(vpt: &Vpt, bounds: SearchBounds) -> Verdict {
    deepening(bounds, |b| search(vpt, b))
}

fn search(vpt: &Vpt, bounds: SearchBounds) -> Verdict {
    if bounds.max_len == 0 {
        return Verdict::NoWitnessUpTo(bounds);
    }
    let acc = Accessible::compute(vpt, bounds.max_len - 1, bounds.max_height, bounds.delay_cap_for(vpt));
    let mut truncated = acc.truncated;

    let mut queue: Queue<State, Cost, Step> = Queue::new();

    for x in acc.distinct() {
        let node = &acc.nodes[x];
        let state = State {
            phase: Phase::Up,
            loop_start: node.pair,
            loop_end: None,
            current: node.pair,
            stack: Vec::new(),
            middle_base: 0,
            base: node.stack.len(),
            short: node.delay.clone(),
            long: node.delay.clone(),
        };
        queue.offer(Entry { state, cost: (node.len, node.len, 0), parent: None, step: Step::Start(x) });
    }

    let mut found = None;
    while let Some((i, cost)) = queue.pop() {
        if queue.entries.len() > ENTRY_BUDGET {
            truncated = true;
            break;
        }
        let state = queue.entries[i].state.clone();
        if state.is_violation(cost) {
            found = Some(i);
            break;
        }
        if let Some(next) = state.switch() {
            queue.offer(Entry { state: next, cost, parent: Some(i), step: Step::Switch });
        }
        if cost.0 == bounds.max_len {
            continue;
        }
        let (p, q) = state.current;
        for a in vpt.symbol_ids() {
            for (r1, r2) in rule_pairs(vpt, p, q, a) {
                let Some(next) = state.read(vpt, r1, r2, bounds.max_height) else { continue };
                let loop_step = usize::from(state.phase != Phase::Middle);
                let next_cost = (cost.0 + 1, cost.1, cost.2 + loop_step);
                queue.offer(Entry { state: next, cost: next_cost, parent: Some(i), step: Step::Read(a, r1, r2) });
            }
        }
    }

    let Some(last) = found else {
        return if truncated {
            Verdict::Unknown(format!("search space too large within {bounds}"))
        } else {
            Verdict::NoWitnessUpTo(bounds)
        };
    };
    let witness = rebuild(vpt, &acc, &queue, last);
    match replay_twin(vpt, &witness) {
        Ok(()) => Verdict::Violated(Witness::Twin(witness)),
        Err(e) => Verdict::Unknown(format!("witness failed replay: {e}")),
    }
}

fn rebuild(vpt: &Vpt, acc: &Accessible, queue: &Queue<State, Cost, Step>, last: usize) -> TwinWitness {
    let mut segments = [Segment::default(), Segment::default(), Segment::default()];
    let mut node = 0;
    let mut phase = Phase::Up;
    for entry in queue.path(last) {
        match entry.step {
            Step::Start(x) => node = x,
            Step::Read(a, r1, r2) => {
                let k = match phase {
                    Phase::Up => 0,
                    Phase::Middle => 1,
                    Phase::Down => 2,
                };
                segments[k] = segments[k].then(&Segment::step(vpt, a, r1, r2));
            }
            Step::Switch => {}
        }
        phase = entry.state.phase;
    }
    let u1 = acc.segment(vpt, node);
    let parts = [&u1, &segments[0], &segments[1], &segments[2]];
    let outputs: [Vec<Word>; 2] = [0, 1].map(|k| parts.iter().map(|s| s.out[k].clone()).collect());
    let runs: [Vec<RuleId>; 2] = [0, 1].map(|k| parts.iter().flat_map(|s| s.runs[k].iter().copied()).collect());
    let starts = acc.starts(node);
    TwinWitness {
        property: Property::Mtp,
        parts: parts.iter().map(|s| s.word.clone()).collect(),
        starts: [starts.0, starts.1],
        runs,
        before: delta(&[outputs[0][0].clone(), outputs[0][2].clone()].concat(), &[outputs[1][0].clone(), outputs[1][2].clone()].concat()),
        after: delta(&outputs[0].concat(), &outputs[1].concat()),
        outputs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::streamability::check_htp;
    use crate::vpt::reduce::reduce;

    fn twin(v: Verdict) -> TwinWitness {
        match v {
            Verdict::Violated(Witness::Twin(w)) => w,
            other => panic!("expected a twinning witness, got {other:?}"),
        }
    }

    #[test]
    fn fig3_plain_violates_with_matched_loops() {
        let vpt = reduce(&bundled::fig3_plain());
        let w = twin(check_mtp(&vpt, SearchBounds::new(3, 10)));
        let shown: Vec<String> = w.parts.iter().map(|p| vpt.show_word(p)).collect();
        assert_eq!(shown, ["c", "c", "c r", "r"]);
        assert_ne!(w.before, w.after);
    }

    #[test]
    fn fig4_has_no_witness() {
        let vpt = reduce(&bundled::fig4());
        let bounds = SearchBounds::new(3, 12);
        assert_eq!(check_mtp(&vpt, bounds), Verdict::NoWitnessUpTo(bounds));
    }

    #[test]
    fn t1_accumulates_delay_on_calls_matched_by_r1() {
        // The runs guess different stack symbols for the first call, then both
        // push γ1 on u2 and pop it with r1 on u4: a grows on both sides while
        // the a/b mismatch from u1 stays pending.
        let vpt = reduce(&bundled::fig2_t1());
        let w = twin(check_mtp(&vpt, SearchBounds::new(3, 12)));
        let shown: Vec<String> = w.parts.iter().map(|p| vpt.show_word(p)).collect();
        assert_eq!(shown, ["c", "c", "c r1", "r1"]);
        assert_eq!(w.before.to_string(), "(aa, ba)");
        assert_eq!(w.after.to_string(), "(aaa, baa)");
    }

    #[test]
    fn htp_witnesses_transfer() {
        let vpt = reduce(&bundled::fig3_full());
        let bounds = SearchBounds::new(2, 8);
        let htp = twin(check_htp(&vpt, bounds));
        let mtp = twin(check_mtp(&vpt, bounds));
        assert!(mtp.word().len() <= htp.word().len());
    }
}
