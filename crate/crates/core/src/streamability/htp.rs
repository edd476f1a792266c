//! Bounded search for violations of the horizontal twinning property.
//!
//! A violation is a pair of runs on `u1·u2`, `u2` well-nested, where each
//! run comes back to its configuration after `u1` and
//! `Δ(v1, w1) ≠ Δ(v1v2, w1w2)`. Since `u2` is well-nested the loop does
//! not look below the stack reached after `u1`: from each pair of states
//! reachable by `u1`, with its delay, the search follows `u2` one symbol
//! at a time, keeping the current pair, the stack pushed by `u2` and the
//! delay so far.

use crate::delay::{delta, delta_extend, DelayPair};
use crate::vpt::machine::{Action, RuleId, StackId, SymbolId, Vpt};

use super::product::{rule_pairs, Accessible, Entry, Pair, Queue, Segment, ENTRY_BUDGET};
use super::witness::{replay_twin, TwinWitness, Witness};
use super::{deepening, Property, SearchBounds, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    /// Pair and delay after `u1`.
    start: (Pair, DelayPair),
    current: Pair,
    /// Pushed since `u2` began.
    stack: Vec<(StackId, StackId)>,
    /// Height of the stack left by `u1`.
    base: usize,
    delay: DelayPair,
}

/// `(|u1·u2|, |u1|)`.
type Cost = (usize, usize);

enum Step {
    Start(usize),
    Read(SymbolId, RuleId, RuleId),
}

/// Searches for a violation of the horizontal twinning property with
/// `|u1·u2| ≤ max_len` and height ≤ `max_height`.
///
/// `vpt` must be reduced, so that every configuration reached is
/// co-accessible. Among the violations found, one with the shortest
/// `u1·u2`, then the shortest `u1`, is reported.
pub fn check_htp(vpt: &Vpt, bounds: SearchBounds) -> Verdict {
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
            start: (node.pair, node.delay.clone()),
            current: node.pair,
            stack: Vec::new(),
            base: node.stack.len(),
            delay: node.delay.clone(),
        };
        queue.offer(Entry { state, cost: (node.len, node.len), parent: None, step: Step::Start(x) });
    }

    let mut found = None;
    while let Some((i, cost)) = queue.pop() {
        if queue.entries.len() > ENTRY_BUDGET {
            truncated = true;
            break;
        }
        let state = queue.entries[i].state.clone();
        if cost.0 > cost.1 && state.stack.is_empty() && state.current == state.start.0 && state.delay != state.start.1 {
            found = Some(i);
            break;
        }
        if cost.0 == bounds.max_len {
            continue;
        }
        let (p, q) = state.current;
        for a in vpt.symbol_ids() {
            for (r1, r2) in rule_pairs(vpt, p, q, a) {
                let (rule1, rule2) = (vpt.rule(r1), vpt.rule(r2));
                let mut next = state.clone();
                match (rule1.action, rule2.action) {
                    (Action::Push(g1), Action::Push(g2)) => {
                        if state.base + state.stack.len() >= bounds.max_height {
                            continue;
                        }
                        next.stack.push((g1, g2));
                    }
                    (Action::Pop(g1), Action::Pop(g2)) => match next.stack.pop() {
                        Some(top) if top == (g1, g2) => {}
                        _ => continue,
                    },
                    _ => {}
                }
                next.current = (rule1.target, rule2.target);
                next.delay = delta_extend(&state.delay, &rule1.output, &rule2.output);
                queue.offer(Entry { state: next, cost: (cost.0 + 1, cost.1), parent: Some(i), step: Step::Read(a, r1, r2) });
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
    let mut node = 0;
    let mut u2 = Segment::default();
    for entry in queue.path(last) {
        match entry.step {
            Step::Start(x) => node = x,
            Step::Read(a, r1, r2) => u2 = u2.then(&Segment::step(vpt, a, r1, r2)),
        }
    }
    let u1 = acc.segment(vpt, node);
    let starts = acc.starts(node);
    let outputs = [vec![u1.out[0].clone(), u2.out[0].clone()], vec![u1.out[1].clone(), u2.out[1].clone()]];
    let witness = TwinWitness {
        property: Property::Htp,
        parts: vec![u1.word.clone(), u2.word.clone()],
        starts: [starts.0, starts.1],
        runs: [[u1.runs[0].clone(), u2.runs[0].clone()].concat(), [u1.runs[1].clone(), u2.runs[1].clone()].concat()],
        before: delta(&outputs[0][0], &outputs[1][0]),
        after: delta(&outputs[0].concat(), &outputs[1].concat()),
        outputs,
    };
    match replay_twin(vpt, &witness) {
        Ok(()) => Verdict::Violated(Witness::Twin(witness)),
        Err(e) => Verdict::Unknown(format!("witness failed replay: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::vpt::reduce::reduce;

    fn twin(v: Verdict) -> TwinWitness {
        match v {
            Verdict::Violated(Witness::Twin(w)) => w,
            other => panic!("expected a twinning witness, got {other:?}"),
        }
    }

    #[test]
    fn fig3_full_violates_on_cr_loops() {
        let vpt = reduce(&bundled::fig3_full());
        let w = twin(check_htp(&vpt, SearchBounds::new(2, 8)));
        assert_eq!(vpt.show_word(&w.parts[0]), "c r");
        assert_eq!(vpt.show_word(&w.parts[1]), "c r");
        let text = |o: &Vec<char>| o.iter().collect::<String>();
        assert_eq!([text(&w.outputs[0][1]), text(&w.outputs[1][1])], ["ac", "bc"]);
        assert_ne!(w.before, w.after);
    }

    #[test]
    fn machines_without_shared_loops_have_no_witness() {
        for name in ["fig3_plain", "fig4", "fig2_t1"] {
            let vpt = reduce(&bundled::by_name(name).unwrap());
            let bounds = SearchBounds::new(3, 12);
            assert_eq!(check_htp(&vpt, bounds), Verdict::NoWitnessUpTo(bounds), "{name}");
        }
    }

    #[test]
    fn internal_loops_with_diverging_outputs() {
        // a^n b -> x^n and a^n c -> y^n: the last letter decides the output.
        let vpt = Vpt::builder()
            .internals(["a", "b", "c"])
            .states(["i", "p", "q", "f"])
            .initial(["i"])
            .finals(["f"])
            .internal("i", "a", "x", "p")
            .internal("p", "a", "x", "p")
            .internal("p", "b", "", "f")
            .internal("i", "a", "y", "q")
            .internal("q", "a", "y", "q")
            .internal("q", "c", "", "f")
            .build()
            .unwrap();
        let w = twin(check_htp(&vpt, SearchBounds::new(0, 4)));
        assert_eq!((w.parts[0].len(), w.parts[1].len()), (1, 1));
    }

    #[test]
    fn tiny_bounds_miss_the_witness() {
        let vpt = reduce(&bundled::fig3_full());
        assert!(matches!(check_htp(&vpt, SearchBounds::new(2, 3)), Verdict::NoWitnessUpTo(_)));
        assert!(matches!(check_htp(&vpt, SearchBounds::new(0, 8)), Verdict::NoWitnessUpTo(_)));
    }
}
