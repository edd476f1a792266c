//! One PASS/FAIL line per acceptance criterion.
//!
//! Runs without the test harness so the lines reach the terminal; failures
//! are reported, not asserted.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vpstream::bundled;
use vpstream::eval::{eval_word, Evaluator, Outcome, Status};
use vpstream::streamability::{
    check_bm, check_fst_twinning, check_htp, check_mtp, replay_pump, replay_twin, SearchBounds, Verdict, Witness,
};
use vpstream::vpt::naive::accepting_outputs;
use vpstream::vpt::{
    check_functional_bounded, dconfigs_after, enumerate_domain, initial_dconfigs, update_dconfigs,
    FunctionalCheck, SymbolId,
};
use vpstream::{delay_mismatch, delta_extend, reduce, Vpt};

use common::*;

struct Report {
    results: Vec<(usize, bool)>,
}

impl Report {
    fn run(&mut self, id: usize, title: &str, check: impl FnOnce() -> Result<String, String>) {
        let start = Instant::now();
        let (ok, detail) = match check() {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let secs = start.elapsed().as_secs_f64();
        println!("{} criterion {id:>2} ({title}): {detail} [{secs:.2}s]", if ok { "PASS" } else { "FAIL" });
        self.results.push((id, ok));
    }
}

fn word(vpt: &Vpt, text: &str) -> Vec<SymbolId> {
    vpt.parse_word(text).expect("known symbols")
}

fn text(w: &[char]) -> String {
    w.iter().collect()
}

fn repeat(s: &str, n: usize) -> String {
    vec![s; n].join(" ")
}

fn criterion_1() -> Result<String, String> {
    let vpt = bundled::fig3_plain();
    let mut failures = Vec::new();
    for n in 1..=64 {
        let input = format!("{} {}", repeat("c", n), repeat("r", n));
        let expected = format!("{}{}", "a".repeat(n), "c".repeat(n));
        match eval_word(&vpt, &word(&vpt, &input)) {
            Ok(Some(out)) if text(&out) == expected => {}
            other => failures.push(format!("c^{n} r^{n} gave {other:?}")),
        }
        let input = format!("c {} {} r'", repeat("c", n), repeat("r", n));
        let expected = format!("{}{}", "b".repeat(n + 1), "c".repeat(n + 1));
        match eval_word(&vpt, &word(&vpt, &input)) {
            Ok(Some(out)) if text(&out) == expected => {}
            other => failures.push(format!("c c^{n} r^{n} r' gave {other:?}")),
        }
    }
    if failures.is_empty() {
        Ok("256 words byte-exact".into())
    } else {
        Err(format!(
            "{} of 128 words differ: {} (fig3_plain accepts c^n r^n for n >= 2 only)",
            failures.len(),
            failures.join("; ")
        ))
    }
}

/// Reduced machines with a nonempty domain, functional on inputs ≤ `len`.
fn random_functional(rng: &mut ChaCha8Rng, count: usize, len: usize) -> Vec<Vpt> {
    let mut found = Vec::new();
    while found.len() < count {
        let vpt = reduce(&random_vpt(rng, 4, 3));
        if vpt.initial().is_empty() {
            continue;
        }
        if let FunctionalCheck::FunctionalUpTo(_) = check_functional_bounded(&vpt, len) {
            found.push(vpt);
        }
    }
    found
}

fn criterion_2(randoms: &[Vpt]) -> Result<String, String> {
    let mut machines: Vec<(String, Vpt)> = bundled::all().into_iter().map(|(n, v)| (n.to_string(), reduce(&v))).collect();
    machines.extend(randoms.iter().enumerate().map(|(i, v)| (format!("random #{i}"), v.clone())));
    let mut words = 0;
    for (name, vpt) in &machines {
        for (w, expected) in enumerate_domain(vpt, 12) {
            words += 1;
            match eval_word(vpt, &w) {
                Ok(Some(out)) if out == expected => {}
                other => return Err(format!("{name}: `{}` gave {other:?}, expected {expected:?}", vpt.show_word(&w))),
            }
        }
    }
    Ok(format!("{} machines, {words} domain words, all equal", machines.len()))
}

fn criterion_3() -> Result<String, String> {
    let mut prefixes = 0;
    for (name, original) in bundled::all() {
        let vpt = reduce(&original);
        let wm = well_matched_pairs(&original);
        let symbols: Vec<SymbolId> = vpt.symbol_ids().collect();
        let mut error = None;
        let start = Evaluator::start(&vpt).map_err(|e| e.to_string())?;
        // The oracle keeps the d-configurations of the original machine
        // whose configuration is co-accessible.
        let live = |dcs: &BTreeSet<vpstream::vpt::DConfiguration>| -> BTreeSet<vpstream::vpt::DConfiguration> {
            dcs.iter().filter(|d| co_accessible_states(&original, &wm, &d.stack).contains(&d.state)).cloned().collect()
        };
        live_words(
            &symbols,
            10,
            (start, String::new(), live(&initial_dconfigs(&original))),
            |(ev, emitted, dcs), a| {
                let next = live(&update_dconfigs(dcs, a, &original));
                if next.is_empty() {
                    return None;
                }
                let mut ev = ev.clone();
                let out = ev.step(a).ok()?;
                Some((ev, format!("{emitted}{}", text(&out)), next))
            },
            |w, (ev, emitted, dcs)| {
                prefixes += 1;
                let expected = text(&lcp(dcs.iter().map(|d| &d.residual)).unwrap_or_default());
                if error.is_none() && (ev.status() != Status::Running || *emitted != expected) {
                    error = Some(format!("{name} after `{}`: emitted {emitted:?}, lcp {expected:?}", vpt.show_word(w)));
                }
            },
        );
        if let Some(e) = error {
            return Err(e);
        }
    }
    Ok(format!("{prefixes} live prefixes on the bundled machines"))
}

fn criterion_4(randoms: &[Vpt]) -> Result<String, String> {
    let mut streams: Vec<(Vpt, Vec<Vec<SymbolId>>)> = Vec::new();
    for (_, v) in bundled::all() {
        let vpt = reduce(&v);
        let words = enumerate_domain(&vpt, 12).into_iter().map(|(w, _)| w).collect();
        streams.push((vpt, words));
    }
    for vpt in randoms {
        streams.push((vpt.clone(), enumerate_domain(vpt, 10).into_iter().map(|(w, _)| w).collect()));
    }
    let fig4 = reduce(&bundled::fig4());
    let family = (1..=100).map(|n| word(&fig4, &format!("{} {}", repeat("c", n), repeat("r", n)))).collect();
    streams.push((fig4, family));
    let full = reduce(&bundled::fig3_full());
    let loops = (1..=100).map(|k| word(&full, &format!("{} c r r", repeat("c r", k)))).collect();
    streams.push((full, loops));

    let mut steps = 0;
    for (vpt, words) in &streams {
        let bound = vpt.num_states() * vpt.stack_symbols().len().max(1);
        for w in words {
            let mut ev = Evaluator::start(vpt).map_err(|e| e.to_string())?;
            for &a in w {
                ev.step(a).map_err(|e| e.to_string())?;
                if ev.status() != Status::Running {
                    break;
                }
                steps += 1;
                let r = ev.memory_snapshot();
                let widest = ev.dag().layers().iter().map(|l| l.len()).max().unwrap_or(0);
                if widest > bound || r.levels != r.hc + 1 {
                    return Err(format!(
                        "after `{}`: widest level {widest} (bound {bound}), {} levels at hc {}",
                        vpt.show_word(&w[..r.position]),
                        r.levels,
                        r.hc
                    ));
                }
            }
        }
    }
    Ok(format!("{steps} steps on {} machines, no violation", streams.len()))
}

fn criterion_5() -> Result<String, String> {
    let vpt = reduce(&bundled::fig4());
    for n in [2, 3, 10, 100, 500] {
        let w = word(&vpt, &format!("{} {}", repeat("c", n), repeat("r", n)));
        let mut ev = Evaluator::start(&vpt).map_err(|e| e.to_string())?;
        for (i, &a) in w.iter().enumerate() {
            ev.step(a).map_err(|e| e.to_string())?;
            let r = ev.memory_snapshot();
            if i < n && r.out_neq != i + 1 {
                return Err(format!("n = {n}: out_neq {} after c^{}", r.out_neq, i + 1));
            }
            if i >= n && (r.branches != 1 || r.label_tokens_total > 2) {
                return Err(format!(
                    "n = {n}: {} branches, {} label tokens after {} returns",
                    r.branches,
                    r.label_tokens_total,
                    i + 1 - n
                ));
            }
        }
        if !matches!(ev.finish(), Ok(Outcome::Accept(_))) {
            return Err(format!("n = {n}: c^n r^n rejected"));
        }
    }
    Ok("out_neq = k after c^k, one branch with <= 2 label tokens after the first return, n up to 500".into())
}

fn criterion_6() -> Result<String, String> {
    let vpt = reduce(&bundled::fig3_full());
    let w = word(&vpt, &repeat("c r", 200));
    let mut ev = Evaluator::start(&vpt).map_err(|e| e.to_string())?;
    let mut last = 0;
    for (i, &a) in w.iter().enumerate() {
        ev.step(a).map_err(|e| e.to_string())?;
        let r = ev.memory_snapshot();
        if r.hc > 1 {
            return Err(format!("hc = {} after {} symbols", r.hc, i + 1));
        }
        if i % 2 == 1 {
            let k = i / 2 + 1;
            if r.out_neq + 2 < 2 * k {
                return Err(format!("out_neq {} after (c r)^{k}", r.out_neq));
            }
            last = r.out_neq;
        }
    }
    let tail = word(&vpt, "c r r");
    for &a in &tail {
        ev.step(a).map_err(|e| e.to_string())?;
    }
    Ok(format!("out_neq {last} after (c r)^200 at hc <= 1; tail ends {:?}", ev.status()))
}

fn criterion_7() -> Result<String, String> {
    let mut checked = 0;
    for name in ["fig4", "fig2_t1"] {
        let vpt = reduce(&bundled::by_name(name).unwrap());
        let q = vpt.num_states() as u128;
        let m = vpt.metrics().max_output as u128;
        for (w, _) in enumerate_domain(&vpt, 12) {
            let mut ev = Evaluator::start(&vpt).map_err(|e| e.to_string())?;
            for &a in &w {
                ev.step(a).map_err(|e| e.to_string())?;
                let h = ev.scan().h as u128;
                let bound = 3 * (h + 1) * (h + 1) * q.saturating_pow(2 * (h as u32 + 1)) * m;
                let out_neq = ev.memory_snapshot().out_neq as u128;
                checked += 1;
                if out_neq > bound {
                    return Err(format!("{name} after a prefix of `{}`: out_neq {out_neq} > {bound}", vpt.show_word(&w)));
                }
            }
        }
    }
    Ok(format!("{checked} prefixes within the bound"))
}

fn criterion_8() -> Result<String, String> {
    let bounds = SearchBounds::default();
    let mut problems = Vec::new();
    let slow = |what: &str, start: Instant| {
        if start.elapsed().as_secs_f64() > 10.0 {
            Some(format!("{what} took {:.1}s", start.elapsed().as_secs_f64()))
        } else {
            None
        }
    };

    let full = reduce(&bundled::fig3_full());
    let t = Instant::now();
    match check_htp(&full, bounds) {
        Verdict::Violated(Witness::Twin(w)) => {
            if replay_twin(&full, &w).is_err() || w.parts[0].len() > 3 || w.parts[1].len() > 2 {
                problems.push(format!("HTP witness on fig3_full has sizes {}/{}", w.parts[0].len(), w.parts[1].len()));
            }
        }
        other => problems.push(format!("check_htp(fig3_full) = {other}")),
    }
    problems.extend(slow("check_htp(fig3_full)", t));

    let plain = reduce(&bundled::fig3_plain());
    let t = Instant::now();
    match check_mtp(&plain, bounds) {
        Verdict::Violated(Witness::Twin(w)) => {
            if replay_twin(&plain, &w).is_err() || w.word().len() > 5 {
                problems.push(format!("MTP witness on fig3_plain has length {}", w.word().len()));
            }
        }
        other => problems.push(format!("check_mtp(fig3_plain) = {other}")),
    }
    problems.extend(slow("check_mtp(fig3_plain)", t));

    for name in ["fig4", "fig2_t1"] {
        let vpt = reduce(&bundled::by_name(name).unwrap());
        for (prop, check) in [("htp", check_htp as fn(&Vpt, SearchBounds) -> Verdict), ("mtp", check_mtp)] {
            let t = Instant::now();
            let v = check(&vpt, bounds);
            if v != Verdict::NoWitnessUpTo(bounds) {
                let detail = match v.witness() {
                    Some(w) => w.describe(&vpt).replace('\n', "; "),
                    None => v.to_string(),
                };
                problems.push(format!("check_{prop}({name}) = {} [{detail}]", v.label()));
            }
            problems.extend(slow(&format!("check_{prop}({name})"), t));
        }
    }

    let t = Instant::now();
    match check_bm(&plain) {
        Verdict::Violated(Witness::Pump(p)) if replay_pump(&plain, &p).is_ok() => {}
        other => problems.push(format!("check_bm(fig3_plain) = {other}")),
    }
    problems.extend(slow("check_bm(fig3_plain)", t));

    if problems.is_empty() {
        Ok("all verdicts as expected at default bounds".into())
    } else {
        Err(problems.join("; "))
    }
}

fn criterion_9() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut checked, mut violated) = (0, 0);
    while checked < 100 {
        let Some(fst) = random_trimmed_fst(&mut rng, 5) else { continue };
        checked += 1;
        let exact = check_fst_twinning(&fst);
        let brute = fst_twinning_violated_brute(&fst, 10);
        if exact.is_violated() != brute {
            return Err(format!("disagreement on FST #{checked}: exact {exact}, brute force violated = {brute}\n{fst:?}"));
        }
        if !exact.is_violated() && exact != Verdict::Holds {
            return Err(format!("FST #{checked}: inconclusive verdict {exact}"));
        }
        violated += usize::from(brute);
    }
    Ok(format!("100 FSTs agree ({violated} violate, {} twinned)", 100 - violated))
}

fn criterion_10() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let word = |rng: &mut ChaCha8Rng, max: usize| -> Vec<char> {
        let len = rng.gen_range(0..=max);
        (0..len).map(|_| if rng.gen_bool(0.5) { 'a' } else { 'b' }).collect()
    };
    for i in 0..10_000 {
        let (u1, v1, u2, v2) = (word(&mut rng, 6), word(&mut rng, 6), word(&mut rng, 6), word(&mut rng, 6));
        let extended = delta_extend(&vpstream::delta(&u1, &v1), &u2, &v2);
        let direct = delta(&[u1.clone(), u2.clone()].concat(), &[v1.clone(), v2.clone()].concat());
        if (extended.left().to_vec(), extended.right().to_vec()) != direct {
            return Err(format!("check {i}: delta_extend disagrees on {u1:?} {v1:?} {u2:?} {v2:?}"));
        }
        // Premise |A| − |B| = |C| − |D| ≥ 0. Half of the quadruples share
        // their tails (A = xs, B = xt, C = ys, D = yt), so both outcomes occur.
        let diff = rng.gen_range(0..=3);
        let t = word(&mut rng, 4);
        let mut s = word(&mut rng, 0);
        s.extend(t.iter().rev());
        for _ in 0..diff {
            s.push(if rng.gen_bool(0.5) { 'a' } else { 'b' });
        }
        let (a, b, c, d) = if rng.gen_bool(0.5) {
            let (x, y) = (word(&mut rng, 3), word(&mut rng, 3));
            ([x.clone(), s.clone()].concat(), [x, t.clone()].concat(), [y.clone(), s].concat(), [y, t].concat())
        } else {
            let d = word(&mut rng, 5);
            let mut c = word(&mut rng, d.len() + diff);
            c.resize(d.len() + diff, 'a');
            (s, t, c, d)
        };
        let mismatch = delay_mismatch(&a, &b, &c, &d).map_err(|e| e.to_string())?;
        if mismatch != (delta(&a, &b) != delta(&c, &d)) {
            return Err(format!("check {i}: delay_mismatch({a:?}, {b:?}, {c:?}, {d:?}) = {mismatch}"));
        }
    }
    Ok("10,000 delta_extend and 10,000 delay_mismatch checks".into())
}

fn criterion_11() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut configs = 0;
    for i in 0..100 {
        let original = random_vpt(&mut rng, 4, 3);
        let reduced = reduce(&original);
        let symbols: Vec<SymbolId> = original.symbol_ids().collect();
        let mut error = None;
        live_words(
            &symbols,
            8,
            (initial_dconfigs(&original), initial_dconfigs(&reduced)),
            |(x, y), a| {
                let next = (update_dconfigs(x, a, &original), update_dconfigs(y, a, &reduced));
                (!next.0.is_empty() || !next.1.is_empty()).then_some(next)
            },
            |w, (x, y)| {
                if error.is_none() && accepting_outputs(&original, x) != accepting_outputs(&reduced, y) {
                    error = Some(format!("machine {i}: outputs differ on `{}`", original.show_word(w)));
                }
            },
        );
        if let Some(e) = error {
            return Err(e);
        }
        let wm = well_matched_pairs(&reduced);
        for (q, stack) in accessible_configurations(&reduced, 4) {
            configs += 1;
            if !co_accessible_states(&reduced, &wm, &stack).contains(&q) {
                return Err(format!("machine {i}: ({}, {}) is not co-accessible", reduced.state_name(q), reduced.show_stack(&stack)));
            }
        }
        if dconfigs_after(&reduced, &[]).len() > reduced.initial().len() {
            return Err(format!("machine {i}: initial d-configurations"));
        }
    }
    Ok(format!("100 machines equivalent on words <= 8; {configs} accessible configurations all co-accessible"))
}

fn main() {
    let mut report = Report { results: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let randoms = random_functional(&mut rng, 200, 12);
    report.run(1, "bundled examples", criterion_1);
    report.run(2, "oracle equivalence", || criterion_2(&randoms));
    report.run(3, "earliest emission", criterion_3);
    report.run(4, "DAG structure", || criterion_4(&randoms));
    report.run(5, "memory on fig4", criterion_5);
    report.run(6, "memory on fig3_full", criterion_6);
    report.run(7, "HBM bound", criterion_7);
    report.run(8, "checker verdicts", criterion_8);
    report.run(9, "exact FST twinning", criterion_9);
    report.run(10, "delay algebra", criterion_10);
    report.run(11, "reduction", criterion_11);
    let passed = report.results.iter().filter(|(_, ok)| *ok).count();
    println!("acceptance: {passed}/{} criteria pass", report.results.len());
}
