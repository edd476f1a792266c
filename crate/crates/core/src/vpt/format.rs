//! The line-oriented `.vpt` text format.
//!
//! ```text
//! # comment
//! calls: c
//! returns: r r'
//! internals: a
//! states: i p f
//! initial: i
//! final: f
//! stack: g
//! trans i c x push g p
//! trans p r - pop g f
//! trans f a y int f
//! ```
//!
//! Header lines may appear in any order, each at most once. In a `trans`
//! line the output token lists the emitted characters; `-` stands for ε.

use crate::error::VptError;
use crate::vpt::machine::{RawAction, RawList, RawRule, Vpt, VptBuilder};

fn parse_error(line: usize, reason: impl Into<String>) -> VptError {
    VptError::Parse { line, reason: reason.into() }
}

/// Strips a `#` comment; `#` only counts at the start of a token.
fn strip_comment(line: &str) -> &str {
    let mut prev_space = true;
    for (i, ch) in line.char_indices() {
        if ch == '#' && prev_space {
            return &line[..i];
        }
        prev_space = ch.is_whitespace();
    }
    line
}

pub fn parse_vpt(text: &str) -> Result<Vpt, VptError> {
    let mut builder = VptBuilder::default();
    let mut seen = std::collections::HashSet::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = strip_comment(raw_line).trim();
        if content.is_empty() {
            continue;
        }
        if let Some((head, rest)) = content.split_once(':').filter(|(h, _)| !h.contains(char::is_whitespace)) {
            let list = RawList { line: Some(line), items: rest.split_whitespace().map(String::from).collect() };
            if !seen.insert(head.to_string()) {
                return Err(parse_error(line, format!("duplicate `{head}:` header")));
            }
            match head {
                "calls" => builder.calls = list,
                "returns" => builder.returns = list,
                "internals" => builder.internals = list,
                "states" => builder.states = Some(list),
                "initial" => builder.initial = list,
                "final" => builder.finals = list,
                "stack" => builder.stack = list,
                other => return Err(parse_error(line, format!("unknown header `{other}:`"))),
            }
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens[0] != "trans" {
            return Err(parse_error(line, format!("expected a header or `trans`, found `{}`", tokens[0])));
        }
        let (action, target) = match tokens.get(4).copied() {
            Some("push") | Some("pop") if tokens.len() == 7 => {
                let gamma = tokens[5].to_string();
                let action = if tokens[4] == "push" { RawAction::Push(gamma) } else { RawAction::Pop(gamma) };
                (action, tokens[6])
            }
            Some("int") if tokens.len() == 6 => (RawAction::Internal, tokens[5]),
            Some(kind @ ("push" | "pop" | "int")) => {
                return Err(parse_error(line, format!("wrong number of fields for a `{kind}` rule")));
            }
            Some(other) => return Err(parse_error(line, format!("expected push, pop or int, found `{other}`"))),
            None => return Err(parse_error(line, "incomplete rule")),
        };
        let output = if tokens[3] == "-" { String::new() } else { tokens[3].to_string() };
        builder.rules.push(RawRule {
            line: Some(line),
            source: tokens[1].into(),
            symbol: tokens[2].into(),
            output,
            action,
            target: target.into(),
        });
    }
    builder.build()
}

pub fn serialize_vpt(vpt: &Vpt) -> String {
    let mut out = String::new();
    let mut header = |name: &str, items: Vec<&str>| {
        out.push_str(name);
        out.push(':');
        for item in items {
            out.push(' ');
            out.push_str(item);
        }
        out.push('\n');
    };
    let alpha = vpt.alphabet();
    header("calls", alpha.calls().iter().map(String::as_str).collect());
    header("returns", alpha.returns().iter().map(String::as_str).collect());
    header("internals", alpha.internals().iter().map(String::as_str).collect());
    header("states", vpt.states().iter().map(String::as_str).collect());
    header("initial", vpt.initial().iter().map(|&q| vpt.state_name(q)).collect());
    header("final", vpt.finals().map(|q| vpt.state_name(q)).collect());
    header("stack", vpt.stack_symbols().iter().map(String::as_str).collect());
    if !vpt.rules().is_empty() {
        out.push('\n');
    }
    for rule in vpt.rules() {
        out.push_str("trans ");
        out.push_str(&vpt.show_rule(rule));
        out.push('\n');
    }
    out
}
