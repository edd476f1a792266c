use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use crate::delay::{show, Word};
use crate::error::{Diagnostic, UnknownSymbol, ValidationError, VptError};
use crate::nested_words::{StructuredAlphabet, SymbolKind};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(
    /// Index into [`Vpt::states`]; ids follow the sorted order of state names.
    StateId
);
id_type!(
    /// Index into [`Vpt::stack_symbols`].
    StackId
);
id_type!(
    /// Index into [`Vpt::symbols`]; ids follow the sorted order of tokens.
    SymbolId
);
id_type!(
    /// Index into [`Vpt::rules`].
    RuleId
);

/// What a rule does to the stack.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Action {
    Push(StackId),
    Pop(StackId),
    Internal,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub source: StateId,
    pub symbol: SymbolId,
    pub action: Action,
    pub output: Word,
    pub target: StateId,
}

/// Size parameters of a machine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MachineMetrics {
    /// Number of states.
    pub n: usize,
    /// Number of stack symbols.
    pub gamma: usize,
    /// Longest rule output, 0 without rules.
    pub max_output: usize,
}

/// A visibly pushdown transducer.
///
/// Built through [`VptBuilder`] or parsed from text; immutable afterwards.
/// Rules are kept sorted and deduplicated, so two machines with the same
/// declarations compare equal whatever order their rules were given in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vpt {
    alphabet: StructuredAlphabet,
    symbols: Vec<String>,
    kinds: Vec<SymbolKind>,
    states: Vec<String>,
    initial: Vec<StateId>,
    is_final: Vec<bool>,
    stack: Vec<String>,
    rules: Vec<Rule>,
    index: HashMap<(StateId, SymbolId), Range<u32>>,
}

impl Vpt {
    pub fn builder() -> VptBuilder {
        VptBuilder::default()
    }

    pub fn alphabet(&self) -> &StructuredAlphabet {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn stack_symbols(&self) -> &[String] {
        &self.stack
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, id: RuleId) -> &Rule {
        &self.rules[id.index()]
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.is_final[q.index()]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.state_ids().filter(|&q| self.is_final(q))
    }

    pub fn state_ids(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len() as u32).map(StateId)
    }

    pub fn symbol_ids(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbols.len() as u32).map(SymbolId)
    }

    pub fn stack_ids(&self) -> impl Iterator<Item = StackId> {
        (0..self.stack.len() as u32).map(StackId)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.index()]
    }

    pub fn stack_name(&self, g: StackId) -> &str {
        &self.stack[g.index()]
    }

    pub fn symbol_name(&self, a: SymbolId) -> &str {
        &self.symbols[a.index()]
    }

    pub fn kind(&self, a: SymbolId) -> SymbolKind {
        self.kinds[a.index()]
    }

    pub fn state(&self, name: &str) -> Option<StateId> {
        self.states.binary_search_by(|s| s.as_str().cmp(name)).ok().map(|i| StateId(i as u32))
    }

    pub fn stack_symbol(&self, name: &str) -> Option<StackId> {
        self.stack.binary_search_by(|s| s.as_str().cmp(name)).ok().map(|i| StackId(i as u32))
    }

    pub fn symbol(&self, name: &str) -> Option<SymbolId> {
        self.symbols.binary_search_by(|s| s.as_str().cmp(name)).ok().map(|i| SymbolId(i as u32))
    }

    /// Ids of the rules leaving `q` on `a`.
    pub fn rule_ids_from(&self, q: StateId, a: SymbolId) -> impl Iterator<Item = RuleId> {
        self.index.get(&(q, a)).cloned().unwrap_or(0..0).map(RuleId)
    }

    /// Rules leaving `q` on `a`.
    pub fn rules_from(&self, q: StateId, a: SymbolId) -> impl Iterator<Item = &Rule> {
        let range = self.index.get(&(q, a)).cloned().unwrap_or(0..0);
        self.rules[range.start as usize..range.end as usize].iter()
    }

    pub fn rule_ids(&self) -> impl Iterator<Item = RuleId> {
        (0..self.rules.len() as u32).map(RuleId)
    }

    /// Interns a whitespace-separated word.
    pub fn parse_word(&self, text: &str) -> Result<Vec<SymbolId>, UnknownSymbol> {
        self.word_from_tokens(text.split_whitespace())
    }

    pub fn word_from_tokens<'a, I: IntoIterator<Item = &'a str>>(&self, tokens: I) -> Result<Vec<SymbolId>, UnknownSymbol> {
        tokens
            .into_iter()
            .enumerate()
            .map(|(position, tok)| {
                self.symbol(tok).ok_or_else(|| UnknownSymbol { symbol: tok.to_string(), position })
            })
            .collect()
    }

    /// Space-separated rendering of an input word.
    pub fn show_word(&self, word: &[SymbolId]) -> String {
        word.iter().map(|&a| self.symbol_name(a)).collect::<Vec<_>>().join(" ")
    }

    /// Compact rendering: tokens concatenated, `ε` for the empty word.
    pub fn show_word_compact(&self, word: &[SymbolId]) -> String {
        if word.is_empty() {
            return "ε".into();
        }
        word.iter().map(|&a| self.symbol_name(a)).collect()
    }

    pub fn show_stack(&self, stack: &[StackId]) -> String {
        if stack.is_empty() {
            return "⊥".into();
        }
        stack.iter().map(|&g| self.stack_name(g)).collect::<Vec<_>>().join(".")
    }

    pub fn show_rule(&self, rule: &Rule) -> String {
        let out = if rule.output.is_empty() { "-".to_string() } else { rule.output.iter().collect() };
        let (src, sym, dst) = (self.state_name(rule.source), self.symbol_name(rule.symbol), self.state_name(rule.target));
        match rule.action {
            Action::Push(g) => format!("{src} {sym} {out} push {} {dst}", self.stack_name(g)),
            Action::Pop(g) => format!("{src} {sym} {out} pop {} {dst}", self.stack_name(g)),
            Action::Internal => format!("{src} {sym} {out} int {dst}"),
        }
    }

    pub fn metrics(&self) -> MachineMetrics {
        MachineMetrics {
            n: self.states.len(),
            gamma: self.stack.len(),
            max_output: self.rules.iter().map(|r| r.output.len()).max().unwrap_or(0),
        }
    }

    pub(crate) fn from_parts(
        alphabet: StructuredAlphabet,
        states: Vec<String>,
        initial: BTreeSet<StateId>,
        finals: BTreeSet<StateId>,
        stack: Vec<String>,
        mut rules: Vec<Rule>,
    ) -> Vpt {
        let (symbols, kinds): (Vec<String>, Vec<SymbolKind>) =
            alphabet.symbols().into_iter().map(|(s, k)| (s.to_string(), k)).unzip();
        rules.sort();
        rules.dedup();
        let mut index: HashMap<(StateId, SymbolId), Range<u32>> = HashMap::new();
        for (i, rule) in rules.iter().enumerate() {
            index
                .entry((rule.source, rule.symbol))
                .and_modify(|r| r.end = i as u32 + 1)
                .or_insert(i as u32..i as u32 + 1);
        }
        let mut is_final = vec![false; states.len()];
        for f in finals {
            is_final[f.index()] = true;
        }
        Vpt { alphabet, symbols, kinds, states, initial: initial.into_iter().collect(), is_final, stack, rules, index }
    }
}

impl fmt::Display for Vpt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::vpt::format::serialize_vpt(self))
    }
}

/// One rule as written by a user, before name resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RawRule {
    pub line: Option<usize>,
    pub source: String,
    pub symbol: String,
    pub output: String,
    pub action: RawAction,
    pub target: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum RawAction {
    Push(String),
    Pop(String),
    Internal,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct RawList {
    pub line: Option<usize>,
    pub items: Vec<String>,
}

/// Collects declarations by name and validates them in [`VptBuilder::build`].
///
/// ```
/// use vpstream::Vpt;
///
/// let vpt = Vpt::builder()
///     .calls(["c"])
///     .returns(["r"])
///     .states(["q0", "q1"])
///     .initial(["q0"])
///     .finals(["q1"])
///     .stack(["g"])
///     .push("q0", "c", "a", "g", "q0")
///     .pop("q0", "r", "", "g", "q1")
///     .build()
///     .unwrap();
/// assert_eq!(vpt.metrics().n, 2);
/// ```
#[derive(Clone, Debug, Default)]
pub struct VptBuilder {
    pub(crate) calls: RawList,
    pub(crate) returns: RawList,
    pub(crate) internals: RawList,
    pub(crate) states: Option<RawList>,
    pub(crate) initial: RawList,
    pub(crate) finals: RawList,
    pub(crate) stack: RawList,
    pub(crate) rules: Vec<RawRule>,
}

fn raw_list<I>(items: I) -> RawList
where
    I: IntoIterator,
    I::Item: Into<String>,
{
    RawList { line: None, items: items.into_iter().map(Into::into).collect() }
}

impl VptBuilder {
    pub fn calls<I: IntoIterator>(mut self, items: I) -> Self
    where
        I::Item: Into<String>,
    {
        self.calls = raw_list(items);
        self
    }

    pub fn returns<I: IntoIterator>(mut self, items: I) -> Self
    where
        I::Item: Into<String>,
    {
        self.returns = raw_list(items);
        self
    }

    pub fn internals<I: IntoIterator>(mut self, items: I) -> Self
    where
        I::Item: Into<String>,
    {
        self.internals = raw_list(items);
        self
    }

    pub fn states<I: IntoIterator>(mut self, items: I) -> Self
    where
        I::Item: Into<String>,
    {
        self.states = Some(raw_list(items));
        self
    }

    pub fn initial<I: IntoIterator>(mut self, items: I) -> Self
    where
        I::Item: Into<String>,
    {
        self.initial = raw_list(items);
        self
    }

    pub fn finals<I: IntoIterator>(mut self, items: I) -> Self
    where
        I::Item: Into<String>,
    {
        self.finals = raw_list(items);
        self
    }

    pub fn stack<I: IntoIterator>(mut self, items: I) -> Self
    where
        I::Item: Into<String>,
    {
        self.stack = raw_list(items);
        self
    }

    /// Adds a call rule; `output` lists the emitted characters, `""` for ε.
    pub fn push(self, source: &str, symbol: &str, output: &str, gamma: &str, target: &str) -> Self {
        self.rule(source, symbol, output, RawAction::Push(gamma.into()), target)
    }

    pub fn pop(self, source: &str, symbol: &str, output: &str, gamma: &str, target: &str) -> Self {
        self.rule(source, symbol, output, RawAction::Pop(gamma.into()), target)
    }

    pub fn internal(self, source: &str, symbol: &str, output: &str, target: &str) -> Self {
        self.rule(source, symbol, output, RawAction::Internal, target)
    }

    fn rule(mut self, source: &str, symbol: &str, output: &str, action: RawAction, target: &str) -> Self {
        self.rules.push(RawRule {
            line: None,
            source: source.into(),
            symbol: symbol.into(),
            output: output.into(),
            action,
            target: target.into(),
        });
        self
    }

    pub fn build(self) -> Result<Vpt, VptError> {
        let mut errors = Vec::new();
        let mut report = |line: Option<usize>, error: ValidationError| errors.push(Diagnostic { line, error });

        let alphabet = match StructuredAlphabet::new(
            self.calls.items.iter().cloned(),
            self.returns.items.iter().cloned(),
            self.internals.items.iter().cloned(),
        ) {
            Ok(a) => a,
            Err(e) => {
                let line = self.calls.line.or(self.returns.line).or(self.internals.line);
                report(line, ValidationError::Alphabet(e));
                return Err(VptError::Invalid(errors));
            }
        };

        let states_decl = self.states.unwrap_or_default();
        if states_decl.items.is_empty() {
            report(states_decl.line, ValidationError::NoStates);
        }
        let states: Vec<String> = states_decl.items.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let stack: Vec<String> = self.stack.items.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        for name in states.iter().chain(&stack) {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                report(states_decl.line, ValidationError::BadName(name.clone()));
            }
        }
        let lookup = |list: &[String], name: &str| list.binary_search_by(|s| s.as_str().cmp(name)).ok().map(|i| i as u32);
        let (symbols, kinds): (Vec<String>, Vec<SymbolKind>) =
            alphabet.symbols().into_iter().map(|(s, k)| (s.to_string(), k)).unzip();

        let resolve_states = |list: &RawList, report: &mut dyn FnMut(Option<usize>, ValidationError)| {
            let mut out = BTreeSet::new();
            for name in &list.items {
                match lookup(&states, name) {
                    Some(i) => {
                        out.insert(StateId(i));
                    }
                    None => report(list.line, ValidationError::UndeclaredState(name.clone())),
                }
            }
            out
        };
        let initial = resolve_states(&self.initial, &mut report);
        let finals = resolve_states(&self.finals, &mut report);

        let mut rules = Vec::with_capacity(self.rules.len());
        for raw in &self.rules {
            let line = raw.line;
            let source = lookup(&states, &raw.source).map(StateId);
            let target = lookup(&states, &raw.target).map(StateId);
            for (name, id) in [(&raw.source, source), (&raw.target, target)] {
                if id.is_none() {
                    report(line, ValidationError::UndeclaredState(name.clone()));
                }
            }
            let symbol = lookup(&symbols, &raw.symbol).map(SymbolId);
            if symbol.is_none() {
                report(line, ValidationError::UndeclaredSymbol(raw.symbol.clone()));
            }
            if let Some(bad) = raw.output.chars().find(|c| c.is_whitespace()) {
                report(line, ValidationError::BadOutput(bad));
            }
            let (expected, action) = match &raw.action {
                RawAction::Push(g) => (SymbolKind::Call, lookup(&stack, g).map(|i| Action::Push(StackId(i))).ok_or(g)),
                RawAction::Pop(g) => (SymbolKind::Return, lookup(&stack, g).map(|i| Action::Pop(StackId(i))).ok_or(g)),
                RawAction::Internal => (SymbolKind::Internal, Ok(Action::Internal)),
            };
            let action = match action {
                Ok(a) => Some(a),
                Err(g) => {
                    report(line, ValidationError::UndeclaredStackSymbol(g.clone()));
                    None
                }
            };
            if let Some(sym) = symbol {
                let found = kinds[sym.index()];
                if found != expected {
                    report(line, ValidationError::WrongKind { symbol: raw.symbol.clone(), expected, found });
                }
            }
            if let (Some(source), Some(symbol), Some(action), Some(target)) = (source, symbol, action, target) {
                rules.push(Rule { source, symbol, action, output: raw.output.chars().collect(), target });
            }
        }
        if !errors.is_empty() {
            return Err(VptError::Invalid(errors));
        }
        Ok(Vpt::from_parts(alphabet, states, initial, finals, stack, rules))
    }
}

/// A state together with its stack, bottom first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub stack: Vec<StackId>,
}

impl Configuration {
    pub fn show(&self, vpt: &Vpt) -> String {
        format!("({}, {})", vpt.state_name(self.state), vpt.show_stack(&self.stack))
    }
}

/// A configuration with the output produced so far that has not been emitted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DConfiguration {
    pub state: StateId,
    pub stack: Vec<StackId>,
    pub residual: Word,
}

impl DConfiguration {
    pub fn show(&self, vpt: &Vpt) -> String {
        format!("({}, {}, {})", vpt.state_name(self.state), vpt.show_stack(&self.stack), show(&self.residual))
    }
}
