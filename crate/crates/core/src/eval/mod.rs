//! Online evaluation with earliest output.
//!
//! After each input symbol the evaluator has written out the longest
//! common prefix of the outputs of all runs still alive, and keeps only
//! what remains of each run in an [`EvalDag`]. The machine must be
//! functional and reduced (see [`crate::vpt::reduce`]).
//!
//! ```
//! use vpstream::{bundled, reduce};
//! use vpstream::eval::{Evaluator, Outcome};
//!
//! let vpt = reduce(&bundled::fig4());
//! let mut ev = Evaluator::start(&vpt).unwrap();
//! let mut out = String::new();
//! for token in ["c", "c", "r"] {
//!     out.extend(ev.step_token(token).unwrap());
//! }
//! assert_eq!(out, "aac");
//! out.extend(ev.step_token("r").unwrap());
//! let Outcome::Accept(rest) = ev.finish().unwrap() else { panic!() };
//! assert!(rest.is_empty());
//! assert_eq!(out, "aacc");
//! ```

pub mod dag;

use crate::delay::Word;
use crate::error::EvalError;
use crate::nested_words::{ScanState, SymbolKind};
use crate::vpt::machine::{SymbolId, Vpt};

pub use dag::{Edge, EvalDag, Layer, NodeKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Running,
    Rejected,
    Finished,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Accepted; carries the output not emitted yet.
    Accept(Word),
    Reject,
}

/// Memory figures of the current DAG.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MemoryReport {
    pub position: usize,
    pub symbol: Option<String>,
    pub hc: usize,
    /// Nodes other than the root.
    pub node_count: usize,
    pub edge_count: usize,
    pub label_tokens_total: usize,
    /// Longest root-to-leaf label length.
    pub out_neq: usize,
    pub emitted_total: usize,
    pub branches: u64,
    pub max_layer_nodes: usize,
    pub levels: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Factorize and emit after every symbol. Without it nothing is emitted
    /// before the end of the input.
    pub factorize: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { factorize: true }
    }
}

/// The state of one streaming evaluation.
#[derive(Clone, Debug)]
pub struct Evaluator<'a> {
    vpt: &'a Vpt,
    dag: EvalDag,
    scan: ScanState,
    emitted: usize,
    status: Status,
    options: EvalOptions,
    last_symbol: Option<SymbolId>,
    rejected_at: Option<usize>,
}

impl<'a> Evaluator<'a> {
    pub fn start(vpt: &'a Vpt) -> Result<Self, EvalError> {
        Self::with_options(vpt, EvalOptions::default())
    }

    pub fn with_options(vpt: &'a Vpt, options: EvalOptions) -> Result<Self, EvalError> {
        if vpt.initial().is_empty() {
            return Err(EvalError::NoInitialStates);
        }
        let mut ev = Evaluator {
            vpt,
            dag: EvalDag::new(vpt),
            scan: ScanState::new(),
            emitted: 0,
            status: Status::Running,
            options,
            last_symbol: None,
            rejected_at: None,
        };
        if options.factorize {
            ev.emitted += ev.dag.factorize_and_emit().len();
        }
        Ok(ev)
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn dag(&self) -> &EvalDag {
        &self.dag
    }

    pub fn scan(&self) -> ScanState {
        self.scan
    }

    pub fn emitted_len(&self) -> usize {
        self.emitted
    }

    /// 0-based position of the symbol that caused the rejection.
    pub fn rejected_at(&self) -> Option<usize> {
        self.rejected_at
    }

    /// Reads one symbol and returns what can be emitted now.
    pub fn step(&mut self, a: SymbolId) -> Result<Word, EvalError> {
        if self.status != Status::Running {
            return Err(EvalError::NotRunning);
        }
        let position = self.scan.position;
        let kind = self.vpt.kind(a);
        self.scan.advance(kind);
        self.last_symbol = Some(a);
        let result = match kind {
            SymbolKind::Call => self.dag.update_call(a, self.vpt),
            SymbolKind::Return => self.dag.update_return(a, self.vpt),
            SymbolKind::Internal => self.dag.update_internal(a, self.vpt),
            SymbolKind::Unknown => unreachable!("interned symbols are classified"),
        };
        match result {
            Err(EvalError::PopOnEmpty) => {
                self.reject(position);
                return Ok(Word::new());
            }
            Err(e) => {
                self.reject(position);
                return Err(e);
            }
            Ok(()) => {}
        }
        if self.dag.is_dead() {
            self.reject(position);
            return Ok(Word::new());
        }
        if !self.options.factorize {
            return Ok(Word::new());
        }
        let out = self.dag.factorize_and_emit();
        self.emitted += out.len();
        Ok(out)
    }

    /// Like [`Evaluator::step`] for a symbol given by name.
    pub fn step_token(&mut self, token: &str) -> Result<Word, EvalError> {
        match self.vpt.symbol(token) {
            Some(a) => self.step(a),
            None => {
                let position = self.scan.position;
                self.reject(position);
                Err(EvalError::UnknownSymbol(crate::error::UnknownSymbol { symbol: token.to_string(), position }))
            }
        }
    }

    fn reject(&mut self, position: usize) {
        self.status = Status::Rejected;
        self.rejected_at = Some(position);
    }

    /// Ends the input.
    pub fn finish(&mut self) -> Result<Outcome, EvalError> {
        if self.status != Status::Running {
            return Ok(Outcome::Reject);
        }
        let labels = self.dag.final_labels(self.vpt);
        let outcome = match labels.split_first() {
            None => {
                self.rejected_at = Some(self.scan.position);
                self.status = Status::Rejected;
                return Ok(Outcome::Reject);
            }
            Some((first, rest)) => {
                if let Some(other) = rest.iter().find(|l| **l != *first) {
                    return Err(EvalError::Conflict { first: (*first).clone(), second: (*other).clone() });
                }
                Outcome::Accept((*first).clone())
            }
        };
        if let Outcome::Accept(rest) = &outcome {
            self.emitted += rest.len();
        }
        self.status = Status::Finished;
        Ok(outcome)
    }

    pub fn memory_snapshot(&self) -> MemoryReport {
        MemoryReport {
            position: self.scan.position,
            symbol: self.last_symbol.map(|a| self.vpt.symbol_name(a).to_string()),
            hc: self.scan.hc,
            node_count: self.dag.node_count(),
            edge_count: self.dag.edge_count(),
            label_tokens_total: self.dag.label_tokens(),
            out_neq: self.dag.out_neq(),
            emitted_total: self.emitted,
            branches: self.dag.branch_count(),
            max_layer_nodes: self.dag.max_layer_size(),
            levels: self.dag.layers().len(),
        }
    }
}

/// Evaluates a whole word and returns the full output, or `None` on rejection.
pub fn eval_word(vpt: &Vpt, word: &[SymbolId]) -> Result<Option<Word>, EvalError> {
    let mut ev = Evaluator::start(vpt)?;
    let mut out = Word::new();
    for &a in word {
        out.extend(ev.step(a)?);
        if ev.status() == Status::Rejected {
            return Ok(None);
        }
    }
    match ev.finish()? {
        Outcome::Accept(rest) => {
            out.extend(rest);
            Ok(Some(out))
        }
        Outcome::Reject => Ok(None),
    }
}
