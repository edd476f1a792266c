//! Streaming evaluation of visibly pushdown transducers over nested words,
//! and checks for how much memory such an evaluation needs.

pub mod bundled;
pub mod delay;
pub mod error;
pub mod eval;
pub mod nested_words;
pub mod streamability;
pub mod vpt;

pub use delay::{delta, delta_extend, delay_mismatch, lcp, DelayPair, Word};
pub use nested_words::{classify, is_well_nested, scan, ScanState, StructuredAlphabet, SymbolKind};
pub use vpt::{parse_vpt, reduce, serialize_vpt, Vpt};
