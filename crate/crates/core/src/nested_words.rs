//! Structured alphabets and nested-word scanning.
//!
//! A structured alphabet splits its symbols into calls, returns and
//! internals. Reading a word left to right, a call opens a level, a return
//! closes one and an internal symbol leaves the level unchanged.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{AlphabetError, UnknownSymbol};

/// The partition class of a symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Call,
    Return,
    Internal,
    Unknown,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::Call => "call",
            SymbolKind::Return => "return",
            SymbolKind::Internal => "internal",
            SymbolKind::Unknown => "unknown",
        })
    }
}

/// Three pairwise disjoint sets of whitespace-free symbol tokens.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructuredAlphabet {
    calls: BTreeSet<String>,
    returns: BTreeSet<String>,
    internals: BTreeSet<String>,
}

fn check_token(token: &str) -> Result<(), AlphabetError> {
    if token.is_empty() || token.chars().any(char::is_whitespace) {
        return Err(AlphabetError::BadToken(token.to_string()));
    }
    Ok(())
}

impl StructuredAlphabet {
    pub fn new<C, R, I>(calls: C, returns: R, internals: I) -> Result<Self, AlphabetError>
    where
        C: IntoIterator,
        C::Item: Into<String>,
        R: IntoIterator,
        R::Item: Into<String>,
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let calls: BTreeSet<String> = calls.into_iter().map(Into::into).collect();
        let returns: BTreeSet<String> = returns.into_iter().map(Into::into).collect();
        let internals: BTreeSet<String> = internals.into_iter().map(Into::into).collect();
        for token in calls.iter().chain(&returns).chain(&internals) {
            check_token(token)?;
        }
        for (a, b) in [(&calls, &returns), (&calls, &internals), (&returns, &internals)] {
            if let Some(shared) = a.intersection(b).next() {
                return Err(AlphabetError::Overlap(shared.clone()));
            }
        }
        Ok(StructuredAlphabet { calls, returns, internals })
    }

    pub fn calls(&self) -> &BTreeSet<String> {
        &self.calls
    }

    pub fn returns(&self) -> &BTreeSet<String> {
        &self.returns
    }

    pub fn internals(&self) -> &BTreeSet<String> {
        &self.internals
    }

    /// All symbols with their kinds, sorted by token.
    pub fn symbols(&self) -> Vec<(&str, SymbolKind)> {
        let mut all: Vec<(&str, SymbolKind)> = self
            .calls
            .iter()
            .map(|s| (s.as_str(), SymbolKind::Call))
            .chain(self.returns.iter().map(|s| (s.as_str(), SymbolKind::Return)))
            .chain(self.internals.iter().map(|s| (s.as_str(), SymbolKind::Internal)))
            .collect();
        all.sort();
        all
    }

    pub fn len(&self) -> usize {
        self.calls.len() + self.returns.len() + self.internals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn classify(&self, symbol: &str) -> SymbolKind {
        classify(symbol, self)
    }
}

/// Returns the partition class of `symbol`, or [`SymbolKind::Unknown`].
pub fn classify(symbol: &str, alphabet: &StructuredAlphabet) -> SymbolKind {
    if alphabet.calls.contains(symbol) {
        SymbolKind::Call
    } else if alphabet.returns.contains(symbol) {
        SymbolKind::Return
    } else if alphabet.internals.contains(symbol) {
        SymbolKind::Internal
    } else {
        SymbolKind::Unknown
    }
}

/// Height bookkeeping after reading a prefix.
///
/// A return read at current height 0 clears `valid` for good; the height
/// stays at 0 so that scanning can continue.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ScanState {
    pub position: usize,
    pub hc: usize,
    pub h: usize,
    pub valid: bool,
}

impl ScanState {
    pub fn new() -> Self {
        ScanState { position: 0, hc: 0, h: 0, valid: true }
    }

    /// Advances by one symbol of the given kind.
    ///
    /// # Panics
    ///
    /// Panics on [`SymbolKind::Unknown`]; use [`ScanState::feed`] to get an error.
    pub fn advance(&mut self, kind: SymbolKind) {
        self.position += 1;
        match kind {
            SymbolKind::Call => {
                self.hc += 1;
                self.h = self.h.max(self.hc);
            }
            SymbolKind::Return => {
                if self.hc == 0 {
                    self.valid = false;
                } else {
                    self.hc -= 1;
                }
            }
            SymbolKind::Internal => {}
            SymbolKind::Unknown => panic!("cannot advance on an unknown symbol"),
        }
    }

    pub fn feed(&mut self, symbol: &str, alphabet: &StructuredAlphabet) -> Result<(), UnknownSymbol> {
        match classify(symbol, alphabet) {
            SymbolKind::Unknown => Err(UnknownSymbol { symbol: symbol.to_string(), position: self.position }),
            kind => {
                self.advance(kind);
                Ok(())
            }
        }
    }

    pub fn is_well_nested(&self) -> bool {
        self.valid && self.hc == 0
    }
}

/// Continues scanning from `state`.
pub fn scan_from<S: AsRef<str>>(
    mut state: ScanState,
    word: &[S],
    alphabet: &StructuredAlphabet,
) -> Result<ScanState, UnknownSymbol> {
    for symbol in word {
        state.feed(symbol.as_ref(), alphabet)?;
    }
    Ok(state)
}

pub fn scan<S: AsRef<str>>(word: &[S], alphabet: &StructuredAlphabet) -> Result<ScanState, UnknownSymbol> {
    scan_from(ScanState::new(), word, alphabet)
}

pub fn is_well_nested<S: AsRef<str>>(word: &[S], alphabet: &StructuredAlphabet) -> Result<bool, UnknownSymbol> {
    Ok(scan(word, alphabet)?.is_well_nested())
}

/// Scans a sequence of kinds directly.
pub fn scan_kinds<I: IntoIterator<Item = SymbolKind>>(kinds: I) -> ScanState {
    let mut state = ScanState::new();
    for kind in kinds {
        state.advance(kind);
    }
    state
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cr() -> StructuredAlphabet {
        StructuredAlphabet::new(["c"], ["r", "r'"], ["a", "b"]).unwrap()
    }

    fn w(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn classify_by_membership() {
        let alpha = cr();
        assert_eq!(classify("c", &alpha), SymbolKind::Call);
        assert_eq!(classify("r'", &alpha), SymbolKind::Return);
        assert_eq!(classify("a", &alpha), SymbolKind::Internal);
        assert_eq!(classify("z", &alpha), SymbolKind::Unknown);
    }

    #[test]
    fn alphabet_rejects_overlap_and_bad_tokens() {
        assert!(matches!(StructuredAlphabet::new(["c"], ["c"], Vec::<String>::new()), Err(AlphabetError::Overlap(_))));
        assert!(matches!(StructuredAlphabet::new(["c d"], ["r"], Vec::<String>::new()), Err(AlphabetError::BadToken(_))));
        assert!(matches!(StructuredAlphabet::new([""], ["r"], Vec::<String>::new()), Err(AlphabetError::BadToken(_))));
    }

    #[test]
    fn heights_of_sample_words() {
        let alpha = cr();
        let s = scan(&w("c r c r c c"), &alpha).unwrap();
        assert_eq!((s.hc, s.h, s.valid), (2, 2, true));
        let s = scan(&w("c c r c r r"), &alpha).unwrap();
        assert_eq!((s.hc, s.h, s.valid), (0, 2, true));
        let s = scan::<&str>(&[], &alpha).unwrap();
        assert_eq!((s.hc, s.h, s.valid), (0, 0, true));
        let s = scan(&w("r c"), &alpha).unwrap();
        assert!(!s.valid);
    }

    #[test]
    fn well_nestedness() {
        let alpha = cr();
        assert!(is_well_nested(&w("c c r r"), &alpha).unwrap());
        assert!(!is_well_nested(&w("c r c r c c"), &alpha).unwrap());
        assert!(is_well_nested(&w("a b"), &alpha).unwrap());
        assert_eq!(scan(&w("c z"), &alpha).unwrap_err().position, 1);
    }

    fn kind_strategy() -> impl Strategy<Value = SymbolKind> {
        prop_oneof![Just(SymbolKind::Call), Just(SymbolKind::Return), Just(SymbolKind::Internal)]
    }

    proptest! {
        #[test]
        fn prefix_heights_are_monotone(kinds in prop::collection::vec(kind_strategy(), 0..40)) {
            let full = scan_kinds(kinds.iter().copied());
            prop_assert!(full.hc <= full.h && full.h <= full.position);
            let mut state = ScanState::new();
            let mut seen_invalid = false;
            for &k in &kinds {
                state.advance(k);
                prop_assert!(state.hc <= state.h && state.h <= full.h);
                if seen_invalid { prop_assert!(!state.valid); }
                seen_invalid |= !state.valid;
            }
        }

        #[test]
        fn bracketing_preserves_well_nestedness(kinds in prop::collection::vec(kind_strategy(), 0..30)) {
            let inner = scan_kinds(kinds.iter().copied()).is_well_nested();
            let wrapped = scan_kinds(
                std::iter::once(SymbolKind::Call).chain(kinds.iter().copied()).chain(std::iter::once(SymbolKind::Return)),
            ).is_well_nested();
            // Only this direction holds: `r c` is not well-nested but `c r c r` is.
            prop_assert!(!inner || wrapped);
        }

        #[test]
        fn scanning_is_incremental(
            u in prop::collection::vec(kind_strategy(), 0..20),
            v in prop::collection::vec(kind_strategy(), 0..20),
        ) {
            let mut split = scan_kinds(u.iter().copied());
            prop_assume!(split.valid);
            for &k in &v { split.advance(k); }
            let joined = scan_kinds(u.iter().chain(&v).copied());
            prop_assert_eq!(split, joined);
        }
    }
}
