//! How much memory a streaming evaluation of a VPT needs.
//!
//! Three classes of transductions are distinguished:
//!
//! * **BM** (bounded memory): memory independent of the input. A VPT is BM
//!   iff its domain has bounded height and its restriction to that height,
//!   a finite-state transducer, satisfies the twinning property.
//! * **HBM** (height bounded memory): memory depending on the height of the
//!   input only. Characterized by the horizontal twinning property (HTP).
//! * **OBM** (online bounded memory): memory depending on the current
//!   height of the prefix read so far. Characterized by the matched
//!   twinning property (MTP).
//!
//! The BM check is exact. For HTP and MTP the checks search for a
//! counterexample within [`SearchBounds`] and answer
//! [`Verdict::NoWitnessUpTo`] when there is none. Every
//! [`Verdict::Violated`] carries a witness that was replayed against the
//! machine before being returned.

mod classify;
mod fst_twinning;
mod height;
mod mtp;
mod product;
mod htp;
mod witness;

use std::fmt;

pub use classify::{check_bm, check_bm_with_budget, classify_streamability, StreamabilityError, StreamabilityReport};
pub use fst_twinning::check_fst_twinning;
pub use height::{domain_height_bounded, HeightBound};
pub use htp::check_htp;
pub use mtp::check_mtp;
pub use witness::{replay_fst, replay_pump, replay_twin, FstWitness, PumpWitness, TwinWitness, Witness};

use crate::vpt::Vpt;

/// Which twinning property a [`TwinWitness`] refutes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Htp,
    Mtp,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Htp => "HTP",
            Property::Mtp => "MTP",
        })
    }
}

/// Limits of the bounded witness searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchBounds {
    /// Largest stack height explored.
    pub max_height: usize,
    /// Largest input length explored.
    pub max_len: usize,
    /// Largest delay component tracked; `None` stands for `3·|Q|²·M`.
    pub delay_cap: Option<usize>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_height: 6, max_len: 24, delay_cap: None }
    }
}

impl SearchBounds {
    pub fn new(max_height: usize, max_len: usize) -> Self {
        SearchBounds { max_height, max_len, delay_cap: None }
    }

    /// The delay cap for `vpt`.
    pub fn delay_cap_for(&self, vpt: &Vpt) -> usize {
        self.delay_cap.unwrap_or_else(|| {
            let m = vpt.metrics();
            (3 * m.n * m.n * m.max_output).max(1)
        })
    }
}

impl fmt::Display for SearchBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "height <= {}, length <= {}", self.max_height, self.max_len)?;
        if let Some(cap) = self.delay_cap {
            write!(f, ", delay <= {cap}")?;
        }
        Ok(())
    }
}

/// Runs `search` with length bounds 4, 8, 16, … up to `bounds.max_len`,
/// stopping at the first violation or unknown answer.
///
/// A search bounded by `L` sees every witness of total length `≤ L`, so the
/// shortest witness is the same as with the full bound.
pub(crate) fn deepening(bounds: SearchBounds, mut search: impl FnMut(SearchBounds) -> Verdict) -> Verdict {
    let mut len = bounds.max_len.min(4);
    loop {
        let verdict = search(SearchBounds { max_len: len, ..bounds });
        if len >= bounds.max_len || !matches!(verdict, Verdict::NoWitnessUpTo(_)) {
            return verdict;
        }
        len = (len * 2).min(bounds.max_len);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated(Witness),
    NoWitnessUpTo(SearchBounds),
    /// The check could not finish; the string says why.
    Unknown(String),
}

impl Verdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Violated(w) => Some(w),
            _ => None,
        }
    }

    /// One-word summary: `Holds`, `Violated`, `NoWitnessUpTo` or `Unknown`.
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds => "Holds",
            Verdict::Violated(_) => "Violated",
            Verdict::NoWitnessUpTo(_) => "NoWitnessUpTo",
            Verdict::Unknown(_) => "Unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("Holds"),
            Verdict::Violated(w) => write!(f, "Violated ({})", w.kind()),
            Verdict::NoWitnessUpTo(b) => write!(f, "NoWitnessUpTo ({b})"),
            Verdict::Unknown(why) => write!(f, "Unknown ({why})"),
        }
    }
}
