//! The three verdicts together.

use thiserror::Error;

use crate::error::StateExplosion;
use crate::vpt::fst::fst_of_with_budget;
use crate::vpt::naive::{check_functional_bounded, FunctionalCheck};
use crate::vpt::Vpt;

use super::fst_twinning::check_fst_twinning;
use super::height::{domain_height_bounded, HeightBound};
use super::htp::check_htp;
use super::mtp::check_mtp;
use super::witness::Witness;
use super::{SearchBounds, Verdict};

/// Largest bounded-height FST built by [`check_bm`].
pub const DEFAULT_FST_BUDGET: usize = 200_000;

/// Decides whether `vpt` can be evaluated with bounded memory.
///
/// `vpt` must be reduced and functional.
pub fn check_bm(vpt: &Vpt) -> Verdict {
    check_bm_with_budget(vpt, DEFAULT_FST_BUDGET)
}

/// [`check_bm`] with a limit on the number of configurations of the
/// bounded-height FST.
pub fn check_bm_with_budget(vpt: &Vpt, max_states: usize) -> Verdict {
    match domain_height_bounded(vpt) {
        HeightBound::Unbounded(w) => Verdict::Violated(Witness::Pump(w)),
        HeightBound::Bounded(h) => match fst_of_with_budget(vpt, h, max_states) {
            Ok(bounded) => check_fst_twinning(&bounded.fst),
            Err(StateExplosion { limit, height }) => {
                Verdict::Unknown(format!("more than {limit} configurations below height {height}"))
            }
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamabilityReport {
    pub bm: Verdict,
    /// The HTP verdict.
    pub hbm: Verdict,
    /// The MTP verdict.
    pub obm: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StreamabilityError {
    #[error("the machine is not functional on input of length {len}")]
    NotFunctional { len: usize },
    #[error("inconsistent verdicts: {0}")]
    InconsistentVerdicts(String),
}

/// Runs all three checks and the consistency check
/// BM ⇒ OBM ⇒ HBM: a violation on a weaker class must come with a
/// violation on every stronger one.
///
/// Functionality is checked on inputs up to `min(max_len, 8)`. `vpt` must
/// be reduced.
pub fn classify_streamability(vpt: &Vpt, bounds: SearchBounds) -> Result<StreamabilityReport, StreamabilityError> {
    if let FunctionalCheck::CounterExample { word, .. } = check_functional_bounded(vpt, bounds.max_len.min(8)) {
        return Err(StreamabilityError::NotFunctional { len: word.len() });
    }
    let report = StreamabilityReport { bm: check_bm(vpt), hbm: check_htp(vpt, bounds), obm: check_mtp(vpt, bounds) };
    check_ladder(&report)?;
    Ok(report)
}

pub(crate) fn check_ladder(r: &StreamabilityReport) -> Result<(), StreamabilityError> {
    let bad = |what: &str| Err(StreamabilityError::InconsistentVerdicts(what.to_string()));
    if r.bm == Verdict::Holds && (r.obm.is_violated() || r.hbm.is_violated()) {
        return bad("BM holds but a weaker property is violated");
    }
    if r.obm == Verdict::Holds && r.hbm.is_violated() {
        return bad("MTP holds but HTP is violated");
    }
    if r.hbm.is_violated() && !r.obm.is_violated() && !matches!(r.obm, Verdict::Unknown(_)) {
        return bad("an HTP witness is an MTP witness, yet MTP has none");
    }
    Ok(())
}
