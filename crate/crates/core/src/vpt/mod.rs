//! Visibly pushdown transducers: representation, text format, reference
//! semantics, reduction and bounded-height flattening.

pub mod format;
pub mod fst;
pub mod machine;
pub mod naive;
pub mod reduce;
pub mod summary;

pub use format::{parse_vpt, serialize_vpt};
pub use fst::{fst_of, fst_of_with_budget, BoundedFst, FstMachine, FstRule};
pub use machine::{
    Action, Configuration, DConfiguration, MachineMetrics, RuleId, Rule, StackId, StateId, SymbolId, Vpt, VptBuilder,
};
pub use naive::{
    check_functional_bounded, dconfigs_after, enumerate_domain, explore, initial_dconfigs, naive_eval, update_dconfigs,
    FunctionalCheck, NaiveOutcome,
};
pub use reduce::{is_co_accessible, is_reduced, reduce, reduce_with_origins, Reduction};
pub use summary::{well_matched_summary, WellMatched};
