//! Four small example machines, as `.vpt` sources.
//!
//! * [`fig3_plain`]: c^n r^n ↦ a^n c^n (n ≥ 2) and c c^n r^n r' ↦ b^(n+1) c^(n+1) (n ≥ 1).
//! * [`fig3_full`]: the same machine with the two rules that close the loop `c r`.
//! * [`fig4`]: c^n r^n ↦ a^n c^n and c^n r' r^(n−2) r' ↦ b^n c^n (n ≥ 2).
//! * [`fig2_t1`]: calls guess a letter that the matching return checks.

use crate::vpt::{parse_vpt, Vpt};

pub const FIG3_PLAIN: &str = include_str!("../machines/fig3_plain.vpt");
pub const FIG3_FULL: &str = include_str!("../machines/fig3_full.vpt");
pub const FIG4: &str = include_str!("../machines/fig4.vpt");
pub const FIG2_T1: &str = include_str!("../machines/fig2_t1.vpt");

fn load(source: &str) -> Vpt {
    parse_vpt(source).expect("bundled machines are valid")
}

pub fn fig3_plain() -> Vpt {
    load(FIG3_PLAIN)
}

pub fn fig3_full() -> Vpt {
    load(FIG3_FULL)
}

pub fn fig4() -> Vpt {
    load(FIG4)
}

pub fn fig2_t1() -> Vpt {
    load(FIG2_T1)
}

/// All bundled machines with their file stems.
pub fn all() -> Vec<(&'static str, Vpt)> {
    vec![("fig2_t1", fig2_t1()), ("fig3_plain", fig3_plain()), ("fig3_full", fig3_full()), ("fig4", fig4())]
}

/// Looks a bundled machine up by file stem.
pub fn by_name(name: &str) -> Option<Vpt> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, v)| v)
}
