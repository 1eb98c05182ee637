//! Tor over the difference-variable ring `W`, by the Koszul complex and by
//! the bar construction, plus the comparison model built from degree-2
//! classes.

mod action;
mod bar;
mod koszul;
mod zmodel;

use std::collections::{BTreeMap, BTreeSet};

use crate::abelian::FgAbelianGroup;
use crate::monomial::HilbertFunction;

pub use action::{build_action, LinearForm, ModuleAction, Vector};
pub use bar::{bar_differential, bar_tor, BarComplex, BarElement, BarWord};
pub use koszul::{koszul_tor, KoszulComplex, KoszulTor};
pub use zmodel::{z_model_compare, ZModelReport};

/// `Tor_p(M, Z)` in internal degree `q`, for `p <= p_max`, `q <= d_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorTable {
    pub p_max: usize,
    pub d_max: u32,
    entries: BTreeMap<(usize, u32), FgAbelianGroup>,
    /// Entries whose value the truncation cannot certify.
    invalid: BTreeSet<(usize, u32)>,
}

impl TorTable {
    pub(crate) fn zero(p_max: usize, d_max: u32) -> Self {
        let entries = (0..=p_max)
            .flat_map(|p| (0..=d_max).map(move |q| ((p, q), FgAbelianGroup::zero())))
            .collect();
        TorTable {
            p_max,
            d_max,
            entries,
            invalid: BTreeSet::new(),
        }
    }

    pub(crate) fn add(&mut self, p: usize, q: u32, g: &FgAbelianGroup) {
        let e = self.entries.get_mut(&(p, q)).expect("entry within bounds");
        *e = e.direct_sum(g);
    }

    pub(crate) fn mark_invalid(&mut self, p: usize, q: u32) {
        self.invalid.insert((p, q));
    }

    /// `None` when out of range or not certified by the truncation.
    pub fn get(&self, p: usize, q: u32) -> Option<&FgAbelianGroup> {
        if self.invalid.contains(&(p, q)) {
            return None;
        }
        self.entries.get(&(p, q))
    }

    pub fn is_valid(&self, p: usize, q: u32) -> bool {
        p <= self.p_max && q <= self.d_max && !self.invalid.contains(&(p, q))
    }

    pub fn valid_entries(&self) -> impl Iterator<Item = ((usize, u32), &FgAbelianGroup)> {
        self.entries
            .iter()
            .filter(|(k, _)| !self.invalid.contains(k))
            .map(|(&k, g)| (k, g))
    }

    /// Entries that contradict `Tor_p = 0` for `p >= 1` and `Tor_0` free of
    /// rank `expected`; empty when the table is concentrated as predicted.
    pub fn concentration_failures(&self, expected: &HilbertFunction) -> Vec<String> {
        let mut out = Vec::new();
        for ((p, q), g) in self.valid_entries() {
            if p == 0 {
                if q > expected.d_max() {
                    continue;
                }
                if !g.is_free() || g.free_rank() as u64 != expected.rank(q) {
                    out.push(format!("Tor_0 in degree {q} is {g}, expected Z^{}", expected.rank(q)));
                }
            } else if !g.is_zero() {
                out.push(format!("Tor_{p} in degree {q} is {g}"));
            }
        }
        out
    }

    /// Valid entries on which the two tables differ. Entries of `other`
    /// beyond its `p_max` count as zero; degrees beyond its `d_max` are
    /// skipped.
    pub fn disagreements(&self, other: &TorTable) -> Vec<(usize, u32)> {
        self.valid_entries()
            .filter(|&((p, q), g)| {
                if q > other.d_max {
                    false
                } else if p > other.p_max {
                    !g.is_zero()
                } else {
                    other.is_valid(p, q) && other.get(p, q) != Some(g)
                }
            })
            .map(|(k, _)| k)
            .collect()
    }
}
