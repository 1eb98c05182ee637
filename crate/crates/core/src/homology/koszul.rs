//! The Koszul complex `M ⊗ Λ(e_1..e_N)` with
//! `∂(e_S ⊗ m) = Σ_{s∈S} (-1)^{pos(s,S)} e_{S∖s} ⊗ δ(w_s)m`,
//! which computes `Tor^W_p(M, Z)`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::action::{BlockKey, ModuleAction};
use super::TorTable;
use crate::abelian::{homology_from_factors, Factors, FgAbelianGroup, SparseMatrix};
use crate::monomial::{bits, Monomial};

/// Basis element `e_S ⊗ m`; `S` is a bitmask over the w-variables.
pub type KoszulBasis = (u64, Monomial);

pub struct KoszulComplex<'a> {
    action: &'a ModuleAction,
}

impl<'a> KoszulComplex<'a> {
    pub fn new(action: &'a ModuleAction) -> Self {
        KoszulComplex { action }
    }

    pub fn length(&self) -> usize {
        self.action.w_count()
    }

    fn mask_degree(&self, s: u64) -> u32 {
        bits(s).map(|k| self.action.w_degree(k)).sum()
    }

    fn masks(&self) -> impl Iterator<Item = u64> {
        0..(1u64 << self.length())
    }

    /// Basis of the term in homological degree `p`, internal degree `q`.
    pub fn term_basis(&self, p: usize, q: u32) -> Vec<KoszulBasis> {
        let mut out = Vec::new();
        for s in self.masks().filter(|s| s.count_ones() as usize == p) {
            let ds = self.mask_degree(s);
            if ds <= q {
                out.extend(self.action.basis().basis(q - ds).iter().map(|m| (s, m.clone())));
            }
        }
        out
    }

    pub fn term_rank(&self, p: usize, q: u32) -> usize {
        self.masks()
            .filter(|s| s.count_ones() as usize == p)
            .map(|s| {
                let ds = self.mask_degree(s);
                if ds <= q {
                    self.action.basis().basis(q - ds).len()
                } else {
                    0
                }
            })
            .sum()
    }

    pub fn boundary(&self, s: u64, m: &Monomial) -> Vec<(KoszulBasis, i64)> {
        let mut out = Vec::new();
        for k in bits(s) {
            let pos = (s & ((1u64 << k) - 1)).count_ones();
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            for (t, c) in self.action.apply(k, m) {
                out.push(((s & !(1u64 << k), t), sign * c));
            }
        }
        out
    }

    /// `∂ : C_{p,q} → C_{p-1,q}` on the bases of [`Self::term_basis`].
    pub fn differential(&self, p: usize, q: u32) -> SparseMatrix {
        assert!(p >= 1, "no differential out of p = 0");
        let source = self.term_basis(p, q);
        let target = self.term_basis(p - 1, q);
        let index: HashMap<&KoszulBasis, usize> = target.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let columns = source
            .iter()
            .map(|(s, m)| {
                self.boundary(*s, m)
                    .into_iter()
                    .map(|(b, c)| (index[&b], c))
                    .collect()
            })
            .collect();
        SparseMatrix::from_columns(target.len(), columns)
    }
}

/// Tor table with the Koszul term ranks, for Euler-characteristic checks.
#[derive(Clone, Debug)]
pub struct KoszulTor {
    pub tor: TorTable,
    pub term_ranks: BTreeMap<(usize, u32), usize>,
}

impl KoszulTor {
    /// Degrees where `Σ (-1)^p rank C_{p,q} ≠ Σ (-1)^p rank Tor_{p,q}`.
    pub fn euler_mismatches(&self) -> Vec<u32> {
        (0..=self.tor.d_max)
            .filter(|&q| {
                let terms: i64 = (0..=self.tor.p_max)
                    .map(|p| sign(p) * self.term_ranks[&(p, q)] as i64)
                    .sum();
                let tor: i64 = (0..=self.tor.p_max)
                    .map(|p| sign(p) * self.tor.get(p, q).map_or(0, |g| g.free_rank()) as i64)
                    .sum();
                terms != tor
            })
            .collect()
    }
}

fn sign(p: usize) -> i64 {
    if p % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Tor via the Koszul complex, one direct-summand block at a time.
pub fn koszul_tor(action: &ModuleAction, d_max: u32) -> KoszulTor {
    assert!(d_max <= action.d_max(), "action built only up to degree {}", action.d_max());
    let cx = KoszulComplex::new(action);
    let n = cx.length();

    let pieces: Vec<Vec<(BlockKey, u32, KoszulBasis)>> = cx
        .masks()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| {
            let ds = cx.mask_degree(s);
            let mut counts = vec![0u32; action.class_count()];
            for k in bits(s) {
                counts[action.class_of_w(k)] += 1;
            }
            let mut out = Vec::new();
            for d in 0..=d_max.saturating_sub(ds) {
                if ds > d_max {
                    break;
                }
                for m in action.basis().basis(d) {
                    out.push((action.block_key(&counts, m), ds + d, (s, m.clone())));
                }
            }
            out
        })
        .collect();
    let mut blocks: HashMap<BlockKey, (u32, Vec<KoszulBasis>)> = HashMap::new();
    for (key, q, b) in pieces.into_iter().flatten() {
        blocks.entry(key).or_insert_with(|| (q, Vec::new())).1.push(b);
    }

    let results: Vec<(u32, Vec<usize>, Vec<FgAbelianGroup>)> = blocks
        .into_par_iter()
        .map(|(_, (q, elems))| {
            let mut by_p: Vec<Vec<KoszulBasis>> = vec![Vec::new(); n + 1];
            for b in elems {
                by_p[b.0.count_ones() as usize].push(b);
            }
            for level in &mut by_p {
                level.sort();
            }
            let mut factors: Vec<Factors> = vec![Factors::default(); n + 2];
            for p in 1..=n {
                if by_p[p].is_empty() || by_p[p - 1].is_empty() {
                    continue;
                }
                let index: HashMap<&KoszulBasis, usize> =
                    by_p[p - 1].iter().enumerate().map(|(i, b)| (b, i)).collect();
                let columns = by_p[p]
                    .iter()
                    .map(|(s, m)| {
                        cx.boundary(*s, m)
                            .into_iter()
                            .map(|(b, c)| (index[&b], c))
                            .collect()
                    })
                    .collect();
                factors[p] = SparseMatrix::from_columns(by_p[p - 1].len(), columns).invariant_factors();
            }
            let ranks: Vec<usize> = by_p.iter().map(Vec::len).collect();
            let tor = (0..=n)
                .map(|p| homology_from_factors(ranks[p], &factors[p + 1], &factors[p]))
                .collect();
            (q, ranks, tor)
        })
        .collect();

    let mut tor = TorTable::zero(n, d_max);
    let mut term_ranks: BTreeMap<(usize, u32), usize> = (0..=n)
        .flat_map(|p| (0..=d_max).map(move |q| ((p, q), 0)))
        .collect();
    for (q, ranks, groups) in results {
        for p in 0..=n {
            *term_ranks.get_mut(&(p, q)).unwrap() += ranks[p];
            if !groups[p].is_zero() {
                tor.add(p, q, &groups[p]);
            }
        }
    }
    KoszulTor { tor, term_ranks }
}
