//! Finitely generated (graded) abelian groups and the integer linear algebra
//! that computes them.

mod matrix;
mod snf;
mod sparse;

pub use matrix::IntegerMatrix;
pub use snf::{invariant_factors_dense, smith_normal_form, SmithForm};
pub use sparse::{Factors, SparseMatrix};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `2 <= d_1 | d_2 | ... | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn zero() -> Self {
        FgAbelianGroup::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Canonical form of `Z^free ⊕ ⊕ Z/orders[i]`. An order of 0 counts as a
    /// free summand; orders of ±1 vanish.
    pub fn from_cyclic<T: Into<BigInt>>(free: usize, orders: impl IntoIterator<Item = T>) -> Self {
        let mut free_rank = free;
        let mut t: Vec<BigInt> = Vec::new();
        for o in orders {
            let o = o.into().abs();
            if o.is_zero() {
                free_rank += 1;
            } else if !o.is_one() {
                t.push(o);
            }
        }
        // Pairwise (gcd, lcm) sweeps leave a divisibility chain with the
        // same product.
        for i in 0..t.len() {
            for j in i + 1..t.len() {
                let g = t[i].gcd(&t[j]);
                let l = t[i].lcm(&t[j]);
                t[i] = g;
                t[j] = l;
            }
        }
        t.retain(|d| !d.is_one());
        FgAbelianGroup {
            free_rank,
            torsion: t,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        FgAbelianGroup::from_cyclic(
            self.free_rank + other.free_rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }

    /// `Z ⊗ G = G`, `Z/a ⊗ Z/b = Z/gcd(a, b)`.
    pub fn tensor(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        let mut orders: Vec<BigInt> = Vec::new();
        for _ in 0..other.free_rank {
            orders.extend(self.torsion.iter().cloned());
        }
        for _ in 0..self.free_rank {
            orders.extend(other.torsion.iter().cloned());
        }
        for a in &self.torsion {
            for b in &other.torsion {
                orders.push(a.gcd(b));
            }
        }
        FgAbelianGroup::from_cyclic(self.free_rank * other.free_rank, orders)
    }

    pub fn free_part(&self) -> FgAbelianGroup {
        FgAbelianGroup::free(self.free_rank)
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FgAbelianGroup", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

/// `Z^rows / column-span(M)`.
pub fn cokernel(m: &IntegerMatrix) -> FgAbelianGroup {
    let diag = invariant_factors_dense(m);
    FgAbelianGroup::from_cyclic(m.rows() - diag.len(), diag)
}

/// `ker(d_out) / im(d_in)` for `Z^k --d_in--> Z^n --d_out--> Z^l`.
///
/// The kernel of `d_out` is a saturated sublattice, so the torsion of the
/// quotient equals the torsion of `coker(d_in)` and the free rank is
/// `n - rank(d_out) - rank(d_in)`.
pub fn homology_at(d_in: &IntegerMatrix, d_out: &IntegerMatrix) -> Result<FgAbelianGroup> {
    assert_eq!(d_in.rows(), d_out.cols(), "differentials do not compose");
    if !(d_out * d_in).is_zero() {
        return Err(Error::NonzeroComposition(format!(
            "{}x{} after {}x{}",
            d_out.rows(),
            d_out.cols(),
            d_in.rows(),
            d_in.cols()
        )));
    }
    let f_in = Factors::from_dense(d_in);
    let f_out = Factors::from_dense(d_out);
    Ok(homology_from_factors(d_in.rows(), &f_in, &f_out))
}

/// Same as [`homology_at`] for sparse differentials, without the
/// composition check.
pub fn homology_sparse(d_in: &SparseMatrix, d_out: &SparseMatrix) -> FgAbelianGroup {
    assert_eq!(d_in.rows(), d_out.cols(), "differentials do not compose");
    homology_from_factors(
        d_in.rows(),
        &d_in.invariant_factors(),
        &d_out.invariant_factors(),
    )
}

pub(crate) fn homology_from_factors(n: usize, f_in: &Factors, f_out: &Factors) -> FgAbelianGroup {
    FgAbelianGroup::from_cyclic(n - f_in.rank - f_out.rank, f_in.torsion.iter().cloned())
}

/// A graded group with finitely many nonzero pieces.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct GradedGroup {
    by_degree: BTreeMap<u32, FgAbelianGroup>,
}

impl GradedGroup {
    pub fn new() -> Self {
        GradedGroup::default()
    }

    pub fn from_pieces(pieces: impl IntoIterator<Item = (u32, FgAbelianGroup)>) -> Self {
        let mut g = GradedGroup::new();
        for (d, piece) in pieces {
            g.add(d, &piece);
        }
        g
    }

    /// `Z` in degree 0.
    pub fn unit() -> Self {
        GradedGroup::from_pieces([(0, FgAbelianGroup::free(1))])
    }

    /// Adds `piece` as a direct summand in degree `d`.
    pub fn add(&mut self, d: u32, piece: &FgAbelianGroup) {
        if piece.is_zero() {
            return;
        }
        let slot = self.by_degree.entry(d).or_default();
        *slot = slot.direct_sum(piece);
    }

    pub fn get(&self, d: u32) -> FgAbelianGroup {
        self.by_degree.get(&d).cloned().unwrap_or_default()
    }

    pub fn degrees(&self) -> impl Iterator<Item = (u32, &FgAbelianGroup)> {
        self.by_degree.iter().map(|(&d, g)| (d, g))
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.by_degree.keys().next_back().copied()
    }
}

pub fn tensor_graded(g1: &GradedGroup, g2: &GradedGroup) -> GradedGroup {
    let mut out = GradedGroup::new();
    for (d1, a) in g1.degrees() {
        for (d2, b) in g2.degrees() {
            out.add(d1 + d2, &a.tensor(b));
        }
    }
    out
}

pub fn torsion_free_quotient(g: &GradedGroup) -> GradedGroup {
    GradedGroup::from_pieces(g.degrees().map(|(d, a)| (d, a.free_part())))
}
