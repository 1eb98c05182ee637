//! Graded rings `Z[x_1..x_m] ⊗ Λ[y_1..y_n]` modulo monomial ideals.
//!
//! Even variables carry positive even degrees and arbitrary exponents; odd
//! variables carry positive odd degrees and appear at most once in any
//! monomial. Since every variable has positive degree, each graded piece of a
//! quotient ring is spanned by finitely many standard monomials, and all
//! graded ranks are obtained by enumeration.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum number of odd variables; odd supports are stored as bitmasks.
pub const MAX_ODD: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub degree: u32,
}

impl Variable {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Variable {
            name: name.into(),
            degree,
        }
    }
}

/// A variable reference inside a [`VariableTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarRef {
    Even(usize),
    Odd(usize),
}

/// Ordered even and odd variables with their degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VariableTable {
    even: Vec<Variable>,
    odd: Vec<Variable>,
}

impl VariableTable {
    pub fn new(even: Vec<Variable>, odd: Vec<Variable>) -> Result<Self> {
        if odd.len() > MAX_ODD {
            return Err(Error::TooManyOddVariables(odd.len()));
        }
        let mut seen = std::collections::HashSet::new();
        for v in even.iter().chain(odd.iter()) {
            if !seen.insert(v.name.as_str()) {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
        }
        for v in &even {
            if v.degree == 0 || v.degree % 2 != 0 {
                return Err(Error::BadDegree {
                    name: v.name.clone(),
                    degree: v.degree,
                    expected: "even",
                });
            }
        }
        for v in &odd {
            if v.degree % 2 != 1 {
                return Err(Error::BadDegree {
                    name: v.name.clone(),
                    degree: v.degree,
                    expected: "odd",
                });
            }
        }
        Ok(VariableTable { even, odd })
    }

    pub fn even(&self) -> &[Variable] {
        &self.even
    }

    pub fn odd(&self) -> &[Variable] {
        &self.odd
    }

    pub fn even_count(&self) -> usize {
        self.even.len()
    }

    pub fn odd_count(&self) -> usize {
        self.odd.len()
    }

    pub fn even_degrees(&self) -> Vec<u32> {
        self.even.iter().map(|v| v.degree).collect()
    }

    pub fn lookup(&self, name: &str) -> Option<VarRef> {
        if let Some(i) = self.even.iter().position(|v| v.name == name) {
            return Some(VarRef::Even(i));
        }
        self.odd
            .iter()
            .position(|v| v.name == name)
            .map(VarRef::Odd)
    }

    /// Sum of the degrees of the odd variables in `mask`.
    pub fn odd_mask_degree(&self, mask: u64) -> u32 {
        bits(mask).map(|k| self.odd[k].degree).sum()
    }

    pub fn one(&self) -> Monomial {
        Monomial::one(self.even.len(), self.odd.len())
    }

    pub fn conforms(&self, mon: &Monomial) -> Result<()> {
        if mon.even.len() != self.even.len() || mon.odd_len as usize != self.odd.len() {
            return Err(Error::DimensionMismatch {
                even: mon.even.len(),
                odd: mon.odd_len as usize,
                table_even: self.even.len(),
                table_odd: self.odd.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |k| mask >> k & 1 == 1)
}

/// `x^a ⊗ y^S`: an exponent vector over the even variables and a set of odd
/// variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    even: Vec<u32>,
    odd: u64,
    odd_len: u8,
}

impl Monomial {
    /// Builds a monomial from even exponents and 0-based odd indices.
    ///
    /// Panics if an odd index is out of range.
    pub fn new(even: Vec<u32>, odd_len: usize, odd_support: &[usize]) -> Self {
        assert!(odd_len <= MAX_ODD);
        let mut odd = 0u64;
        for &k in odd_support {
            assert!(k < odd_len, "odd index {k} out of range {odd_len}");
            odd |= 1 << k;
        }
        Monomial {
            even,
            odd,
            odd_len: odd_len as u8,
        }
    }

    pub fn from_mask(even: Vec<u32>, odd_len: usize, odd: u64) -> Self {
        assert!(odd_len <= MAX_ODD);
        debug_assert!(odd_len == 64 || odd >> odd_len == 0);
        Monomial {
            even,
            odd,
            odd_len: odd_len as u8,
        }
    }

    pub fn one(even_len: usize, odd_len: usize) -> Self {
        Monomial::from_mask(vec![0; even_len], odd_len, 0)
    }

    pub fn even_exponents(&self) -> &[u32] {
        &self.even
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    pub fn odd_len(&self) -> usize {
        self.odd_len as usize
    }

    pub fn odd_support(&self) -> Vec<usize> {
        bits(self.odd).collect()
    }

    pub fn is_one(&self) -> bool {
        self.odd == 0 && self.even.iter().all(|&a| a == 0)
    }

    pub fn even_total(&self) -> u32 {
        self.even.iter().sum()
    }

    pub fn is_square_free(&self) -> bool {
        self.even.iter().all(|&a| a <= 1)
    }

    fn same_shape(&self, other: &Monomial) -> Result<()> {
        if self.even.len() != other.even.len() || self.odd_len != other.odd_len {
            return Err(Error::DimensionMismatch {
                even: self.even.len(),
                odd: self.odd_len as usize,
                table_even: other.even.len(),
                table_odd: other.odd_len as usize,
            });
        }
        Ok(())
    }

    /// Divisibility without a shape check; both monomials must share a table.
    #[inline]
    pub fn divides_unchecked(&self, other: &Monomial) -> bool {
        self.odd & !other.odd == 0 && self.even.iter().zip(&other.even).all(|(a, b)| a <= b)
    }

    pub fn degree(&self, table: &VariableTable) -> Result<u32> {
        table.conforms(self)?;
        Ok(self.degree_unchecked(table))
    }

    #[inline]
    pub(crate) fn degree_unchecked(&self, table: &VariableTable) -> u32 {
        let even: u32 = self
            .even
            .iter()
            .zip(&table.even)
            .map(|(a, v)| a * v.degree)
            .sum();
        even + table.odd_mask_degree(self.odd)
    }

    /// Product, or `None` when the odd supports overlap (`y^2 = 0`). Signs
    /// are not tracked.
    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let even = self.even.iter().zip(&other.even).map(|(a, b)| a + b).collect();
        Some(Monomial::from_mask(even, self.odd_len as usize, self.odd | other.odd))
    }

    /// Multiplies by the `var`-th even variable.
    pub fn times_even(&self, var: usize) -> Monomial {
        let mut out = self.clone();
        out.even[var] += 1;
        out
    }

    pub fn display(&self, table: &VariableTable) -> String {
        let mut parts = Vec::new();
        for (a, v) in self.even.iter().zip(table.even()) {
            match a {
                0 => {}
                1 => parts.push(v.name.clone()),
                _ => parts.push(format!("{}^{}", v.name, a)),
            }
        }
        for k in bits(self.odd) {
            parts.push(table.odd()[k].name.clone());
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Monomial {
    /// Graded-lex: total even exponent, then exponent vectors with larger
    /// leading exponents first, then odd supports as sorted index lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.even_total()
            .cmp(&other.even_total())
            .then_with(|| other.even.cmp(&self.even))
            .then_with(|| bits(self.odd).cmp(bits(other.odd)))
            .then_with(|| self.odd_len.cmp(&other.odd_len))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Weighted degree of `mon` in `table`.
pub fn degree(mon: &Monomial, table: &VariableTable) -> Result<u32> {
    mon.degree(table)
}

/// `a | b`: componentwise exponent comparison and odd-support inclusion.
pub fn divides(a: &Monomial, b: &Monomial) -> Result<bool> {
    a.same_shape(b)?;
    Ok(a.divides_unchecked(b))
}

/// An ideal stored by its minimal monomial generators in graded-lex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MonomialIdeal {
    gens: Vec<Monomial>,
}

/// The minimal generating antichain of the ideal spanned by `gens`.
pub fn minimalize(gens: impl IntoIterator<Item = Monomial>) -> MonomialIdeal {
    let mut all: Vec<Monomial> = gens.into_iter().collect();
    // By total exponent, odd factors included, so a proper divisor of g
    // always precedes g.
    all.sort_by_key(|m| m.even_total() + m.odd.count_ones());
    let mut kept: Vec<Monomial> = Vec::with_capacity(all.len());
    for g in all {
        if !kept.iter().any(|k| k.divides_unchecked(&g)) {
            kept.push(g);
        }
    }
    kept.sort();
    MonomialIdeal { gens: kept }
}

impl MonomialIdeal {
    pub fn zero() -> Self {
        MonomialIdeal::default()
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, mon: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides_unchecked(mon))
    }

    pub fn is_square_free(&self) -> bool {
        self.gens.iter().all(Monomial::is_square_free)
    }

    /// The ideal with generators of degree above `bound` dropped. Its graded
    /// pieces agree with `self` up to `bound`.
    pub fn truncate(&self, table: &VariableTable, bound: u32) -> MonomialIdeal {
        MonomialIdeal {
            gens: self
                .gens
                .iter()
                .filter(|g| g.degree_unchecked(table) <= bound)
                .cloned()
                .collect(),
        }
    }
}

pub fn contains(ideal: &MonomialIdeal, mon: &Monomial) -> bool {
    ideal.contains(mon)
}

pub fn is_square_free(ideal: &MonomialIdeal) -> bool {
    ideal.is_square_free()
}

/// `A = P / I`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialRing {
    table: VariableTable,
    ideal: MonomialIdeal,
}

impl MonomialRing {
    pub fn new(table: VariableTable, gens: Vec<Monomial>) -> Result<Self> {
        for g in &gens {
            table.conforms(g)?;
            if g.is_one() {
                return Err(Error::UnitGenerator);
            }
        }
        Ok(MonomialRing {
            table,
            ideal: minimalize(gens),
        })
    }

    pub fn free(table: VariableTable) -> Self {
        MonomialRing {
            table,
            ideal: MonomialIdeal::zero(),
        }
    }

    pub fn table(&self) -> &VariableTable {
        &self.table
    }

    pub fn ideal(&self) -> &MonomialIdeal {
        &self.ideal
    }

    pub fn degree_of(&self, mon: &Monomial) -> u32 {
        mon.degree_unchecked(&self.table)
    }

    /// The same ring with generators above `bound` dropped.
    pub fn truncated(&self, bound: u32) -> MonomialRing {
        MonomialRing {
            table: self.table.clone(),
            ideal: self.ideal.truncate(&self.table, bound),
        }
    }

    pub fn display_ideal(&self) -> Vec<String> {
        self.ideal
            .generators()
            .iter()
            .map(|g| g.display(&self.table))
            .collect()
    }
}

impl fmt::Display for MonomialRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::pretty_print(self))
    }
}

/// Calls `f` on every exponent vector `a` with `Σ a_i·degrees[i] == target`.
pub(crate) fn for_each_exponent_vector(degrees: &[u32], target: u32, f: &mut impl FnMut(&[u32])) {
    fn go(degrees: &[u32], i: usize, rest: u32, cur: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if i == degrees.len() {
            if rest == 0 {
                f(cur);
            }
            return;
        }
        let d = degrees[i];
        if i + 1 == degrees.len() {
            if rest % d == 0 {
                cur[i] = rest / d;
                f(cur);
                cur[i] = 0;
            }
            return;
        }
        for a in 0..=rest / d {
            cur[i] = a;
            go(degrees, i + 1, rest - a * d, cur, f);
        }
        cur[i] = 0;
    }
    let mut cur = vec![0; degrees.len()];
    if degrees.is_empty() {
        if target == 0 {
            f(&cur);
        }
        return;
    }
    go(degrees, 0, target, &mut cur, f);
}

/// Basis of `A^d`: the degree-`d` monomials outside the ideal, sorted.
pub fn standard_monomials(ring: &MonomialRing, d: u32) -> Vec<Monomial> {
    let table = &ring.table;
    let n = table.odd_count();
    let degrees = table.even_degrees();
    let mut out = Vec::new();
    for mask in 0..(1u64 << n.min(63)) {
        let od = table.odd_mask_degree(mask);
        if od > d {
            continue;
        }
        for_each_exponent_vector(&degrees, d - od, &mut |a| {
            let m = Monomial::from_mask(a.to_vec(), n, mask);
            if !ring.ideal.contains(&m) {
                out.push(m);
            }
        });
    }
    out.sort();
    out
}

/// Standard monomials of every degree `0..=d_max`, with position lookup.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub by_degree: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, usize>>,
}

impl GradedBasis {
    pub fn new(ring: &MonomialRing, d_max: u32) -> Self {
        let by_degree: Vec<Vec<Monomial>> = (0..=d_max)
            .into_par_iter()
            .map(|d| standard_monomials(ring, d))
            .collect();
        let index = by_degree
            .iter()
            .map(|b| b.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect())
            .collect();
        GradedBasis { by_degree, index }
    }

    pub fn d_max(&self) -> u32 {
        self.by_degree.len() as u32 - 1
    }

    pub fn basis(&self, d: u32) -> &[Monomial] {
        self.by_degree
            .get(d as usize)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn position(&self, d: u32, mon: &Monomial) -> Option<usize> {
        self.index.get(d as usize)?.get(mon).copied()
    }
}

/// Graded ranks `rank_d` for `0 <= d <= d_max`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbertFunction {
    pub ranks: Vec<u64>,
}

impl HilbertFunction {
    pub fn new(ranks: Vec<u64>) -> Self {
        assert!(!ranks.is_empty(), "a Hilbert function covers at least degree 0");
        HilbertFunction { ranks }
    }

    /// The function of `Z` concentrated in degree 0.
    pub fn unit(d_max: u32) -> Self {
        let mut ranks = vec![0; d_max as usize + 1];
        ranks[0] = 1;
        HilbertFunction { ranks }
    }

    pub fn d_max(&self) -> u32 {
        self.ranks.len() as u32 - 1
    }

    pub fn rank(&self, d: u32) -> u64 {
        self.ranks.get(d as usize).copied().unwrap_or(0)
    }

    /// First degree where `self` and `other` disagree, up to the smaller bound.
    pub fn first_mismatch(&self, other: &HilbertFunction) -> Option<u32> {
        let bound = self.d_max().min(other.d_max());
        (0..=bound).find(|&d| self.rank(d) != other.rank(d))
    }
}

pub fn hilbert_function(ring: &MonomialRing, d_max: u32) -> HilbertFunction {
    let ranks = (0..=d_max)
        .into_par_iter()
        .map(|d| standard_monomials(ring, d).len() as u64)
        .collect();
    HilbertFunction { ranks }
}

/// Ranks of a tensor product: `rank_d = Σ_{i+j=d} h1_i · h2_j`, valid up to
/// the smaller of the two bounds.
pub fn hilbert_convolution(h1: &HilbertFunction, h2: &HilbertFunction) -> HilbertFunction {
    let bound = h1.d_max().min(h2.d_max());
    let ranks = (0..=bound)
        .map(|d| (0..=d).map(|i| h1.rank(i) * h2.rank(d - i)).sum())
        .collect();
    HilbertFunction { ranks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x2y() -> MonomialRing {
        let table =
            VariableTable::new(vec![Variable::new("x", 4)], vec![Variable::new("y", 1)]).unwrap();
        MonomialRing::new(table, vec![Monomial::new(vec![2], 1, &[0])]).unwrap()
    }

    fn xyz() -> VariableTable {
        VariableTable::new(
            vec![Variable::new("x", 2), Variable::new("y", 2), Variable::new("z", 2)],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn degrees() {
        let ring = x2y();
        let t = ring.table();
        assert_eq!(degree(&t.one(), t).unwrap(), 0);
        assert_eq!(degree(&Monomial::new(vec![2], 1, &[0]), t).unwrap(), 9);
        let polar = VariableTable::new(
            vec![Variable::new("x'_1_1", 4), Variable::new("x'_1_2", 4)],
            vec![Variable::new("y", 1)],
        )
        .unwrap();
        assert_eq!(degree(&Monomial::new(vec![1, 1], 1, &[0]), &polar).unwrap(), 9);
        assert!(matches!(
            degree(&Monomial::new(vec![1, 1], 1, &[0]), t),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn divisibility() {
        let x = Monomial::new(vec![1], 1, &[]);
        let x2y = Monomial::new(vec![2], 1, &[0]);
        let xy = Monomial::new(vec![1], 1, &[0]);
        let x3y = Monomial::new(vec![3], 1, &[0]);
        assert!(divides(&x, &x2y).unwrap());
        assert!(!divides(&x2y, &xy).unwrap());
        assert!(divides(&x2y, &x3y).unwrap());
        assert!(divides(&x, &Monomial::new(vec![1, 0], 1, &[])).is_err());
    }

    #[test]
    fn minimalize_examples() {
        let x2 = Monomial::new(vec![2], 1, &[]);
        let x2y = Monomial::new(vec![2], 1, &[0]);
        assert_eq!(minimalize(vec![x2.clone(), x2y]).generators(), &[x2]);

        let xy = Monomial::new(vec![1, 1, 0], 0, &[]);
        let x2z = Monomial::new(vec![2, 0, 1], 0, &[]);
        let xyz = Monomial::new(vec![1, 1, 1], 0, &[]);
        let ideal = minimalize(vec![xy.clone(), x2z.clone(), xyz]);
        assert_eq!(ideal.generators(), &[xy, x2z]);
        assert!(minimalize(Vec::new()).is_zero());
    }

    #[test]
    fn minimalize_odd_divisor_listed_late() {
        let y0y2 = Monomial::new(vec![0], 3, &[0, 2]);
        let y2 = Monomial::new(vec![0], 3, &[2]);
        let x_y0 = Monomial::new(vec![1], 3, &[0]);
        let ideal = minimalize(vec![y0y2, y2.clone(), x_y0.clone()]);
        assert_eq!(ideal.generators(), &[y2, x_y0]);
    }

    #[test]
    fn membership() {
        let ring = x2y();
        assert!(ring.ideal().contains(&Monomial::new(vec![3], 1, &[0])));
        assert!(!ring.ideal().contains(&Monomial::new(vec![2], 1, &[])));
        assert!(!MonomialIdeal::zero().contains(&Monomial::new(vec![5], 1, &[0])));
    }

    #[test]
    fn unit_generator_rejected() {
        let t = xyz();
        assert_eq!(
            MonomialRing::new(t.clone(), vec![t.one()]),
            Err(Error::UnitGenerator)
        );
    }

    #[test]
    fn bad_tables() {
        assert!(VariableTable::new(vec![Variable::new("x", 3)], vec![]).is_err());
        assert!(VariableTable::new(vec![], vec![Variable::new("y", 2)]).is_err());
        assert!(VariableTable::new(vec![Variable::new("x", 0)], vec![]).is_err());
        assert!(VariableTable::new(vec![Variable::new("x", 2)], vec![Variable::new("x", 1)]).is_err());
    }

    #[test]
    fn standard_monomials_x2y() {
        let ring = x2y();
        assert_eq!(standard_monomials(&ring, 5), vec![Monomial::new(vec![1], 1, &[0])]);
        assert!(standard_monomials(&ring, 9).is_empty());
        assert_eq!(standard_monomials(&ring, 0), vec![ring.table().one()]);
    }

    #[test]
    fn hilbert_examples() {
        let poly = MonomialRing::free(VariableTable::new(vec![Variable::new("x", 2)], vec![]).unwrap());
        let h = hilbert_function(&poly, 9);
        for d in 0..=9 {
            assert_eq!(h.rank(d), u64::from(d % 2 == 0));
        }
        assert_eq!(
            hilbert_function(&x2y(), 9).ranks,
            vec![1, 1, 0, 0, 1, 1, 0, 0, 1, 0]
        );
        let ext = MonomialRing::free(VariableTable::new(vec![], vec![Variable::new("y", 3)]).unwrap());
        assert_eq!(hilbert_function(&ext, 5).ranks, vec![1, 0, 0, 1, 0, 0]);
    }

    #[test]
    fn square_free() {
        assert!(!x2y().ideal().is_square_free());
        assert!(minimalize(vec![Monomial::new(vec![1, 1], 1, &[0])]).is_square_free());
        assert!(MonomialIdeal::zero().is_square_free());
    }

    #[test]
    fn convolution_examples() {
        let x4 = MonomialRing::free(VariableTable::new(vec![Variable::new("x", 4)], vec![]).unwrap());
        let y1 = MonomialRing::free(VariableTable::new(vec![], vec![Variable::new("y", 1)]).unwrap());
        let hx = hilbert_function(&x4, 5);
        let hy = hilbert_function(&y1, 5);
        assert_eq!(hilbert_convolution(&hx, &hy).ranks, vec![1, 1, 0, 0, 1, 1]);
        assert_eq!(hilbert_convolution(&hx, &HilbertFunction::unit(5)), hx);

        let x2 = MonomialRing::free(VariableTable::new(vec![Variable::new("x", 2)], vec![]).unwrap());
        let h = hilbert_function(&x2, 12);
        let sq = hilbert_convolution(&h, &h);
        for k in 0..=6 {
            assert_eq!(sq.rank(2 * k), u64::from(k + 1));
        }
    }

    #[test]
    fn ordering_is_graded_lex() {
        let mut v = vec![
            Monomial::new(vec![0, 2], 1, &[0]),
            Monomial::new(vec![1, 1], 1, &[0]),
            Monomial::new(vec![2, 0], 1, &[0]),
            Monomial::new(vec![1, 0], 1, &[]),
        ];
        v.sort();
        assert_eq!(v[0], Monomial::new(vec![1, 0], 1, &[]));
        assert_eq!(v[1], Monomial::new(vec![2, 0], 1, &[0]));
        assert_eq!(v[3], Monomial::new(vec![0, 2], 1, &[0]));
    }
}
