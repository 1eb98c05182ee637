//! The truncated bar construction `B(M, W, Z) = M ⊗ W̄^{⊗p}`, with basis
//! elements `x[a_1|...|a_p]` for `x` a standard monomial of `M` and `a_j`
//! nonconstant monomials of `W`.
//!
//! `d_E(x[a_1|...|a_p]) = (-1)^{|x|} (x·a_1)[a_2|...|a_p]
//!     + Σ_{j<p} (-1)^{ε_j} x[a_1|...|a_j a_{j+1}|...|a_p]`,
//! `ε_k = k + |x| + Σ_{j<=k} |a_j|`. The last term, `x[a_1|...|a_{p-1}](a_p·1)`,
//! vanishes because `W̄` acts on `Z` by zero. The internal differential is
//! zero: all inputs are concentrated in cohomology.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::action::ModuleAction;
use super::TorTable;
use crate::abelian::{homology_sparse, SparseMatrix};
use crate::error::{Error, Result};
use crate::monomial::{for_each_exponent_vector, Monomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BarWord {
    pub x: Monomial,
    /// Exponent vectors over the w-variables.
    pub word: Vec<Vec<u32>>,
}

pub type BarElement = BTreeMap<BarWord, i64>;

pub struct BarComplex<'a> {
    action: &'a ModuleAction,
    max_len: usize,
    d_max: u32,
    basis: HashMap<(usize, u32), Vec<BarWord>>,
    index: HashMap<(usize, u32), HashMap<BarWord, usize>>,
}

impl<'a> BarComplex<'a> {
    /// All bar words of length `<= max_len` and internal degree `<= d_max`.
    pub fn new(action: &'a ModuleAction, max_len: usize, d_max: u32) -> Self {
        assert!(d_max <= action.d_max(), "action built only up to degree {}", action.d_max());
        let degrees: Vec<u32> = action.w_vars().iter().map(|v| v.degree).collect();
        // nonconstant W-monomials by degree
        let wbar: Vec<Vec<Vec<u32>>> = (0..=d_max)
            .map(|d| {
                let mut out = Vec::new();
                if d > 0 {
                    for_each_exponent_vector(&degrees, d, &mut |a| out.push(a.to_vec()));
                }
                out
            })
            .collect();

        let cells: Vec<(usize, u32)> = (0..=max_len).flat_map(|p| (0..=d_max).map(move |q| (p, q))).collect();
        let basis: HashMap<(usize, u32), Vec<BarWord>> = cells
            .into_par_iter()
            .map(|(p, q)| {
                let mut out = Vec::new();
                let mut word = Vec::with_capacity(p);
                words(&wbar, p, q, &mut word, &mut |w, used| {
                    for x in action.basis().basis(q - used) {
                        out.push(BarWord {
                            x: x.clone(),
                            word: w.to_vec(),
                        });
                    }
                });
                out.sort();
                ((p, q), out)
            })
            .collect();
        let index = basis
            .iter()
            .map(|(&k, b)| (k, b.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect()))
            .collect();
        BarComplex {
            action,
            max_len,
            d_max,
            basis,
            index,
        }
    }

    pub fn action(&self) -> &ModuleAction {
        self.action
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    pub fn basis(&self, p: usize, q: u32) -> &[BarWord] {
        self.basis.get(&(p, q)).map_or(&[], Vec::as_slice)
    }

    pub fn w_degree(&self, alpha: &[u32]) -> u32 {
        alpha.iter().enumerate().map(|(k, &a)| a * self.action.w_degree(k)).sum()
    }

    pub fn degree(&self, b: &BarWord) -> u32 {
        self.action.module().degree_of(&b.x) + b.word.iter().map(|a| self.w_degree(a)).sum::<u32>()
    }

    /// Locates a basis element, or explains why it lies outside the complex.
    fn locate(&self, b: &BarWord) -> Result<(usize, u32)> {
        let p = b.word.len();
        let q = self.degree(b);
        if p > self.max_len || q > self.d_max {
            return Err(Error::OutOfTruncation(format!(
                "word of length {p} in degree {q}; bounds are length {} and degree {}",
                self.max_len, self.d_max
            )));
        }
        if self.index[&(p, q)].contains_key(b) {
            Ok((p, q))
        } else {
            Err(Error::OutOfTruncation(format!(
                "{} is not a basis element",
                self.display(b)
            )))
        }
    }

    pub fn display(&self, b: &BarWord) -> String {
        let names = self.action.w_vars();
        let letters: Vec<String> = b
            .word
            .iter()
            .map(|a| {
                let f: Vec<String> = a
                    .iter()
                    .enumerate()
                    .filter(|&(_, &e)| e > 0)
                    .map(|(k, &e)| if e == 1 { names[k].name.clone() } else { format!("{}^{e}", names[k].name) })
                    .collect();
                if f.is_empty() {
                    "1".into()
                } else {
                    f.join("*")
                }
            })
            .collect();
        format!("{}[{}]", b.x.display(self.action.module().table()), letters.join("|"))
    }

    /// `d: B_{p,q} → B_{p-1,q}` on the sorted bases.
    pub fn differential(&self, p: usize, q: u32) -> SparseMatrix {
        assert!(p >= 1 && p <= self.max_len && q <= self.d_max);
        let source = self.basis(p, q);
        let target = &self.index[&(p - 1, q)];
        let columns = source
            .iter()
            .map(|b| {
                apply(self, b)
                    .into_iter()
                    .map(|(t, c)| (target[&t], c))
                    .collect()
            })
            .collect();
        SparseMatrix::from_columns(self.basis(p - 1, q).len(), columns)
    }

    /// Homology for `p <= p_max`. Entries needing words longer than
    /// `max_len` are marked invalid unless such words cannot exist in that
    /// degree.
    pub fn tor(&self, p_max: usize) -> TorTable {
        let min_w = self.action.w_vars().iter().map(|v| v.degree).min();
        let cells: Vec<(usize, u32)> = (0..=p_max).flat_map(|p| (0..=self.d_max).map(move |q| (p, q))).collect();
        let groups: Vec<_> = cells
            .into_par_iter()
            .map(|(p, q)| {
                if p > self.max_len {
                    return ((p, q), None);
                }
                let n = self.basis(p, q).len();
                let longer_possible = min_w.is_some_and(|w| (p as u32 + 1) * w <= q);
                let d_in = if p < self.max_len {
                    self.differential(p + 1, q)
                } else if longer_possible {
                    return ((p, q), None);
                } else {
                    SparseMatrix::new(n, 0)
                };
                let d_out = if p == 0 { SparseMatrix::new(0, n) } else { self.differential(p, q) };
                ((p, q), Some(homology_sparse(&d_in, &d_out)))
            })
            .collect();
        let mut table = TorTable::zero(p_max, self.d_max);
        for ((p, q), g) in groups {
            match g {
                Some(g) => table.add(p, q, &g),
                None => table.mark_invalid(p, q),
            }
        }
        table
    }
}

/// Words of length `p` with total degree `<= budget`, reported with their
/// degree.
fn words(wbar: &[Vec<Vec<u32>>], p: usize, budget: u32, cur: &mut Vec<Vec<u32>>, f: &mut impl FnMut(&[Vec<u32>], u32)) {
    fn go(
        wbar: &[Vec<Vec<u32>>],
        left: usize,
        budget: u32,
        used: u32,
        cur: &mut Vec<Vec<u32>>,
        f: &mut impl FnMut(&[Vec<u32>], u32),
    ) {
        if left == 0 {
            f(cur, used);
            return;
        }
        for d in 1..=budget - used {
            for a in &wbar[d as usize] {
                cur.push(a.clone());
                go(wbar, left - 1, budget, used + d, cur, f);
                cur.pop();
            }
        }
    }
    go(wbar, p, budget, 0, cur, f);
}

fn sign(e: u32) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn apply(cx: &BarComplex, b: &BarWord) -> Vec<(BarWord, i64)> {
    let p = b.word.len();
    let mut out = Vec::new();
    if p == 0 {
        return out;
    }
    let x_deg = cx.action.module().degree_of(&b.x);
    for (t, c) in cx.action.apply_monomial(&b.word[0], &b.x) {
        out.push((
            BarWord {
                x: t,
                word: b.word[1..].to_vec(),
            },
            sign(x_deg) * c,
        ));
    }
    let mut eps = x_deg;
    for j in 1..p {
        eps += 1 + cx.w_degree(&b.word[j - 1]);
        let mut word = b.word[..j - 1].to_vec();
        word.push(b.word[j - 1].iter().zip(&b.word[j]).map(|(a, c)| a + c).collect());
        word.extend_from_slice(&b.word[j + 1..]);
        out.push((BarWord { x: b.x.clone(), word }, sign(eps)));
    }
    out
}

/// `d_E` on a linear combination of basis elements.
pub fn bar_differential(element: &BarElement, complex: &BarComplex) -> Result<BarElement> {
    let mut out = BarElement::new();
    for (b, &c) in element {
        complex.locate(b)?;
        for (t, d) in apply(complex, b) {
            *out.entry(t).or_default() += c * d;
        }
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

/// `Tor^W_p(M, Z)` for `p <= p_max`, `q <= d_max`, from the bar complex with
/// words up to length `p_max + 1`.
pub fn bar_tor(action: &ModuleAction, p_max: usize, d_max: u32) -> TorTable {
    BarComplex::new(action, p_max + 1, d_max).tor(p_max)
}
