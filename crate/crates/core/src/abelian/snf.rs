//! Smith normal form over `Z`.
//!
//! Pivoting always moves the smallest nonzero entry (in absolute value) of
//! the active submatrix to the diagonal, reduces its row and column by
//! Euclidean division, and repeats until the pivot divides the rest.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, non-negative,
/// `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.d
            .diagonal_entries()
            .iter()
            .filter(|e| !e.is_zero())
            .count()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut work = Work {
        d: m.clone(),
        u: Some(IntegerMatrix::identity(m.rows())),
        v: Some(IntegerMatrix::identity(m.cols())),
    };
    work.run();
    SmithForm {
        u: work.u.unwrap(),
        d: work.d,
        v: work.v.unwrap(),
    }
}

/// Nonzero diagonal of the Smith form, without tracking transforms.
pub fn invariant_factors_dense(m: &IntegerMatrix) -> Vec<BigInt> {
    let mut work = Work {
        d: m.clone(),
        u: None,
        v: None,
    };
    work.run();
    work.d
        .diagonal_entries()
        .into_iter()
        .filter(|e| !e.is_zero())
        .collect()
}

struct Work {
    d: IntegerMatrix,
    u: Option<IntegerMatrix>,
    v: Option<IntegerMatrix>,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.d.add_row_multiple(dst, src, f);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, f);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.d.add_col_multiple(dst, src, f);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, f);
        }
    }

    fn smallest_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let e = &self.d[(i, j)];
                if e.is_zero() {
                    continue;
                }
                if best.map_or(true, |(bi, bj)| e.abs() < self.d[(bi, bj)].abs()) {
                    best = Some((i, j));
                    if e.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let (rows, cols) = (self.d.rows(), self.d.cols());
        for t in 0..rows.min(cols) {
            loop {
                let Some((pi, pj)) = self.smallest_in(t) else {
                    return;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let pivot = self.d[(t, t)].clone();

                let mut clean = true;
                for i in t + 1..rows {
                    if self.d[(i, t)].is_zero() {
                        continue;
                    }
                    let q = self.d[(i, t)].div_floor(&pivot);
                    self.add_row(i, t, &-q);
                    clean &= self.d[(i, t)].is_zero();
                }
                for j in t + 1..cols {
                    if self.d[(t, j)].is_zero() {
                        continue;
                    }
                    let q = self.d[(t, j)].div_floor(&pivot);
                    self.add_col(j, t, &-q);
                    clean &= self.d[(t, j)].is_zero();
                }
                if !clean {
                    continue;
                }
                // Pivot must divide the remaining block.
                let offender = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !self.d[(i, j)].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.d[(t, t)].is_negative() {
                self.d.negate_row(t);
                if let Some(u) = &mut self.u {
                    u.negate_row(t);
                }
            }
        }
    }
}
