//! Sparse integer matrices and exact invariant factors.
//!
//! Chain-complex differentials built from monomial data are very sparse and
//! almost every pivot is a unit. [`SparseMatrix::invariant_factors`] first
//! eliminates unit pivots with row operations (unimodular, so the Smith form
//! is unchanged), then hands the small remainder to the dense BigInt routine.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::matrix::IntegerMatrix;
use super::snf::invariant_factors_dense;

/// Column-oriented sparse matrix with small integer entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from per-column entries; repeated rows are summed and
    /// zeros dropped.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, i64)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|c| {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for (r, v) in c {
                    assert!(r < rows, "row {r} out of range {rows}");
                    *acc.entry(r).or_default() += v;
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        SparseMatrix {
            rows,
            cols,
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    /// `self · rhs`, exact. Returns `None` on `i64` overflow.
    pub fn checked_mul(&self, rhs: &SparseMatrix) -> Option<SparseMatrix> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut columns = Vec::with_capacity(rhs.cols);
        for col in &rhs.columns {
            let mut acc: HashMap<usize, i64> = HashMap::new();
            for &(k, b) in col {
                for &(i, a) in &self.columns[k] {
                    let e = acc.entry(i).or_default();
                    *e = e.checked_add(a.checked_mul(b)?)?;
                }
            }
            let mut c: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, v)| v != 0).collect();
            c.sort_unstable();
            columns.push(c);
        }
        Some(SparseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        })
    }

    /// Rank and the invariant factors greater than one.
    pub fn invariant_factors(&self) -> Factors {
        match Eliminator::new(self).run() {
            Ok(f) => f,
            // Entries outgrew i64; redo everything in arbitrary precision.
            Err(Overflow) => Factors::from_dense(&self.to_dense()),
        }
    }
}

/// Smith-form summary of a matrix: its rank and nontrivial invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factors {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Factors {
    pub fn from_dense(m: &IntegerMatrix) -> Self {
        let diag = invariant_factors_dense(m);
        Factors {
            rank: diag.len(),
            torsion: diag.into_iter().filter(|d| !d.abs().is_one()).collect(),
        }
    }
}

struct Overflow;

struct Eliminator {
    rows: HashMap<usize, Vec<(usize, i64)>>,
    col_rows: HashMap<usize, HashSet<usize>>,
    /// Rows holding at least one unit entry, shortest first.
    queue: BTreeSet<(usize, usize)>,
}

fn has_unit(row: &[(usize, i64)]) -> bool {
    row.iter().any(|&(_, v)| v == 1 || v == -1)
}

impl Eliminator {
    fn new(m: &SparseMatrix) -> Self {
        let mut rows: HashMap<usize, Vec<(usize, i64)>> = HashMap::new();
        let mut col_rows: HashMap<usize, HashSet<usize>> = HashMap::new();
        for (j, col) in m.columns.iter().enumerate() {
            for &(i, v) in col {
                rows.entry(i).or_default().push((j, v));
                col_rows.entry(j).or_default().insert(i);
            }
        }
        let mut queue = BTreeSet::new();
        for (&i, r) in rows.iter_mut() {
            r.sort_unstable();
            if has_unit(r) {
                queue.insert((r.len(), i));
            }
        }
        Eliminator {
            rows,
            col_rows,
            queue,
        }
    }

    fn run(mut self) -> Result<Factors, Overflow> {
        let mut rank = 0;
        while let Some((_, pr)) = self.queue.pop_first() {
            let pivot_row = self.rows.remove(&pr).unwrap();
            // Unit entry in the sparsest column.
            let (pc, pv) = pivot_row
                .iter()
                .filter(|&&(_, v)| v == 1 || v == -1)
                .min_by_key(|&&(c, _)| self.col_rows[&c].len())
                .copied()
                .unwrap();
            for &(c, _) in &pivot_row {
                self.col_rows.get_mut(&c).unwrap().remove(&pr);
            }
            let targets: Vec<usize> = self.col_rows[&pc].iter().copied().collect();
            for t in targets {
                let row = self.rows.remove(&t).unwrap();
                let a = row
                    .iter()
                    .find(|&&(c, _)| c == pc)
                    .map(|&(_, v)| v)
                    .unwrap();
                // row_t -= (a / pv) * pivot_row, with pv = ±1
                let factor = a.checked_mul(pv).ok_or(Overflow)?;
                let merged = merge_sub(&row, &pivot_row, factor)?;
                self.queue.remove(&(row.len(), t));
                for &(c, _) in &row {
                    self.col_rows.get_mut(&c).unwrap().remove(&t);
                }
                for &(c, _) in &merged {
                    self.col_rows.entry(c).or_default().insert(t);
                }
                if !merged.is_empty() {
                    if has_unit(&merged) {
                        self.queue.insert((merged.len(), t));
                    }
                    self.rows.insert(t, merged);
                }
            }
            self.col_rows.remove(&pc);
            rank += 1;
        }
        self.col_rows.retain(|_, s| !s.is_empty());
        if self.rows.is_empty() {
            return Ok(Factors {
                rank,
                torsion: Vec::new(),
            });
        }
        let mut row_ids: Vec<usize> = self.rows.keys().copied().collect();
        row_ids.sort_unstable();
        let mut col_ids: Vec<usize> = self.col_rows.keys().copied().collect();
        col_ids.sort_unstable();
        let col_pos: HashMap<usize, usize> =
            col_ids.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut rest = IntegerMatrix::zeros(row_ids.len(), col_ids.len());
        for (i, r) in row_ids.iter().enumerate() {
            for &(c, v) in &self.rows[r] {
                rest[(i, col_pos[&c])] = BigInt::from(v);
            }
        }
        let tail = Factors::from_dense(&rest);
        Ok(Factors {
            rank: rank + tail.rank,
            torsion: tail.torsion,
        })
    }
}

/// `row - factor * pivot`, both sorted by column.
fn merge_sub(
    row: &[(usize, i64)],
    pivot: &[(usize, i64)],
    factor: i64,
) -> Result<Vec<(usize, i64)>, Overflow> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j == pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i == row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i]);
            i += 1;
        } else if take_piv {
            let v = pivot[j].1.checked_mul(factor).ok_or(Overflow)?;
            out.push((pivot[j].0, v.checked_neg().ok_or(Overflow)?));
            j += 1;
        } else {
            let v = pivot[j].1.checked_mul(factor).ok_or(Overflow)?;
            let s = row[i].1.checked_sub(v).ok_or(Overflow)?;
            if s != 0 {
                out.push((row[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_factors(rows: &[Vec<i64>]) -> Factors {
        Factors::from_dense(&IntegerMatrix::from_rows(rows))
    }

    fn sparse_of(rows: &[Vec<i64>]) -> SparseMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let cols = (0..c)
            .map(|j| (0..r).map(|i| (i, rows[i][j])).collect())
            .collect();
        SparseMatrix::from_columns(r, cols)
    }

    #[test]
    fn agrees_with_dense() {
        let cases = vec![
            vec![vec![2, 0], vec![0, 3]],
            vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]],
            vec![vec![2, 4], vec![6, 8]],
            vec![vec![1, -1, 0, 0], vec![0, 1, -1, 0], vec![0, 0, 1, -1]],
            vec![vec![0, 0], vec![0, 0]],
        ];
        for rows in cases {
            assert_eq!(sparse_of(&rows).invariant_factors(), dense_factors(&rows));
        }
    }

    #[test]
    fn product() {
        let a = sparse_of(&[vec![1, 2], vec![0, 1]]);
        let b = sparse_of(&[vec![1, 0], vec![-1, 3]]);
        assert_eq!(
            a.checked_mul(&b).unwrap().to_dense(),
            IntegerMatrix::from_rows(&[vec![-1, 6], vec![-1, 3]])
        );
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2 + 7;
        let rows = vec![vec![1, big], vec![-5, big]];
        assert_eq!(sparse_of(&rows).invariant_factors(), dense_factors(&rows));
    }
}
