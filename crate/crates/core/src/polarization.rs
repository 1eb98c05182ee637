//! Polarization `A ↦ A'`, the difference-variable ring `W`, and degreewise
//! checks that `W` acts freely on `A'` with `A'/W̄A' ≅ A`.
//!
//! Every power `x_i^a` in a generator becomes `x'_{i1} x'_{i2} ... x'_{ia}`.
//! The variable `w_{ij}` of `W`, for `j >= 2`, acts as `x'_{ij} - x'_{i1}`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::abelian::{smith_normal_form, IntegerMatrix, SparseMatrix};
use crate::error::Result;
use crate::monomial::{
    hilbert_function, minimalize, standard_monomials, HilbertFunction, Monomial, MonomialRing,
    Variable, VariableTable,
};

/// `Ω = {(i, j) : 1 <= i <= m, 1 <= j <= a_i}` in left-lexicographic order,
/// 1-based.
pub type Pair = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizationData {
    pub source: MonomialRing,
    pub polarized: MonomialRing,
    /// `a_i`, at least 1 so every source variable keeps `x'_{i1}`.
    pub exponent_bounds: Vec<u32>,
    pub omega: Vec<Pair>,
    pub omega_bar: Vec<Pair>,
    /// `w_{ij}` for `(i, j)` in `omega_bar`, with `|w_{ij}| = |x_i|`.
    pub w_vars: Vec<Variable>,
    /// First polarized index of each source variable.
    offsets: Vec<usize>,
}

pub fn polarized_name(i: usize, j: usize) -> String {
    format!("x'_{i}_{j}")
}

impl PolarizationData {
    /// 0-based index of `x'_{ij}` among the polarized even variables.
    pub fn var_index(&self, (i, j): Pair) -> usize {
        debug_assert!(j >= 1 && j as u32 <= self.exponent_bounds[i - 1]);
        self.offsets[i - 1] + j - 1
    }

    /// The pair `(i, j)` of a polarized even variable.
    pub fn pair_of(&self, var: usize) -> Pair {
        let i = self.offsets.partition_point(|&o| o <= var);
        (i, var - self.offsets[i - 1] + 1)
    }

    /// `|Ω̄| = Σ a_i - m`.
    pub fn w_count(&self) -> usize {
        self.omega_bar.len()
    }
}

pub fn polarize(ring: &MonomialRing) -> Result<PolarizationData> {
    let table = ring.table();
    let m = table.even_count();
    let n = table.odd_count();
    let gens = ring.ideal().generators();

    let exponent_bounds: Vec<u32> = (0..m)
        .map(|i| gens.iter().map(|g| g.even_exponents()[i]).max().unwrap_or(0).max(1))
        .collect();
    let mut offsets = Vec::with_capacity(m);
    let mut omega = Vec::new();
    let mut polar_vars = Vec::new();
    for (i, &a) in exponent_bounds.iter().enumerate() {
        offsets.push(omega.len());
        for j in 1..=a as usize {
            omega.push((i + 1, j));
            polar_vars.push(Variable::new(polarized_name(i + 1, j), table.even()[i].degree));
        }
    }
    let omega_bar: Vec<Pair> = omega.iter().copied().filter(|&(_, j)| j >= 2).collect();
    let w_vars = omega_bar
        .iter()
        .map(|&(i, j)| Variable::new(format!("w_{i}_{j}"), table.even()[i - 1].degree))
        .collect();

    let polar_table = VariableTable::new(polar_vars, table.odd().to_vec())?;
    let width = omega.len();
    let polar_gens: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut e = vec![0u32; width];
            for (i, &a) in g.even_exponents().iter().enumerate() {
                for j in 0..a as usize {
                    e[offsets[i] + j] = 1;
                }
            }
            Monomial::from_mask(e, n, g.odd_mask())
        })
        .collect();
    let polarized = MonomialRing::new(polar_table, polar_gens)?;

    Ok(PolarizationData {
        source: ring.clone(),
        polarized,
        exponent_bounds,
        omega,
        omega_bar,
        w_vars,
        offsets,
    })
}

/// `x'_{ij} ↦ x_i`, summing exponents; the odd part is unchanged.
pub fn depolarize(data: &PolarizationData, mon: &Monomial) -> Monomial {
    let m = data.source.table().even_count();
    let mut e = vec![0u32; m];
    for (var, &a) in mon.even_exponents().iter().enumerate() {
        let (i, _) = data.pair_of(var);
        e[i - 1] += a;
    }
    Monomial::from_mask(e, mon.odd_len(), mon.odd_mask())
}

/// A quotient of `A'` in which some `x'_{ij}` are set equal to `x'_{i1}`,
/// presented as a monomial ring over the surviving variables.
#[derive(Clone, Debug)]
pub struct IdentifiedRing {
    pub ring: MonomialRing,
    /// Polarized even variable ↦ surviving variable it is identified with.
    pub var_map: Vec<usize>,
}

/// Identifies `x'_{ij}` with `x'_{i1}` for every `(i, j)` in `omega_bar`
/// whose position satisfies `identify`, then re-minimalizes.
pub fn identified_ring(data: &PolarizationData, identify: impl Fn(usize) -> bool) -> IdentifiedRing {
    let bar_pos: HashMap<Pair, usize> =
        data.omega_bar.iter().enumerate().map(|(k, &p)| (p, k)).collect();
    let polar = data.polarized.table();
    let mut kept = Vec::new();
    let mut new_index = vec![usize::MAX; data.omega.len()];
    for (var, &pair) in data.omega.iter().enumerate() {
        let gone = bar_pos.get(&pair).is_some_and(|&k| identify(k));
        if !gone {
            new_index[var] = kept.len();
            kept.push(polar.even()[var].clone());
        }
    }
    let var_map: Vec<usize> = data
        .omega
        .iter()
        .enumerate()
        .map(|(var, &(i, _))| {
            if new_index[var] != usize::MAX {
                new_index[var]
            } else {
                new_index[data.var_index((i, 1))]
            }
        })
        .collect();
    let table = VariableTable::new(kept, polar.odd().to_vec())
        .expect("a subset of a valid table is valid");
    let width = table.even_count();
    let gens = data
        .polarized
        .ideal()
        .generators()
        .iter()
        .map(|g| {
            let mut e = vec![0u32; width];
            for (var, &a) in g.even_exponents().iter().enumerate() {
                e[var_map[var]] += a;
            }
            Monomial::from_mask(e, g.odd_len(), g.odd_mask())
        })
        .collect::<Vec<_>>();
    IdentifiedRing {
        ring: MonomialRing::new(table, gens).expect("identification keeps generators nonconstant"),
        var_map,
    }
}

/// Kernel data of multiplication by `x_a - x_b` from degree `source_degree`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub source_degree: u32,
    pub source_dim: usize,
    pub kernel_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StepVerdict {
    Injective,
    /// Nonzero kernel; `witness` is one kernel element.
    KernelFound {
        source_degree: u32,
        kernel_rank: usize,
        witness: String,
    },
    /// Every tested source degree had an empty basis.
    Untested,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub step: usize,
    pub pair: Pair,
    pub degrees: Vec<DegreeCheck>,
    pub verdict: StepVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RegularSequenceVerdict {
    Pass,
    KernelFound { step: usize, source_degree: u32 },
    BoundTooSmall { step: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularSequenceReport {
    pub d_max: u32,
    pub exponent_bounds: Vec<u32>,
    pub steps: Vec<StepReport>,
    pub verdict: RegularSequenceVerdict,
}

impl RegularSequenceReport {
    pub fn passed(&self) -> bool {
        self.verdict == RegularSequenceVerdict::Pass
    }
}

/// Key of the block of `m` under the grading preserved by `x_a - x_b`.
fn merged_key(m: &Monomial, a: usize, b: usize) -> Monomial {
    let mut e = m.even_exponents().to_vec();
    let s = e[a] + e[b];
    e[a] = s;
    if a != b {
        e[b] = 0;
    }
    Monomial::from_mask(e, m.odd_len(), m.odd_mask())
}

fn image_of(ring: &MonomialRing, m: &Monomial, a: usize, b: usize) -> Vec<(Monomial, i64)> {
    if a == b {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(2);
    let ma = m.times_even(a);
    if !ring.ideal().contains(&ma) {
        out.push((ma, 1));
    }
    let mb = m.times_even(b);
    if !ring.ideal().contains(&mb) {
        out.push((mb, -1));
    }
    out
}

/// Multiplication by `x_a - x_b` on `ring`, from degree `d` to
/// `d + |x_a|`, on standard-monomial bases. Returns the matrix and both bases.
pub fn multiplication_matrix(
    ring: &MonomialRing,
    a: usize,
    b: usize,
    d: u32,
) -> (IntegerMatrix, Vec<Monomial>, Vec<Monomial>) {
    let shift = ring.table().even()[a].degree;
    let source = standard_monomials(ring, d);
    let target = standard_monomials(ring, d + shift);
    let pos: HashMap<&Monomial, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut mat = IntegerMatrix::zeros(target.len(), source.len());
    for (j, m) in source.iter().enumerate() {
        for (t, c) in image_of(ring, m, a, b) {
            mat[(pos[&t], j)] += c;
        }
    }
    (mat, source, target)
}

/// Kernel rank of multiplication by `x_a - x_b` out of degree `d`, computed
/// on the direct-sum blocks of the finer grading that merges `x_a` and `x_b`.
/// Returns the rank and, when positive, one kernel element.
fn kernel_in_degree(ring: &MonomialRing, a: usize, b: usize, d: u32) -> (usize, usize, Option<String>) {
    let source = standard_monomials(ring, d);
    let dim = source.len();
    let mut blocks: HashMap<Monomial, Vec<Monomial>> = HashMap::new();
    for m in source {
        blocks.entry(merged_key(&m, a, b)).or_default().push(m);
    }
    let mut keys: Vec<&Monomial> = blocks.keys().collect();
    keys.sort();
    let mut total = 0;
    let mut witness = None;
    for key in keys {
        let cols = &blocks[key];
        let mut rows: HashMap<Monomial, usize> = HashMap::new();
        let columns: Vec<Vec<(usize, i64)>> = cols
            .iter()
            .map(|m| {
                image_of(ring, m, a, b)
                    .into_iter()
                    .map(|(t, c)| {
                        let n = rows.len();
                        (*rows.entry(t).or_insert(n), c)
                    })
                    .collect()
            })
            .collect();
        let mat = SparseMatrix::from_columns(rows.len(), columns);
        let kernel = cols.len() - mat.invariant_factors().rank;
        if kernel > 0 && witness.is_none() {
            witness = Some(kernel_witness(&mat.to_dense(), cols, ring));
        }
        total += kernel;
    }
    (dim, total, witness)
}

fn kernel_witness(mat: &IntegerMatrix, cols: &[Monomial], ring: &MonomialRing) -> String {
    let s = smith_normal_form(mat);
    let j = s.rank();
    let terms: Vec<String> = (0..cols.len())
        .filter(|&r| s.v[(r, j)] != 0.into())
        .map(|r| format!("({})*{}", s.v[(r, j)], cols[r].display(ring.table())))
        .collect();
    terms.join(" + ")
}

/// Injectivity of multiplication by `x_a - x_b` on `ring` for every source
/// degree whose target degree is at most `d_max`.
pub fn regular_step(ring: &MonomialRing, a: usize, b: usize, d_max: u32, step: usize, pair: Pair) -> StepReport {
    let shift = ring.table().even()[a].degree;
    let top = d_max.checked_sub(shift);
    let results: Vec<(DegreeCheck, Option<String>)> = top
        .map_or(0..0, |t| 0..t + 1)
        .into_par_iter()
        .map(|d| {
            let (dim, kernel_rank, witness) = kernel_in_degree(ring, a, b, d);
            (
                DegreeCheck {
                    source_degree: d,
                    source_dim: dim,
                    kernel_rank,
                },
                witness,
            )
        })
        .collect();
    let verdict = match results.iter().find(|(c, _)| c.kernel_rank > 0) {
        Some((c, w)) => StepVerdict::KernelFound {
            source_degree: c.source_degree,
            kernel_rank: c.kernel_rank,
            witness: w.clone().unwrap_or_default(),
        },
        None if results.iter().all(|(c, _)| c.source_dim == 0) => StepVerdict::Untested,
        None => StepVerdict::Injective,
    };
    StepReport {
        step,
        pair,
        degrees: results.into_iter().map(|(c, _)| c).collect(),
        verdict,
    }
}

/// For each `k`, multiplication by `x'_{i_{k+1} j_{k+1}} - x'_{i_{k+1} 1}` on
/// `A'` with the first `k` pairs of `Ω̄` identified must be injective.
pub fn check_regular_sequence(data: &PolarizationData, d_max: u32) -> RegularSequenceReport {
    let steps: Vec<StepReport> = (0..data.w_count())
        .map(|k| {
            let identified = identified_ring(data, |pos| pos < k);
            let pair = data.omega_bar[k];
            let a = identified.var_map[data.var_index(pair)];
            let b = identified.var_map[data.var_index((pair.0, 1))];
            regular_step(&identified.ring, a, b, d_max, k, pair)
        })
        .collect();
    let verdict = steps
        .iter()
        .find_map(|s| match &s.verdict {
            StepVerdict::KernelFound { source_degree, .. } => Some(RegularSequenceVerdict::KernelFound {
                step: s.step,
                source_degree: *source_degree,
            }),
            _ => None,
        })
        .or_else(|| {
            steps
                .iter()
                .find(|s| s.verdict == StepVerdict::Untested)
                .map(|s| RegularSequenceVerdict::BoundTooSmall { step: s.step })
        })
        .unwrap_or(RegularSequenceVerdict::Pass);
    RegularSequenceReport {
        d_max,
        exponent_bounds: data.exponent_bounds.clone(),
        steps,
        verdict,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankIdentityReport {
    pub d_max: u32,
    pub source: HilbertFunction,
    pub identified: HilbertFunction,
    pub first_mismatch: Option<u32>,
}

impl RankIdentityReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// The ring `A'/(x'_{ij} - x'_{i1})` presented over the source variables:
/// the depolarized generators of `I'`, re-minimalized.
pub fn depolarized_ring(data: &PolarizationData) -> MonomialRing {
    let gens = data
        .polarized
        .ideal()
        .generators()
        .iter()
        .map(|g| depolarize(data, g));
    MonomialRing::new(data.source.table().clone(), minimalize(gens).generators().to_vec())
        .expect("depolarized generators are nonconstant")
}

pub fn check_rank_identity(data: &PolarizationData, d_max: u32) -> RankIdentityReport {
    let source = hilbert_function(&data.source, d_max);
    let identified = hilbert_function(&depolarized_ring(data), d_max);
    let first_mismatch = source.first_mismatch(&identified);
    RankIdentityReport {
        d_max,
        source,
        identified,
        first_mismatch,
    }
}
