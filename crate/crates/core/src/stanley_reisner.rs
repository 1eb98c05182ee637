//! Square-free monomial ideals and simplicial complexes, in both directions,
//! plus the generalized ideal for vertices carrying several degree-2
//! generators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{bits, minimalize, Monomial, MonomialIdeal, MonomialRing, Variable, VariableTable};
use crate::polarization::{Pair, PolarizationData};

/// A complex on vertices `1..=vertex_count`, stored by its minimal
/// non-faces. A set is a face iff it contains no minimal non-face.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplicialComplex {
    vertex_count: usize,
    minimal_non_faces: Vec<Vec<usize>>,
}

fn mask_of(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &v| m | 1 << (v - 1))
}

impl SimplicialComplex {
    /// Reduces `non_faces` to an inclusion antichain, sorted.
    ///
    /// Panics on a vertex outside `1..=vertex_count` or more than 64 vertices.
    pub fn new(vertex_count: usize, non_faces: Vec<Vec<usize>>) -> Self {
        assert!(vertex_count <= 64, "at most 64 vertices");
        let mut sets: Vec<Vec<usize>> = non_faces
            .into_iter()
            .map(|mut s| {
                assert!(
                    s.iter().all(|&v| v >= 1 && v <= vertex_count),
                    "vertex out of range"
                );
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        sets.dedup();
        let mut kept: Vec<Vec<usize>> = Vec::new();
        let mut kept_masks: Vec<u64> = Vec::new();
        for s in sets {
            let m = mask_of(&s);
            if !kept_masks.iter().any(|&k| k & !m == 0) {
                kept_masks.push(m);
                kept.push(s);
            }
        }
        kept.sort();
        SimplicialComplex {
            vertex_count,
            minimal_non_faces: kept,
        }
    }

    /// The full simplex on `n` vertices.
    pub fn simplex(n: usize) -> Self {
        SimplicialComplex::new(n, Vec::new())
    }

    /// The boundary of the `(n-1)`-simplex.
    pub fn simplex_boundary(n: usize) -> Self {
        SimplicialComplex::new(n, vec![(1..=n).collect()])
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn minimal_non_faces(&self) -> &[Vec<usize>] {
        &self.minimal_non_faces
    }

    pub fn is_face(&self, sigma: &[usize]) -> bool {
        let m = mask_of(sigma);
        self.minimal_non_faces.iter().all(|nf| mask_of(nf) & !m != 0)
    }

    /// Every face as a sorted vertex list. Exponential; for small complexes.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count;
        assert!(n <= 20, "face enumeration limited to 20 vertices");
        let nf: Vec<u64> = self.minimal_non_faces.iter().map(|s| mask_of(s)).collect();
        (0u64..1 << n)
            .filter(|&m| nf.iter().all(|&f| f & !m != 0))
            .map(|m| bits(m).map(|v| v + 1).collect())
            .collect()
    }
}

pub fn is_face(k: &SimplicialComplex, sigma: &[usize]) -> bool {
    k.is_face(sigma)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexKind {
    /// Polarized even variable `x'_{ij}`.
    Even { pair: Pair, degree: u32 },
    /// Odd variable `y_k`, 1-based.
    Odd { index: usize, degree: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub vertex: usize,
    pub name: String,
    #[serde(flatten)]
    pub kind: VertexKind,
}

/// Vertex numbering: `(i, j) ↦ j + Σ_{s<i} a_s` for even variables, then
/// `Σ a_i + k` for the odd variable `y_k`. Vertex `v <= e` is the `(v-1)`-th
/// even variable of the table, vertex `e + k` the `(k-1)`-th odd one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexLabeling {
    pub vertices: Vec<Vertex>,
}

impl VertexLabeling {
    pub fn from_polarization(data: &PolarizationData) -> Self {
        let table = data.polarized.table();
        let even = data.omega.iter().zip(table.even()).map(|(&pair, v)| (v, VertexKind::Even {
            pair,
            degree: v.degree,
        }));
        Self::build(even, table)
    }

    /// Labeling of a table read as already square-free: even variable `i`
    /// is the pair `(i, 1)`.
    pub fn from_table(table: &VariableTable) -> Self {
        let even = table.even().iter().enumerate().map(|(i, v)| (v, VertexKind::Even {
            pair: (i + 1, 1),
            degree: v.degree,
        }));
        Self::build(even, table)
    }

    fn build<'a>(even: impl Iterator<Item = (&'a Variable, VertexKind)>, table: &VariableTable) -> Self {
        let mut vertices: Vec<Vertex> = even
            .enumerate()
            .map(|(idx, (v, kind))| Vertex {
                vertex: idx + 1,
                name: v.name.clone(),
                kind,
            })
            .collect();
        let e = vertices.len();
        for (k, v) in table.odd().iter().enumerate() {
            vertices.push(Vertex {
                vertex: e + k + 1,
                name: v.name.clone(),
                kind: VertexKind::Odd {
                    index: k + 1,
                    degree: v.degree,
                },
            });
        }
        VertexLabeling { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn even_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| matches!(v.kind, VertexKind::Even { .. }))
            .count()
    }

    fn conforms(&self, table: &VariableTable) -> bool {
        self.even_count() == table.even_count() && self.len() == table.even_count() + table.odd_count()
    }

    fn support(&self, mon: &Monomial) -> Vec<usize> {
        let e = self.even_count();
        let mut s: Vec<usize> = mon
            .even_exponents()
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, _)| i + 1)
            .collect();
        s.extend(bits(mon.odd_mask()).map(|k| e + k + 1));
        s
    }
}

/// Minimal non-faces are the supports of the minimal generators.
pub fn complex_from_ideal(ideal: &MonomialIdeal, labeling: &VertexLabeling) -> Result<SimplicialComplex> {
    if !ideal.is_square_free() {
        return Err(Error::NotSquareFree);
    }
    let non_faces = ideal.generators().iter().map(|g| labeling.support(g)).collect();
    Ok(SimplicialComplex::new(labeling.len(), non_faces))
}

/// The Stanley–Reisner ideal: one square-free generator per minimal
/// non-face.
pub fn ideal_from_complex(k: &SimplicialComplex, labeling: &VertexLabeling, table: &VariableTable) -> MonomialIdeal {
    assert!(labeling.conforms(table), "labeling does not match the table");
    assert_eq!(k.vertex_count(), labeling.len());
    let e = table.even_count();
    let n = table.odd_count();
    minimalize(k.minimal_non_faces().iter().map(|nf| {
        let mut even = vec![0u32; e];
        let mut odd = Vec::new();
        for &v in nf {
            if v <= e {
                even[v - 1] = 1;
            } else {
                odd.push(v - e - 1);
            }
        }
        Monomial::new(even, n, &odd)
    }))
}

/// Variables of `Q'`: `c_v` degree-2 generators `z'_{ijk}` per even vertex,
/// vertex-major, then the odd variables unchanged.
pub fn generalized_table(labeling: &VertexLabeling, copies: &[u32]) -> Result<VariableTable> {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    let mut c = copies.iter();
    for v in &labeling.vertices {
        match v.kind {
            VertexKind::Even { pair: (i, j), .. } => {
                let count = *c.next().expect("one copy count per even vertex");
                for k in 1..=count {
                    even.push(Variable::new(format!("z'_{i}_{j}_{k}"), 2));
                }
            }
            VertexKind::Odd { degree, .. } => odd.push(Variable::new(v.name.clone(), degree)),
        }
    }
    VariableTable::new(even, odd)
}

/// For each minimal non-face, every choice of one `z'` generator per even
/// vertex in it, times its odd variables. `copies[v]` is the block size of
/// the `v`-th even vertex.
pub fn generalized_sr_ideal(k: &SimplicialComplex, labeling: &VertexLabeling, copies: &[u32]) -> MonomialIdeal {
    generalized_sr_ideal_bounded(k, labeling, copies, None)
}

/// [`generalized_sr_ideal`] without the generators of degree above `bound`.
/// All choices for one non-face share its degree, so whole non-faces are
/// skipped.
pub fn generalized_sr_ideal_bounded(
    k: &SimplicialComplex,
    labeling: &VertexLabeling,
    copies: &[u32],
    bound: Option<u32>,
) -> MonomialIdeal {
    let e = labeling.even_count();
    assert_eq!(copies.len(), e, "one copy count per even vertex");
    assert!(copies.iter().all(|&c| c > 0), "block sizes must be positive");
    let offsets: Vec<usize> = copies
        .iter()
        .scan(0usize, |acc, &c| {
            let o = *acc;
            *acc += c as usize;
            Some(o)
        })
        .collect();
    let width: usize = copies.iter().map(|&c| c as usize).sum();
    let n = labeling.len() - e;

    let mut gens = Vec::new();
    for nf in k.minimal_non_faces() {
        let evens: Vec<usize> = nf.iter().copied().filter(|&v| v <= e).collect();
        let odd: Vec<usize> = nf.iter().filter(|&&v| v > e).map(|&v| v - e - 1).collect();
        let degree = 2 * evens.len() as u32
            + odd
                .iter()
                .map(|&k| match labeling.vertices[e + k].kind {
                    VertexKind::Odd { degree, .. } => degree,
                    VertexKind::Even { .. } => unreachable!("odd block follows the even one"),
                })
                .sum::<u32>();
        if bound.is_some_and(|b| degree > b) {
            continue;
        }
        let mut choice = vec![0u32; evens.len()];
        loop {
            let mut exps = vec![0u32; width];
            for (slot, &v) in evens.iter().enumerate() {
                exps[offsets[v - 1] + choice[slot] as usize] = 1;
            }
            gens.push(Monomial::new(exps, n, &odd));
            // odometer over the choices
            let mut pos = 0;
            loop {
                if pos == evens.len() {
                    break;
                }
                choice[pos] += 1;
                if choice[pos] < copies[evens[pos] - 1] {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == evens.len() {
                break;
            }
        }
    }
    minimalize(gens)
}

/// `Q'/L'` as a ring.
pub fn generalized_ring(k: &SimplicialComplex, labeling: &VertexLabeling, copies: &[u32]) -> Result<MonomialRing> {
    let table = generalized_table(labeling, copies)?;
    let ideal = generalized_sr_ideal(k, labeling, copies);
    MonomialRing::new(table, ideal.generators().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;
    use crate::polarization::polarize;

    fn x2y() -> (PolarizationData, VertexLabeling) {
        let data = polarize(&parse_presentation("ring { even: x:4; odd: y:1 } ideal { x^2*y }").unwrap()).unwrap();
        let labeling = VertexLabeling::from_polarization(&data);
        (data, labeling)
    }

    #[test]
    fn x2y_complex() {
        let (data, labeling) = x2y();
        let k = complex_from_ideal(data.polarized.ideal(), &labeling).unwrap();
        assert_eq!(k, SimplicialComplex::simplex_boundary(3));
        assert_eq!(k.minimal_non_faces(), &[vec![1, 2, 3]]);
        let back = ideal_from_complex(&k, &labeling, data.polarized.table());
        assert_eq!(&back, data.polarized.ideal());
    }

    #[test]
    fn zero_ideal_is_full_simplex() {
        let ring = parse_presentation("ring { even: a:2; odd: b:1 } ideal { }").unwrap();
        let labeling = VertexLabeling::from_table(ring.table());
        let k = complex_from_ideal(ring.ideal(), &labeling).unwrap();
        assert_eq!(k, SimplicialComplex::simplex(2));
        assert!(ideal_from_complex(&k, &labeling, ring.table()).is_zero());
    }

    #[test]
    fn two_edges() {
        let ring = parse_presentation("ring { even: p:2, q:2; odd: s:1, t:1 } ideal { p*s; q*t }").unwrap();
        let labeling = VertexLabeling::from_table(ring.table());
        let k = complex_from_ideal(ring.ideal(), &labeling).unwrap();
        assert_eq!(k.minimal_non_faces(), &[vec![1, 3], vec![2, 4]]);
    }

    #[test]
    fn read_off_ideal() {
        let ring = parse_presentation("ring { even: v1:2, v2:2, v3:2 } ideal { }").unwrap();
        let labeling = VertexLabeling::from_table(ring.table());
        let k = SimplicialComplex::new(3, vec![vec![1, 2], vec![2, 3]]);
        let ideal = ideal_from_complex(&k, &labeling, ring.table());
        let shown: Vec<String> = ideal.generators().iter().map(|g| g.display(ring.table())).collect();
        assert_eq!(shown, vec!["v1*v2", "v2*v3"]);
    }

    #[test]
    fn non_square_free_rejected() {
        let ring = parse_presentation("ring { even: x:2 } ideal { x^2 }").unwrap();
        let labeling = VertexLabeling::from_table(ring.table());
        assert_eq!(complex_from_ideal(ring.ideal(), &labeling), Err(Error::NotSquareFree));
    }

    #[test]
    fn faces_of_boundary() {
        let k = SimplicialComplex::simplex_boundary(3);
        assert!(k.is_face(&[]));
        assert!(k.is_face(&[1, 2]));
        assert!(!k.is_face(&[1, 2, 3]));
        assert_eq!(k.faces().len(), 7);
    }

    #[test]
    fn antichain_reduction() {
        let k = SimplicialComplex::new(4, vec![vec![1, 2, 3], vec![1, 2], vec![2, 1], vec![4]]);
        assert_eq!(k.minimal_non_faces(), &[vec![1, 2], vec![4]]);
    }

    #[test]
    fn x2y_generalized_ideal() {
        let (data, labeling) = x2y();
        let k = complex_from_ideal(data.polarized.ideal(), &labeling).unwrap();
        let ring = generalized_ring(&k, &labeling, &[2, 2]).unwrap();
        let mut shown = ring.display_ideal();
        shown.sort();
        assert_eq!(
            shown,
            vec![
                "z'_1_1_1*z'_1_2_1*y",
                "z'_1_1_1*z'_1_2_2*y",
                "z'_1_1_2*z'_1_2_1*y",
                "z'_1_1_2*z'_1_2_2*y",
            ]
        );
    }

    #[test]
    fn single_copies_reduce_to_sr_ideal() {
        let (data, labeling) = x2y();
        let k = complex_from_ideal(data.polarized.ideal(), &labeling).unwrap();
        let l = generalized_sr_ideal(&k, &labeling, &[1, 1]);
        assert_eq!(&l, data.polarized.ideal());
    }

    #[test]
    fn product_of_choice_counts() {
        let ring = parse_presentation("ring { even: a:4, b:2 } ideal { a*b }").unwrap();
        let labeling = VertexLabeling::from_table(ring.table());
        let k = complex_from_ideal(ring.ideal(), &labeling).unwrap();
        assert_eq!(generalized_sr_ideal(&k, &labeling, &[2, 1]).generators().len(), 2);
    }
}
