//! Realization plans: the spaces, complex, fibration and comparison model
//! attached to a ring, as a deterministic JSON document.

use serde::Serialize;

use crate::error::Result;
use crate::monomial::{minimalize, Monomial, MonomialIdeal, MonomialRing, Variable, VariableTable};
use crate::polarization::{polarize, Pair, PolarizationData};
use crate::stanley_reisner::{
    complex_from_ideal, generalized_sr_ideal_bounded, generalized_table, SimplicialComplex, Vertex, VertexKind,
    VertexLabeling,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingView {
    pub even: Vec<Variable>,
    pub odd: Vec<Variable>,
    pub ideal: Vec<String>,
}

impl RingView {
    pub fn of(ring: &MonomialRing) -> Self {
        RingView {
            even: ring.table().even().to_vec(),
            odd: ring.table().odd().to_vec(),
            ideal: ring.display_ideal(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarizationView {
    pub exponent_bounds: Vec<u32>,
    pub omega: Vec<Pair>,
    pub omega_bar: Vec<Pair>,
    pub variables: Vec<Variable>,
    pub w_variables: Vec<Variable>,
    pub ideal: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexView {
    pub vertex_count: usize,
    pub minimal_non_faces: Vec<Vec<usize>>,
    pub vertices: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Factor {
    /// `K(Z, degree)` for an even vertex.
    EilenbergMaclane {
        vertex: usize,
        pair: Pair,
        variable: String,
        degree: u32,
        space: String,
    },
    /// `S^degree` for an odd vertex.
    Sphere {
        vertex: usize,
        variable: String,
        degree: u32,
        space: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coordinate {
    pub pair: Pair,
    pub map: String,
    pub rule: String,
    pub space: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fibration {
    pub total_space: String,
    pub coordinates: Vec<Coordinate>,
    pub fiber: String,
    pub predicted_cohomology: RingView,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZBlock {
    pub vertex: usize,
    pub pair: Pair,
    pub space: String,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorImage {
    pub source: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZModelView {
    /// Generators of degree above this bound are omitted from both ideals.
    pub truncation: Option<u32>,
    pub blocks: Vec<ZBlock>,
    pub coordinates: Vec<Coordinate>,
    pub l_prime: Vec<String>,
    pub quotient_variables: Vec<Variable>,
    pub l: Vec<String>,
    pub generator_map: Vec<GeneratorImage>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    /// Every even degree is 2, so the fiber's whole cohomology is predicted.
    pub exact_cohomology: bool,
    pub free_split: bool,
}

/// Typed form of the comparison model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZModel {
    /// `c_i = |x_i|/2` for each even vertex.
    pub copies: Vec<u32>,
    pub truncation: Option<u32>,
    /// `Q'/L'` over the `z'_{ijk}`.
    pub q_prime: MonomialRing,
    /// `Q/L` over the `z_{ik}`, from the direct rule.
    pub q: MonomialRing,
    /// `z'_{ijk}` ↦ index of `z_{ik}`.
    pub substitution: Vec<usize>,
    /// Even vertex ↦ its `z'` indices, for `g(x'_{ij}) = Π_l z'_{ijl}`.
    pub vertex_generators: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizationPlan {
    pub source: RingView,
    pub polarization: PolarizationView,
    pub complex: ComplexView,
    pub factors: Vec<Factor>,
    pub fibration: Fibration,
    pub z_model: ZModelView,
    pub flags: Flags,
    #[serde(skip)]
    data: PolarizationData,
    #[serde(skip)]
    k: SimplicialComplex,
    #[serde(skip)]
    labeling: VertexLabeling,
    #[serde(skip)]
    model: ZModel,
}

impl RealizationPlan {
    pub fn polarization_data(&self) -> &PolarizationData {
        &self.data
    }

    pub fn simplicial_complex(&self) -> &SimplicialComplex {
        &self.k
    }

    pub fn labeling(&self) -> &VertexLabeling {
        &self.labeling
    }

    pub fn z(&self) -> &ZModel {
        &self.model
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes") + "\n"
    }
}

fn em_space(degree: u32) -> String {
    format!("K(Z,{degree})")
}

fn cp_space(copies: u32) -> String {
    if copies == 1 {
        "CP^inf".into()
    } else {
        format!("(CP^inf)^{copies}")
    }
}

/// The plan for `ring`, with every generator of `L'` and `L` listed.
pub fn emit_plan(ring: &MonomialRing) -> Result<RealizationPlan> {
    build(ring, None)
}

/// As [`emit_plan`], omitting comparison-model generators of degree above
/// `bound`; ranks up to `bound` are unaffected.
pub fn emit_plan_truncated(ring: &MonomialRing, bound: u32) -> Result<RealizationPlan> {
    build(ring, Some(bound))
}

fn build(ring: &MonomialRing, bound: Option<u32>) -> Result<RealizationPlan> {
    let data = polarize(ring)?;
    let labeling = VertexLabeling::from_polarization(&data);
    let k = complex_from_ideal(data.polarized.ideal(), &labeling)?;
    let table = ring.table();
    let polar_table = data.polarized.table();

    let factors = labeling
        .vertices
        .iter()
        .map(|v| match v.kind {
            VertexKind::Even { pair, degree } => Factor::EilenbergMaclane {
                vertex: v.vertex,
                pair,
                variable: v.name.clone(),
                degree,
                space: em_space(degree),
            },
            VertexKind::Odd { degree, .. } => Factor::Sphere {
                vertex: v.vertex,
                variable: v.name.clone(),
                degree,
                space: format!("S^{degree}"),
            },
        })
        .collect();

    let coordinates = |letter: &str, space: &dyn Fn(usize) -> String| -> Vec<Coordinate> {
        data.omega_bar
            .iter()
            .map(|&(i, j)| Coordinate {
                pair: (i, j),
                map: format!("delta_{i}"),
                rule: format!("{letter}_{j}*{letter}_1^-1"),
                space: space(i),
            })
            .collect()
    };
    let fibration = Fibration {
        total_space: "(X+Y,*)^K".into(),
        coordinates: coordinates("u", &|i| em_space(table.even()[i - 1].degree)),
        fiber: "X_A".into(),
        predicted_cohomology: RingView::of(ring),
    };

    let model = z_model(&data, &labeling, &k, bound)?;
    let z_table = model.q_prime.table();
    let blocks = labeling
        .vertices
        .iter()
        .filter_map(|v| match v.kind {
            VertexKind::Even { pair, .. } => Some((v.vertex, pair)),
            VertexKind::Odd { .. } => None,
        })
        .map(|(vertex, pair)| ZBlock {
            vertex,
            pair,
            space: cp_space(model.copies[vertex - 1]),
            generators: model.vertex_generators[vertex - 1]
                .iter()
                .map(|&z| z_table.even()[z].name.clone())
                .collect(),
        })
        .collect();
    let mut generator_map: Vec<GeneratorImage> = model
        .vertex_generators
        .iter()
        .enumerate()
        .map(|(v, zs)| GeneratorImage {
            source: polar_table.even()[v].name.clone(),
            image: zs
                .iter()
                .map(|&z| z_table.even()[z].name.clone())
                .collect::<Vec<_>>()
                .join("*"),
        })
        .collect();
    generator_map.extend(table.odd().iter().map(|y| GeneratorImage {
        source: y.name.clone(),
        image: y.name.clone(),
    }));
    let z_view = ZModelView {
        truncation: bound,
        blocks,
        coordinates: coordinates("v", &|i| cp_space(table.even()[i - 1].degree / 2)),
        l_prime: model.q_prime.display_ideal(),
        quotient_variables: model.q.table().even().to_vec(),
        l: model.q.display_ideal(),
        generator_map,
    };

    Ok(RealizationPlan {
        source: RingView::of(ring),
        polarization: PolarizationView {
            exponent_bounds: data.exponent_bounds.clone(),
            omega: data.omega.clone(),
            omega_bar: data.omega_bar.clone(),
            variables: polar_table.even().to_vec(),
            w_variables: data.w_vars.clone(),
            ideal: data.polarized.display_ideal(),
        },
        complex: ComplexView {
            vertex_count: k.vertex_count(),
            minimal_non_faces: k.minimal_non_faces().to_vec(),
            vertices: labeling.vertices.clone(),
        },
        factors,
        fibration,
        z_model: z_view,
        flags: Flags {
            exact_cohomology: table.even().iter().all(|v| v.degree == 2),
            free_split: true,
        },
        data,
        k,
        labeling,
        model,
    })
}

/// Every multiset of size `size` drawn from `0..n`, as multiplicity vectors.
fn multisets(n: usize, size: u32) -> Vec<Vec<u32>> {
    fn go(n: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == n {
            cur[i] = left;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for a in 0..=left {
            cur[i] = a;
            go(n, i + 1, left - a, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        if size == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n, 0, size, &mut vec![0; n], &mut out);
    out
}

fn z_model(
    data: &PolarizationData,
    labeling: &VertexLabeling,
    k: &SimplicialComplex,
    bound: Option<u32>,
) -> Result<ZModel> {
    let table = data.source.table();
    let c: Vec<u32> = table.even().iter().map(|v| v.degree / 2).collect();
    let copies: Vec<u32> = data.omega.iter().map(|&(i, _)| c[i - 1]).collect();

    let prime_table = generalized_table(labeling, &copies)?;
    let l_prime = generalized_sr_ideal_bounded(k, labeling, &copies, bound);
    let q_prime = MonomialRing::new(prime_table, l_prime.generators().to_vec())?;

    let mut vertex_generators = Vec::new();
    let mut substitution = Vec::new();
    let mut next = 0;
    let z_offsets: Vec<usize> = c
        .iter()
        .scan(0usize, |acc, &ci| {
            let o = *acc;
            *acc += ci as usize;
            Some(o)
        })
        .collect();
    for &(i, _) in &data.omega {
        let zs: Vec<usize> = (next..next + c[i - 1] as usize).collect();
        substitution.extend((0..c[i - 1] as usize).map(|l| z_offsets[i - 1] + l));
        next += zs.len();
        vertex_generators.push(zs);
    }

    let q_vars: Vec<Variable> = (0..table.even_count())
        .flat_map(|i| (1..=c[i]).map(move |l| Variable::new(format!("z_{}_{l}", i + 1), 2)))
        .collect();
    let q_table = VariableTable::new(q_vars, table.odd().to_vec())?;
    let width = q_table.even_count();
    // L: for each generator Π x_i^{a_i} y^b, every product choosing a_i
    // factors (with repetition) from z_{i1..ic_i}.
    let mut l_gens = Vec::new();
    for g in data.source.ideal().generators() {
        let degree = 2 * g.even_total() + table.odd_mask_degree(g.odd_mask());
        if bound.is_some_and(|b| degree > b) {
            continue;
        }
        let mut partial: Vec<Vec<u32>> = vec![vec![0; width]];
        for (i, &a) in g.even_exponents().iter().enumerate() {
            let choices = multisets(c[i] as usize, a);
            let z_offsets = &z_offsets;
            partial = partial
                .iter()
                .flat_map(|p| {
                    choices.iter().map(move |ms| {
                        let mut e = p.clone();
                        for (l, &m) in ms.iter().enumerate() {
                            e[z_offsets[i] + l] += m;
                        }
                        e
                    })
                })
                .collect();
        }
        l_gens.extend(partial.into_iter().map(|e| Monomial::from_mask(e, table.odd_count(), g.odd_mask())));
    }
    let q = MonomialRing::new(q_table, minimalize(l_gens).generators().to_vec())?;

    Ok(ZModel {
        copies,
        truncation: bound,
        q_prime,
        q,
        substitution,
        vertex_generators,
    })
}

impl ZModel {
    /// `(Q'/L')/(z'_{ijk} - z'_{i1k})` presented over the `z_{ik}`: the
    /// substituted generators of `L'`, re-minimalized.
    pub fn identified(&self) -> MonomialRing {
        let width = self.q.table().even_count();
        let gens = self.q_prime.ideal().generators().iter().map(|g| {
            let mut e = vec![0u32; width];
            for (z, &a) in g.even_exponents().iter().enumerate() {
                e[self.substitution[z]] += a;
            }
            Monomial::from_mask(e, g.odd_len(), g.odd_mask())
        });
        MonomialRing::new(self.q.table().clone(), minimalize(gens).generators().to_vec())
            .expect("substitution keeps generators nonconstant")
    }

    /// `g(m)` for a monomial of `A'`.
    pub fn generator_image(&self, m: &Monomial) -> Monomial {
        let mut e = vec![0u32; self.q_prime.table().even_count()];
        for (v, &a) in m.even_exponents().iter().enumerate() {
            for &z in &self.vertex_generators[v] {
                e[z] += a;
            }
        }
        Monomial::from_mask(e, m.odd_len(), m.odd_mask())
    }

    pub fn l_prime(&self) -> &MonomialIdeal {
        self.q_prime.ideal()
    }

    pub fn l(&self) -> &MonomialIdeal {
        self.q.ideal()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_presentation;

    fn x2y() -> RealizationPlan {
        emit_plan(&parse_presentation("ring { even: x:4; odd: y:1 } ideal { x^2*y }").unwrap()).unwrap()
    }

    #[test]
    fn x2y_plan() {
        let plan = x2y();
        assert_eq!(plan.polarization.ideal, vec!["x'_1_1*x'_1_2*y"]);
        assert_eq!(plan.complex.minimal_non_faces, vec![vec![1, 2, 3]]);
        let spaces: Vec<&str> = plan
            .factors
            .iter()
            .map(|f| match f {
                Factor::EilenbergMaclane { space, .. } | Factor::Sphere { space, .. } => space.as_str(),
            })
            .collect();
        assert_eq!(spaces, vec!["K(Z,4)", "K(Z,4)", "S^1"]);
        assert_eq!(plan.fibration.coordinates.len(), 1);
        assert_eq!(plan.fibration.coordinates[0].rule, "u_2*u_1^-1");
        assert_eq!(plan.fibration.coordinates[0].pair, (1, 2));
        assert_eq!(
            plan.z_model.l_prime,
            vec![
                "z'_1_1_1*z'_1_2_1*y",
                "z'_1_1_1*z'_1_2_2*y",
                "z'_1_1_2*z'_1_2_1*y",
                "z'_1_1_2*z'_1_2_2*y"
            ]
        );
        assert_eq!(plan.z_model.l, vec!["z_1_1^2*y", "z_1_1*z_1_2*y", "z_1_2^2*y"]);
        assert_eq!(plan.z_model.generator_map[0].image, "z'_1_1_1*z'_1_1_2");
        assert_eq!(plan.z_model.coordinates[0].rule, "v_2*v_1^-1");
        assert_eq!(plan.z_model.blocks[0].space, "(CP^inf)^2");
        assert!(!plan.flags.exact_cohomology);
        assert!(plan.flags.free_split);
    }

    #[test]
    fn identified_model_matches_direct_rule() {
        let z = x2y().model;
        assert_eq!(z.identified(), z.q);
    }

    #[test]
    fn single_cube() {
        let plan = emit_plan(&parse_presentation("ring { even: x:2 } ideal { x^3 }").unwrap()).unwrap();
        assert_eq!(plan.factors.len(), 3);
        assert_eq!(plan.fibration.coordinates.len(), 2);
        assert!(plan.flags.exact_cohomology);
    }

    #[test]
    fn degree_two_square_free_needs_no_fibration() {
        let plan = emit_plan(&parse_presentation("ring { even: a:2, b:2; odd: c:3 } ideal { a*b; b*c }").unwrap()).unwrap();
        assert!(plan.flags.exact_cohomology);
        assert!(plan.polarization.omega_bar.is_empty());
        assert!(plan.fibration.coordinates.is_empty());
    }

    #[test]
    fn serialization_is_deterministic() {
        assert_eq!(x2y().to_json(), x2y().to_json());
    }

    #[test]
    fn truncation_drops_high_generators() {
        let ring = parse_presentation("ring { even: x:4, z:6; odd: y:1 } ideal { x^2*y; z^3 }").unwrap();
        let full = emit_plan(&ring).unwrap();
        let cut = emit_plan_truncated(&ring, 5).unwrap();
        assert_eq!(cut.z_model.l_prime, vec!["z'_1_1_1*z'_1_2_1*y", "z'_1_1_1*z'_1_2_2*y", "z'_1_1_2*z'_1_2_1*y", "z'_1_1_2*z'_1_2_2*y"]);
        assert!(full.z_model.l_prime.len() > cut.z_model.l_prime.len());
        assert_eq!(cut.z_model.l, vec!["z_1_1^2*y", "z_1_1*z_1_2*y", "z_1_2^2*y"]);
        assert_eq!(cut.z_model.truncation, Some(5));
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(2, 2).len(), 3);
        assert_eq!(multisets(3, 2).len(), 6);
        assert_eq!(multisets(1, 3), vec![vec![3]]);
        assert_eq!(multisets(3, 0), vec![vec![0, 0, 0]]);
    }
}
