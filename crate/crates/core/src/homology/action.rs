//! A polynomial ring `W = Z[w_1..w_N]` acting on a monomial ring `M`, each
//! `w_k` by multiplication with a linear form in the even variables of `M`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::abelian::IntegerMatrix;
use crate::error::{Error, Result};
use crate::monomial::{GradedBasis, Monomial, MonomialRing, Variable, VariableTable};
use crate::polarization::PolarizationData;

/// Element of `M`: coefficients on standard monomials.
pub type Vector = BTreeMap<Monomial, i64>;

/// Linear form `Σ c_v x_v` over even variables of the module ring.
pub type LinearForm = Vec<(usize, i64)>;

#[derive(Clone, Debug)]
pub struct ModuleAction {
    module: MonomialRing,
    w_vars: Vec<Variable>,
    forms: Vec<LinearForm>,
    d_max: u32,
    basis: GradedBasis,
    /// Variables linked by some form share a class; the class totals of a
    /// monomial are preserved (up to a shift) by every `w`.
    var_class: Vec<usize>,
    w_class: Vec<usize>,
    class_count: usize,
}

/// Direct-summand label for Koszul and bar terms: per-class totals plus the
/// odd support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct BlockKey {
    pub counts: Vec<u32>,
    pub odd: u64,
}

impl ModuleAction {
    pub fn new(module: MonomialRing, w_vars: Vec<Variable>, forms: Vec<LinearForm>, d_max: u32) -> Result<Self> {
        assert_eq!(w_vars.len(), forms.len(), "one form per w-variable");
        assert!(w_vars.len() <= 64, "at most 64 w-variables");
        let table = module.table();
        for (w, form) in w_vars.iter().zip(&forms) {
            for &(v, _) in form {
                let var = &table.even()[v];
                if var.degree != w.degree {
                    return Err(Error::InhomogeneousAction {
                        w: w.name.clone(),
                        var: var.name.clone(),
                        var_degree: var.degree,
                        w_degree: w.degree,
                    });
                }
            }
        }

        let m = table.even_count();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for form in &forms {
            if let Some(&(first, _)) = form.first() {
                for &(v, _) in &form[1..] {
                    let (a, b) = (find(&mut parent, first), find(&mut parent, v));
                    parent[a] = b;
                }
            }
        }
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let var_class: Vec<usize> = (0..m)
            .map(|v| {
                let r = find(&mut parent, v);
                let n = ids.len();
                *ids.entry(r).or_insert(n)
            })
            .collect();
        let mut class_count = ids.len();
        let w_class = forms
            .iter()
            .map(|f| match f.first() {
                Some(&(v, _)) => var_class[v],
                None => {
                    class_count += 1;
                    class_count - 1
                }
            })
            .collect();

        let basis = GradedBasis::new(&module, d_max);
        Ok(ModuleAction {
            module,
            w_vars,
            forms,
            d_max,
            basis,
            var_class,
            w_class,
            class_count,
        })
    }

    /// `W` acting on itself.
    pub fn free(w_vars: Vec<Variable>, d_max: u32) -> Self {
        let forms = (0..w_vars.len()).map(|k| vec![(k, 1)]).collect();
        let table = VariableTable::new(w_vars.clone(), Vec::new()).expect("valid w-variables");
        Self::new(MonomialRing::free(table), w_vars, forms, d_max).expect("homogeneous by construction")
    }

    /// `W/(w_k)`.
    pub fn quotient_by(w_vars: Vec<Variable>, k: usize, d_max: u32) -> Self {
        let forms = (0..w_vars.len()).map(|j| vec![(j, 1)]).collect();
        let table = VariableTable::new(w_vars.clone(), Vec::new()).expect("valid w-variables");
        let mut e = vec![0; w_vars.len()];
        e[k] = 1;
        let ring = MonomialRing::new(table, vec![Monomial::new(e, 0, &[])]).expect("nonconstant generator");
        Self::new(ring, w_vars, forms, d_max).expect("homogeneous by construction")
    }

    /// `Z = W/(w_1..w_N)`, every `w` acting by zero.
    pub fn trivial(w_vars: Vec<Variable>, d_max: u32) -> Self {
        let forms = vec![Vec::new(); w_vars.len()];
        let table = VariableTable::new(Vec::new(), Vec::new()).expect("empty table");
        Self::new(MonomialRing::free(table), w_vars, forms, d_max).expect("no forms to check")
    }

    pub fn module(&self) -> &MonomialRing {
        &self.module
    }

    pub fn w_vars(&self) -> &[Variable] {
        &self.w_vars
    }

    pub fn w_count(&self) -> usize {
        self.w_vars.len()
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn d_max(&self) -> u32 {
        self.d_max
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn w_degree(&self, w: usize) -> u32 {
        self.w_vars[w].degree
    }

    /// `δ(w)·m`, with terms in the ideal dropped.
    pub fn apply(&self, w: usize, m: &Monomial) -> Vec<(Monomial, i64)> {
        let mut out: Vec<(Monomial, i64)> = Vec::with_capacity(self.forms[w].len());
        for &(v, c) in &self.forms[w] {
            let t = m.times_even(v);
            if !self.module.ideal().contains(&t) {
                match out.iter_mut().find(|(s, _)| *s == t) {
                    Some(e) => e.1 += c,
                    None => out.push((t, c)),
                }
            }
        }
        out.retain(|&(_, c)| c != 0);
        out
    }

    pub fn apply_vector(&self, w: usize, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (m, &c) in v {
            for (t, d) in self.apply(w, m) {
                *out.entry(t).or_default() += c * d;
            }
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// Action of the monomial `w^alpha`.
    pub fn apply_monomial(&self, alpha: &[u32], m: &Monomial) -> Vector {
        let mut v = Vector::from([(m.clone(), 1)]);
        for (w, &a) in alpha.iter().enumerate() {
            for _ in 0..a {
                v = self.apply_vector(w, &v);
                if v.is_empty() {
                    return v;
                }
            }
        }
        v
    }

    /// Matrix of `δ(w)` from degree `d` to `d + |w|` on standard-monomial
    /// bases.
    pub fn action_matrix(&self, w: usize, d: u32) -> IntegerMatrix {
        let target_degree = d + self.w_degree(w);
        assert!(target_degree <= self.d_max, "degree {target_degree} beyond d_max");
        let source = self.basis.basis(d);
        let target = self.basis.basis(target_degree);
        let mut mat = IntegerMatrix::zeros(target.len(), source.len());
        for (j, m) in source.iter().enumerate() {
            for (t, c) in self.apply(w, m) {
                let i = self.basis.position(target_degree, &t).expect("image is standard");
                mat[(i, j)] += c;
            }
        }
        mat
    }

    /// Checks `δ(u)δ(v) = δ(v)δ(u)` on every basis monomial whose image stays
    /// within `d_max`.
    pub fn verify_commutation(&self) -> Result<()> {
        let n = self.w_count();
        let failure = (0..=self.d_max).into_par_iter().find_map_any(|d| {
            for m in self.basis.basis(d) {
                let one = Vector::from([(m.clone(), 1)]);
                for u in 0..n {
                    for v in u + 1..n {
                        if d + self.w_degree(u) + self.w_degree(v) > self.d_max {
                            continue;
                        }
                        let uv = self.apply_vector(u, &self.apply_vector(v, &one));
                        let vu = self.apply_vector(v, &self.apply_vector(u, &one));
                        if uv != vu {
                            return Some(format!(
                                "{} and {} on {}",
                                self.w_vars[u].name,
                                self.w_vars[v].name,
                                m.display(self.module.table())
                            ));
                        }
                    }
                }
            }
            None
        });
        match failure {
            Some(w) => Err(Error::NonCommuting(w)),
            None => Ok(()),
        }
    }

    pub(crate) fn class_of_w(&self, w: usize) -> usize {
        self.w_class[w]
    }

    pub(crate) fn class_count(&self) -> usize {
        self.class_count
    }

    /// Block of `e_S ⊗ m` (Koszul) or `m[w^α_1|...]` (bar) given the per-class
    /// counts contributed by the `w` part.
    pub(crate) fn block_key(&self, w_counts: &[u32], m: &Monomial) -> BlockKey {
        let mut counts = w_counts.to_vec();
        for (v, &a) in m.even_exponents().iter().enumerate() {
            counts[self.var_class[v]] += a;
        }
        BlockKey {
            counts,
            odd: m.odd_mask(),
        }
    }
}

/// `W = Z[w_{ij} : (i,j) ∈ Ω̄]` acting on `A'` by `δ(w_{ij}) = x'_{ij} - x'_{i1}`,
/// with commutation checked up to `d_max`.
pub fn build_action(data: &PolarizationData, d_max: u32) -> Result<ModuleAction> {
    let forms = data
        .omega_bar
        .iter()
        .map(|&(i, j)| vec![(data.var_index((i, j)), 1), (data.var_index((i, 1)), -1)])
        .collect();
    let action = ModuleAction::new(data.polarized.clone(), data.w_vars.clone(), forms, d_max)?;
    action.verify_commutation()?;
    Ok(action)
}
