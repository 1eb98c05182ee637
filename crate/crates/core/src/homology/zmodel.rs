//! Rank comparison for the degree-2 model `Q/L` and the generator map
//! `g(x'_{ij}) = Π_l z'_{ijl}`.

use serde::Serialize;

use crate::monomial::{hilbert_function, HilbertFunction};
use crate::plan::RealizationPlan;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZModelReport {
    /// Degrees actually compared: `min(d_max, plan truncation)`.
    pub d_max: u32,
    /// Ranks of `(Q'/L')` after `z'_{ijk} ↦ z_{ik}`.
    pub identified: HilbertFunction,
    /// Ranks of `Q/L` from the direct rule.
    pub direct: HilbertFunction,
    pub first_mismatch: Option<u32>,
    pub images_checked: usize,
    /// Images whose witnessing `L'` generators lie above the truncation.
    pub images_skipped: usize,
    /// `I'` generators whose image is not in `L'`.
    pub escaping: Vec<String>,
}

impl ZModelReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none() && self.escaping.is_empty()
    }
}

pub fn z_model_compare(plan: &RealizationPlan, d_max: u32) -> ZModelReport {
    let z = plan.z();
    let d = z.truncation.map_or(d_max, |b| b.min(d_max));
    let identified = hilbert_function(&z.identified(), d);
    let direct = hilbert_function(&z.q, d);
    let first_mismatch = identified.first_mismatch(&direct);

    let data = plan.polarization_data();
    let polar = data.polarized.table();
    let mut checked = 0;
    let mut skipped = 0;
    let mut escaping = Vec::new();
    for g in data.polarized.ideal().generators() {
        let witness_degree = 2 * g.even_total() + polar.odd_mask_degree(g.odd_mask());
        if z.truncation.is_some_and(|b| witness_degree > b) {
            skipped += 1;
            continue;
        }
        checked += 1;
        let image = z.generator_image(g);
        if !z.l_prime().contains(&image) {
            escaping.push(format!(
                "{} ↦ {}",
                g.display(polar),
                image.display(z.q_prime.table())
            ));
        }
    }
    ZModelReport {
        d_max: d,
        identified,
        direct,
        first_mismatch,
        images_checked: checked,
        images_skipped: skipped,
        escaping,
    }
}
