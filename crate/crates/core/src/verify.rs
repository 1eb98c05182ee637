//! The end-to-end verification pipeline and the bundled worked example.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::homology::{build_action, koszul_tor, z_model_compare};
use crate::monomial::{hilbert_function, minimalize, MonomialRing};
use crate::parse::parse_presentation;
use crate::plan::{emit_plan, emit_plan_truncated, RealizationPlan};
use crate::polarization::{
    check_rank_identity, check_regular_sequence, depolarize, RegularSequenceVerdict, StepVerdict,
};
use crate::stanley_reisner::{complex_from_ideal, ideal_from_complex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// The bound was too small for the check to test anything.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub d_max: u32,
    pub verdict: Verdict,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub d_max: u32,
    pub records: Vec<CheckRecord>,
    pub overall: Verdict,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.overall == Verdict::Pass
    }

    pub fn record(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

fn record(name: &str, d_max: u32, ok: bool, witnesses: Vec<String>) -> CheckRecord {
    CheckRecord {
        name: name.into(),
        d_max,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        witnesses,
    }
}

/// Runs every check on `ring` up to degree `d_max`, collecting all failures.
pub fn verify(ring: &MonomialRing, d_max: u32) -> Result<VerificationReport> {
    let plan = emit_plan_truncated(ring, d_max)?;
    let data = plan.polarization_data();
    let mut records = Vec::new();

    let polar = &data.polarized;
    let offending: Vec<String> = polar
        .ideal()
        .generators()
        .iter()
        .filter(|g| !g.is_square_free())
        .map(|g| g.display(polar.table()))
        .collect();
    records.push(record("polarization_square_free", d_max, offending.is_empty(), offending));

    let back = ideal_from_complex(plan.simplicial_complex(), plan.labeling(), polar.table());
    let round_trip = &back == polar.ideal();
    let again = complex_from_ideal(&back, plan.labeling())?;
    let ok = round_trip && &again == plan.simplicial_complex();
    let w = if ok {
        Vec::new()
    } else {
        vec![format!("I' = ({}) but K gives back ({})", polar.display_ideal().join(", "), {
            let r = MonomialRing::new(polar.table().clone(), back.generators().to_vec())?;
            r.display_ideal().join(", ")
        })]
    };
    records.push(record("stanley_reisner_round_trip", d_max, ok, w));

    let rank = check_rank_identity(data, d_max);
    let w = rank
        .first_mismatch
        .map(|d| vec![format!("degree {d}: rank {} vs {}", rank.source.rank(d), rank.identified.rank(d))])
        .unwrap_or_default();
    records.push(record("rank_identity", d_max, rank.passed(), w));

    let reg = check_regular_sequence(data, d_max);
    let (verdict, w) = match &reg.verdict {
        RegularSequenceVerdict::Pass => (Verdict::Pass, Vec::new()),
        RegularSequenceVerdict::KernelFound { step, .. } => {
            let s = &reg.steps[*step];
            let detail = match &s.verdict {
                StepVerdict::KernelFound {
                    source_degree,
                    kernel_rank,
                    witness,
                } => format!("kernel of rank {kernel_rank} in degree {source_degree}, e.g. {witness}"),
                _ => unreachable!("step verdict matches the overall verdict"),
            };
            (Verdict::Fail, vec![format!("step {step} (w_{}_{}): {detail}", s.pair.0, s.pair.1)])
        }
        RegularSequenceVerdict::BoundTooSmall { step } => (
            Verdict::Inconclusive,
            vec![format!("step {step}: no source degree has its target within degree {d_max}")],
        ),
    };
    records.push(CheckRecord {
        name: "regular_sequence".into(),
        d_max,
        verdict,
        witnesses: w,
    });

    let hilbert = hilbert_function(ring, d_max);
    let action = build_action(data, d_max)?;
    let tor = koszul_tor(&action, d_max);
    let mut w = tor.tor.concentration_failures(&hilbert);
    w.extend(tor.euler_mismatches().into_iter().map(|q| format!("Euler characteristic differs in degree {q}")));
    records.push(record("koszul_concentration", d_max, w.is_empty(), w));

    let z = z_model_compare(&plan, d_max);
    let mut w: Vec<String> = z
        .first_mismatch
        .map(|d| format!("degree {d}: rank {} vs {}", z.identified.rank(d), z.direct.rank(d)))
        .into_iter()
        .collect();
    w.extend(z.escaping.iter().map(|e| format!("g-image outside L': {e}")));
    records.push(record("z_model", d_max, z.passed(), w));

    let predicted = predicted_ring(&plan)?;
    let ph = hilbert_function(&predicted, d_max);
    let w = ph
        .first_mismatch(&hilbert)
        .map(|d| vec![format!("degree {d}: predicted {} vs {}", ph.rank(d), hilbert.rank(d))])
        .unwrap_or_default();
    records.push(record("plan_prediction", d_max, w.is_empty(), w));

    let overall = if records.iter().all(|r| r.verdict == Verdict::Pass) {
        Verdict::Pass
    } else if records.iter().any(|r| r.verdict == Verdict::Fail) {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    Ok(VerificationReport { d_max, records, overall })
}

/// The cohomology the plan predicts for the fiber, rebuilt from `K` alone:
/// the Stanley–Reisner ideal of `K` with `x'_{ij}` identified to `x_i`.
fn predicted_ring(plan: &RealizationPlan) -> Result<MonomialRing> {
    let data = plan.polarization_data();
    let ideal = ideal_from_complex(plan.simplicial_complex(), plan.labeling(), data.polarized.table());
    let gens = minimalize(ideal.generators().iter().map(|g| depolarize(data, g)));
    MonomialRing::new(data.source.table().clone(), gens.generators().to_vec())
}

pub const GOLDEN_PRESENTATION: &str = "ring { even: x:4; odd: y:1 } ideal { x^2*y }";
pub const GOLDEN_D_MAX: u32 = 40;

/// Plan and report for `Z[x] ⊗ Λ[y] / (x²y)` with `|x| = 4`, `|y| = 1`.
pub fn golden_example() -> (RealizationPlan, VerificationReport) {
    let ring = parse_presentation(GOLDEN_PRESENTATION).expect("golden presentation parses");
    let plan = emit_plan(&ring).expect("golden plan");
    let report = verify(&ring, GOLDEN_D_MAX).expect("golden verification runs");
    (plan, report)
}

#[derive(Serialize)]
struct Golden<'a> {
    plan: &'a RealizationPlan,
    report: &'a VerificationReport,
}

/// Serialized form of [`golden_example`], as committed in the fixture.
pub fn golden_json() -> String {
    let (plan, report) = golden_example();
    serde_json::to_string_pretty(&Golden {
        plan: &plan,
        report: &report,
    })
    .expect("golden example serializes")
        + "\n"
}
