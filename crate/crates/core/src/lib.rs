//! Exact computations on graded monomial ideal rings
//! `A = Z[x_1..x_m] ⊗ Λ[y_1..y_n] / I`: polarization, Stanley–Reisner
//! complexes, Koszul and bar Tor over the integers, and realization plans.

pub mod abelian;
pub mod error;
pub mod homology;
pub mod monomial;
pub mod parse;
pub mod plan;
pub mod polarization;
pub mod stanley_reisner;
pub mod verify;

pub use abelian::{FgAbelianGroup, GradedGroup, IntegerMatrix};
pub use error::{Error, Result};
pub use monomial::{
    hilbert_function, minimalize, standard_monomials, HilbertFunction, Monomial, MonomialIdeal,
    MonomialRing, Variable, VariableTable,
};
pub use parse::{parse_presentation, pretty_print, ParseError};
pub use polarization::{polarize, PolarizationData};
pub use stanley_reisner::{SimplicialComplex, VertexLabeling};
pub use plan::{emit_plan, RealizationPlan};
pub use verify::{golden_example, verify, VerificationReport, Verdict};
