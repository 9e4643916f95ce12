//! Symbolic dynamics of intermediate beta transformations
//! `x -> beta x + alpha mod 1`: certified kneading sequences, the admissible
//! language, the Hofbauer graph, specification diagnostics, pressure
//! estimates and the comparison sequences built from them.

pub mod arith;
pub mod coding;
pub mod error;
pub mod example;
pub mod graph;
pub mod language;
pub mod pressure;
pub mod sequences;
pub mod specification;

pub use arith::{certified_compare, BisectionRoot, BracketedEquation, CertifiedReal, ComparisonVerdict, Interval};
pub use coding::{kneading_a, kneading_b, KneadingPair, OrbitMode, Parameters, Period, Word};
pub use error::{Error, Result};
pub use example::{
    eta_value, example_beta, perturb_to_periodic, solve_example_beta, target_c, EtaSeries, Perturbation,
};
pub use graph::{Edge, EdgeClass, HofbauerGraph, Vertex};
pub use language::{is_admissible, AdmissibilityReport, EdgeKind, State};
pub use pressure::{transfer_pressure, Potential, PressureEstimate, Subset};
pub use sequences::{build_c, build_d, classify_case, decompose_b, edit_counts, BDecomposition, Case};
pub use specification::{d_set, spec_verdict, DSet, SpecVerdict, Verdict};
