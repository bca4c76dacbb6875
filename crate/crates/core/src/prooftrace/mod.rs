//! Executable forms of the structural arguments behind Gallai vertices in
//! series-parallel graphs: path surgery, tail structure checks around a
//! virtual triangle, and a certificate engine that walks from a triangle
//! to a single vertex met by every longest path.

mod engine;
pub mod sampling;
mod structure;
mod surgery;

pub use engine::{
    find_gallai_triangle, iterate_component, pair_condition, run_trace, run_trace_with_cap,
    select_gallai_edge, verify_trace, Check, Outcome, ProofTrace, StepKind, TraceError, TraceStep,
};
pub use structure::{validate_triangle_tails, SidePaths, StructureError, TailReport};
pub use surgery::{
    surgery_corollary, surgery_shared_vertex, surgery_two_tails, SurgeryError, SurgeryKind,
    SurgeryWitness,
};
