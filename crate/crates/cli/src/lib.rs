//! Problem files, the prover pipeline, reports, certificate replay and plot
//! data.

pub mod corpus;
pub mod pipeline;
pub mod plot;
pub mod problem;

pub use pipeline::{build_claims, replay, run, CertBundle, Report, Run};
pub use problem::{parse_problem, Problem, ProblemError};
