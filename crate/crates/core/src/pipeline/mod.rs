//! End-to-end construction of the (6,6,6) example and its verification.

pub mod c666;
pub mod certs;
pub mod ch0;
pub mod checks;
pub use crate::report;

use thiserror::Error;

use crate::cayley::CayleyError;
use crate::conic::ConicError;
use crate::construct::ConstructError;
use crate::poly::PolyError;

pub use ch0::example_ch0_hypotheses;
pub use checks::{example_brauer, example_graph, verify_checklist, ChecklistOptions, X6Singularities};
pub use report::{CheckRecord, Evidence, Status, VerificationReport};
pub use c666::{build_example, build_with_retries, run_c666, Attempt, C666Instance, Example, LinePoint};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("line configuration fails the genericity check (rank {0})")]
    Genericity(usize),
    #[error("curve D{curve} is not unique: solution space of dimension {dimension}")]
    NonUniqueCurve { curve: usize, dimension: usize },
    #[error("incidence failure: {0}")]
    IncidenceFailure(String),
    #[error("residual points Q3 and Q4 differ")]
    Q3NotQ4,
    #[error("singularity is not an ordinary node: {0}")]
    NonOrdinarySingularity(String),
    #[error("unaccounted singularity: {0}")]
    UnaccountedSingularity(String),
    #[error("no splitting witness within a budget of {0} lines")]
    WitnessNotFound(usize),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Conic(#[from] ConicError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
