//! Conic modelling layer and interior-point solver.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    NearOptimal,
    Infeasible,
    Unbounded,
    MaxIter,
    NumericalFailure,
}

pub mod cone;
pub mod form;
pub mod solver;
pub mod model;

pub use cone::ConeDims;
pub use form::StandardConicForm;
pub use solver::{solve, ConicSolution, SolverOptions};
