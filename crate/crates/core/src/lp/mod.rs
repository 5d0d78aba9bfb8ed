//! Linear programs over stochastic graphs.
//!
//! * [`config`]: the configuration LP (one column per vertex and probe
//!   string) for known graphs and known i.d. inputs, solved by enumeration or
//!   by column generation.
//! * [`oracle`]: the demand oracle used to price configuration columns.
//! * [`relations`]: the edge-based LPs used for comparison.
//! * [`simplex`] and [`model`]: the solver and its model container.

pub mod config;
pub mod model;
pub mod oracle;
pub mod relations;
pub mod simplex;

use thiserror::Error;

use crate::graph::GraphError;

pub use config::{
    build_lp_config, build_lp_config_id, g_value, solve_lp_config, solve_lp_config_id, val,
    ConfigColumn, ConfigLp, ConfigSolution, Method, Slot,
};
pub use model::{LpModel, Sense};
pub use oracle::{demand_oracle, DemandChoice};
pub use relations::{build_lp_qc, build_lp_std, QC_MAX_DEGREE};
pub use simplex::{simplex_solve, SimplexSolution};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex stalled after {iterations} iterations (worst residual {residual:e})")]
    Stall { iterations: usize, residual: f64 },
    #[error("column generation did not converge in {rounds} rounds (largest pricing gap {gap:e})")]
    NonConvergence { rounds: usize, gap: f64 },
    #[error("unsupported probing constraint: {0}")]
    UnsupportedConstraint(String),
    #[error("model dump: {0}")]
    Format(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
