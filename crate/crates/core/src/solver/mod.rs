//! Unreliability solvers.
//!
//! [`solve_sfpa`] and [`solve_sfpa2`] propagate squarefree polynomials
//! bottom-up and are exact for any DAG; [`solve_treelike`] is the classical
//! numeric pass that is only valid when no node is shared.

mod budget;
mod reduction;
mod sfpa;
mod treelike;

use std::time::Duration;

pub use budget::{live_variable_sets, variable_budget};
pub use reduction::{minimal_cut_set_via_reduction, ReductionError, REDUCTION_CAP};
pub use sfpa::{final_polynomials, solve, solve_observed, solve_sfpa, solve_sfpa2, Algorithm, MultiparentIndex};
pub use treelike::{solve_treelike, TreelikeError};

/// Result of a polynomial solve plus counters gathered along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<C> {
    /// Raw top-event value; float runs may drift marginally outside `[0, 1]`.
    pub unreliability: C,
    /// Largest number of distinct variables seen in any intermediate `g_v`.
    pub max_live_vars: usize,
    /// Largest term count of any intermediate `g_v`.
    pub max_terms: usize,
    pub substitutions: usize,
    pub multiplications: usize,
    pub wall_time: Duration,
}

impl SolveReport<f64> {
    /// The unreliability clamped to `[0, 1]` for reporting.
    pub fn clamped(&self) -> f64 {
        self.unreliability.clamp(0.0, 1.0)
    }
}
