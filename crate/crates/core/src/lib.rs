//! Exact unreliability of static fault trees.
//!
//! Fault trees are rooted DAGs of AND/OR gates over independent basic events.
//! The solvers in [`solver`] propagate squarefree polynomials bottom-up: a
//! formal variable stands in for every node that is reached along more than
//! one path, and is substituted away at that node's immediate dominator. The
//! result is exact (up to the chosen coefficient field) for arbitrary DAG
//! shapes, at a cost that grows with the number of simultaneously live
//! shared nodes rather than with the tree size.
//!
//! ```
//! use sfpa_core::{parse_ft, solve_sfpa2};
//!
//! let t = parse_ft(r#"
//!     toplevel "crash";
//!     "crash" and "left" "right";
//!     "left" or "lrf" "nofuel";
//!     "right" or "rrf" "nofuel";
//!     "lrf" prob=0.4; "rrf" prob=0.4; "nofuel" prob=0.3;
//! "#).unwrap();
//! let report = solve_sfpa2::<f64>(&t);
//! assert!((report.unreliability - 0.412).abs() < 1e-12);
//! ```

pub mod algebra;
pub mod dominators;
pub mod format;
pub mod generator;
pub mod oracle;
pub mod solver;
pub mod tree;

pub use algebra::{interpolate, AlgebraError, Coefficient, SquarefreePoly, VarSet};
pub use dominators::{check_idom_ordering, immediate_dominators, topo_sort, DominatorInfo};
pub use format::{parse_ft, serialize_ft, ParseError};
pub use generator::{generate, generate_corpus, GenConfig, GenError, Locality, Manifest};
pub use oracle::{
    cut_sets, oracle_unreliability, pcft_unreliability, structure_function, OracleError, DEFAULT_ENUMERATION_CAP,
};
pub use solver::{
    minimal_cut_set_via_reduction, solve_sfpa, solve_sfpa2, solve_treelike, variable_budget, MultiparentIndex,
    ReductionError, SolveReport, TreelikeError,
};
pub use tree::{ComposeError, Dag, FaultTree, GateKind, NodeId, Pcft, Prob, SafetyEvent, TreeBuilder, TreeError};

/// Exact rational coefficients used by the exact solving mode.
pub type Rational = num_rational::BigRational;
