//! Workloads shared by the benchmarks.

use sfpa_core::{generate, FaultTree, GenConfig, Locality, SquarefreePoly, VarSet};

/// A tree with `nodes` nodes whose variable budget stays at 2.
pub fn fixed_budget_tree(nodes: usize, seed: u64) -> FaultTree {
    let n_be = nodes * 3 / 5;
    generate(&GenConfig {
        seed,
        n_be,
        n_gates: nodes - n_be,
        n_multiparent: nodes / 20,
        locality: Locality::Local,
        ..GenConfig::default()
    })
    .expect("feasible configuration")
}

/// A tree of about 124 nodes with `multiparent` shared nodes placed anywhere.
pub fn global_tree(multiparent: usize, seed: u64) -> FaultTree {
    generate(&GenConfig { seed, n_multiparent: multiparent, ..GenConfig::default() }).expect("feasible configuration")
}

/// `prod_{i < n} (0.5 + 0.5 x_i)`, a dense polynomial with `2^n` terms.
pub fn dense_poly(first_var: usize, n: usize) -> SquarefreePoly<f64> {
    (first_var..first_var + n).fold(SquarefreePoly::constant(1.0), |acc, x| {
        let factor = SquarefreePoly::constant(0.5).add(&SquarefreePoly::monomial(VarSet::singleton(x), 0.5));
        acc.mul(&factor)
    })
}
