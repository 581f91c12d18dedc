//! Topological order and immediate dominators of a fault-tree DAG.
//!
//! `x ≼ y` means there is a path from `y` down to `x`. A node `w` dominates
//! `v` if `v ≺ w` and every path from the root to `v` passes through `w`.

use crate::tree::{Dag, NodeId};

/// Root first; every edge points forward; ties broken by smallest id.
pub fn topo_sort(t: &Dag) -> Vec<NodeId> {
    t.topo_order().to_vec()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatorInfo {
    idom: Vec<Option<NodeId>>,
    topo_order: Vec<NodeId>,
    topo_index: Vec<usize>,
}

impl DominatorInfo {
    /// Immediate dominator; `None` only for the root.
    #[inline]
    pub fn idom(&self, v: NodeId) -> Option<NodeId> {
        self.idom[v.index()]
    }

    #[inline]
    pub fn topo_order(&self) -> &[NodeId] {
        &self.topo_order
    }

    #[inline]
    pub fn topo_index(&self, v: NodeId) -> usize {
        self.topo_index[v.index()]
    }

    /// For every node, the nodes it immediately dominates, ordered by
    /// topological index (closest to the dominator first).
    pub fn dominated_by(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.idom.len()];
        for &w in &self.topo_order {
            if let Some(d) = self.idom[w.index()] {
                out[d.index()].push(w);
            }
        }
        out
    }
}

/// Iterative dominator computation over a topological order.
///
/// In a DAG every predecessor precedes its successor in topological order, so
/// one pass of the intersection rule already reaches the fixpoint.
pub fn immediate_dominators(t: &Dag) -> DominatorInfo {
    let topo_order = t.topo_order().to_vec();
    let mut topo_index = vec![0; t.len()];
    for (i, v) in topo_order.iter().enumerate() {
        topo_index[v.index()] = i;
    }
    let mut idom: Vec<Option<NodeId>> = vec![None; t.len()];

    let intersect = |idom: &[Option<NodeId>], mut a: NodeId, mut b: NodeId| {
        while a != b {
            while topo_index[a.index()] > topo_index[b.index()] {
                a = idom[a.index()].expect("non-root node has a dominator");
            }
            while topo_index[b.index()] > topo_index[a.index()] {
                b = idom[b.index()].expect("non-root node has a dominator");
            }
        }
        a
    };

    for &v in topo_order.iter().skip(1) {
        let mut parents = t.parents(v).iter().copied();
        let first = parents.next().expect("non-root node has a parent");
        let d = parents.fold(first, |acc, p| intersect(&idom, acc, p));
        idom[v.index()] = Some(d);
    }
    DominatorInfo { idom, topo_order, topo_index }
}

/// Dense reachability: `reach[v]` holds every `x` with `x ≼ v`.
pub(crate) fn reachability(t: &Dag) -> Vec<Vec<u64>> {
    let words = t.len().div_ceil(64);
    let mut reach = vec![vec![0u64; words]; t.len()];
    for &v in t.topo_order().iter().rev() {
        let mut row = vec![0u64; words];
        row[v.index() / 64] |= 1 << (v.index() % 64);
        for c in t.children(v) {
            for (r, x) in row.iter_mut().zip(&reach[c.index()]) {
                *r |= x;
            }
        }
        reach[v.index()] = row;
    }
    reach
}

#[inline]
pub(crate) fn below(reach: &[Vec<u64>], x: NodeId, y: NodeId) -> bool {
    reach[y.index()][x.index() / 64] >> (x.index() % 64) & 1 == 1
}

/// Checks that whenever `v ≺ w`, either `idom(v) ≼ w` or `idom(w) ≼ idom(v)`.
///
/// Quadratic; meant as a test oracle.
pub fn check_idom_ordering(info: &DominatorInfo, t: &Dag) -> bool {
    let reach = reachability(t);
    for v in t.ids() {
        let Some(dv) = info.idom(v) else { continue };
        for w in t.ids() {
            if w == v || !below(&reach, v, w) {
                continue;
            }
            let Some(dw) = info.idom(w) else { continue };
            if !(below(&reach, dv, w) || below(&reach, dw, dv)) {
                return false;
            }
        }
    }
    true
}
