use crate::dominators::DominatorInfo;
use crate::tree::{Dag, NodeId};

/// For every node `v`, the multiparent nodes `w` with `w ≺ v ≼ idom(w)`:
/// the variables that may be live while `g_v` is computed.
pub fn live_variable_sets(t: &Dag, dom: &DominatorInfo) -> Vec<Vec<NodeId>> {
    let mut live = vec![Vec::new(); t.len()];
    let mut mark = vec![usize::MAX; t.len()];
    let mut stack = Vec::new();
    for w in t.ids().filter(|&w| t.is_multiparent(w)) {
        let top = dom.idom(w).expect("a multiparent node is not the root");
        stack.clear();
        stack.extend_from_slice(t.parents(w));
        for &p in t.parents(w) {
            mark[p.index()] = w.index();
        }
        // Every ancestor of w is either below idom(w) or above it; stop at it.
        while let Some(v) = stack.pop() {
            live[v.index()].push(w);
            if v == top {
                continue;
            }
            for &p in t.parents(v) {
                if mark[p.index()] != w.index() {
                    mark[p.index()] = w.index();
                    stack.push(p);
                }
            }
        }
    }
    live
}

/// `max_v |{w ∈ X : w ≺ v ≼ idom(w)}|` where `X` is the set of multiparent
/// nodes; the parameter that bounds the polynomial sizes in the folded solver.
pub fn variable_budget(t: &Dag, dom: &DominatorInfo) -> usize {
    live_variable_sets(t, dom).iter().map(Vec::len).max().unwrap_or(0)
}
