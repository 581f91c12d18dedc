use thiserror::Error;

use crate::algebra::Coefficient;
use crate::tree::{FaultTree, GateKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreelikeError {
    #[error("not a tree: node \"{0}\" has more than one parent")]
    NotATree(String),
}

/// Classical numeric bottom-up pass: `p(v)` at basic events, the product of
/// the children at AND gates and `1 - Π(1 - g_w)` at OR gates.
pub fn solve_treelike<C: Coefficient>(t: &FaultTree) -> Result<C, TreelikeError> {
    if let Some(v) = t.ids().find(|&v| t.is_multiparent(v)) {
        return Err(TreelikeError::NotATree(t.name(v).to_owned()));
    }
    let mut g: Vec<C> = vec![C::zero(); t.len()];
    for &v in t.topo_order().iter().rev() {
        g[v.index()] = match t.kind(v) {
            GateKind::Be => C::from_prob(t.prob(v).expect("BE has a probability")),
            GateKind::And => t.children(v).iter().fold(C::one(), |acc, w| acc.mul_ref(&g[w.index()])),
            GateKind::Or => C::one()
                .sub_ref(&t.children(v).iter().fold(C::one(), |acc, w| acc.mul_ref(&C::one().sub_ref(&g[w.index()])))),
            GateKind::Cbe => unreachable!("fault trees have no controllable events"),
        };
    }
    Ok(g[t.root().index()].clone())
}
