//! Structure function and exhaustive-enumeration unreliability.
//!
//! Everything here enumerates all `2^|BE|` safety events; it is the reference
//! the polynomial solvers are checked against, not a production path.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::Coefficient;
use crate::tree::{Dag, FaultTree, GateKind, NodeId, Pcft, SafetyEvent};

/// About a million assignments.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("{bes} basic events exceed the enumeration cap of {cap}")]
    CapExceeded { bes: usize, cap: usize },
    #[error("no state given for controllable event \"{0}\"")]
    MissingControllable(String),
}

/// Lane patterns for the first six enumeration bits.
const LANES: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Evaluates every node for 64 assignments at once.
fn eval_lanes(t: &Dag, leaf: &dyn Fn(NodeId) -> u64, out: &mut [u64]) {
    for &v in t.topo_order().iter().rev() {
        out[v.index()] = match t.kind(v) {
            GateKind::Be | GateKind::Cbe => leaf(v),
            GateKind::Or => t.children(v).iter().fold(0, |acc, c| acc | out[c.index()]),
            GateKind::And => t.children(v).iter().fold(!0, |acc, c| acc & out[c.index()]),
        };
    }
}

/// Calls `visit(mask)` for every assignment mask over `n` enumerated basic
/// events (bit `i` = state of the `i`-th) for which the root evaluates true.
fn for_each_cut(t: &Dag, bes: &[NodeId], cbe_word: &dyn Fn(NodeId) -> u64, mut visit: impl FnMut(u64)) {
    let n = bes.len();
    let mut slot = vec![usize::MAX; t.len()];
    for (i, &v) in bes.iter().enumerate() {
        slot[v.index()] = i;
    }
    let total: u64 = 1 << n;
    let lanes_used = total.min(64);
    let lane_mask = if lanes_used == 64 { !0 } else { (1u64 << lanes_used) - 1 };
    let mut words = vec![0u64; t.len()];
    let mut base = 0u64;
    while base < total {
        let leaf = |v: NodeId| {
            let i = slot[v.index()];
            if i == usize::MAX {
                cbe_word(v)
            } else if i < 6 {
                LANES[i]
            } else if (base >> i) & 1 == 1 {
                !0
            } else {
                0
            }
        };
        eval_lanes(t, &leaf, &mut words);
        let mut hits = words[t.root().index()] & lane_mask;
        while hits != 0 {
            let lane = hits.trailing_zeros() as u64;
            visit(base | lane);
            hits &= hits - 1;
        }
        base += 64;
    }
}

fn check_cap(n: usize, cap: usize) -> Result<(), OracleError> {
    if n > cap || n >= 64 {
        Err(OracleError::CapExceeded { bes: n, cap })
    } else {
        Ok(())
    }
}

fn weight<C: Coefficient>(mask: u64, p: &[C], q: &[C]) -> C {
    let mut w = C::one();
    for i in 0..p.len() {
        w = if mask >> i & 1 == 1 { w.mul_ref(&p[i]) } else { w.mul_ref(&q[i]) };
    }
    w
}

/// Structure function of node `v` under the basic-event states `f`.
///
/// Panics if `f` leaves a basic event below `v` unassigned, or if the tree
/// contains controllable events.
pub fn structure_function(t: &Dag, v: NodeId, f: &SafetyEvent) -> bool {
    let mut vals = vec![false; t.len()];
    for &u in t.topo_order().iter().rev() {
        vals[u.index()] = match t.kind(u) {
            GateKind::Be => f.get(u).unwrap_or_else(|| panic!("safety event has no state for \"{}\"", t.name(u))),
            GateKind::Cbe => panic!("controllable event \"{}\" needs a state", t.name(u)),
            GateKind::Or => t.children(u).iter().any(|c| vals[c.index()]),
            GateKind::And => t.children(u).iter().all(|c| vals[c.index()]),
        };
    }
    vals[v.index()]
}

/// All cut sets, ordered by their mask over the basic events in id order.
pub fn cut_sets(t: &FaultTree, cap: usize) -> Result<Vec<SafetyEvent>, OracleError> {
    let bes = t.basic_events();
    check_cap(bes.len(), cap)?;
    let mut out = Vec::new();
    for_each_cut(t, &bes, &|_| 0, |mask| out.push(SafetyEvent::from_mask(&bes, mask)));
    Ok(out)
}

/// Cut-set masks over the basic events in id order.
pub fn cut_set_masks(t: &FaultTree, cap: usize) -> Result<Vec<u64>, OracleError> {
    let bes = t.basic_events();
    check_cap(bes.len(), cap)?;
    let mut out = Vec::new();
    for_each_cut(t, &bes, &|_| 0, |mask| out.push(mask));
    Ok(out)
}

fn probabilities<C: Coefficient>(t: &Dag, bes: &[NodeId]) -> (Vec<C>, Vec<C>) {
    let p: Vec<C> = bes.iter().map(|&v| C::from_prob(t.prob(v).expect("BE has a probability"))).collect();
    let q = p.iter().map(|x| C::one().sub_ref(x)).collect();
    (p, q)
}

/// Unreliability as the explicit sum over all cut sets.
pub fn oracle_unreliability<C: Coefficient>(t: &FaultTree, cap: usize) -> Result<C, OracleError> {
    let bes = t.basic_events();
    check_cap(bes.len(), cap)?;
    let (p, q) = probabilities::<C>(t, &bes);
    let mut total = C::zero();
    for_each_cut(t, &bes, &|_| 0, |mask| total += &weight(mask, &p, &q));
    Ok(total)
}

/// Unreliability of a PCFT with its controllable events fixed to `states`.
pub fn pcft_unreliability<C: Coefficient>(
    t: &Pcft,
    states: &BTreeMap<NodeId, bool>,
    cap: usize,
) -> Result<C, OracleError> {
    let bes = t.basic_events();
    check_cap(bes.len(), cap)?;
    for v in t.controllables() {
        if !states.contains_key(&v) {
            return Err(OracleError::MissingControllable(t.name(v).to_owned()));
        }
    }
    let (p, q) = probabilities::<C>(t, &bes);
    let cbe = |v: NodeId| if states[&v] { !0 } else { 0 };
    let mut total = C::zero();
    for_each_cut(t, &bes, &cbe, |mask| total += &weight(mask, &p, &q));
    Ok(total)
}
