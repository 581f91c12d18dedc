//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::{One, Zero};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sfpa_core::{
    generate, interpolate, pcft_unreliability, structure_function, Dag, FaultTree, GateKind, GenConfig, NodeId, Pcft,
    Rational, SafetyEvent, SquarefreePoly, TreeBuilder, VarSet,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn aircraft() -> FaultTree {
    let mut b = TreeBuilder::new();
    b.toplevel("planecrash")
        .and("planecrash", ["leftengine", "rightengine"])
        .or("leftengine", ["lrf", "nofuel"])
        .or("rightengine", ["rrf", "nofuel"])
        .be("rrf", 0.4)
        .be("nofuel", 0.3)
        .be("lrf", 0.4);
    b.build_fault_tree().unwrap()
}

pub fn shared_event_tree() -> FaultTree {
    let mut b = TreeBuilder::new();
    b.toplevel("h").and("h", ["f", "g"]).and("f", ["d", "e"]).or("d", ["a", "b"]).or("e", ["b", "c"]);
    for n in ["a", "b", "c", "g"] {
        b.be(n, 0.5);
    }
    b.build_fault_tree().unwrap()
}

fn random_prob(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(1..100) as f64 / 100.0
}

/// Arbitrary rooted DAG on `n` nodes: node `i > 0` gets a random non-empty
/// set of parents among `0..i`; childless nodes become basic events.
pub fn random_dag(rng: &mut ChaCha8Rng, n: usize) -> FaultTree {
    let mut children = vec![Vec::new(); n];
    for i in 1..n {
        let k = rng.random_range(1..=i.min(3));
        let mut ps: Vec<usize> = (0..i).collect();
        for _ in 0..k {
            let j = rng.random_range(0..ps.len());
            children[ps.swap_remove(j)].push(i);
        }
    }
    let name = |i: usize| format!("n{i}");
    let mut b = TreeBuilder::new();
    b.toplevel(name(0));
    for (i, ch) in children.iter().enumerate() {
        if ch.is_empty() {
            b.be(name(i), random_prob(rng));
        } else {
            let kind = if rng.random_bool(0.5) { GateKind::And } else { GateKind::Or };
            b.gate(name(i), kind, ch.iter().map(|&c| name(c)));
        }
    }
    b.build_fault_tree().unwrap()
}

/// Generated tree with at most `max_be` basic events and up to `max_mp`
/// multiparent nodes.
pub fn random_ft(rng: &mut ChaCha8Rng, max_be: usize, max_mp: usize) -> FaultTree {
    let n_be = rng.random_range(1..=max_be);
    let min_gates = if n_be == 1 { 0 } else { (n_be - 1).div_ceil(3).max(1) };
    let n_gates = rng.random_range(min_gates..=n_be.max(min_gates));
    let nodes = n_be + n_gates;
    let cfg = GenConfig {
        seed: rng.random(),
        n_be,
        n_gates,
        max_children: 4,
        p_and: 0.5,
        n_multiparent: rng.random_range(0..=max_mp.min(nodes - 1)),
        prob_range: (0.01, 0.99),
        ..GenConfig::default()
    };
    generate(&cfg).unwrap()
}

/// Half generated trees, half arbitrary DAGs.
pub fn mixed_ft(rng: &mut ChaCha8Rng, max_be: usize, max_mp: usize) -> FaultTree {
    if rng.random_bool(0.5) {
        random_ft(rng, max_be, max_mp)
    } else {
        loop {
            let n = rng.random_range(1..=max_be + 4);
            let t = random_dag(rng, n);
            if t.basic_events().len() <= max_be {
                return t;
            }
        }
    }
}

/// `x ≼ y`: there is a path from `y` down to `x`.
pub fn below(t: &Dag, x: NodeId, y: NodeId) -> bool {
    if x == y {
        return true;
    }
    t.children(y).iter().any(|&c| below(t, x, c))
}

/// All node sequences from the root to `v`.
pub fn all_paths(t: &Dag, v: NodeId) -> Vec<Vec<NodeId>> {
    fn walk(t: &Dag, u: NodeId, v: NodeId, path: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        path.push(u);
        if u == v {
            out.push(path.clone());
        } else {
            for &c in t.children(u) {
                walk(t, c, v, path, out);
            }
        }
        path.pop();
    }
    let mut out = Vec::new();
    walk(t, t.root(), v, &mut Vec::new(), &mut out);
    out
}

/// Immediate dominators straight from the definition: the nodes on every
/// root path, and among those the one closest to `v`.
pub fn brute_idom(t: &Dag) -> Vec<Option<NodeId>> {
    t.ids()
        .map(|v| {
            if v == t.root() {
                return None;
            }
            let paths = all_paths(t, v);
            let mut common: BTreeSet<NodeId> = paths[0].iter().copied().collect();
            for p in &paths[1..] {
                let s: BTreeSet<NodeId> = p.iter().copied().collect();
                common = &common & &s;
            }
            common.remove(&v);
            // The dominators are totally ordered; the closest is below all others.
            common.iter().copied().find(|&w| common.iter().all(|&u| below(t, w, u)))
        })
        .collect()
}

/// A polynomial kept as plain sets, untouched by the crate's own types.
pub type Plain = BTreeMap<BTreeSet<usize>, Rational>;

pub fn to_plain(a: &SquarefreePoly<Rational>) -> Plain {
    a.terms().map(|(k, c)| (k.iter().collect(), c.clone())).collect()
}

pub fn from_plain(p: &Plain) -> SquarefreePoly<Rational> {
    SquarefreePoly::from_terms(p.iter().map(|(k, c)| (k.iter().copied().collect::<VarSet>(), c.clone())))
}

fn plain_add(p: &mut Plain, k: BTreeSet<usize>, c: Rational) {
    let e = p.entry(k).or_insert_with(Rational::zero);
    *e += c;
}

fn prune(mut p: Plain) -> Plain {
    p.retain(|_, c| !c.is_zero());
    p
}

/// Product by the defining sum over pairs of monomials whose union is `Y`.
pub fn plain_mul(a: &Plain, b: &Plain) -> Plain {
    let mut out = Plain::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            plain_add(&mut out, ka | kb, ca * cb);
        }
    }
    prune(out)
}

/// Substitution straight from the double-sum coefficient formula:
/// `α[x↦β]_Y = α_Y [x ∉ Y] + Σ_{Y' ∪ Y'' = Y} α_{Y' ∪ {x}} β_{Y''}`.
pub fn double_sum_substitute(a: &Plain, x: usize, b: &Plain) -> Plain {
    let mut out = Plain::new();
    for (ka, ca) in a {
        if !ka.contains(&x) {
            plain_add(&mut out, ka.clone(), ca.clone());
            continue;
        }
        let mut rest = ka.clone();
        rest.remove(&x);
        for (kb, cb) in b {
            plain_add(&mut out, &rest | kb, ca * cb);
        }
    }
    prune(out)
}

/// Interpolation by forward substitution in the subset-ordered triangular
/// system: `coef(S) = g(S) - Σ_{T ⊊ S} coef(T)`, in `O(3^n)`.
pub fn naive_interpolate(vars: &[usize], table: &[Rational]) -> Plain {
    let n = vars.len();
    let mut coef = vec![Rational::zero(); 1 << n];
    let mut masks: Vec<usize> = (0..1 << n).collect();
    masks.sort_by_key(|m: &usize| m.count_ones());
    for &s in &masks {
        let mut c = table[s].clone();
        let mut t = s;
        // Enumerate proper subsets of s.
        while t > 0 {
            t = (t - 1) & s;
            c -= &coef[t];
            if t == 0 {
                break;
            }
        }
        coef[s] = c;
    }
    let mut out = Plain::new();
    for (m, c) in coef.into_iter().enumerate() {
        let k: BTreeSet<usize> = (0..n).filter(|&i| m >> i & 1 == 1).map(|i| vars[i]).collect();
        plain_add(&mut out, k, c);
    }
    prune(out)
}

/// Random polynomial over `vars` with small rational coefficients.
pub fn random_poly(rng: &mut ChaCha8Rng, vars: &[usize], max_terms: usize) -> SquarefreePoly<Rational> {
    let terms = rng.random_range(0..=max_terms);
    let mut p = Plain::new();
    for _ in 0..terms {
        let k: BTreeSet<usize> = vars.iter().copied().filter(|_| rng.random_bool(0.4)).collect();
        plain_add(&mut p, k, rat(rng.random_range(-9..=9), rng.random_range(1..=4)));
    }
    from_plain(&prune(p))
}

/// Polynomial that only takes values 0 and 1 on Boolean inputs.
pub fn random_idempotent(rng: &mut ChaCha8Rng, vars: &[usize]) -> SquarefreePoly<Rational> {
    let table: Vec<Rational> =
        (0..1 << vars.len()).map(|_| if rng.random_bool(0.5) { Rational::one() } else { Rational::zero() }).collect();
    interpolate(vars, &table).unwrap()
}

/// `⟨U(T)⟩` with variable `vars[i].0` standing for the controllable event
/// named `vars[i].1`.
pub fn pcft_polynomial(t: &Pcft, vars: &[(usize, String)]) -> SquarefreePoly<Rational> {
    let ids: Vec<NodeId> = vars.iter().map(|(_, n)| t.find(n).expect("controllable exists")).collect();
    assert_eq!(ids.len(), t.controllables().len(), "every controllable event gets a variable");
    let table: Vec<Rational> = (0u64..1 << ids.len())
        .map(|mask| {
            let states = ids.iter().enumerate().map(|(i, &v)| (v, mask >> i & 1 == 1)).collect();
            pcft_unreliability(t, &states, 20).unwrap()
        })
        .collect();
    let idx: Vec<usize> = vars.iter().map(|&(i, _)| i).collect();
    interpolate(&idx, &table).unwrap()
}

pub fn is_cut(t: &FaultTree, f: &SafetyEvent) -> bool {
    structure_function(t, t.root(), f)
}

/// Brute-force minimality: `f` is a cut set and no event with a strictly
/// smaller set of failures is one.
pub fn is_minimal_cut(t: &FaultTree, f: &SafetyEvent) -> bool {
    if !is_cut(t, f) {
        return false;
    }
    let bes = t.basic_events();
    let failed: HashSet<NodeId> = f.failed().into_iter().collect();
    (0u64..1 << bes.len()).all(|mask| {
        let g = SafetyEvent::from_mask(&bes, mask);
        let smaller = g.failed().iter().all(|v| failed.contains(v)) && g.failed().len() < failed.len();
        !(smaller && is_cut(t, &g))
    })
}

pub fn pick<'a, T>(rng: &mut ChaCha8Rng, xs: &'a [T]) -> &'a T {
    xs.choose(rng).unwrap()
}
