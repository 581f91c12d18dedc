use std::time::Instant;

use crate::algebra::{Coefficient, SquarefreePoly};
use crate::dominators::immediate_dominators;
use crate::tree::{Dag, FaultTree, GateKind, NodeId};

use super::SolveReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Every child of a gate gets a formal variable; all of them are
    /// substituted at their immediate dominator.
    Sfpa,
    /// Single-parent children are folded in directly, so variables exist
    /// only for multiparent nodes.
    Sfpa2,
}

/// Dense variable numbering of the nodes with two or more parents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiparentIndex {
    var_of: Vec<Option<usize>>,
    nodes: Vec<NodeId>,
}

impl MultiparentIndex {
    /// Multiparent nodes numbered in id order.
    pub fn new(t: &Dag) -> Self {
        let mut var_of = vec![None; t.len()];
        let mut nodes = Vec::new();
        for v in t.ids().filter(|&v| t.is_multiparent(v)) {
            var_of[v.index()] = Some(nodes.len());
            nodes.push(v);
        }
        MultiparentIndex { var_of, nodes }
    }

    #[inline]
    pub fn var(&self, v: NodeId) -> Option<usize> {
        self.var_of[v.index()]
    }

    #[inline]
    pub fn node(&self, var: usize) -> NodeId {
        self.nodes[var]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Variables are indexed by node id.
pub fn solve_sfpa<C: Coefficient>(t: &FaultTree) -> SolveReport<C> {
    solve(t, Algorithm::Sfpa)
}

/// Shared-node variant: variables are indexed by [`MultiparentIndex`].
pub fn solve_sfpa2<C: Coefficient>(t: &FaultTree) -> SolveReport<C> {
    solve(t, Algorithm::Sfpa2)
}

pub fn solve<C: Coefficient>(t: &FaultTree, algo: Algorithm) -> SolveReport<C> {
    run(t, algo, None)
}

/// The value of every `g_v` after all substitutions at `v`, indexed by node
/// id. Variable numbering follows `algo` as in [`solve_observed`].
pub fn final_polynomials<C: Coefficient>(t: &FaultTree, algo: Algorithm) -> Vec<SquarefreePoly<C>> {
    let mut last = vec![SquarefreePoly::zero(); t.len()];
    solve_observed(t, algo, &mut |v, g| last[v.index()] = g.clone());
    last
}

/// Runs a solver, calling `observer(v, g_v)` after `g_v` is built and after
/// every substitution into it.
///
/// With [`Algorithm::Sfpa`] variable `i` stands for node `NodeId(i)`; with
/// [`Algorithm::Sfpa2`] it stands for `MultiparentIndex::new(t).node(i)`.
pub fn solve_observed<C: Coefficient>(
    t: &FaultTree,
    algo: Algorithm,
    observer: &mut dyn FnMut(NodeId, &SquarefreePoly<C>),
) -> SolveReport<C> {
    run(t, algo, Some(observer))
}

type Observer<'a, C> = &'a mut dyn FnMut(NodeId, &SquarefreePoly<C>);

/// Intermediate value; constants skip the polynomial map entirely.
enum Value<C> {
    Const(C),
    Poly(SquarefreePoly<C>),
}

impl<C: Coefficient> Value<C> {
    fn from_poly(p: SquarefreePoly<C>) -> Self {
        match p.as_constant() {
            Some(c) => Value::Const(c),
            None => Value::Poly(p),
        }
    }

    fn into_poly(self) -> SquarefreePoly<C> {
        match self {
            Value::Const(c) => SquarefreePoly::constant(c),
            Value::Poly(p) => p,
        }
    }

    fn one_minus(self) -> Self {
        match self {
            Value::Const(c) => Value::Const(C::one().sub_ref(&c)),
            Value::Poly(p) => Value::Poly(p.one_minus()),
        }
    }

    fn terms(&self) -> usize {
        match self {
            Value::Const(c) => usize::from(!c.is_zero()),
            Value::Poly(p) => p.len(),
        }
    }

    fn live_vars(&self) -> usize {
        match self {
            Value::Const(_) => 0,
            Value::Poly(p) => p.variables().len(),
        }
    }
}

/// Nodes substituted at each node, as offsets into one flat list.
struct Pending {
    start: Vec<usize>,
    nodes: Vec<NodeId>,
}

impl Pending {
    fn new(t: &Dag, order: &[NodeId], idom: impl Fn(NodeId) -> Option<NodeId>, keep: impl Fn(NodeId) -> bool) -> Self {
        let mut start = vec![0; t.len() + 1];
        for &w in order.iter().filter(|&&w| keep(w)) {
            if let Some(d) = idom(w) {
                start[d.index() + 1] += 1;
            }
        }
        for i in 0..t.len() {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut nodes = vec![NodeId(0); start[t.len()]];
        for &w in order.iter().filter(|&&w| keep(w)) {
            if let Some(d) = idom(w) {
                nodes[fill[d.index()]] = w;
                fill[d.index()] += 1;
            }
        }
        Pending { start, nodes }
    }

    fn at(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[self.start[v.index()]..self.start[v.index() + 1]]
    }
}

fn run<C: Coefficient>(t: &FaultTree, algo: Algorithm, mut observer: Option<Observer<'_, C>>) -> SolveReport<C> {
    let start = Instant::now();
    let dom = immediate_dominators(t);
    let index = MultiparentIndex::new(t);
    let var = |w: NodeId| match algo {
        Algorithm::Sfpa => w.index(),
        Algorithm::Sfpa2 => index.var(w).expect("only multiparent nodes become variables"),
    };
    let folded = |w: NodeId| algo == Algorithm::Sfpa2 && !t.is_multiparent(w);
    let pending = Pending::new(t, dom.topo_order(), |w| dom.idom(w), |w| !folded(w));

    let mut report = SolveReport {
        unreliability: C::zero(),
        max_live_vars: 0,
        max_terms: 0,
        substitutions: 0,
        multiplications: 0,
        wall_time: Default::default(),
    };
    let mut record = |v: NodeId, g: &Value<C>, r: &mut SolveReport<C>| {
        r.max_terms = r.max_terms.max(g.terms());
        r.max_live_vars = r.max_live_vars.max(g.live_vars());
        if let Some(obs) = observer.as_mut() {
            match g {
                Value::Const(c) => obs(v, &SquarefreePoly::constant(c.clone())),
                Value::Poly(p) => obs(v, p),
            }
        }
    };

    let mut g: Vec<Option<Value<C>>> = (0..t.len()).map(|_| None).collect();
    for &v in dom.topo_order().iter().rev() {
        let mut gv = match t.kind(v) {
            GateKind::Be => Value::Const(C::from_prob(t.prob(v).expect("BE has a probability"))),
            GateKind::Cbe => unreachable!("fault trees have no controllable events"),
            kind => {
                let is_or = kind == GateKind::Or;
                let mut scalar = C::one();
                let mut acc: Option<SquarefreePoly<C>> = None;
                for &w in t.children(v) {
                    let factor = if folded(w) {
                        g[w.index()].take().expect("child is solved before its parent")
                    } else {
                        Value::Poly(SquarefreePoly::var(var(w)))
                    };
                    let factor = if is_or { factor.one_minus() } else { factor };
                    match factor {
                        Value::Const(c) => scalar *= &c,
                        Value::Poly(p) => {
                            acc = Some(match acc.take() {
                                None => p,
                                Some(a) => a.mul(&p),
                            })
                        }
                    }
                    report.multiplications += 1;
                }
                let product = match acc {
                    None => Value::Const(scalar),
                    Some(p) => Value::from_poly(p.scale(&scalar)),
                };
                if is_or {
                    product.one_minus()
                } else {
                    product
                }
            }
        };
        record(v, &gv, &mut report);

        for &w in pending.at(v) {
            let gw = g[w.index()].take().expect("each node is substituted exactly once").into_poly();
            if let Value::Poly(p) = gv {
                let p = p.substitute(var(w), &gw).expect("a dominated variable cannot occur in its own polynomial");
                gv = Value::from_poly(p);
            }
            report.substitutions += 1;
            report.multiplications += 1;
            record(v, &gv, &mut report);
        }
        g[v.index()] = Some(gv);
    }

    let root = g[t.root().index()].take().expect("root is solved last");
    report.unreliability = match root {
        Value::Const(c) => c,
        Value::Poly(p) => panic!("variables left at the root: {:?}", p.variables()),
    };
    report.wall_time = start.elapsed();
    report
}
