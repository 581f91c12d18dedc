//! Fault-tree data model: nodes, validation, and the derived constructions
//! (sub-trees, restriction to controllable events, quasimodular composition).

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::ops::Deref;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Dense index of a node within one tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Or,
    /// Basic event with a failure probability.
    Be,
    /// Controllable basic event: its state is fixed externally.
    Cbe,
}

impl GateKind {
    pub fn is_leaf(self) -> bool {
        matches!(self, GateKind::Be | GateKind::Cbe)
    }
}

/// A failure probability, kept both as a float and as an exact rational.
///
/// Probabilities read from decimal text keep their exact decimal value, so
/// `0.4` is exactly `2/5` in rational mode rather than the nearest double.
#[derive(Debug, Clone, PartialEq)]
pub struct Prob {
    value: f64,
    exact: BigRational,
}

impl Prob {
    /// Builds a probability from a float. The exact value is the shortest
    /// decimal that round-trips to `p`.
    pub fn new(p: f64) -> Self {
        if p.is_finite() {
            let exact = parse_decimal_exact(&format!("{p}")).expect("float formats as a decimal");
            Prob { value: p, exact }
        } else {
            Prob { value: p, exact: BigRational::zero() }
        }
    }

    pub fn from_exact(exact: BigRational) -> Self {
        let value = exact.to_f64().unwrap_or(f64::NAN);
        Prob { value, exact }
    }

    /// Parses `0.25`, `1`, `3e-4`, `.5` and similar plain decimal notations.
    pub fn parse_decimal(text: &str) -> Option<Self> {
        let exact = parse_decimal_exact(text)?;
        let value = text.parse::<f64>().ok()?;
        Some(Prob { value, exact })
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    #[inline]
    pub fn exact(&self) -> &BigRational {
        &self.exact
    }

    fn in_unit_interval(&self) -> bool {
        self.value.is_finite()
            && !self.exact.is_negative()
            && self.exact <= BigRational::one()
            && (0.0..=1.0).contains(&self.value)
    }
}

impl fmt::Display for Prob {
    /// Terminating decimals are printed exactly; anything else falls back to
    /// the float.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match terminating_decimal(&self.exact) {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}", self.value),
        }
    }
}

fn parse_decimal_exact(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    if exponent.abs() > 4096 {
        return None;
    }
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let r = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

fn terminating_decimal(r: &BigRational) -> Option<String> {
    let mut d = r.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&d % &two).is_zero() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = r * BigRational::from_integer(num_traits::pow(BigInt::from(10u32), places));
    let n = scaled.to_integer();
    let negative = n.is_negative();
    let mut digits = n.abs().to_string();
    if places == 0 {
        return Some(if negative { format!("-{digits}") } else { digits });
    }
    if digits.len() <= places {
        digits = format!("{}{}", "0".repeat(places + 1 - digits.len()), digits);
    }
    let (ip, fp) = digits.split_at(digits.len() - places);
    Some(format!("{}{}.{}", if negative { "-" } else { "" }, ip, fp))
}

#[derive(Debug, Clone, PartialEq)]
struct Node {
    name: String,
    kind: GateKind,
    children: Vec<NodeId>,
    prob: Option<Prob>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("node \"{0}\" is defined more than once")]
    Duplicate(String),
    #[error("unknown node \"{name}\" referenced by \"{referenced_by}\"")]
    UnknownNode { name: String, referenced_by: String },
    #[error("gate \"{0}\" has no children")]
    EmptyGate(String),
    #[error("gate \"{gate}\" lists child \"{child}\" twice")]
    DuplicateChild { gate: String, child: String },
    #[error("probability {value} of \"{name}\" is outside [0, 1]")]
    ProbOutOfRange { name: String, value: String },
    #[error("basic event \"{0}\" has no probability")]
    MissingProb(String),
    #[error("controllable event \"{0}\" is not allowed in a fault tree")]
    ControllableInFaultTree(String),
    #[error("cycle detected through \"{0}\"")]
    Cycle(String),
    #[error("no toplevel node declared")]
    NoRoot,
    #[error("toplevel declared more than once (\"{0}\" and \"{1}\")")]
    RootRedeclared(String, String),
    #[error("toplevel node \"{0}\" has parents")]
    RootHasParents(String),
    #[error("nodes unreachable from the toplevel: {}", .0.join(", "))]
    MultipleRoots(Vec<String>),
}

#[derive(Debug, Clone)]
struct Decl {
    name: String,
    kind: GateKind,
    children: Vec<String>,
    prob: Option<Prob>,
}

/// Collects node declarations in any order and validates them into a tree.
///
/// Node ids are assigned in declaration order.
#[derive(Debug, Clone, Default)]
pub struct TreeBuilder {
    decls: Vec<Decl>,
    seen: HashSet<String>,
    duplicate: Option<String>,
    root: Option<String>,
    root_conflict: Option<(String, String)>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(&mut self, decl: Decl) -> &mut Self {
        if !self.seen.insert(decl.name.clone()) && self.duplicate.is_none() {
            self.duplicate = Some(decl.name.clone());
        }
        self.decls.push(decl);
        self
    }

    pub fn basic_event(&mut self, name: impl Into<String>, prob: Prob) -> &mut Self {
        self.push(Decl { name: name.into(), kind: GateKind::Be, children: vec![], prob: Some(prob) })
    }

    /// Shorthand for [`basic_event`](Self::basic_event) with a float probability.
    pub fn be(&mut self, name: impl Into<String>, p: f64) -> &mut Self {
        self.basic_event(name, Prob::new(p))
    }

    pub fn controllable(&mut self, name: impl Into<String>) -> &mut Self {
        self.push(Decl { name: name.into(), kind: GateKind::Cbe, children: vec![], prob: None })
    }

    pub fn gate<I, S>(&mut self, name: impl Into<String>, kind: GateKind, children: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        assert!(!kind.is_leaf(), "gate() takes And or Or");
        let children = children.into_iter().map(Into::into).collect();
        self.push(Decl { name: name.into(), kind, children, prob: None })
    }

    pub fn and<I, S>(&mut self, name: impl Into<String>, children: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.gate(name, GateKind::And, children)
    }

    pub fn or<I, S>(&mut self, name: impl Into<String>, children: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.gate(name, GateKind::Or, children)
    }

    pub fn toplevel(&mut self, name: impl Into<String>) -> &mut Self {
        let name = name.into();
        match &self.root {
            Some(prev) if self.root_conflict.is_none() => {
                self.root_conflict = Some((prev.clone(), name));
            }
            Some(_) => {}
            None => self.root = Some(name),
        }
        self
    }

    pub fn build_fault_tree(&self) -> Result<FaultTree, TreeError> {
        if let Some(d) = self.decls.iter().find(|d| d.kind == GateKind::Cbe) {
            return Err(TreeError::ControllableInFaultTree(d.name.clone()));
        }
        self.build_dag().map(FaultTree)
    }

    pub fn build_pcft(&self) -> Result<Pcft, TreeError> {
        self.build_dag().map(Pcft)
    }

    fn build_dag(&self) -> Result<Dag, TreeError> {
        if let Some(name) = &self.duplicate {
            return Err(TreeError::Duplicate(name.clone()));
        }
        if let Some((a, b)) = &self.root_conflict {
            return Err(TreeError::RootRedeclared(a.clone(), b.clone()));
        }
        let by_name: HashMap<String, NodeId> =
            self.decls.iter().enumerate().map(|(i, d)| (d.name.clone(), NodeId(i))).collect();

        let mut nodes = Vec::with_capacity(self.decls.len());
        for d in &self.decls {
            let mut children = Vec::with_capacity(d.children.len());
            let mut seen = HashSet::with_capacity(d.children.len());
            for c in &d.children {
                let id = *by_name
                    .get(c)
                    .ok_or_else(|| TreeError::UnknownNode { name: c.clone(), referenced_by: d.name.clone() })?;
                if !seen.insert(id) {
                    return Err(TreeError::DuplicateChild { gate: d.name.clone(), child: c.clone() });
                }
                children.push(id);
            }
            if !d.kind.is_leaf() && children.is_empty() {
                return Err(TreeError::EmptyGate(d.name.clone()));
            }
            match (&d.kind, &d.prob) {
                (GateKind::Be, None) => return Err(TreeError::MissingProb(d.name.clone())),
                (GateKind::Be, Some(p)) if !p.in_unit_interval() => {
                    return Err(TreeError::ProbOutOfRange { name: d.name.clone(), value: p.to_string() })
                }
                _ => {}
            }
            nodes.push(Node {
                name: d.name.clone(),
                kind: d.kind,
                children,
                prob: if d.kind == GateKind::Be { d.prob.clone() } else { None },
            });
        }

        let root_name = self.root.as_ref().ok_or(TreeError::NoRoot)?;
        let root = *by_name
            .get(root_name)
            .ok_or_else(|| TreeError::UnknownNode { name: root_name.clone(), referenced_by: "toplevel".into() })?;
        Dag::from_parts(nodes, root, by_name)
    }
}

/// Validated rooted DAG of gates and (controllable) basic events.
///
/// [`FaultTree`] and [`Pcft`] both dereference to this type.
#[derive(Debug, Clone)]
pub struct Dag {
    nodes: Vec<Node>,
    root: NodeId,
    parents: Vec<Vec<NodeId>>,
    by_name: HashMap<String, NodeId>,
    topo: Vec<NodeId>,
}

impl Dag {
    fn from_parts(nodes: Vec<Node>, root: NodeId, by_name: HashMap<String, NodeId>) -> Result<Self, TreeError> {
        let n = nodes.len();
        let mut parents = vec![Vec::new(); n];
        for (i, node) in nodes.iter().enumerate() {
            for &c in &node.children {
                parents[c.0].push(NodeId(i));
            }
        }

        if let Some(v) = find_cycle(&nodes, &parents) {
            return Err(TreeError::Cycle(nodes[v].name.clone()));
        }
        if !parents[root.0].is_empty() {
            return Err(TreeError::RootHasParents(nodes[root.0].name.clone()));
        }
        let orphans: Vec<String> =
            (0..n).filter(|&i| i != root.0 && parents[i].is_empty()).map(|i| nodes[i].name.clone()).collect();
        if !orphans.is_empty() {
            return Err(TreeError::MultipleRoots(orphans));
        }

        let topo = kahn_order(&nodes, &parents, root);
        debug_assert_eq!(topo.len(), n);
        Ok(Dag { nodes, root, parents, by_name, topo })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    #[inline]
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn ids(&self) -> impl ExactSizeIterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).map(NodeId)
    }

    #[inline]
    pub fn name(&self, v: NodeId) -> &str {
        &self.nodes[v.0].name
    }

    #[inline]
    pub fn kind(&self, v: NodeId) -> GateKind {
        self.nodes[v.0].kind
    }

    #[inline]
    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[v.0].children
    }

    #[inline]
    pub fn parents(&self, v: NodeId) -> &[NodeId] {
        &self.parents[v.0]
    }

    #[inline]
    pub fn prob(&self, v: NodeId) -> Option<&Prob> {
        self.nodes[v.0].prob.as_ref()
    }

    pub fn find(&self, name: &str) -> Option<NodeId> {
        self.by_name.get(name).copied()
    }

    /// Topological order, root first, ties broken by smallest id.
    #[inline]
    pub fn topo_order(&self) -> &[NodeId] {
        &self.topo
    }

    /// Basic events in id order.
    pub fn basic_events(&self) -> Vec<NodeId> {
        self.ids().filter(|&v| self.kind(v) == GateKind::Be).collect()
    }

    /// Controllable basic events in id order.
    pub fn controllables(&self) -> Vec<NodeId> {
        self.ids().filter(|&v| self.kind(v) == GateKind::Cbe).collect()
    }

    pub fn gate_count(&self) -> usize {
        self.ids().filter(|&v| !self.kind(v).is_leaf()).count()
    }

    #[inline]
    pub fn is_multiparent(&self, v: NodeId) -> bool {
        self.parents[v.0].len() >= 2
    }

    pub fn multiparent_count(&self) -> usize {
        self.parents.iter().filter(|p| p.len() >= 2).count()
    }

    pub fn is_treelike(&self) -> bool {
        self.parents.iter().all(|p| p.len() <= 1)
    }

    /// All nodes reachable from `v`, including `v`, in id order.
    pub fn descendants(&self, v: NodeId) -> Vec<NodeId> {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![v];
        seen[v.0] = true;
        while let Some(u) = stack.pop() {
            for &c in self.children(u) {
                if !seen[c.0] {
                    seen[c.0] = true;
                    stack.push(c);
                }
            }
        }
        (0..self.len()).filter(|&i| seen[i]).map(NodeId).collect()
    }

    /// Structural equality up to renumbering: same names, kinds, child sets,
    /// probabilities and root.
    pub fn is_isomorphic(&self, other: &Dag) -> bool {
        if self.len() != other.len() || self.name(self.root) != other.name(other.root) {
            return false;
        }
        self.ids().all(|v| {
            let Some(w) = other.find(self.name(v)) else {
                return false;
            };
            let mine: BTreeSet<&str> = self.children(v).iter().map(|&c| self.name(c)).collect();
            let theirs: BTreeSet<&str> = other.children(w).iter().map(|&c| other.name(c)).collect();
            self.kind(v) == other.kind(w)
                && mine == theirs
                && self.prob(v).map(Prob::exact) == other.prob(w).map(Prob::exact)
        })
    }

    /// Rebuilds the nodes in `keep` (id order preserved) rooted at `root`,
    /// applying `edit` to each declaration first.
    fn rebuild(&self, keep: &[NodeId], root: NodeId, mut edit: impl FnMut(NodeId, &mut Decl)) -> TreeBuilder {
        let mut b = TreeBuilder::new();
        for &v in keep {
            let node = &self.nodes[v.0];
            let mut decl = Decl {
                name: node.name.clone(),
                kind: node.kind,
                children: node.children.iter().map(|&c| self.name(c).to_owned()).collect(),
                prob: node.prob.clone(),
            };
            edit(v, &mut decl);
            b.push(decl);
        }
        b.toplevel(self.name(root));
        b
    }

    fn subtree_builder(&self, v: NodeId) -> TreeBuilder {
        self.rebuild(&self.descendants(v), v, |_, _| {})
    }

    fn restrict_builder(&self, set: &HashSet<NodeId>) -> TreeBuilder {
        // Reachability from the root once the restricted nodes lose their edges.
        let mut seen = vec![false; self.len()];
        let mut stack = vec![self.root];
        seen[self.root.0] = true;
        while let Some(u) = stack.pop() {
            if set.contains(&u) {
                continue;
            }
            for &c in self.children(u) {
                if !seen[c.0] {
                    seen[c.0] = true;
                    stack.push(c);
                }
            }
        }
        let keep: Vec<NodeId> = (0..self.len()).filter(|&i| seen[i]).map(NodeId).collect();
        self.rebuild(&keep, self.root, |v, decl| {
            if set.contains(&v) {
                decl.kind = GateKind::Cbe;
                decl.children.clear();
                decl.prob = None;
            }
        })
    }

    /// Builder holding the same declarations with probabilities replaced
    /// through `prob_of`.
    fn reprob_builder(&self, mut prob_of: impl FnMut(NodeId) -> Prob) -> TreeBuilder {
        let all: Vec<NodeId> = self.ids().collect();
        self.rebuild(&all, self.root, |v, decl| {
            if decl.kind == GateKind::Be {
                decl.prob = Some(prob_of(v));
            }
        })
    }
}

fn find_cycle(nodes: &[Node], parents: &[Vec<NodeId>]) -> Option<usize> {
    let n = nodes.len();
    let mut indeg: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut removed = vec![false; n];
    while let Some(u) = queue.pop() {
        removed[u] = true;
        for &c in &nodes[u].children {
            indeg[c.0] -= 1;
            if indeg[c.0] == 0 {
                queue.push(c.0);
            }
        }
    }
    if removed.iter().all(|&r| r) {
        return None;
    }
    // Peel off nodes downstream of a cycle so the reported node lies on one.
    let mut outdeg: Vec<usize> = (0..n).map(|i| nodes[i].children.iter().filter(|c| !removed[c.0]).count()).collect();
    let mut queue: Vec<usize> = (0..n).filter(|&i| !removed[i] && outdeg[i] == 0).collect();
    while let Some(u) = queue.pop() {
        removed[u] = true;
        for p in &parents[u] {
            if !removed[p.0] {
                outdeg[p.0] -= 1;
                if outdeg[p.0] == 0 {
                    queue.push(p.0);
                }
            }
        }
    }
    (0..n).find(|&i| !removed[i])
}

fn kahn_order(nodes: &[Node], parents: &[Vec<NodeId>], root: NodeId) -> Vec<NodeId> {
    let mut indeg: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(root.0));
    let mut order = Vec::with_capacity(nodes.len());
    while let Some(Reverse(u)) = heap.pop() {
        order.push(NodeId(u));
        for &c in &nodes[u].children {
            indeg[c.0] -= 1;
            if indeg[c.0] == 0 {
                heap.push(Reverse(c.0));
            }
        }
    }
    order
}

/// A static fault tree: AND/OR gates over basic events with probabilities.
#[derive(Debug, Clone)]
pub struct FaultTree(Dag);

impl Deref for FaultTree {
    type Target = Dag;
    fn deref(&self) -> &Dag {
        &self.0
    }
}

impl FaultTree {
    pub fn as_dag(&self) -> &Dag {
        &self.0
    }

    /// `T_v`: the descendants of `v`, rooted at `v`.
    pub fn subtree(&self, v: NodeId) -> FaultTree {
        self.0.subtree_builder(v).build_fault_tree().expect("sub-tree of a valid tree is valid")
    }

    /// `T[I]`: every node of `set` becomes a controllable leaf; nodes no longer
    /// reachable from the root are dropped.
    pub fn restrict(&self, set: &HashSet<NodeId>) -> Pcft {
        self.0.restrict_builder(set).build_pcft().expect("restriction of a valid tree is valid")
    }

    /// The same tree with every basic-event probability replaced.
    pub fn with_probabilities(&self, prob_of: impl FnMut(NodeId) -> Prob) -> FaultTree {
        self.0.reprob_builder(prob_of).build_fault_tree().expect("probabilities are validated")
    }

    pub fn into_pcft(self) -> Pcft {
        Pcft(self.0)
    }
}

/// Partially controllable fault tree: a fault tree whose leaves may also be
/// controllable basic events without a probability.
#[derive(Debug, Clone)]
pub struct Pcft(Dag);

impl Deref for Pcft {
    type Target = Dag;
    fn deref(&self) -> &Dag {
        &self.0
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComposeError {
    #[error("\"{0}\" is not a controllable event of the outer tree")]
    NotControllable(String),
    #[error("\"{0}\" also occurs in the inserted tree")]
    TargetInReplacement(String),
    #[error("basic event \"{0}\" occurs in both trees")]
    SharedBasicEvent(String),
    #[error("shared node \"{0}\" differs between the two trees")]
    InconsistentShared(String),
    #[error(transparent)]
    Invalid(#[from] TreeError),
}

impl Pcft {
    pub fn as_dag(&self) -> &Dag {
        &self.0
    }

    pub fn subtree(&self, v: NodeId) -> Pcft {
        self.0.subtree_builder(v).build_pcft().expect("sub-tree of a valid tree is valid")
    }

    pub fn restrict(&self, set: &HashSet<NodeId>) -> Pcft {
        self.0.restrict_builder(set).build_pcft().expect("restriction of a valid tree is valid")
    }

    /// Converts back to a fault tree; fails if any controllable event remains.
    pub fn into_fault_tree(self) -> Result<FaultTree, TreeError> {
        if let Some(v) = self.0.ids().find(|&v| self.0.kind(v) == GateKind::Cbe) {
            return Err(TreeError::ControllableInFaultTree(self.0.name(v).to_owned()));
        }
        Ok(FaultTree(self.0))
    }

    /// Quasimodular composition `self[v ↦ inner]`: the controllable event `v`
    /// is replaced by all of `inner`, with edges into `v` redirected to
    /// `inner`'s root. Nodes are matched across the trees by name.
    pub fn compose(&self, v: NodeId, inner: &Pcft) -> Result<Pcft, ComposeError> {
        let outer = &self.0;
        let target = outer.name(v);
        if outer.kind(v) != GateKind::Cbe {
            return Err(ComposeError::NotControllable(target.to_owned()));
        }
        if inner.find(target).is_some() {
            return Err(ComposeError::TargetInReplacement(target.to_owned()));
        }
        for w in inner.ids() {
            let Some(u) = outer.find(inner.name(w)) else { continue };
            if outer.kind(u) == GateKind::Be && inner.kind(w) == GateKind::Be {
                return Err(ComposeError::SharedBasicEvent(outer.name(u).to_owned()));
            }
            let a: BTreeSet<&str> = outer.children(u).iter().map(|&c| outer.name(c)).collect();
            let b: BTreeSet<&str> = inner.children(w).iter().map(|&c| inner.name(c)).collect();
            if outer.kind(u) != inner.kind(w)
                || a != b
                || outer.prob(u).map(Prob::exact) != inner.prob(w).map(Prob::exact)
            {
                return Err(ComposeError::InconsistentShared(outer.name(u).to_owned()));
            }
        }

        let inner_root = inner.name(inner.root());
        let mut b = TreeBuilder::new();
        for u in outer.ids().filter(|&u| u != v) {
            let node = &outer.nodes[u.0];
            // Rerouting may land on an existing sibling; gates are idempotent.
            let mut children: Vec<String> = Vec::with_capacity(node.children.len());
            for &c in &node.children {
                let name = if c == v { inner_root } else { outer.name(c) };
                if !children.iter().any(|n| n == name) {
                    children.push(name.to_owned());
                }
            }
            b.push(Decl { name: node.name.clone(), kind: node.kind, children, prob: node.prob.clone() });
        }
        for w in inner.ids().filter(|&w| outer.find(inner.name(w)).is_none()) {
            let node = &inner.0.nodes[w.0];
            b.push(Decl {
                name: node.name.clone(),
                kind: node.kind,
                children: node.children.iter().map(|&c| inner.name(c).to_owned()).collect(),
                prob: node.prob.clone(),
            });
        }
        b.toplevel(if outer.root() == v { inner_root } else { outer.name(outer.root()) });
        Ok(b.build_pcft()?)
    }
}

/// Assignment of states to basic events (`true` = failed).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SafetyEvent(BTreeMap<NodeId, bool>);

impl SafetyEvent {
    pub fn new(states: BTreeMap<NodeId, bool>) -> Self {
        SafetyEvent(states)
    }

    /// Event over `bes` where bit `i` of `mask` is the state of `bes[i]`.
    pub fn from_mask(bes: &[NodeId], mask: u64) -> Self {
        SafetyEvent(bes.iter().enumerate().map(|(i, &v)| (v, mask >> i & 1 == 1)).collect())
    }

    pub fn get(&self, v: NodeId) -> Option<bool> {
        self.0.get(&v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, bool)> + '_ {
        self.0.iter().map(|(&v, &b)| (v, b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Basic events that occur in this event.
    pub fn failed(&self) -> Vec<NodeId> {
        self.iter().filter(|&(_, b)| b).map(|(v, _)| v).collect()
    }

    /// Componentwise `self ≤ other` over a common domain.
    pub fn le(&self, other: &SafetyEvent) -> bool {
        self.0.len() == other.0.len() && self.iter().all(|(v, b)| other.get(v).is_some_and(|o| !b || o))
    }
}
