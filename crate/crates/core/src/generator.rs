//! Seeded random fault trees.
//!
//! A random tree is grown top-down over the gates, every childless gate gets
//! a basic event, and the remaining basic events are scattered. Extra edges
//! then turn single-parent nodes into multiparent nodes. Each extra edge runs
//! from a gate to a node created after it, so the result stays acyclic with
//! the first gate as its only root.
//!
//! Randomness comes from `ChaCha8Rng` seeded with [`GenConfig::seed`].

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dominators::immediate_dominators;
use crate::format::serialize_ft;
use crate::solver::variable_budget;
use crate::tree::{FaultTree, GateKind, Prob, TreeBuilder};

/// Name of the random number generator, written next to every manifest.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9), seeded with seed_from_u64";

pub const MANIFEST_HEADER: [&str; 7] = ["file", "nodes", "bes", "gates", "multiparent", "c", "seed"];

/// Where extra parents come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Locality {
    /// Any earlier gate with spare capacity.
    #[default]
    Global,
    /// The grandparent: gate `g` with child gate `a` gains edges to up to two
    /// children of `a`. Gadgets never share gates, which keeps the variable
    /// budget at 2 regardless of size.
    Local,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub n_be: usize,
    pub n_gates: usize,
    pub max_children: usize,
    /// Chance that a gate is an AND gate.
    pub p_and: f64,
    pub n_multiparent: usize,
    /// Closed interval for basic event probabilities.
    pub prob_range: (f64, f64),
    pub locality: Locality,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            n_be: 74,
            n_gates: 50,
            max_children: 4,
            p_and: 0.3,
            n_multiparent: 4,
            prob_range: (0.01, 0.5),
            locality: Locality::Global,
        }
    }
}

impl GenConfig {
    pub fn nodes(&self) -> usize {
        self.n_be + self.n_gates
    }
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("csv error on {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
}

fn check(cfg: &GenConfig) -> Result<(), GenError> {
    let fail = |msg: String| Err(GenError::Infeasible(msg));
    if cfg.n_be == 0 {
        return fail("at least one basic event is required".into());
    }
    if cfg.max_children < 2 {
        return fail(format!("max_children must be at least 2, got {}", cfg.max_children));
    }
    if cfg.n_gates == 0 && cfg.n_be != 1 {
        return fail(format!("{} basic events need at least one gate", cfg.n_be));
    }
    if cfg.n_gates > 0 && cfg.nodes() - 1 > cfg.n_gates * cfg.max_children {
        return fail(format!(
            "{} gates with at most {} children cannot hold {} nodes",
            cfg.n_gates,
            cfg.max_children,
            cfg.nodes()
        ));
    }
    if cfg.n_multiparent > cfg.nodes() - 1 {
        return fail(format!(
            "{} multiparent nodes requested but only {} non-root nodes exist",
            cfg.n_multiparent,
            cfg.nodes() - 1
        ));
    }
    let (lo, hi) = cfg.prob_range;
    if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
        return fail(format!("probability range [{lo}, {hi}] is not inside [0, 1]"));
    }
    if !(0.0..=1.0).contains(&cfg.p_and) {
        return fail(format!("p_and = {} is not a probability", cfg.p_and));
    }
    Ok(())
}

/// Nodes `0..n_gates` are gates, the rest basic events; every edge goes
/// from a lower to a higher index.
struct Shape {
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
}

impl Shape {
    fn link(&mut self, p: usize, c: usize) {
        self.children[p].push(c);
        self.parents[c].push(p);
    }
}

fn grow_tree(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Shape {
    let (g, n) = (cfg.n_gates, cfg.nodes());
    let mut s = Shape { children: vec![Vec::new(); n], parents: vec![Vec::new(); n] };
    if g == 0 {
        return s;
    }
    let mut leaves = 1;
    let mut open: Vec<usize> = vec![0];
    for i in 1..g {
        // Too many childless gates would run out of basic events.
        let candidates: Vec<usize> = if leaves == cfg.n_be {
            open.iter().copied().filter(|&p| s.children[p].is_empty()).collect()
        } else {
            open.clone()
        };
        let p = *candidates.choose(rng).expect("the previous gate is always open");
        if !s.children[p].is_empty() {
            leaves += 1;
        }
        s.link(p, i);
        if s.children[p].len() == cfg.max_children {
            open.retain(|&q| q != p);
        }
        open.push(i);
    }
    let mut bes: Vec<usize> = (g..n).collect();
    bes.shuffle(rng);
    let mut bes = bes.into_iter();
    for p in 0..g {
        if s.children[p].is_empty() {
            s.link(p, bes.next().expect("checked: enough basic events for the leaves"));
            if s.children[p].len() == cfg.max_children {
                open.retain(|&q| q != p);
            }
        }
    }
    for b in bes {
        let k = rng.random_range(0..open.len());
        let p = open[k];
        s.link(p, b);
        if s.children[p].len() == cfg.max_children {
            open.swap_remove(k);
        }
    }
    s
}

/// Gates that may take `x` as an extra child.
fn eligible<'a>(cfg: &GenConfig, s: &'a Shape, x: usize) -> impl Iterator<Item = usize> + 'a {
    let hi = x.min(cfg.n_gates);
    (0..hi).filter(move |p| !s.parents[x].contains(p))
}

/// Picks one extra parent for as many nodes as possible: a capacitated
/// bipartite matching between nodes and gates, found greedily first and then
/// completed with augmenting paths.
fn add_global(cfg: &GenConfig, s: &mut Shape, rng: &mut ChaCha8Rng) {
    let n = cfg.nodes();
    let mut room: Vec<usize> = (0..cfg.n_gates).map(|p| cfg.max_children - s.children[p].len()).collect();
    let mut partner: Vec<Option<usize>> = vec![None; n];
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); cfg.n_gates];
    let mut targets: Vec<usize> = (1..n).collect();
    targets.shuffle(rng);
    let mut made = 0;
    let mut failed = Vec::new();
    for &x in &targets {
        if made == cfg.n_multiparent {
            break;
        }
        let hi = x.min(cfg.n_gates);
        // Cheap random probes before a full scan.
        let mut pick = (0..16).map(|_| rng.random_range(0..hi)).find(|&p| room[p] > 0 && !s.parents[x].contains(&p));
        if pick.is_none() {
            let options: Vec<usize> = eligible(cfg, s, x).filter(|&p| room[p] > 0).collect();
            pick = options.choose(rng).copied();
        }
        match pick {
            Some(p) => {
                room[p] -= 1;
                partner[x] = Some(p);
                holders[p].push(x);
                made += 1;
            }
            None => failed.push(x),
        }
    }
    // Full gates may free a slot by moving one of their nodes elsewhere.
    for x in failed {
        if made == cfg.n_multiparent {
            break;
        }
        let mut seen = vec![false; cfg.n_gates];
        if augment(cfg, s, x, &mut room, &mut partner, &mut holders, &mut seen) {
            made += 1;
        }
    }
    for (x, p) in partner.iter().enumerate().skip(1) {
        if let Some(p) = *p {
            s.link(p, x);
        }
    }
}

fn augment(
    cfg: &GenConfig,
    s: &Shape,
    x: usize,
    room: &mut [usize],
    partner: &mut [Option<usize>],
    holders: &mut [Vec<usize>],
    seen: &mut [bool],
) -> bool {
    let options: Vec<usize> = eligible(cfg, s, x).collect();
    for &p in &options {
        if !seen[p] && room[p] > 0 {
            room[p] -= 1;
            partner[x] = Some(p);
            holders[p].push(x);
            return true;
        }
    }
    for p in options {
        if seen[p] {
            continue;
        }
        seen[p] = true;
        for i in 0..holders[p].len() {
            let y = holders[p][i];
            if augment(cfg, s, y, room, partner, holders, seen) {
                // y moved on and its old slot at p now belongs to x.
                let at = holders[p].iter().position(|&z| z == y).expect("y was held by p");
                holders[p][at] = x;
                partner[x] = Some(p);
                return true;
            }
        }
    }
    false
}

fn add_local(cfg: &GenConfig, s: &mut Shape, rng: &mut ChaCha8Rng) {
    let mut claimed = vec![false; cfg.n_gates];
    let mut gates: Vec<usize> = (1..cfg.n_gates).collect();
    gates.shuffle(rng);
    let mut made = 0;
    for a in gates {
        if made == cfg.n_multiparent {
            break;
        }
        let g = s.parents[a][0];
        if claimed[g] || claimed[a] {
            continue;
        }
        let room = cfg.max_children - s.children[g].len();
        let want = (cfg.n_multiparent - made).min(2).min(room).min(s.children[a].len());
        if want == 0 {
            continue;
        }
        let mut xs = s.children[a].clone();
        xs.shuffle(rng);
        for &x in &xs[..want] {
            s.link(g, x);
        }
        made += want;
        claimed[g] = true;
        claimed[a] = true;
    }
}

fn draw_prob(cfg: &GenConfig, rng: &mut ChaCha8Rng) -> Prob {
    let (lo, hi) = cfg.prob_range;
    let p = if lo < hi { rng.random_range(lo..=hi) } else { lo };
    // Four decimals keep files short and exact values small.
    let text = format!("{:.4}", p);
    let q = Prob::parse_decimal(&text).expect("formatted decimal parses");
    if (lo..=hi).contains(&q.value()) {
        q
    } else {
        Prob::new(p)
    }
}

/// Builds a random fault tree. The number of multiparent nodes equals
/// `n_multiparent` unless fewer extra edges fit, in which case it is as
/// many as the construction could place.
pub fn generate(cfg: &GenConfig) -> Result<FaultTree, GenError> {
    check(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut s = grow_tree(cfg, &mut rng);
    match cfg.locality {
        Locality::Global => add_global(cfg, &mut s, &mut rng),
        Locality::Local => add_local(cfg, &mut s, &mut rng),
    }

    let g = cfg.n_gates;
    let name = |i: usize| if i < g { format!("g{i}") } else { format!("e{}", i - g) };
    let mut b = TreeBuilder::new();
    b.toplevel(name(0));
    for i in 0..g {
        let kind = if rng.random_bool(cfg.p_and) { GateKind::And } else { GateKind::Or };
        b.gate(name(i), kind, s.children[i].iter().map(|&c| name(c)));
    }
    for i in g..cfg.nodes() {
        let p = draw_prob(cfg, &mut rng);
        b.basic_event(name(i), p);
    }
    Ok(b.build_fault_tree().expect("generated shapes are valid"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRow {
    pub file: String,
    pub nodes: usize,
    pub bes: usize,
    pub gates: usize,
    pub multiparent: usize,
    pub c: usize,
    pub seed: u64,
}

impl ManifestRow {
    pub fn describe(file: String, t: &FaultTree, seed: u64) -> Self {
        ManifestRow {
            file,
            nodes: t.len(),
            bes: t.basic_events().len(),
            gates: t.gate_count(),
            multiparent: t.multiparent_count(),
            c: variable_budget(t, &immediate_dominators(t)),
            seed,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    pub rows: Vec<ManifestRow>,
}

impl Manifest {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write(&self, path: &Path) -> Result<(), GenError> {
        let csv_err = |source| GenError::Csv { path: path.to_owned(), source };
        let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
        w.write_record(MANIFEST_HEADER).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record([
                r.file.clone(),
                r.nodes.to_string(),
                r.bes.to_string(),
                r.gates.to_string(),
                r.multiparent.to_string(),
                r.c.to_string(),
                r.seed.to_string(),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(|source| GenError::Io { path: path.to_owned(), source })
    }

    pub fn read(path: &Path) -> Result<Self, GenError> {
        let csv_err = |source| GenError::Csv { path: path.to_owned(), source };
        let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
        let bad = |msg: String| GenError::Io {
            path: path.to_owned(),
            source: io::Error::new(io::ErrorKind::InvalidData, msg),
        };
        let header = r.headers().map_err(csv_err)?.clone();
        if header.iter().ne(MANIFEST_HEADER) {
            return Err(bad(format!("unexpected manifest header {:?}", header.iter().collect::<Vec<_>>())));
        }
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(csv_err)?;
            let num = |i: usize| -> Result<u64, GenError> {
                rec[i].parse().map_err(|_| bad(format!("column {} is not a number: {:?}", MANIFEST_HEADER[i], &rec[i])))
            };
            rows.push(ManifestRow {
                file: rec[0].to_owned(),
                nodes: num(1)? as usize,
                bes: num(2)? as usize,
                gates: num(3)? as usize,
                multiparent: num(4)? as usize,
                c: num(5)? as usize,
                seed: num(6)?,
            });
        }
        Ok(Manifest { rows })
    }
}

/// Writes `tree_{i:04}.dft` per configuration plus `manifest.csv` and a
/// `manifest.rng` note naming the generator.
pub fn generate_corpus(grid: &[GenConfig], out_dir: &Path) -> Result<Manifest, GenError> {
    let io_err = |path: &Path| {
        let path = path.to_owned();
        move |source| GenError::Io { path, source }
    };
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut manifest = Manifest::default();
    for (i, cfg) in grid.iter().enumerate() {
        let t = generate(cfg)?;
        let file = format!("tree_{i:04}.dft");
        let path = out_dir.join(&file);
        fs::write(&path, serialize_ft(&t)).map_err(io_err(&path))?;
        manifest.rows.push(ManifestRow::describe(file, &t, cfg.seed));
    }
    let path = out_dir.join("manifest.csv");
    manifest.write(&path)?;
    let note = out_dir.join("manifest.rng");
    fs::write(&note, format!("{RNG_NAME}\n")).map_err(io_err(&note))?;
    Ok(manifest)
}
