//! Connected directed leveled graphs with prescribed boundary and genus
//! budget, their canonical forms, levelizations, and the enumerations behind
//! every decomposition sum.
//!
//! A leveled graph is stored in canonical form: one vertex per level
//! (index 0 = bottom), edge multiplicities per (upper, lower) pair, and
//! per-vertex sets of external leg labels. Port assignments and parallel-edge
//! matchings are quotiented out: distinct choices differ by `sgn ⊗ sgn`
//! actions whose signs cancel pairwise, so one canonical wiring represents
//! the term. External legs stay labeled; symmetrization happens downstream.

use std::collections::{BTreeMap, BTreeSet};

use crate::corolla::Corolla;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeveledGraph {
    vertices: Vec<Corolla>,
    edges: BTreeMap<(usize, usize), usize>,
    in_labels: Vec<BTreeSet<usize>>,
    out_labels: Vec<BTreeSet<usize>>,
}

impl LeveledGraph {
    pub fn new(
        vertices: Vec<Corolla>,
        edges: BTreeMap<(usize, usize), usize>,
        in_labels: Vec<BTreeSet<usize>>,
        out_labels: Vec<BTreeSet<usize>>,
    ) -> Result<Self> {
        let g = LeveledGraph {
            vertices,
            edges,
            in_labels,
            out_labels,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn single_vertex(c: Corolla) -> Self {
        LeveledGraph {
            vertices: vec![c],
            edges: BTreeMap::new(),
            in_labels: vec![(1..=c.k).collect()],
            out_labels: vec![(1..=c.l).collect()],
        }
    }

    pub fn vertices(&self) -> &[Corolla] {
        &self.vertices
    }
    pub fn edges(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.edges
    }
    pub fn in_labels(&self) -> &[BTreeSet<usize>] {
        &self.in_labels
    }
    pub fn out_labels(&self) -> &[BTreeSet<usize>] {
        &self.out_labels
    }
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.values().sum()
    }

    /// Edges arriving at `v` from above.
    pub fn internal_in(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|((_, lo), _)| *lo == v)
            .map(|(_, r)| r)
            .sum()
    }

    /// Edges leaving `v` downward.
    pub fn internal_out(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|((up, _), _)| *up == v)
            .map(|(_, r)| r)
            .sum()
    }

    pub fn total_inputs(&self) -> usize {
        self.in_labels.iter().map(|s| s.len()).sum()
    }

    pub fn total_outputs(&self) -> usize {
        self.out_labels.iter().map(|s| s.len()).sum()
    }

    /// First Betti number |edges| - |vertices| + 1.
    pub fn loop_genus(&self) -> usize {
        self.n_edges() + 1 - self.n_vertices()
    }

    /// Boundary corolla: (total inputs, total outputs, Σ vertex genera + loop genus).
    pub fn boundary(&self) -> Corolla {
        Corolla {
            k: self.total_inputs(),
            l: self.total_outputs(),
            g: self.vertices.iter().map(|c| c.g).sum::<usize>() + self.loop_genus(),
        }
    }

    pub fn weight(&self) -> i64 {
        self.vertices.iter().map(|c| c.weight()).sum()
    }

    pub fn has_identity_vertices(&self) -> bool {
        self.vertices.iter().any(|c| c.is_identity())
    }

    /// Canonicalization is idempotent: the stored form is already canonical.
    pub fn canonical_form(&self) -> LeveledGraph {
        self.clone()
    }

    fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(Error::argument("graph needs at least one vertex"));
        }
        if self.in_labels.len() != n || self.out_labels.len() != n {
            return Err(Error::argument("label lists must match vertex count"));
        }
        for (&(up, lo), &r) in &self.edges {
            if up <= lo || up >= n {
                return Err(Error::argument(format!(
                    "edge ({up},{lo}) must go from a higher level to a strictly lower one"
                )));
            }
            if r == 0 {
                return Err(Error::argument("edge multiplicity must be ≥ 1"));
            }
        }
        for v in 0..n {
            let ii = self.internal_in(v);
            let io = self.internal_out(v);
            if ii + self.in_labels[v].len() != self.vertices[v].k {
                return Err(Error::argument(format!(
                    "vertex {v}: in-ports {} ≠ edges {} + labels {}",
                    self.vertices[v].k,
                    ii,
                    self.in_labels[v].len()
                )));
            }
            if io + self.out_labels[v].len() != self.vertices[v].l {
                return Err(Error::argument(format!(
                    "vertex {v}: out-ports {} ≠ edges {} + labels {}",
                    self.vertices[v].l,
                    io,
                    self.out_labels[v].len()
                )));
            }
        }
        let k = self.total_inputs();
        let l = self.total_outputs();
        let mut seen_in = BTreeSet::new();
        for s in &self.in_labels {
            for &t in s {
                if t < 1 || t > k || !seen_in.insert(t) {
                    return Err(Error::argument("input labels must partition 1..k"));
                }
            }
        }
        let mut seen_out = BTreeSet::new();
        for s in &self.out_labels {
            for &t in s {
                if t < 1 || t > l || !seen_out.insert(t) {
                    return Err(Error::argument("output labels must partition 1..l"));
                }
            }
        }
        if self.n_edges() + 1 < self.n_vertices() || !self.is_connected() {
            return Err(Error::argument("graph must be connected"));
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n <= 1 {
            return true;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            if parent[x] != x {
                let r = find(parent, parent[x]);
                parent[x] = r;
            }
            parent[x]
        }
        for &(u, v) in self.edges.keys() {
            let ru = find(&mut parent, u);
            let rv = find(&mut parent, v);
            parent[ru] = rv;
        }
        let r0 = find(&mut parent, 0);
        (1..n).all(|v| find(&mut parent, v) == r0)
    }

    /// All linear extensions of the vertex partial order, as leveled graphs.
    pub fn levelizations(&self) -> Vec<LeveledGraph> {
        let n = self.vertices.len();
        // succ[u] = vertices that must sit strictly below u.
        let mut below: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &(u, v) in self.edges.keys() {
            below[u].insert(v);
        }
        let mut out = Vec::new();
        let mut order: Vec<usize> = Vec::with_capacity(n); // bottom to top
        let mut used = vec![false; n];
        fn rec(
            g: &LeveledGraph,
            below: &[BTreeSet<usize>],
            used: &mut Vec<bool>,
            order: &mut Vec<usize>,
            out: &mut Vec<LeveledGraph>,
        ) {
            let n = g.vertices.len();
            if order.len() == n {
                // new level of old vertex v = position in `order`.
                let mut pos = vec![0usize; n];
                for (lvl, &v) in order.iter().enumerate() {
                    pos[v] = lvl;
                }
                let vertices: Vec<Corolla> = order.iter().map(|&v| g.vertices[v]).collect();
                let mut edges = BTreeMap::new();
                for (&(u, v), &r) in &g.edges {
                    edges.insert((pos[u], pos[v]), r);
                }
                let in_labels: Vec<BTreeSet<usize>> =
                    order.iter().map(|&v| g.in_labels[v].clone()).collect();
                let out_labels: Vec<BTreeSet<usize>> =
                    order.iter().map(|&v| g.out_labels[v].clone()).collect();
                out.push(LeveledGraph {
                    vertices,
                    edges,
                    in_labels,
                    out_labels,
                });
                return;
            }
            for v in 0..n {
                if used[v] {
                    continue;
                }
                // v may be placed next (at the bottom of the remaining ones)
                // iff nothing still unplaced must sit below it.
                if below[v].iter().any(|w| !used[*w]) {
                    continue;
                }
                used[v] = true;
                order.push(v);
                rec(g, below, used, order, out);
                order.pop();
                used[v] = false;
            }
        }
        rec(self, &below, &mut used, &mut order, &mut out);
        out
    }

    /// The minimal levelization: a canonical representative of the underlying
    /// unleveled graph.
    pub fn unleveled_canonical(&self) -> LeveledGraph {
        self.levelizations().into_iter().min().expect("at least one levelization")
    }
}

/// Equality of leveled graphs through their canonical forms.
pub fn equals(g1: &LeveledGraph, g2: &LeveledGraph) -> bool {
    g1.canonical_form() == g2.canonical_form()
}

/// A reference held by one port: an external leg label or an internal edge id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PortRef {
    Ext(usize),
    Edge(usize),
}

/// A graph with explicit port wiring; the raw form produced by callers and by
/// [`canonical_wiring`]. Edge ids are arbitrary but must be used exactly once
/// as an out-port (on the upper vertex) and once as an in-port (lower vertex).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiredGraph {
    pub vertices: Vec<WiredVertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WiredVertex {
    pub corolla: Corolla,
    pub ins: Vec<PortRef>,
    pub outs: Vec<PortRef>,
}

impl WiredGraph {
    /// Collapses the explicit wiring into the canonical leveled form,
    /// validating the bijections along the way.
    pub fn canonical_form(&self) -> Result<LeveledGraph> {
        let n = self.vertices.len();
        let mut edge_out: BTreeMap<usize, usize> = BTreeMap::new();
        let mut edge_in: BTreeMap<usize, usize> = BTreeMap::new();
        let mut in_labels: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut out_labels: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (v, wv) in self.vertices.iter().enumerate() {
            if wv.ins.len() != wv.corolla.k || wv.outs.len() != wv.corolla.l {
                return Err(Error::argument(format!(
                    "vertex {v}: wiring does not match corolla arity"
                )));
            }
            for p in &wv.ins {
                match p {
                    PortRef::Ext(t) => {
                        in_labels[v].insert(*t);
                    }
                    PortRef::Edge(e) => {
                        if edge_in.insert(*e, v).is_some() {
                            return Err(Error::argument(format!("edge {e} used twice as input")));
                        }
                    }
                }
            }
            for p in &wv.outs {
                match p {
                    PortRef::Ext(t) => {
                        out_labels[v].insert(*t);
                    }
                    PortRef::Edge(e) => {
                        if edge_out.insert(*e, v).is_some() {
                            return Err(Error::argument(format!("edge {e} used twice as output")));
                        }
                    }
                }
            }
        }
        if edge_out.keys().collect::<Vec<_>>() != edge_in.keys().collect::<Vec<_>>() {
            return Err(Error::argument("dangling internal edge"));
        }
        let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (e, &u) in &edge_out {
            let v = edge_in[e];
            if u <= v {
                return Err(Error::argument(format!(
                    "edge {e} does not flow from a higher level to a lower one"
                )));
            }
            *edges.entry((u, v)).or_insert(0) += 1;
        }
        LeveledGraph::new(
            self.vertices.iter().map(|w| w.corolla).collect(),
            edges,
            in_labels,
            out_labels,
        )
    }
}

/// The fixed canonical wiring of a leveled graph: per vertex, in-ports list
/// internal bundles from nearer upper levels first (each bundle contiguous,
/// matched order-preservingly) followed by external labels ascending;
/// out-ports list bundles to lower levels ascending, then external labels.
pub fn canonical_wiring(g: &LeveledGraph) -> WiredGraph {
    // Edge ids per bundle, in BTreeMap order of (upper, lower).
    let mut ids: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    let mut next = 0usize;
    for (&key, &r) in g.edges() {
        let v: Vec<usize> = (next..next + r).collect();
        next += r;
        ids.insert(key, v);
    }
    let n = g.n_vertices();
    let mut vertices = Vec::with_capacity(n);
    for v in 0..n {
        let c = g.vertices()[v];
        let mut ins: Vec<PortRef> = Vec::with_capacity(c.k);
        for u in v + 1..n {
            if let Some(bundle) = ids.get(&(u, v)) {
                ins.extend(bundle.iter().map(|&e| PortRef::Edge(e)));
            }
        }
        ins.extend(g.in_labels()[v].iter().map(|&t| PortRef::Ext(t)));
        let mut outs: Vec<PortRef> = Vec::with_capacity(c.l);
        for w in 0..v {
            if let Some(bundle) = ids.get(&(v, w)) {
                outs.extend(bundle.iter().map(|&e| PortRef::Edge(e)));
            }
        }
        outs.extend(g.out_labels()[v].iter().map(|&t| PortRef::Ext(t)));
        vertices.push(WiredVertex {
            corolla: c,
            ins,
            outs,
        });
    }
    WiredGraph { vertices }
}

fn positive_compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(vec![]);
        }
        return out;
    }
    fn rec(remaining: i64, parts: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if parts == 1 {
            if remaining >= 1 {
                cur.push(remaining);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for first in 1..=remaining - (parts as i64 - 1) {
            cur.push(first);
            rec(remaining - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    rec(total, parts, &mut Vec::new(), &mut out);
    out
}

fn corollas_of_weight(w: i64) -> Vec<Corolla> {
    Corolla::all_of_weight(w)
}

/// Distributes the labels into ordered groups of the given sizes.
fn label_distributions(labels: &[usize], sizes: &[usize]) -> Vec<Vec<BTreeSet<usize>>> {
    let mut out = Vec::new();
    fn rec(
        remaining: Vec<usize>,
        sizes: &[usize],
        cur: &mut Vec<BTreeSet<usize>>,
        out: &mut Vec<Vec<BTreeSet<usize>>>,
    ) {
        if sizes.is_empty() {
            if remaining.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        let sz = sizes[0];
        for subset in crate::graph::subsets(&remaining, sz) {
            let rest: Vec<usize> = remaining.iter().copied().filter(|x| !subset.contains(x)).collect();
            cur.push(subset.into_iter().collect());
            rec(rest, &sizes[1..], cur, out);
            cur.pop();
        }
    }
    rec(labels.to_vec(), sizes, &mut Vec::new(), &mut out);
    out
}

pub(crate) fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(items: &[usize], start: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, i + 1, k, cur, out);
            cur.pop();
        }
    }
    rec(items, 0, k, &mut Vec::new(), &mut out);
    out
}

/// Edge-count matrices: all maps from the ordered pair list to multiplicities
/// with prescribed total and capacity bounds per vertex.
fn edge_distributions(
    pairs: &[(usize, usize)],
    total: usize,
    in_cap: &[usize],
    out_cap: &[usize],
) -> Vec<BTreeMap<(usize, usize), usize>> {
    let mut out = Vec::new();
    fn rec(
        pairs: &[(usize, usize)],
        idx: usize,
        left: usize,
        in_rem: &mut Vec<usize>,
        out_rem: &mut Vec<usize>,
        cur: &mut BTreeMap<(usize, usize), usize>,
        out: &mut Vec<BTreeMap<(usize, usize), usize>>,
    ) {
        if idx == pairs.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let (u, v) = pairs[idx];
        let maxr = left.min(in_rem[v]).min(out_rem[u]);
        for r in 0..=maxr {
            if r > 0 {
                cur.insert((u, v), r);
            }
            in_rem[v] -= r;
            out_rem[u] -= r;
            rec(pairs, idx + 1, left - r, in_rem, out_rem, cur, out);
            in_rem[v] += r;
            out_rem[u] += r;
            cur.remove(&(u, v));
        }
    }
    rec(
        pairs,
        0,
        total,
        &mut in_cap.to_vec(),
        &mut out_cap.to_vec(),
        &mut BTreeMap::new(),
        &mut out,
    );
    out
}

/// All canonical connected leveled graphs with nontrivial vertices, boundary
/// (k, l), and total genus `g_total` (vertex genera plus loop genus). Finite
/// because vertex weights ≥ 1 sum to `k + l + 2 g_total - 2`.
pub fn enumerate_leveled_graphs(
    k: usize,
    l: usize,
    g_total: usize,
    max_weight: i64,
) -> Result<Vec<LeveledGraph>> {
    if k < 1 || l < 1 {
        return Err(Error::argument("boundary needs k, l ≥ 1"));
    }
    let target_weight = k as i64 + l as i64 + 2 * g_total as i64 - 2;
    if max_weight < target_weight {
        return Err(Error::argument(format!(
            "max_weight {max_weight} below the boundary weight {target_weight}"
        )));
    }
    let mut out = Vec::new();
    if target_weight < 1 {
        // Only the identity corolla has weight 0 and it is not a vertex.
        return Ok(out);
    }
    let max_vertices = target_weight as usize;
    for n in 1..=max_vertices {
        for weights in positive_compositions(target_weight, n) {
            // choose corollas per vertex
            let choices: Vec<Vec<Corolla>> = weights.iter().map(|&w| corollas_of_weight(w)).collect();
            let mut pick = vec![0usize; n];
            'outer: loop {
                let verts: Vec<Corolla> = pick.iter().enumerate().map(|(i, &j)| choices[i][j]).collect();
                collect_graphs(&verts, k, l, g_total, &mut out)?;
                // advance the mixed-radix counter
                let mut i = 0;
                loop {
                    if i == n {
                        break 'outer;
                    }
                    pick[i] += 1;
                    if pick[i] < choices[i].len() {
                        break;
                    }
                    pick[i] = 0;
                    i += 1;
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

fn collect_graphs(
    verts: &[Corolla],
    k: usize,
    l: usize,
    g_total: usize,
    out: &mut Vec<LeveledGraph>,
) -> Result<()> {
    let n = verts.len();
    let sum_k: usize = verts.iter().map(|c| c.k).sum();
    let sum_l: usize = verts.iter().map(|c| c.l).sum();
    let sum_g: usize = verts.iter().map(|c| c.g).sum();
    if sum_g > g_total {
        return Ok(());
    }
    let loop_genus = g_total - sum_g;
    // E = N - 1 + loop genus, and both capacity identities must agree.
    let e_edges = n - 1 + loop_genus;
    if sum_k != k + e_edges || sum_l != l + e_edges {
        return Ok(());
    }
    let mut pairs = Vec::new();
    for u in 1..n {
        for v in 0..u {
            pairs.push((u, v));
        }
    }
    let in_cap: Vec<usize> = verts.iter().map(|c| c.k).collect();
    let out_cap: Vec<usize> = verts.iter().map(|c| c.l).collect();
    for edges in edge_distributions(&pairs, e_edges, &in_cap, &out_cap) {
        let in_sizes: Vec<usize> = (0..n)
            .map(|v| {
                let ii: usize = edges.iter().filter(|((_, lo), _)| *lo == v).map(|(_, r)| *r).sum();
                verts[v].k - ii
            })
            .collect();
        let out_sizes: Vec<usize> = (0..n)
            .map(|v| {
                let io: usize = edges.iter().filter(|((up, _), _)| *up == v).map(|(_, r)| *r).sum();
                verts[v].l - io
            })
            .collect();
        let in_all: Vec<usize> = (1..=k).collect();
        let out_all: Vec<usize> = (1..=l).collect();
        for in_labels in label_distributions(&in_all, &in_sizes) {
            for out_labels in label_distributions(&out_all, &out_sizes) {
                if let Ok(g) = LeveledGraph::new(
                    verts.to_vec(),
                    edges.clone(),
                    in_labels.clone(),
                    out_labels.clone(),
                ) {
                    out.push(g);
                }
            }
        }
    }
    Ok(())
}

/// Constraint on one row of a two-level decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowConstraint {
    /// Any corollas, identity corollas included.
    Free,
    /// Exactly one nontrivial vertex; all other slots are identity corollas.
    SingleNontrivial,
}

/// A two-level decomposition term: bottom row `0..bottom_count`, top row
/// `bottom_count..`. Every bottom in-port is internal and every top out-port
/// is internal; all external inputs enter the top row and all external
/// outputs leave the bottom row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLevelTerm {
    pub graph: LeveledGraph,
    pub bottom_count: usize,
}

/// The set partitions of `labels` into exactly `m` nonempty blocks, blocks
/// canonically ordered by minimal element (restricted-growth enumeration).
fn set_partitions(labels: &[usize], m: usize) -> Vec<Vec<BTreeSet<usize>>> {
    let mut out = Vec::new();
    if m == 0 || m > labels.len() {
        return out;
    }
    fn rec(labels: &[usize], idx: usize, m: usize, blocks: &mut Vec<BTreeSet<usize>>, out: &mut Vec<Vec<BTreeSet<usize>>>) {
        if idx == labels.len() {
            if blocks.len() == m {
                out.push(blocks.clone());
            }
            return;
        }
        let remaining = labels.len() - idx;
        // prune: we can open at most `remaining` new blocks
        if blocks.len() + remaining < m {
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].insert(labels[idx]);
            rec(labels, idx + 1, m, blocks, out);
            blocks[b].remove(&labels[idx]);
        }
        if blocks.len() < m {
            blocks.push([labels[idx]].into_iter().collect());
            rec(labels, idx + 1, m, blocks, out);
            blocks.pop();
        }
    }
    rec(labels, 0, m, &mut Vec::new(), &mut out);
    out
}

/// Enumerates connected two-level decompositions of `c` subject to the row
/// constraints. Rows are canonically ordered: bottom vertices ascending by
/// minimal output label, top vertices ascending by minimal input label.
pub fn enumerate_two_level(
    c: Corolla,
    bottom: RowConstraint,
    top: RowConstraint,
) -> Result<Vec<TwoLevelTerm>> {
    let mut out = Vec::new();
    let k = c.k;
    let l = c.l;
    let target_weight = c.weight();
    let in_all: Vec<usize> = (1..=k).collect();
    let out_all: Vec<usize> = (1..=l).collect();
    for m in 1..=l {
        for bottom_blocks in set_partitions(&out_all, m) {
            // bottom corolla choices: l_b fixed by blocks; k_b, g_b free.
            let bot_l: Vec<usize> = bottom_blocks.iter().map(|b| b.len()).collect();
            for p in 1..=k {
                for top_blocks in set_partitions(&in_all, p) {
                    let top_k: Vec<usize> = top_blocks.iter().map(|b| b.len()).collect();
                    enumerate_rows(
                        c,
                        &bottom_blocks,
                        &bot_l,
                        &top_blocks,
                        &top_k,
                        target_weight,
                        bottom,
                        top,
                        &mut out,
                    )?;
                }
            }
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_rows(
    c: Corolla,
    bottom_blocks: &[BTreeSet<usize>],
    bot_l: &[usize],
    top_blocks: &[BTreeSet<usize>],
    top_k: &[usize],
    target_weight: i64,
    bottom_cons: RowConstraint,
    top_cons: RowConstraint,
    out: &mut Vec<TwoLevelTerm>,
) -> Result<()> {
    let m = bot_l.len();
    let p = top_k.len();
    // Bound on internal edge count from genus bookkeeping.
    // E = (m + p) - 1 + loop_genus and loop_genus = c.g - Σ g_v ≥ 0.
    let e_max = m + p - 1 + c.g;
    // Enumerate bottom corollas (k_b free, g_b ≤ c.g) and top corollas
    // (l_t free, g_t ≤ c.g) with weight and capacity pruning.
    let bot_choices: Vec<Vec<Corolla>> = (0..m)
        .map(|b| {
            let mut v = Vec::new();
            for kb in 1..=e_max {
                for gb in 0..=c.g {
                    if let Ok(cor) = Corolla::new(kb, bot_l[b], gb) {
                        if cor.weight() <= target_weight && cor.weight() >= 0 {
                            v.push(cor);
                        }
                    }
                }
            }
            v
        })
        .collect();
    let top_choices: Vec<Vec<Corolla>> = (0..p)
        .map(|t| {
            let mut v = Vec::new();
            for lt in 1..=e_max {
                for gt in 0..=c.g {
                    if let Ok(cor) = Corolla::new(top_k[t], lt, gt) {
                        if cor.weight() <= target_weight && cor.weight() >= 0 {
                            v.push(cor);
                        }
                    }
                }
            }
            v
        })
        .collect();

    let mut bot_pick = vec![0usize; m];
    loop {
        let bots: Vec<Corolla> = bot_pick.iter().enumerate().map(|(i, &j)| bot_choices[i][j]).collect();
        let bots_ok = match bottom_cons {
            RowConstraint::Free => true,
            RowConstraint::SingleNontrivial => bots.iter().filter(|c| !c.is_identity()).count() == 1,
        };
        if bots_ok {
            let e_bottom: usize = bots.iter().map(|c| c.k).sum();
            let mut top_pick = vec![0usize; p];
            loop {
                let tops: Vec<Corolla> =
                    top_pick.iter().enumerate().map(|(i, &j)| top_choices[i][j]).collect();
                let tops_ok = match top_cons {
                    RowConstraint::Free => true,
                    RowConstraint::SingleNontrivial => {
                        tops.iter().filter(|c| !c.is_identity()).count() == 1
                    }
                };
                if tops_ok {
                    let e_top: usize = tops.iter().map(|c| c.l).sum();
                    let sum_g: usize =
                        bots.iter().map(|c| c.g).sum::<usize>() + tops.iter().map(|c| c.g).sum::<usize>();
                    let w: i64 = bots.iter().map(|c| c.weight()).sum::<i64>()
                        + tops.iter().map(|c| c.weight()).sum::<i64>();
                    if e_top == e_bottom
                        && w == target_weight
                        && sum_g <= c.g
                        && e_top == (m + p - 1) + (c.g - sum_g)
                    {
                        emit_two_level(
                            c,
                            &bots,
                            &tops,
                            bottom_blocks,
                            top_blocks,
                            e_top,
                            out,
                        );
                    }
                }
                if !advance(&mut top_pick, &top_choices) {
                    break;
                }
            }
        }
        if !advance(&mut bot_pick, &bot_choices) {
            break;
        }
    }
    Ok(())
}

fn advance(pick: &mut [usize], choices: &[Vec<Corolla>]) -> bool {
    for i in 0..pick.len() {
        pick[i] += 1;
        if pick[i] < choices[i].len() {
            return true;
        }
        pick[i] = 0;
    }
    false
}

fn emit_two_level(
    c: Corolla,
    bots: &[Corolla],
    tops: &[Corolla],
    bottom_blocks: &[BTreeSet<usize>],
    top_blocks: &[BTreeSet<usize>],
    e_edges: usize,
    out: &mut Vec<TwoLevelTerm>,
) {
    let m = bots.len();
    let p = tops.len();
    // pairs (top vertex m+t, bottom vertex b)
    let mut pairs = Vec::new();
    for t in 0..p {
        for b in 0..m {
            pairs.push((m + t, b));
        }
    }
    let mut in_cap = vec![0usize; m + p];
    let mut out_cap = vec![0usize; m + p];
    for (b, cb) in bots.iter().enumerate() {
        in_cap[b] = cb.k; // all internal
    }
    for (t, ct) in tops.iter().enumerate() {
        out_cap[m + t] = ct.l; // all internal
    }
    for edges in edge_distributions(&pairs, e_edges, &in_cap, &out_cap) {
        // saturation: every bottom input and top output must be used
        let ok = (0..m).all(|b| {
            let used: usize = edges.iter().filter(|((_, lo), _)| *lo == b).map(|(_, r)| *r).sum();
            used == bots[b].k
        }) && (0..p).all(|t| {
            let used: usize = edges
                .iter()
                .filter(|((up, _), _)| *up == m + t)
                .map(|(_, r)| *r)
                .sum();
            used == tops[t].l
        });
        if !ok {
            continue;
        }
        let mut vertices: Vec<Corolla> = bots.to_vec();
        vertices.extend_from_slice(tops);
        let mut in_labels: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];
        in_labels.extend(top_blocks.iter().cloned());
        let mut out_labels: Vec<BTreeSet<usize>> = bottom_blocks.to_vec();
        out_labels.extend(std::iter::repeat(BTreeSet::new()).take(p));
        if let Ok(g) = LeveledGraph::new(vertices, edges, in_labels, out_labels) {
            if g.boundary() == c {
                out.push(TwoLevelTerm {
                    graph: g,
                    bottom_count: m,
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_enumeration() {
        let gs = enumerate_leveled_graphs(2, 1, 0, 1).unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].n_vertices(), 1);
    }

    #[test]
    fn genus_one_line() {
        // (1,1,1): single vertex c_{1,1,1} and the two-vertex diamond.
        let gs = enumerate_leveled_graphs(1, 1, 1, 2).unwrap();
        assert_eq!(gs.len(), 2);
        let n_two: Vec<_> = gs.iter().filter(|g| g.n_vertices() == 2).collect();
        assert_eq!(n_two.len(), 1);
        let d = n_two[0];
        assert_eq!(d.vertices()[0], Corolla::new(2, 1, 0).unwrap());
        assert_eq!(d.vertices()[1], Corolla::new(1, 2, 0).unwrap());
        assert_eq!(d.n_edges(), 2);
        assert_eq!(d.boundary(), Corolla::new(1, 1, 1).unwrap());
    }

    #[test]
    fn two_two_boundary() {
        // (2,2,0): 1 single vertex; 4 with bottom (2,1,0)/top (1,2,0);
        // 1 with bottom (1,2,0)/top (2,1,0).
        let gs = enumerate_leveled_graphs(2, 2, 0, 2).unwrap();
        assert_eq!(gs.len(), 6);
        assert_eq!(gs.iter().filter(|g| g.n_vertices() == 1).count(), 1);
        let b21 = gs
            .iter()
            .filter(|g| g.n_vertices() == 2 && g.vertices()[0] == Corolla::new(2, 1, 0).unwrap())
            .count();
        assert_eq!(b21, 4);
        let b12 = gs
            .iter()
            .filter(|g| g.n_vertices() == 2 && g.vertices()[0] == Corolla::new(1, 2, 0).unwrap())
            .count();
        assert_eq!(b12, 1);
    }

    #[test]
    fn no_duplicates_up_to_weight_four() {
        for k in 1..=3usize {
            for l in 1..=3usize {
                for g in 0..=1usize {
                    let w = k as i64 + l as i64 + 2 * g as i64 - 2;
                    if !(1..=4).contains(&w) {
                        continue;
                    }
                    let gs = enumerate_leveled_graphs(k, l, g, w).unwrap();
                    let mut sorted = gs.clone();
                    sorted.dedup();
                    assert_eq!(sorted.len(), gs.len());
                    for gr in &gs {
                        assert_eq!(gr.boundary(), Corolla::new(k, l, g).unwrap());
                        assert!(gr.n_vertices() as i64 <= w);
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_form_roundtrip_and_relabeling() {
        let gs = enumerate_leveled_graphs(2, 2, 0, 2).unwrap();
        for g in &gs {
            let wired = canonical_wiring(g);
            assert_eq!(&wired.canonical_form().unwrap(), g);
            // relabel edge ids: shift all ids by 100
            let mut relabeled = wired.clone();
            for v in &mut relabeled.vertices {
                for p in v.ins.iter_mut().chain(v.outs.iter_mut()) {
                    if let PortRef::Edge(e) = p {
                        *e += 100;
                    }
                }
            }
            assert_eq!(&relabeled.canonical_form().unwrap(), g);
        }
    }

    #[test]
    fn permuting_external_labels_changes_canonical_form() {
        let gs = enumerate_leveled_graphs(2, 2, 0, 2).unwrap();
        let g = gs.iter().find(|g| g.n_vertices() == 2 && g.in_labels()[0].len() == 1).unwrap();
        let mut swapped_in: Vec<BTreeSet<usize>> = g
            .in_labels()
            .iter()
            .map(|s| s.iter().map(|&t| if t == 1 { 2 } else { 1 }).collect())
            .collect();
        let g2 = LeveledGraph::new(
            g.vertices().to_vec(),
            g.edges().clone(),
            std::mem::take(&mut swapped_in),
            g.out_labels().to_vec(),
        )
        .unwrap();
        assert!(!equals(g, &g2));
    }

    #[test]
    fn levelization_counts() {
        // chain of three vertices: exactly one levelization.
        let chain = LeveledGraph::new(
            vec![
                Corolla::new(1, 1, 1).unwrap(),
                Corolla::new(1, 1, 1).unwrap(),
                Corolla::new(1, 1, 1).unwrap(),
            ],
            [((1, 0), 1), ((2, 1), 1)].into_iter().collect(),
            vec![BTreeSet::new(), BTreeSet::new(), [1].into_iter().collect()],
            vec![[1].into_iter().collect(), BTreeSet::new(), BTreeSet::new()],
        )
        .unwrap();
        assert_eq!(chain.levelizations().len(), 1);

        // two incomparable vertices over a third: 2 levelizations, matching
        // the brute-force linear extension count.
        let vee = LeveledGraph::new(
            vec![
                Corolla::new(2, 1, 0).unwrap(),
                Corolla::new(1, 1, 1).unwrap(),
                Corolla::new(1, 1, 1).unwrap(),
            ],
            [((1, 0), 1), ((2, 0), 1)].into_iter().collect(),
            vec![
                BTreeSet::new(),
                [1].into_iter().collect(),
                [2].into_iter().collect(),
            ],
            vec![[1].into_iter().collect(), BTreeSet::new(), BTreeSet::new()],
        )
        .unwrap();
        let levels = vee.levelizations();
        // brute-force linear extension count over all vertex orders
        let mut brute = 0;
        for perm in crate::perm::Permutation::all(3) {
            let ok = vee
                .edges()
                .keys()
                .all(|&(u, v)| perm.apply(u) > perm.apply(v));
            if ok {
                brute += 1;
            }
        }
        assert_eq!(levels.len(), brute);
        assert_eq!(levels.len(), 2);
        // all levelizations share the canonical unleveled representative
        let c0 = levels[0].unleveled_canonical();
        for lv in &levels {
            assert_eq!(lv.unleveled_canonical(), c0);
        }
    }

    #[test]
    fn single_vertex_levelization() {
        let g = LeveledGraph::single_vertex(Corolla::new(2, 3, 1).unwrap());
        assert_eq!(g.levelizations().len(), 1);
        assert_eq!(g.canonical_form(), g);
    }

    #[test]
    fn two_level_identity_decomposition_of_weight_one() {
        // At weight 1 the only term with the nontrivial vertex on top is the
        // corolla over one identity, and mirrored for the bottom variant.
        let c = Corolla::new(2, 1, 0).unwrap();
        let tops = enumerate_two_level(c, RowConstraint::Free, RowConstraint::SingleNontrivial).unwrap();
        assert_eq!(tops.len(), 1);
        assert_eq!(tops[0].bottom_count, 1);
        assert_eq!(tops[0].graph.vertices(), &[Corolla::IDENTITY, c]);

        let bots = enumerate_two_level(c, RowConstraint::SingleNontrivial, RowConstraint::Free).unwrap();
        assert_eq!(bots.len(), 1);
        assert_eq!(bots[0].bottom_count, 1);
        assert_eq!(bots[0].graph.vertices(), &[c, Corolla::IDENTITY, Corolla::IDENTITY]);
    }
}
