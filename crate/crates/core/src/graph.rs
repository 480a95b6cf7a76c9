//! Multigraphs with loops, ordered vertices, deletion and contraction, and the
//! combinatorial invariants that the algebraic side is checked against.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of edges: the edge algebra has dimension 2^|E|.
pub const DEFAULT_MAX_EDGES: usize = 24;

/// Subsets of edges are `u64` bitmasks, so no configuration may exceed this.
pub const HARD_MAX_EDGES: usize = 63;

/// Position of a vertex in the graph's linear order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

/// An undirected edge; `ends.0 <= ends.1` always, with equality for a loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub ends: (VertexId, VertexId),
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.ends.0 == v || self.ends.1 == v
    }
}

/// Finite undirected multigraph with a linear order on its vertices.
///
/// Parallel edges and loops are allowed. Edge ids are always `0..|E|` in
/// insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Multigraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
}

/// Result of deleting an edge: the smaller graph and, for every old edge id,
/// its id in the new graph.
#[derive(Debug, Clone)]
pub struct Deletion {
    pub graph: Multigraph,
    pub edge_map: Vec<Option<EdgeId>>,
}

/// Result of contracting an edge. `vertex_map[v]` is the image of old vertex
/// `v`; `edge_map[e]` is `None` only for the contracted edge.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: Multigraph,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<Option<EdgeId>>,
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on the given vertex labels, in order, with no edges.
    pub fn with_vertices<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        Multigraph {
            labels: labels.into_iter().map(Into::into).collect(),
            edges: Vec::new(),
        }
    }

    /// Graph on vertices labelled `0..n`.
    pub fn with_vertex_count(n: usize) -> Self {
        Self::with_vertices((0..n).map(|i| i.to_string()))
    }

    /// Graph on `0..n` with the given edges. Panics on out-of-range endpoints,
    /// so this is meant for hard-coded fixtures.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::with_vertex_count(n);
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v))
                .expect("fixture edge endpoints must be in range");
        }
        g
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> VertexId {
        self.labels.push(label.into());
        VertexId(self.labels.len() - 1)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let id = EdgeId(self.edges.len());
        let ends = if u <= v { (u, v) } else { (v, u) };
        self.edges.push(Edge { id, ends });
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels.len()).map(VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Result<&Edge> {
        self.edges.get(e.0).ok_or(Error::UnknownEdge(e.0))
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.0]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label).map(VertexId)
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 < self.labels.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.0.to_string()))
        }
    }

    /// Errors unless `|E| <= cap` (and the cap itself fits a bitmask).
    pub fn check_edge_cap(&self, cap: usize) -> Result<()> {
        let limit = cap.min(HARD_MAX_EDGES);
        if self.edges.len() > limit {
            return Err(Error::CapExceeded {
                what: "edge count",
                actual: self.edges.len(),
                limit,
            });
        }
        Ok(())
    }

    /// Parses the edge-list format: `#` comments, an optional
    /// `vertices: a b c` header fixing the order, then one `u v` pair per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut g = Multigraph::new();
        let mut index: HashMap<String, VertexId> = HashMap::new();
        let mut fixed_order = false;
        let mut seen_edge = false;

        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vertices:") {
                if fixed_order || seen_edge {
                    return Err(Error::parse(
                        lineno,
                        "the vertices header must appear once, before any edge",
                    ));
                }
                for label in rest.split_whitespace() {
                    if index.contains_key(label) {
                        return Err(Error::parse(lineno, format!("duplicate vertex {label:?}")));
                    }
                    let v = g.add_vertex(label);
                    index.insert(label.to_string(), v);
                }
                fixed_order = true;
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != 2 {
                return Err(Error::parse(
                    lineno,
                    format!("expected two vertex labels, found {}", tokens.len()),
                ));
            }
            let mut ends = [VertexId(0); 2];
            for (slot, label) in ends.iter_mut().zip(&tokens) {
                *slot = match index.get(*label) {
                    Some(&v) => v,
                    None if fixed_order => return Err(Error::UnknownVertex(label.to_string())),
                    None => {
                        let v = g.add_vertex(*label);
                        index.insert(label.to_string(), v);
                        v
                    }
                };
            }
            g.add_edge(ends[0], ends[1])?;
            seen_edge = true;
        }
        Ok(g)
    }

    /// Serializes back into the edge-list format with an explicit header.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::from("vertices:");
        for l in &self.labels {
            out.push(' ');
            out.push_str(l);
        }
        out.push('\n');
        for e in &self.edges {
            out.push_str(self.label(e.ends.0));
            out.push(' ');
            out.push_str(self.label(e.ends.1));
            out.push('\n');
        }
        out
    }

    /// Removes edge `e`; later edges shift down by one id.
    pub fn delete_edge(&self, e: EdgeId) -> Result<Deletion> {
        self.edge(e)?;
        let mut graph = Multigraph::with_vertices(self.labels.iter().cloned());
        let mut edge_map = Vec::with_capacity(self.edges.len());
        for edge in &self.edges {
            if edge.id == e {
                edge_map.push(None);
            } else {
                edge_map.push(Some(graph.add_edge(edge.ends.0, edge.ends.1)?));
            }
        }
        Ok(Deletion { graph, edge_map })
    }

    /// Identifies the endpoints of a non-loop edge `e` into the lower of the
    /// two positions and drops `e`. Other edges between the two endpoints
    /// become loops.
    pub fn contract_edge(&self, e: EdgeId) -> Result<Contraction> {
        let edge = *self.edge(e)?;
        if edge.is_loop() {
            return Err(Error::LoopContraction(e.0));
        }
        let (keep, gone) = edge.ends;
        let vertex_map: Vec<VertexId> = (0..self.vertex_count())
            .map(|i| match i.cmp(&gone.0) {
                Ordering::Less => VertexId(i),
                Ordering::Equal => keep,
                Ordering::Greater => VertexId(i - 1),
            })
            .collect();
        let labels = self
            .labels
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != gone.0)
            .map(|(_, l)| l.clone());
        let mut graph = Multigraph::with_vertices(labels);
        let mut edge_map = Vec::with_capacity(self.edges.len());
        for other in &self.edges {
            if other.id == e {
                edge_map.push(None);
                continue;
            }
            let u = vertex_map[other.ends.0 .0];
            let v = vertex_map[other.ends.1 .0];
            edge_map.push(Some(graph.add_edge(u, v)?));
        }
        Ok(Contraction {
            graph,
            vertex_map,
            edge_map,
        })
    }

    /// Number of non-loop edges at `v`. Loops do not enter the vertex flow, so
    /// they do not count towards the nilpotency order either.
    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.degree_unchecked(v))
    }

    fn degree_unchecked(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .filter(|e| !e.is_loop() && e.touches(v))
            .count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            deg[e.ends.0 .0] += 1;
            deg[e.ends.1 .0] += 1;
        }
        deg
    }

    /// `md_G`: the largest vertex degree, 0 for edgeless or loops-only graphs.
    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// `D_I`: edges with exactly one endpoint in `subset`.
    pub fn cut_size(&self, subset: &[VertexId]) -> Result<usize> {
        let mut inside = vec![false; self.vertex_count()];
        for &v in subset {
            self.check_vertex(v)?;
            inside[v.0] = true;
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| inside[e.ends.0 .0] != inside[e.ends.1 .0])
            .count())
    }

    /// Same as [`cut_size`](Self::cut_size) with the subset given as a
    /// bitmask over vertex positions.
    pub fn cut_size_mask(&self, subset: u64) -> usize {
        let inside = |v: VertexId| subset >> v.0 & 1 == 1;
        self.edges
            .iter()
            .filter(|e| inside(e.ends.0) != inside(e.ends.1))
            .count()
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    pub fn without_loops(&self) -> Multigraph {
        let mut g = Multigraph::with_vertices(self.labels.iter().cloned());
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            g.add_edge(e.ends.0, e.ends.1).expect("same vertex set");
        }
        g
    }

    /// Reorders the vertices: old vertex `i` moves to position `perm[i]`.
    /// Edge ids are preserved.
    pub fn permuted(&self, perm: &[usize]) -> Result<Multigraph> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        if perm.len() != n
            || perm
                .iter()
                .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Precondition(format!(
                "{perm:?} is not a permutation of 0..{n}"
            )));
        }
        let mut labels = vec![String::new(); n];
        for (i, &p) in perm.iter().enumerate() {
            labels[p] = self.labels[i].clone();
        }
        let mut g = Multigraph::with_vertices(labels);
        for e in &self.edges {
            g.add_edge(VertexId(perm[e.ends.0 .0]), VertexId(perm[e.ends.1 .0]))?;
        }
        Ok(g)
    }

    /// Same graph with the edge list reordered: new edge `i` is old edge `order[i]`.
    pub fn with_edge_order(&self, order: &[usize]) -> Result<Multigraph> {
        let m = self.edge_count();
        let mut seen = vec![false; m];
        if order.len() != m
            || order
                .iter()
                .any(|&p| p >= m || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::Precondition(format!(
                "{order:?} is not a permutation of 0..{m}"
            )));
        }
        let mut g = Multigraph::with_vertices(self.labels.iter().cloned());
        for &i in order {
            let e = self.edges[i];
            g.add_edge(e.ends.0, e.ends.1)?;
        }
        Ok(g)
    }

    /// Vertex sets of the connected components, each sorted, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut uf = UnionFind::new(self.vertex_count());
        for e in &self.edges {
            uf.union(e.ends.0 .0, e.ends.1 .0);
        }
        let mut by_root: HashMap<usize, Vec<VertexId>> = HashMap::new();
        let mut roots = Vec::new();
        for v in 0..self.vertex_count() {
            let r = uf.find(v);
            by_root
                .entry(r)
                .or_insert_with(|| {
                    roots.push(r);
                    Vec::new()
                })
                .push(VertexId(v));
        }
        roots
            .into_iter()
            .map(|r| by_root.remove(&r).unwrap())
            .collect()
    }

    /// True when `self` has the same vertex labels in the same order and its
    /// edges form a sub-multiset of `other`'s.
    pub fn is_edge_subgraph_of(&self, other: &Multigraph) -> bool {
        if self.labels != other.labels {
            return false;
        }
        let mut available: HashMap<(VertexId, VertexId), usize> = HashMap::new();
        for e in &other.edges {
            *available.entry(e.ends).or_default() += 1;
        }
        self.edges.iter().all(|e| match available.get_mut(&e.ends) {
            Some(c) if *c > 0 => {
                *c -= 1;
                true
            }
            _ => false,
        })
    }

    /// Number of acyclic edge subsets. A loop is a cycle on its own.
    pub fn spanning_forest_count(&self, max_edges: usize) -> Result<u64> {
        self.check_edge_cap(max_edges)?;
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|e| !e.is_loop())
            .map(|e| (e.ends.0 .0, e.ends.1 .0))
            .collect();
        let mut uf = RollbackUnionFind::new(self.vertex_count());
        Ok(count_forests(&edges, 0, &mut uf))
    }

    /// Graded Hilbert sequence of `C_G` via deletion-contraction.
    pub fn graded_hilbert(&self, max_edges: usize) -> Result<HilbertSequence> {
        self.check_edge_cap(max_edges)?;
        let mut memo = HashMap::new();
        let compact = CompactGraph::from_multigraph(self);
        Ok(HilbertSequence::new(compact.hilbert(&mut memo)))
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "G(|V|={}, |E|={}:",
            self.vertex_count(),
            self.edge_count()
        )?;
        for e in &self.edges {
            write!(f, " {}-{}", self.label(e.ends.0), self.label(e.ends.1))?;
        }
        write!(f, ")")
    }
}

/// Dimensions of the successive quotients of a filtration, trailing zeros
/// removed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HilbertSequence(Vec<u64>);

impl HilbertSequence {
    pub fn new(mut entries: Vec<u64>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        HilbertSequence(entries)
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Entry `k`, zero past the end.
    pub fn get(&self, k: usize) -> u64 {
        self.0.get(k).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Running sums: the dimensions of the filtration pieces themselves.
    pub fn cumulative(&self) -> Vec<u64> {
        self.0
            .iter()
            .scan(0, |acc, &h| {
                *acc += h;
                Some(*acc)
            })
            .collect()
    }

    /// Lexicographic comparison after right-padding the shorter sequence
    /// with zeros.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        let n = self.len().max(other.len());
        (0..n)
            .map(|k| self.get(k).cmp(&other.get(k)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    /// Indices `k` where `h_k^2 < h_{k-1} h_{k+1}`.
    pub fn log_concavity_violations(&self) -> Vec<usize> {
        (1..self.len().saturating_sub(1))
            .filter(|&k| {
                let h = self.0[k] as u128;
                h * h < self.0[k - 1] as u128 * self.0[k + 1] as u128
            })
            .collect()
    }

    pub fn is_log_concave(&self) -> bool {
        self.log_concavity_violations().is_empty()
    }
}

impl PartialOrd for HilbertSequence {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HilbertSequence {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

impl fmt::Display for HilbertSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for h in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{h}")?;
            first = false;
        }
        Ok(())
    }
}

impl From<Vec<u64>> for HilbertSequence {
    fn from(v: Vec<u64>) -> Self {
        HilbertSequence::new(v)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Union by size without path compression, so merges can be undone.
struct RollbackUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl RollbackUnionFind {
    fn new(n: usize) -> Self {
        RollbackUnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    /// Returns the absorbed root, or `None` if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> Option<usize> {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return None;
        }
        if self.size[ra] > self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[ra] = rb;
        self.size[rb] += self.size[ra];
        Some(ra)
    }

    fn undo(&mut self, absorbed: usize) {
        let root = self.parent[absorbed];
        self.size[root] -= self.size[absorbed];
        self.parent[absorbed] = absorbed;
    }
}

/// Include/exclude enumeration over the edge list, pruning subsets as soon as
/// they close a cycle.
fn count_forests(edges: &[(usize, usize)], i: usize, uf: &mut RollbackUnionFind) -> u64 {
    if i == edges.len() {
        return 1;
    }
    let mut total = count_forests(edges, i + 1, uf);
    if let Some(absorbed) = uf.union(edges[i].0, edges[i].1) {
        total += count_forests(edges, i + 1, uf);
        uf.undo(absorbed);
    }
    total
}

/// Memo for the recursion, keyed by vertex count and sorted edge list.
type HilbertMemo = HashMap<(usize, Vec<(usize, usize)>), Vec<u64>>;

/// Loopless graph used by the deletion-contraction recursion.
#[derive(Clone, Debug)]
struct CompactGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl CompactGraph {
    fn from_multigraph(g: &Multigraph) -> Self {
        CompactGraph {
            n: g.vertex_count(),
            edges: g
                .edges()
                .iter()
                .filter(|e| !e.is_loop())
                .map(|e| (e.ends.0 .0, e.ends.1 .0))
                .collect(),
        }
    }

    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Relabels vertices by decreasing degree (ties by old position), drops
    /// isolated vertices and sorts the edge list. Two graphs with equal keys
    /// are isomorphic, so a memo hit is always correct.
    fn canonical_key(&self) -> (usize, Vec<(usize, usize)>) {
        let deg = self.degrees();
        let mut order: Vec<usize> = (0..self.n).filter(|&v| deg[v] > 0).collect();
        order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
        let mut rank = vec![usize::MAX; self.n];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (rank[u], rank[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        (order.len(), edges)
    }

    fn without_edge(&self, i: usize) -> CompactGraph {
        let mut edges = self.edges.clone();
        edges.remove(i);
        CompactGraph { n: self.n, edges }
    }

    /// Contracts edge `i`, dropping every edge that becomes a loop.
    fn contracted(&self, i: usize) -> CompactGraph {
        let (keep, gone) = self.edges[i];
        let relabel = |x: usize| {
            let x = if x == gone { keep } else { x };
            if x > gone {
                x - 1
            } else {
                x
            }
        };
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (relabel(u), relabel(v)))
            .filter(|&(u, v)| u != v)
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        CompactGraph {
            n: self.n - 1,
            edges,
        }
    }

    fn components(&self) -> Vec<CompactGraph> {
        let mut uf = UnionFind::new(self.n);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        let mut groups: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        let mut roots = Vec::new();
        for &(u, v) in &self.edges {
            let r = uf.find(u);
            groups
                .entry(r)
                .or_insert_with(|| {
                    roots.push(r);
                    Vec::new()
                })
                .push((u, v));
        }
        roots
            .into_iter()
            .map(|r| CompactGraph {
                n: self.n,
                edges: groups.remove(&r).unwrap(),
            })
            .collect()
    }

    fn hilbert(&self, memo: &mut HilbertMemo) -> Vec<u64> {
        if self.edges.is_empty() {
            return vec![1];
        }
        let parts = self.components();
        if parts.len() > 1 {
            return parts
                .iter()
                .map(|c| c.hilbert(memo))
                .fold(vec![1], |acc, p| poly_mul(&acc, &p));
        }
        let key = self.canonical_key();
        if let Some(h) = memo.get(&key) {
            return h.clone();
        }
        let deg = self.degrees();
        // A pendant edge is a bridge: deleting it gives the same matroid as
        // contracting it, so H_G = (1 + t) H_{G/e}.
        let result = if let Some(i) = self
            .edges
            .iter()
            .position(|&(u, v)| deg[u] == 1 || deg[v] == 1)
        {
            poly_mul(&self.contracted(i).hilbert(memo), &[1, 1])
        } else {
            let i = 0;
            let contracted = self.contracted(i).hilbert(memo);
            let deleted = self.without_edge(i).hilbert(memo);
            let mut h = vec![0; contracted.len().max(deleted.len() + 1)];
            for (k, c) in contracted.iter().enumerate() {
                h[k] += c;
            }
            for (k, d) in deleted.iter().enumerate() {
                h[k + 1] += d;
            }
            h
        };
        memo.insert(key, result.clone());
        result
    }
}

fn poly_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
