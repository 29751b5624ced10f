//! Simple undirected graphs with stable string labels, generalized Theta
//! construction and the structural queries the counting code relies on.
//!
//! Vertices are dense indices `0..n`; every edge is stored as `(a, b)` with
//! `a < b`, and that orientation is the one cover twists are read in.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;

/// Structural role of a vertex in a generalized Theta graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    EndpointU,
    EndpointW,
    /// `j`-th internal vertex of path `i` (both 1-based).
    PathInternal { path: usize, position: usize },
}

/// A set of edges of a fixed graph, stored as a bitmask over the edge list.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset(u64);

impl EdgeSubset {
    pub const MAX_EDGES: usize = 64;

    pub const fn empty() -> Self {
        EdgeSubset(0)
    }

    pub const fn from_bits(bits: u64) -> Self {
        EdgeSubset(bits)
    }

    /// All of the first `count` edges.
    pub fn full(count: usize) -> Self {
        assert!(count <= Self::MAX_EDGES, "edge subsets hold at most 64 edges");
        if count == 64 {
            EdgeSubset(u64::MAX)
        } else {
            EdgeSubset((1u64 << count) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut s = EdgeSubset::empty();
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, edge: usize) -> bool {
        edge < 64 && self.0 >> edge & 1 == 1
    }

    pub fn insert(&mut self, edge: usize) {
        assert!(edge < Self::MAX_EDGES, "edge index {edge} does not fit an edge subset");
        self.0 |= 1 << edge;
    }

    pub fn remove(&mut self, edge: usize) {
        if edge < 64 {
            self.0 &= !(1 << edge);
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: EdgeSubset) -> EdgeSubset {
        EdgeSubset(self.0 | other.0)
    }

    pub fn difference(self, other: EdgeSubset) -> EdgeSubset {
        EdgeSubset(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

/// Disjoint-set forest over dense vertex indices.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    sets: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n], sets: n }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        self.sets -= 1;
        true
    }

    pub(crate) fn sets(&self) -> usize {
        self.sets
    }
}

/// A finite simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<(VertexId, usize)>>,
    roles: Vec<Option<Role>>,
}

impl Graph {
    /// Builds a graph from vertex labels and index pairs. Edge order is kept.
    pub fn new<S: Into<String>>(labels: Vec<S>, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::InvalidGraph(format!("label {l:?} is empty or contains whitespace")));
            }
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate label `{l}`")));
            }
        }
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut stored = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) references a missing vertex")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop at `{}`", labels[a])));
            }
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            if adjacency[a].iter().any(|&(x, _)| x == b) {
                return Err(Error::InvalidGraph(format!(
                    "parallel edge `{}`-`{}`",
                    labels[a], labels[b]
                )));
            }
            let e = stored.len();
            stored.push((a, b));
            adjacency[a].push((b, e));
            adjacency[b].push((a, e));
        }
        Ok(Graph { labels, index, edges: stored, adjacency, roles: vec![None; n] })
    }

    /// Builds a graph from labelled edges; vertices appear in first-use order.
    pub fn from_labeled_edges<'a>(edges: &[(&'a str, &'a str)]) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut seen: HashMap<&'a str, usize> = HashMap::new();
        let mut pairs = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            let mut id = |l: &'a str| {
                let next = labels.len();
                *seen.entry(l).or_insert_with(|| {
                    labels.push(l.to_string());
                    next
                })
            };
            let (x, y) = (id(a), id(b));
            pairs.push((x, y));
        }
        Graph::new(labels, &pairs)
    }

    fn with_roles(mut self, roles: Vec<Option<Role>>) -> Self {
        debug_assert_eq!(roles.len(), self.labels.len());
        self.roles = roles;
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn all_edges(&self) -> EdgeSubset {
        EdgeSubset::full(self.edges.len().min(EdgeSubset::MAX_EDGES))
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex(&self, label: &str) -> Option<VertexId> {
        self.index.get(label).copied()
    }

    pub fn require_vertex(&self, label: &str) -> Result<VertexId> {
        self.vertex(label).ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn role(&self, v: VertexId) -> Option<Role> {
        self.roles[v]
    }

    /// `(neighbor, edge index)` pairs at `v`.
    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<usize> {
        self.adjacency[a].iter().find(|&&(x, _)| x == b).map(|&(_, e)| e)
    }

    pub fn edge_by_labels(&self, a: &str, b: &str) -> Result<usize> {
        let (x, y) = (self.require_vertex(a)?, self.require_vertex(b)?);
        self.edge_between(x, y).ok_or_else(|| Error::BadEdge(format!("{a}-{b}")))
    }

    pub(crate) fn check_subset(&self, s: EdgeSubset) -> Result<()> {
        if self.edges.len() < 64 && s.bits() >> self.edges.len() != 0 {
            return Err(Error::InvalidGraph("edge subset references missing edges".into()));
        }
        Ok(())
    }

    pub(crate) fn require_subset_capacity(&self) -> Result<()> {
        if self.edges.len() > EdgeSubset::MAX_EDGES {
            return Err(Error::TooLarge(format!(
                "{} edges exceed the {}-edge subset limit",
                self.edges.len(),
                EdgeSubset::MAX_EDGES
            )));
        }
        Ok(())
    }

    /// Same vertex set, keeping only the edges in `keep` (order preserved).
    pub fn spanning_subgraph(&self, keep: EdgeSubset) -> Graph {
        let edges: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(e, _)| keep.contains(*e))
            .map(|(_, &p)| p)
            .collect();
        Graph::new(self.labels.clone(), &edges)
            .expect("subgraph of a simple graph is simple")
            .with_roles(self.roles.clone())
    }

    pub fn without_edge(&self, e: usize) -> Graph {
        let edges: Vec<_> =
            self.edges.iter().enumerate().filter(|&(i, _)| i != e).map(|(_, &p)| p).collect();
        Graph::new(self.labels.clone(), &edges)
            .expect("subgraph of a simple graph is simple")
            .with_roles(self.roles.clone())
    }

    /// Adds the edge `a`-`b` at the end of the edge list.
    pub fn with_edge(&self, a: VertexId, b: VertexId) -> Result<Graph> {
        let mut edges = self.edges.clone();
        edges.push((a, b));
        Ok(Graph::new(self.labels.clone(), &edges)?.with_roles(self.roles.clone()))
    }

    /// Number of connected components.
    pub fn components(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count());
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        uf.sets()
    }

    pub fn is_forest(&self) -> bool {
        self.is_forest_without(None)
    }

    fn is_forest_without(&self, removed: Option<VertexId>) -> bool {
        let mut uf = UnionFind::new(self.vertex_count());
        self.edges
            .iter()
            .filter(|&&(a, b)| Some(a) != removed && Some(b) != removed)
            .all(|&(a, b)| uf.union(a, b))
    }

    /// `|E| - |V| + c`.
    pub fn cyclomatic_number(&self) -> usize {
        self.edge_count() + self.components() - self.vertex_count()
    }

    /// Parses the text format: `n <count>` followed by `e <label> <label>` lines.
    ///
    /// Labels are registered in order of first appearance; when fewer than
    /// `count` labels occur, the remaining isolated vertices take the smallest
    /// unused non-negative integers as labels. Blank lines and `#` comments are
    /// ignored.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut declared: Option<usize> = None;
        let mut labels: Vec<String> = Vec::new();
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: lineno + 1, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["n", count] => {
                    if declared.is_some() {
                        return Err(err("duplicate `n` line".into()));
                    }
                    let count =
                        count.parse().map_err(|_| err(format!("bad vertex count `{count}`")))?;
                    declared = Some(count);
                }
                ["e", a, b] => {
                    if declared.is_none() {
                        return Err(err("`e` line before the `n` line".into()));
                    }
                    let mut id = |l: &str| {
                        if let Some(&i) = ids.get(l) {
                            i
                        } else {
                            labels.push(l.to_string());
                            ids.insert(l.to_string(), labels.len() - 1);
                            labels.len() - 1
                        }
                    };
                    let (x, y) = (id(a), id(b));
                    edges.push((x, y));
                }
                _ => return Err(err(format!("unrecognized line `{line}`"))),
            }
        }
        let n = declared.ok_or(Error::Parse { line: 0, msg: "missing `n` line".into() })?;
        if labels.len() > n {
            return Err(Error::Parse {
                line: 0,
                msg: format!("{} distinct labels but `n {n}` declared", labels.len()),
            });
        }
        let mut next = 0usize;
        while labels.len() < n {
            let candidate = next.to_string();
            next += 1;
            if !ids.contains_key(&candidate) {
                ids.insert(candidate.clone(), labels.len());
                labels.push(candidate);
            }
        }
        Graph::new(labels, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.vertex_count());
        for &(a, b) in &self.edges {
            out.push_str(&format!("e {} {}\n", self.labels[a], self.labels[b]));
        }
        out
    }
}

impl FromStr for Graph {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Graph::parse(s)
    }
}

/// Path lengths of a generalized Theta graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaSpec {
    lengths: Vec<usize>,
}

impl ThetaSpec {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        if lengths.len() < 2 {
            return Err(Error::InvalidSpec("need at least two paths".into()));
        }
        if lengths.contains(&0) {
            return Err(Error::InvalidSpec("path lengths must be positive".into()));
        }
        if lengths.iter().filter(|&&l| l == 1).count() > 1 {
            return Err(Error::InvalidSpec("two paths of length 1 would be parallel edges".into()));
        }
        Ok(ThetaSpec { lengths })
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// 1-based access, matching the `l_1, ..., l_k` naming.
    pub fn length(&self, i: usize) -> usize {
        self.lengths[i - 1]
    }

    pub fn k(&self) -> usize {
        self.lengths.len()
    }

    /// Total number of edges.
    pub fn total_length(&self) -> usize {
        self.lengths.iter().sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.total_length() + 2 - self.k()
    }

    /// `l_2 <= ... <= l_k` and `l_2 >= max(l_1, 2)`.
    pub fn is_normalized(&self) -> bool {
        let rest = &self.lengths[1..];
        rest.windows(2).all(|w| w[0] <= w[1]) && rest[0] >= self.lengths[0].max(2)
    }

    /// `l_1` differs in parity from every other path length.
    pub fn first_parity_is_unique(&self) -> bool {
        let p = self.lengths[0] % 2;
        self.lengths[1..].iter().all(|l| l % 2 != p)
    }

    pub fn without_path(&self, j: usize) -> Vec<usize> {
        let mut rest = self.lengths.clone();
        rest.remove(j - 1);
        rest
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(usize::to_string).collect();
        write!(f, "theta:{}", parts.join(","))
    }
}

impl FromStr for ThetaSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix("theta:")
            .ok_or_else(|| Error::InvalidSpec(format!("`{s}` does not start with `theta:`")))?;
        let lengths = body
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::InvalidSpec(format!("`{s}`: {e}")))?;
        ThetaSpec::new(lengths)
    }
}

/// Builds `Θ(l_1, ..., l_k)` with end vertices `u`, `w` and internal vertices
/// `v_i_j`.
///
/// Vertex order is `u`, the internal vertices path by path, then `w`. Edge
/// order starts with `e_1, ..., e_k` (the edges at `u`, in path order),
/// followed by the remaining edges of each path in path-major order.
pub fn build_generalized_theta(spec: &ThetaSpec) -> Graph {
    let mut labels = vec!["u".to_string()];
    let mut roles = vec![Some(Role::EndpointU)];
    let mut internal: Vec<Vec<usize>> = Vec::with_capacity(spec.k());
    for (i, &l) in spec.lengths().iter().enumerate() {
        let mut ids = Vec::with_capacity(l.saturating_sub(1));
        for j in 1..l {
            ids.push(labels.len());
            labels.push(format!("v_{}_{}", i + 1, j));
            roles.push(Some(Role::PathInternal { path: i + 1, position: j }));
        }
        internal.push(ids);
    }
    let w = labels.len();
    labels.push("w".to_string());
    roles.push(Some(Role::EndpointW));

    let mut edges = Vec::with_capacity(spec.total_length());
    for path in &internal {
        edges.push((0, path.first().copied().unwrap_or(w)));
    }
    for path in &internal {
        for pair in path.windows(2) {
            edges.push((pair[0], pair[1]));
        }
        if let Some(&last) = path.last() {
            edges.push((last, w));
        }
    }
    Graph::new(labels, &edges).expect("valid theta spec gives a simple graph").with_roles(roles)
}

/// Components of the spanning subgraph with edge set `s`.
pub fn component_count(g: &Graph, s: EdgeSubset) -> usize {
    let mut uf = UnionFind::new(g.vertex_count());
    for e in s.iter().filter(|&e| e < g.edge_count()) {
        let (a, b) = g.edge(e);
        uf.union(a, b);
    }
    uf.sets()
}

/// Largest cycle-space dimension `cycles_of_subset` will enumerate.
pub const MAX_CYCLE_RANK: usize = 20;

/// Lengths (ascending) of every simple cycle in the spanning subgraph with
/// edge set `s`.
///
/// Works over the cycle space: every simple cycle is a sum of fundamental
/// cycles, so all `2^β - 1` nonzero combinations are tested for being a
/// single connected 2-regular edge set.
pub fn cycles_of_subset(g: &Graph, s: EdgeSubset) -> Result<Vec<usize>> {
    g.require_subset_capacity()?;
    g.check_subset(s)?;
    let n = g.vertex_count();
    let mut uf = UnionFind::new(n);
    let mut tree_adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut chords = Vec::new();
    for e in s.iter() {
        let (a, b) = g.edge(e);
        if uf.union(a, b) {
            tree_adj[a].push((b, e));
            tree_adj[b].push((a, e));
        } else {
            chords.push(e);
        }
    }
    if chords.len() > MAX_CYCLE_RANK {
        return Err(Error::TooLarge(format!("cycle rank {} exceeds {MAX_CYCLE_RANK}", chords.len())));
    }
    let fundamental: Vec<u64> = chords
        .iter()
        .map(|&e| {
            let (a, b) = g.edge(e);
            tree_path(&tree_adj, a, b).expect("chord endpoints share a tree") | 1 << e
        })
        .collect();
    let mut lengths = Vec::new();
    for mask in 1u64..1 << fundamental.len() {
        let mut set = 0u64;
        for (i, f) in fundamental.iter().enumerate() {
            if mask >> i & 1 == 1 {
                set ^= f;
            }
        }
        if is_simple_cycle(g, EdgeSubset::from_bits(set)) {
            lengths.push(set.count_ones() as usize);
        }
    }
    lengths.sort_unstable();
    Ok(lengths)
}

/// Edge mask of the unique path between `from` and `to` in a forest.
fn tree_path(adj: &[Vec<(usize, usize)>], from: usize, to: usize) -> Option<u64> {
    let mut stack = vec![(from, usize::MAX, 0u64)];
    while let Some((v, parent, mask)) = stack.pop() {
        if v == to {
            return Some(mask);
        }
        for &(x, e) in &adj[v] {
            if x != parent {
                stack.push((x, v, mask | 1 << e));
            }
        }
    }
    None
}

fn is_simple_cycle(g: &Graph, s: EdgeSubset) -> bool {
    if s.is_empty() {
        return false;
    }
    let mut degree = vec![0usize; g.vertex_count()];
    let mut uf = UnionFind::new(g.vertex_count());
    for e in s.iter() {
        let (a, b) = g.edge(e);
        degree[a] += 1;
        degree[b] += 1;
        uf.union(a, b);
    }
    if degree.iter().any(|&d| d != 0 && d != 2) {
        return false;
    }
    let touched = degree.iter().filter(|&&d| d > 0).count();
    // one nontrivial component plus the untouched singletons
    uf.sets() == g.vertex_count() - touched + 1
}

/// Outcome of a single-vertex feedback set search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeedbackVertex {
    Vertex(VertexId),
    NoneNeeded,
    NotSizeOne,
}

/// Finds a vertex whose removal leaves a forest, preferring the smallest label.
pub fn find_feedback_vertex(g: &Graph) -> FeedbackVertex {
    if g.is_forest() {
        return FeedbackVertex::NoneNeeded;
    }
    let mut order: Vec<VertexId> = (0..g.vertex_count()).collect();
    order.sort_by(|&a, &b| g.label(a).cmp(g.label(b)));
    order
        .into_iter()
        .find(|&v| g.is_forest_without(Some(v)))
        .map_or(FeedbackVertex::NotSizeOne, FeedbackVertex::Vertex)
}

/// A star at `center` together with the forest left after deleting it.
#[derive(Clone, Debug)]
pub struct StarDecomposition {
    pub center: VertexId,
    /// Star leaves `α_2, ..., α_k` in label order.
    pub leaves: Vec<VertexId>,
    /// Star edge for each leaf, parallel to `leaves`.
    pub leaf_edges: Vec<usize>,
    pub star: EdgeSubset,
    /// Spanning subgraph on all vertices without the star edges.
    pub remainder: Graph,
}

impl StarDecomposition {
    /// `α_1, ..., α_k`: the center followed by the leaves.
    pub fn star_vertices(&self) -> Vec<VertexId> {
        std::iter::once(self.center).chain(self.leaves.iter().copied()).collect()
    }
}

pub fn star_forest_decomposition(g: &Graph, center: VertexId) -> Result<StarDecomposition> {
    g.require_subset_capacity()?;
    let mut incident: Vec<(VertexId, usize)> = g.neighbors(center).to_vec();
    incident.sort_by(|a, b| g.label(a.0).cmp(g.label(b.0)));
    let star = EdgeSubset::from_indices(incident.iter().map(|&(_, e)| e));
    let remainder = g.spanning_subgraph(g.all_edges().difference(star));
    if !remainder.is_forest() {
        return Err(Error::InvalidCenter(g.label(center).to_string()));
    }
    Ok(StarDecomposition {
        center,
        leaves: incident.iter().map(|&(v, _)| v).collect(),
        leaf_edges: incident.iter().map(|&(_, e)| e).collect(),
        star,
        remainder,
    })
}

/// Label-keyed view of the edge list, handy for reports.
pub fn labeled_edges(g: &Graph) -> Vec<(String, String)> {
    g.edges().iter().map(|&(a, b)| (g.label(a).to_string(), g.label(b).to_string())).collect()
}
