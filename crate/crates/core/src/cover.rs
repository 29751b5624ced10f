//! Full m-fold covers in tree-canonical form and everything that counts or
//! searches over them.
//!
//! A cover stores a forest of identity edges (`tree`) and a twist for every
//! other edge. An edge `(a, b)` with `a < b` and twist `σ` joins `(a, j)` to
//! `(b, σ(j))`, so a cover-coloring may not have `f(b) = σ(f(a))`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{
    build_generalized_theta, find_feedback_vertex, EdgeSubset, FeedbackVertex, Graph,
    StarDecomposition, ThetaSpec, UnionFind, VertexId,
};
use crate::perm::{all_perms, class_representatives, factorial, Perm};
use crate::transfer::TransferPlan;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullCover {
    fold: usize,
    tree: EdgeSubset,
    /// One entry per edge of the base graph; `None` exactly on tree edges.
    twists: Vec<Option<Perm>>,
}

impl FullCover {
    pub fn new(g: &Graph, fold: usize, tree: EdgeSubset, twists: Vec<(usize, Perm)>) -> Result<Self> {
        if fold == 0 {
            return Err(Error::InvalidCover("fold must be at least 1".into()));
        }
        g.check_subset(tree)?;
        if !g.spanning_subgraph(tree).is_forest() {
            return Err(Error::InvalidCover("identity edges must form a forest".into()));
        }
        let mut slots: Vec<Option<Perm>> = vec![None; g.edge_count()];
        for (e, p) in twists {
            if e >= g.edge_count() {
                return Err(Error::BadIndex { index: e, max: g.edge_count() });
            }
            if tree.contains(e) {
                return Err(Error::InvalidCover(format!("tree edge {e} cannot carry a twist")));
            }
            if p.len() != fold {
                return Err(Error::InvalidCover(format!("twist on edge {e} has {} points, fold is {fold}", p.len())));
            }
            slots[e] = Some(p);
        }
        if let Some(e) = (0..g.edge_count()).find(|&e| !tree.contains(e) && slots[e].is_none()) {
            return Err(Error::InvalidCover(format!("edge {e} is outside the tree but has no twist")));
        }
        Ok(FullCover { fold, tree, twists: slots })
    }

    pub fn fold(&self) -> usize {
        self.fold
    }

    pub fn tree(&self) -> EdgeSubset {
        self.tree
    }

    pub fn twist(&self, e: usize) -> Option<&Perm> {
        self.twists.get(e).and_then(Option::as_ref)
    }

    pub fn cotree_edges(&self) -> Vec<usize> {
        (0..self.twists.len()).filter(|&e| self.twists[e].is_some()).collect()
    }

    pub fn is_canonical(&self) -> bool {
        self.twists.iter().flatten().all(Perm::is_identity)
    }

    pub fn with_twist(&self, e: usize, p: Perm) -> Result<Self> {
        if self.twist(e).is_none() {
            return Err(Error::InvalidCover(format!("edge {e} is not a cotree edge")));
        }
        if p.len() != self.fold {
            return Err(Error::InvalidCover(format!("twist has {} points, fold is {}", p.len(), self.fold)));
        }
        let mut out = self.clone();
        out.twists[e] = Some(p);
        Ok(out)
    }

    /// Relabels every fiber by `tau`, i.e. conjugates each twist.
    pub fn conjugated(&self, tau: &Perm) -> Self {
        let twists = self.twists.iter().map(|t| t.as_ref().map(|p| p.conjugate(tau))).collect();
        FullCover { fold: self.fold, tree: self.tree, twists }
    }

    fn check_against(&self, g: &Graph) -> Result<()> {
        if self.twists.len() != g.edge_count() {
            return Err(Error::InvalidCover(format!(
                "cover has {} edges, graph has {}",
                self.twists.len(),
                g.edge_count()
            )));
        }
        Ok(())
    }

    fn images(&self) -> Vec<Vec<u32>> {
        let id = Perm::identity(self.fold);
        self.twists.iter().map(|t| t.as_ref().unwrap_or(&id).images().to_vec()).collect()
    }

    pub fn to_json(&self, g: &Graph) -> CoverJson {
        let pair = |e: usize| {
            let (a, b) = g.edge(e);
            [g.label(a).to_string(), g.label(b).to_string()]
        };
        CoverJson {
            fold: self.fold,
            tree: self.tree.iter().map(pair).collect(),
            twists: self
                .cotree_edges()
                .into_iter()
                .map(|e| TwistJson { edge: pair(e), perm: self.twists[e].as_ref().expect("cotree").one_based() })
                .collect(),
        }
    }

    pub fn from_json(g: &Graph, json: &CoverJson) -> Result<Self> {
        let edge = |p: &[String; 2]| g.edge_by_labels(&p[0], &p[1]);
        let tree = json.tree.iter().map(edge).collect::<Result<Vec<_>>>()?;
        let twists = json
            .twists
            .iter()
            .map(|t| {
                let e = edge(&t.edge)?;
                let (a, _) = g.edge(e);
                let p = Perm::from_one_based(&t.perm)?;
                // an edge written high-to-low carries the inverse twist
                Ok((e, if g.label(a) == t.edge[0] { p } else { p.inverse() }))
            })
            .collect::<Result<Vec<_>>>()?;
        FullCover::new(g, json.fold, EdgeSubset::from_indices(tree), twists)
    }
}

/// Serialized form: edges by endpoint labels (lower vertex first), twists as
/// 1-based image arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    pub fold: usize,
    pub tree: Vec<[String; 2]>,
    pub twists: Vec<TwistJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistJson {
    pub edge: [String; 2],
    pub perm: Vec<usize>,
}

/// Kruskal in edge order, postponing edges at the feedback vertex (vertex 0
/// when there is none). For generalized Theta graphs the cotree is exactly
/// `u v_2_1, ..., u v_k_1`.
pub fn default_spanning_tree(g: &Graph) -> EdgeSubset {
    let hub = match find_feedback_vertex(g) {
        FeedbackVertex::Vertex(v) => Some(v),
        _ => (g.vertex_count() > 0).then_some(0),
    };
    let touches_hub = |e: usize| {
        let (a, b) = g.edge(e);
        Some(a) == hub || Some(b) == hub
    };
    let order = (0..g.edge_count()).filter(|&e| !touches_hub(e)).chain((0..g.edge_count()).filter(|&e| touches_hub(e)));
    let mut uf = UnionFind::new(g.vertex_count());
    let mut tree = EdgeSubset::empty();
    for e in order {
        let (a, b) = g.edge(e);
        if uf.union(a, b) {
            tree.insert(e);
        }
    }
    tree
}

pub fn identity_cover(g: &Graph, m: usize) -> Result<FullCover> {
    let tree = default_spanning_tree(g);
    let twists = (0..g.edge_count()).filter(|&e| !tree.contains(e)).map(|e| (e, Perm::identity(m))).collect();
    FullCover::new(g, m, tree, twists)
}

/// A cover of the default tree shape with independent uniform twists.
pub fn random_cover<R: Rng + ?Sized>(g: &Graph, m: usize, rng: &mut R) -> Result<FullCover> {
    let tree = default_spanning_tree(g);
    let twists = (0..g.edge_count())
        .filter(|&e| !tree.contains(e))
        .map(|e| {
            let mut images: Vec<u32> = (0..m as u32).collect();
            images.shuffle(rng);
            (e, Perm::from_images(images).expect("shuffled identity"))
        })
        .collect();
    FullCover::new(g, m, tree, twists)
}

/// Number of cover-colorings (independent transversals) of `c`.
pub fn count_colorings(g: &Graph, c: &FullCover) -> Result<BigUint> {
    c.check_against(g)?;
    Ok(CoverCounter::new(g, c.fold).count(c))
}

/// Reusable counter for many covers of one graph at one fold.
pub struct CoverCounter {
    plan: TransferPlan,
    fold: usize,
    free: Vec<Option<usize>>,
}

impl CoverCounter {
    pub fn new(g: &Graph, fold: usize) -> Self {
        CoverCounter { plan: TransferPlan::new(g), fold, free: vec![None; g.vertex_count()] }
    }

    pub fn count(&self, c: &FullCover) -> BigUint {
        assert_eq!(c.fold, self.fold, "cover fold differs from counter fold");
        let images = c.images();
        let refs: Vec<&[u32]> = images.iter().map(Vec::as_slice).collect();
        self.count_images(&refs)
    }

    fn count_images(&self, twists: &[&[u32]]) -> BigUint {
        self.plan.count_exact(self.fold, twists, &self.free)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    /// Twists on every edge.
    None,
    /// Identity on a spanning tree, twists on cotree edges.
    #[default]
    TreeCanonical,
    /// As above, with the first cotree twist limited to one per cycle type.
    TreeCanonicalConjugacy,
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::None => "none",
            Symmetry::TreeCanonical => "tree-canonical",
            Symmetry::TreeCanonicalConjugacy => "tree-canonical+conjugacy",
        })
    }
}

impl FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Symmetry::None),
            "tree-canonical" => Ok(Symmetry::TreeCanonical),
            "tree-canonical+conjugacy" => Ok(Symmetry::TreeCanonicalConjugacy),
            _ => Err(Error::InvalidSpec(format!("unknown symmetry level '{s}'"))),
        }
    }
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub symmetry: Symmetry,
    pub budget: u64,
    pub exec: Exec,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { symmetry: Symmetry::default(), budget: DEFAULT_BUDGET, exec: Exec::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverMinimum {
    pub minimum: BigUint,
    pub witness: FullCover,
    /// Candidates examined after symmetry reduction.
    pub candidates: u64,
}

/// Number of candidates `min_over_covers` would examine.
pub fn search_space_size(g: &Graph, m: usize, symmetry: Symmetry) -> Option<u64> {
    let free = match symmetry {
        Symmetry::None => g.edge_count(),
        _ => g.edge_count() - default_spanning_tree(g).len(),
    };
    if free == 0 {
        return Some(1);
    }
    let per_edge = factorial(m)?;
    let first = match symmetry {
        Symmetry::TreeCanonicalConjugacy => class_representatives(m).ok()?.len() as u64,
        _ => per_edge,
    };
    (1..free).try_fold(first, |acc, _| acc.checked_mul(per_edge))
}

/// Exhaustive minimum of the cover-coloring count over all full `m`-fold
/// covers. Candidates are ordered lexicographically by twist rank, first
/// free edge most significant; ties keep the earliest candidate.
pub fn min_over_covers(g: &Graph, m: usize, opts: &SearchOptions) -> Result<CoverMinimum> {
    if m == 0 {
        return Err(Error::OutOfRange("fold must be at least 1".into()));
    }
    let tree = match opts.symmetry {
        Symmetry::None => EdgeSubset::empty(),
        _ => default_spanning_tree(g),
    };
    let free: Vec<usize> = (0..g.edge_count()).filter(|&e| !tree.contains(e)).collect();
    let counter = CoverCounter::new(g, m);
    let build = |choice: &[&Perm]| {
        let twists = free.iter().zip(choice).map(|(&e, p)| (e, (*p).clone())).collect();
        FullCover::new(g, m, tree, twists).expect("search builds valid covers")
    };
    if free.is_empty() {
        let witness = build(&[]);
        return Ok(CoverMinimum { minimum: counter.count(&witness), witness, candidates: 1 });
    }
    let total = search_space_size(g, m, opts.symmetry)
        .filter(|&t| t <= opts.budget)
        .ok_or_else(|| {
            Error::TooLarge(format!(
                "search space for m = {m} with {} free edges exceeds the budget of {}",
                free.len(),
                opts.budget
            ))
        })?;
    let perms = all_perms(m)?;
    let firsts = match opts.symmetry {
        Symmetry::TreeCanonicalConjugacy => class_representatives(m)?,
        _ => perms.clone(),
    };
    let decode = |mut idx: u64| {
        let mut choice: Vec<&Perm> = vec![&perms[0]; free.len()];
        for slot in (1..free.len()).rev() {
            let base = perms.len() as u64;
            choice[slot] = &perms[(idx % base) as usize];
            idx /= base;
        }
        choice[0] = &firsts[idx as usize];
        choice
    };
    let identity = Perm::identity(m);
    let (minimum, best) = opts.exec.map_reduce(
        0..total,
        |idx| {
            let choice = decode(idx);
            let mut images: Vec<&[u32]> = vec![identity.images(); g.edge_count()];
            for (&e, p) in free.iter().zip(&choice) {
                images[e] = p.images();
            }
            (Some(counter.count_images(&images)), idx)
        },
        || (None, u64::MAX),
        |a, b| match (&a.0, &b.0) {
            (None, _) => b,
            (_, None) => a,
            (Some(x), Some(y)) => {
                if (x, a.1) <= (y, b.1) {
                    a
                } else {
                    b
                }
            }
        },
    );
    Ok(CoverMinimum {
        minimum: minimum.expect("at least one candidate"),
        witness: build(&decode(best)),
        candidates: total,
    })
}

/// Partition of the star vertices `α_1..α_k`, with `α_1` in part 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSpec {
    parts: Vec<Vec<VertexId>>,
}

impl PartitionSpec {
    /// From a restricted-growth string over `star` (`rgs[i]` = part of `star[i]`).
    pub fn from_rgs(star: &[VertexId], rgs: &[usize]) -> Result<Self> {
        if rgs.len() != star.len() || star.is_empty() {
            return Err(Error::InvalidPartition("label string length must match the star".into()));
        }
        let mut parts: Vec<Vec<VertexId>> = Vec::new();
        for (&v, &r) in star.iter().zip(rgs) {
            if r > parts.len() {
                return Err(Error::InvalidPartition(format!("{rgs:?} is not a restricted-growth string")));
            }
            if r == parts.len() {
                parts.push(Vec::new());
            }
            parts[r].push(v);
        }
        Ok(PartitionSpec { parts })
    }

    /// From explicit parts; `star[0]` must lie in the first part.
    pub fn from_parts(star: &[VertexId], parts: Vec<Vec<VertexId>>) -> Result<Self> {
        let mut seen: Vec<VertexId> = parts.iter().flatten().copied().collect();
        seen.sort_unstable();
        let mut want = star.to_vec();
        want.sort_unstable();
        if seen != want || parts.iter().any(Vec::is_empty) {
            return Err(Error::InvalidPartition("parts must be nonempty and cover the star exactly".into()));
        }
        if !parts[0].contains(&star[0]) {
            return Err(Error::InvalidPartition("the star center must be in part 0".into()));
        }
        Ok(PartitionSpec { parts })
    }

    /// Every partition of `star`, in restricted-growth string order.
    pub fn enumerate(star: &[VertexId]) -> Vec<PartitionSpec> {
        let k = star.len();
        let mut out = Vec::new();
        if k == 0 {
            return out;
        }
        let mut rgs = vec![0usize; k];
        loop {
            out.push(Self::from_rgs(star, &rgs).expect("valid rgs"));
            // next restricted-growth string
            let mut i = k - 1;
            loop {
                if i == 0 {
                    return out;
                }
                let cap = rgs[..i].iter().max().copied().unwrap_or(0) + 1;
                if rgs[i] < cap {
                    rgs[i] += 1;
                    rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
                    break;
                }
                i -= 1;
            }
        }
    }

    pub fn parts(&self) -> &[Vec<VertexId>] {
        &self.parts
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    pub fn part_of(&self, v: VertexId) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(&v))
    }

    pub fn describe(&self, g: &Graph) -> String {
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|p| format!("{{{}}}", p.iter().map(|&v| g.label(v)).collect::<Vec<_>>().join(",")))
            .collect();
        parts.join("|")
    }
}

/// Star edges to leaves in part `r` get the shift `j -> j + r (mod m)` read
/// from the center; forest edges stay identity.
pub fn shift_cover(g: &Graph, d: &StarDecomposition, p: &PartitionSpec, m: usize) -> Result<FullCover> {
    if m < p.part_count() {
        return Err(Error::FoldTooSmall { fold: m, parts: p.part_count() });
    }
    let mut twists = Vec::with_capacity(d.leaves.len());
    for (&leaf, &e) in d.leaves.iter().zip(&d.leaf_edges) {
        let r = p
            .part_of(leaf)
            .ok_or_else(|| Error::InvalidPartition(format!("leaf {} is not in the partition", g.label(leaf))))?;
        let shift = Perm::shift(m, r);
        twists.push((e, if d.center < leaf { shift } else { shift.inverse() }));
    }
    FullCover::new(g, m, g.all_edges().difference(d.star), twists)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverDiagnostics {
    /// `x_2..x_k`: points moved by the twist on `u v_i_1`.
    pub x: Vec<usize>,
    /// First `i >= 2` with `x_i > 0`, or 0.
    pub mu: usize,
    /// Total of `x_j` over the paths whose length equals `l_mu`.
    pub s: u64,
    /// Number of paths of length `l_mu`.
    pub t: usize,
}

/// Requires the parity assumption on `spec` and a cover whose cotree is
/// exactly `u v_2_1, ..., u v_k_1`.
pub fn diagnostics(spec: &ThetaSpec, c: &FullCover) -> Result<CoverDiagnostics> {
    if !spec.first_parity_is_unique() {
        return Err(Error::AssumptionViolated(format!("{spec}: l_1 shares its parity with another path")));
    }
    let g = build_generalized_theta(spec);
    c.check_against(&g)?;
    let k = spec.k();
    if c.cotree_edges() != (1..k).collect::<Vec<_>>() {
        return Err(Error::InvalidCover("cotree must be the edges u v_i_1 for i >= 2".into()));
    }
    let x: Vec<usize> = (1..k).map(|e| c.twist(e).expect("cotree").moved_points()).collect();
    let Some(first) = x.iter().position(|&v| v > 0) else {
        return Ok(CoverDiagnostics { x, mu: 0, s: 0, t: 0 });
    };
    let mu = first + 2;
    let l_mu = spec.length(mu);
    let t = spec.lengths().iter().filter(|&&l| l == l_mu).count();
    let s = (2..=k).filter(|&j| spec.length(j) == l_mu).map(|j| x[j - 2] as u64).sum();
    Ok(CoverDiagnostics { x, mu, s, t })
}

/// Transversals `f` with `f(b) = σ(f(a))` on every edge of `s`: the
/// intersection of the corresponding bad-edge events.
pub fn s_intersection_count(g: &Graph, c: &FullCover, s: EdgeSubset) -> Result<BigUint> {
    c.check_against(g)?;
    g.check_subset(s)?;
    Ok(IntersectionCounter::new(g, c).count(s))
}

struct IntersectionCounter<'a> {
    g: &'a Graph,
    m: usize,
    forward: Vec<Vec<u32>>,
    backward: Vec<Vec<u32>>,
}

impl<'a> IntersectionCounter<'a> {
    fn new(g: &'a Graph, c: &FullCover) -> Self {
        let forward = c.images();
        let backward = forward.iter().map(|p| Perm::from_images(p.clone()).expect("bijection").inverse().images().to_vec()).collect();
        IntersectionCounter { g, m: c.fold, forward, backward }
    }

    fn count(&self, s: EdgeSubset) -> BigUint {
        let n = self.g.vertex_count();
        let mut component = vec![usize::MAX; n];
        let mut result = BigUint::from(1u32);
        let mut value = vec![0u32; n];
        for root in 0..n {
            if component[root] != usize::MAX {
                continue;
            }
            // collect the component of root in the subgraph on s
            let mut members = vec![root];
            component[root] = root;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                for &(x, e) in self.g.neighbors(v) {
                    if s.contains(e) && component[x] == usize::MAX {
                        component[x] = root;
                        members.push(x);
                    }
                }
                i += 1;
            }
            if members.len() == 1 {
                result *= self.m;
                continue;
            }
            let mut good = 0u64;
            for start in 0..self.m as u32 {
                if self.propagate(s, &members, start, &mut value) {
                    good += 1;
                }
            }
            if good == 0 {
                return BigUint::zero();
            }
            result *= good;
        }
        result
    }

    /// Forces every value in the component from `f(root) = start` and
    /// reports whether all constraints on `s` hold.
    fn propagate(&self, s: EdgeSubset, members: &[VertexId], start: u32, value: &mut [u32]) -> bool {
        const UNSET: u32 = u32::MAX;
        for &v in members {
            value[v] = UNSET;
        }
        value[members[0]] = start;
        let mut stack = vec![members[0]];
        while let Some(v) = stack.pop() {
            for &(x, e) in self.g.neighbors(v) {
                if !s.contains(e) {
                    continue;
                }
                let forced = if v < x { self.forward[e][value[v] as usize] } else { self.backward[e][value[v] as usize] };
                if value[x] == UNSET {
                    value[x] = forced;
                    stack.push(x);
                } else if value[x] != forced {
                    return false;
                }
            }
        }
        true
    }
}

/// Cover-coloring count by inclusion–exclusion over all edge subsets.
pub fn ie_dp_count(g: &Graph, c: &FullCover, exec: Exec) -> Result<BigUint> {
    c.check_against(g)?;
    if g.edge_count() > crate::chromatic::MAX_EXPANSION_EDGES {
        return Err(Error::TooLarge(format!("{} edges exceed the expansion limit", g.edge_count())));
    }
    let counter = IntersectionCounter::new(g, c);
    let total = exec.map_reduce(
        0..1u64 << g.edge_count(),
        |bits| {
            let term = BigInt::from(counter.count(EdgeSubset::from_bits(bits)));
            if bits.count_ones() % 2 == 0 {
                term
            } else {
                -term
            }
        },
        BigInt::zero,
        |a, b| a + b,
    );
    total.to_biguint().ok_or_else(|| Error::InvalidCover("negative inclusion–exclusion total".into()))
}
