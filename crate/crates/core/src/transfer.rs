//! Exact counting of twisted colorings by conditioning on a feedback vertex
//! set and running a transfer pass over the remaining forest.
//!
//! A coloring is `f: V -> [m]`; an edge `(a, b)` with `a < b` and twist `σ`
//! forbids `f(b) = σ(f(a))`. Identity twists give ordinary proper colorings.

use num_bigint::BigUint;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Zero};

use crate::graph::{find_feedback_vertex, FeedbackVertex, Graph, VertexId};

/// Numeric types the transfer pass can run in.
pub(crate) trait Count: Clone + Zero + One + CheckedAdd + CheckedSub + CheckedMul {}
impl<T: Clone + Zero + One + CheckedAdd + CheckedSub + CheckedMul> Count for T {}

/// Precomputed elimination structure for one graph.
#[derive(Clone, Debug)]
pub(crate) struct TransferPlan {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    /// Conditioned vertices, enumerated exhaustively.
    conditioned: Vec<VertexId>,
    /// Position of each vertex in `conditioned`, if present.
    slot: Vec<Option<usize>>,
    /// Edges with both endpoints conditioned.
    inner_edges: Vec<usize>,
    /// Edges from a conditioned vertex into the forest.
    boundary_edges: Vec<usize>,
    /// Forest vertices in BFS order; parents precede children.
    order: Vec<VertexId>,
    /// `(parent, edge)` for each non-root forest vertex.
    parent: Vec<Option<(VertexId, usize)>>,
    roots: Vec<VertexId>,
}

impl TransferPlan {
    pub(crate) fn new(g: &Graph) -> Self {
        let conditioned = match find_feedback_vertex(g) {
            FeedbackVertex::NoneNeeded => Vec::new(),
            FeedbackVertex::Vertex(v) => vec![v],
            FeedbackVertex::NotSizeOne => greedy_feedback_set(g),
        };
        Self::with_conditioned(g, conditioned)
    }

    pub(crate) fn with_conditioned(g: &Graph, conditioned: Vec<VertexId>) -> Self {
        let n = g.vertex_count();
        let mut slot = vec![None; n];
        for (i, &v) in conditioned.iter().enumerate() {
            slot[v] = Some(i);
        }
        let mut inner_edges = Vec::new();
        let mut boundary_edges = Vec::new();
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            match (slot[a].is_some(), slot[b].is_some()) {
                (true, true) => inner_edges.push(e),
                (true, false) | (false, true) => boundary_edges.push(e),
                (false, false) => {}
            }
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut roots = Vec::new();
        for r in 0..n {
            if seen[r] || slot[r].is_some() {
                continue;
            }
            seen[r] = true;
            roots.push(r);
            let start = order.len();
            order.push(r);
            let mut head = start;
            while head < order.len() {
                let v = order[head];
                head += 1;
                for &(x, e) in g.neighbors(v) {
                    if slot[x].is_none() && !seen[x] {
                        seen[x] = true;
                        parent[x] = Some((v, e));
                        order.push(x);
                    }
                }
            }
        }
        debug_assert!(
            {
                let forest_edges = g
                    .edges()
                    .iter()
                    .filter(|&&(a, b)| slot[a].is_none() && slot[b].is_none())
                    .count();
                forest_edges == order.len() - roots.len()
            },
            "conditioned set must leave a forest"
        );
        TransferPlan {
            n,
            edges: g.edges().to_vec(),
            conditioned,
            slot,
            inner_edges,
            boundary_edges,
            order,
            parent,
            roots,
        }
    }

    /// Counts colorings with `m` colors, per-edge twists (images of `0..m`)
    /// and optional fixed colors (0-based). `None` on overflow of `T`.
    pub(crate) fn count<T: Count>(
        &self,
        m: usize,
        twists: &[&[u32]],
        fixed: &[Option<usize>],
    ) -> Option<T> {
        debug_assert_eq!(twists.len(), self.edges.len());
        if m == 0 {
            return Some(if self.n == 0 { T::one() } else { T::zero() });
        }
        if fixed.iter().flatten().any(|&c| c >= m) {
            return Some(T::zero());
        }
        let inverses: Vec<Vec<u32>> = twists.iter().map(|t| invert(t)).collect();
        let mut colors = vec![0usize; self.conditioned.len()];
        let mut vals: Vec<T> = vec![T::zero(); self.n * m];
        let mut forbidden: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        let mut total = T::zero();

        // odometer over the conditioned colors
        let domain = |i: usize| -> (usize, usize) {
            match fixed[self.conditioned[i]] {
                Some(c) => (c, c + 1),
                None => (0, m),
            }
        };
        for (i, c) in colors.iter_mut().enumerate() {
            *c = domain(i).0;
        }
        loop {
            if self.inner_ok(&colors, twists) {
                let part = self.forest_pass::<T>(m, twists, &inverses, fixed, &colors, &mut vals, &mut forbidden)?;
                total = total.checked_add(&part)?;
            }
            // advance
            let mut i = colors.len();
            loop {
                if i == 0 {
                    return Some(total);
                }
                i -= 1;
                let (lo, hi) = domain(i);
                colors[i] += 1;
                if colors[i] < hi {
                    break;
                }
                colors[i] = lo;
            }
        }
    }

    fn inner_ok(&self, colors: &[usize], twists: &[&[u32]]) -> bool {
        self.inner_edges.iter().all(|&e| {
            let (a, b) = self.edges[e];
            let (ca, cb) = (colors[self.slot[a].unwrap()], colors[self.slot[b].unwrap()]);
            twists[e][ca] as usize != cb
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn forest_pass<T: Count>(
        &self,
        m: usize,
        twists: &[&[u32]],
        inverses: &[Vec<u32>],
        fixed: &[Option<usize>],
        colors: &[usize],
        vals: &mut [T],
        forbidden: &mut [Vec<usize>],
    ) -> Option<T> {
        for f in forbidden.iter_mut() {
            f.clear();
        }
        for &e in &self.boundary_edges {
            let (a, b) = self.edges[e];
            if let Some(s) = self.slot[a] {
                forbidden[b].push(twists[e][colors[s]] as usize);
            } else {
                let s = self.slot[b].unwrap();
                forbidden[a].push(inverses[e][colors[s]] as usize);
            }
        }
        for &v in &self.order {
            let row = &mut vals[v * m..(v + 1) * m];
            match fixed[v] {
                Some(c) => {
                    row.fill(T::zero());
                    row[c] = T::one();
                }
                None => row.fill(T::one()),
            }
            for &c in &forbidden[v] {
                row[c] = T::zero();
            }
        }
        for &v in self.order.iter().rev() {
            let Some((p, e)) = self.parent[v] else { continue };
            let mut sum = T::zero();
            for x in &vals[v * m..(v + 1) * m] {
                sum = sum.checked_add(x)?;
            }
            // φ(c): the child color excluded when the parent has color c
            let phi: &[u32] = if p < v { twists[e] } else { &inverses[e] };
            for c in 0..m {
                let pc = p * m + c;
                if vals[pc].is_zero() {
                    continue;
                }
                let factor = sum.checked_sub(&vals[v * m + phi[c] as usize])?;
                vals[pc] = vals[pc].checked_mul(&factor)?;
            }
        }
        let mut product = T::one();
        for &r in &self.roots {
            let mut sum = T::zero();
            for x in &vals[r * m..(r + 1) * m] {
                sum = sum.checked_add(x)?;
            }
            product = product.checked_mul(&sum)?;
        }
        Some(product)
    }

    /// Exact count, falling back to arbitrary precision when `u128` overflows.
    pub(crate) fn count_exact(&self, m: usize, twists: &[&[u32]], fixed: &[Option<usize>]) -> BigUint {
        match self.count::<u128>(m, twists, fixed) {
            Some(c) => BigUint::from(c),
            None => self.count::<BigUint>(m, twists, fixed).expect("BigUint never overflows"),
        }
    }
}

fn invert(p: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u32;
    }
    inv
}

/// Peel degree-≤1 vertices, then repeatedly take a maximum-degree vertex.
fn greedy_feedback_set(g: &Graph) -> Vec<VertexId> {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut chosen = Vec::new();
    let remove = |v: usize, alive: &mut Vec<bool>, degree: &mut Vec<usize>| {
        alive[v] = false;
        for &(x, _) in g.neighbors(v) {
            if alive[x] {
                degree[x] -= 1;
            }
        }
    };
    loop {
        let mut changed = true;
        while changed {
            changed = false;
            for v in 0..n {
                if alive[v] && degree[v] <= 1 {
                    remove(v, &mut alive, &mut degree);
                    changed = true;
                }
            }
        }
        let Some(v) = (0..n).filter(|&v| alive[v]).max_by_key(|&v| (degree[v], std::cmp::Reverse(v)))
        else {
            break;
        };
        chosen.push(v);
        remove(v, &mut alive, &mut degree);
    }
    chosen.sort_unstable();
    chosen
}
