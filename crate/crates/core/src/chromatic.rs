//! Chromatic polynomials: generic deletion–contraction, the generalized Theta
//! closed forms, the five auxiliary forms used for three-path Theta graphs,
//! precolored counts and the Whitney edge-subset expansion.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{build_generalized_theta, component_count, EdgeSubset, Graph, ThetaSpec, VertexId};
use crate::poly::{sign_pow, IntPolynomial};
use crate::transfer::TransferPlan;

/// Size limits for deletion–contraction. Work grows as `2^cyclomatic`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChromaticLimits {
    pub max_vertices: usize,
    pub max_cyclomatic: usize,
}

impl Default for ChromaticLimits {
    fn default() -> Self {
        ChromaticLimits { max_vertices: 64, max_cyclomatic: 20 }
    }
}

pub fn chromatic_polynomial(g: &Graph) -> Result<IntPolynomial> {
    chromatic_polynomial_with(g, ChromaticLimits::default())
}

/// Deletion–contraction, always pivoting on an edge that lies on a cycle;
/// forests are evaluated in closed form as `m^c (m-1)^|E|`.
pub fn chromatic_polynomial_with(g: &Graph, limits: ChromaticLimits) -> Result<IntPolynomial> {
    let n = g.vertex_count();
    if n > limits.max_vertices.min(64) {
        return Err(Error::TooLarge(format!("{n} vertices exceed the limit of {}", limits.max_vertices)));
    }
    if g.cyclomatic_number() > limits.max_cyclomatic {
        return Err(Error::TooLarge(format!(
            "cyclomatic number {} exceeds the limit of {}",
            g.cyclomatic_number(),
            limits.max_cyclomatic
        )));
    }
    let mut adj = vec![0u64; n];
    for &(a, b) in g.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    Ok(deletion_contraction(&adj))
}

fn deletion_contraction(adj: &[u64]) -> IntPolynomial {
    let n = adj.len();
    let edges = adj.iter().map(|x| x.count_ones() as usize).sum::<usize>() / 2;
    let mut parent = vec![usize::MAX; n];
    let mut seen = 0u64;
    let mut components = 0;
    let mut chord = None;
    for r in 0..n {
        if seen >> r & 1 == 1 {
            continue;
        }
        components += 1;
        seen |= 1 << r;
        let mut stack = vec![r];
        while let Some(v) = stack.pop() {
            let mut nb = adj[v];
            while nb != 0 {
                let x = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if seen >> x & 1 == 0 {
                    seen |= 1 << x;
                    parent[x] = v;
                    stack.push(x);
                } else if parent[v] != x && chord.is_none() {
                    chord = Some((v, x));
                }
            }
        }
    }
    let Some((a, b)) = chord else {
        return forest_polynomial(components, edges);
    };
    let mut deleted = adj.to_vec();
    deleted[a] &= !(1 << b);
    deleted[b] &= !(1 << a);
    let contracted = contract(adj, a, b);
    deletion_contraction(&deleted) - deletion_contraction(&contracted)
}

/// Merges `b` into `a` (parallel edges collapse) and renumbers the last
/// vertex into `b`'s slot.
fn contract(adj: &[u64], a: usize, b: usize) -> Vec<u64> {
    let n = adj.len();
    let last = n - 1;
    let mut out = adj.to_vec();
    out[a] = (adj[a] | adj[b]) & !(1 << a) & !(1 << b);
    for v in 0..n {
        if v != a && v != b && adj[v] >> b & 1 == 1 {
            out[v] = (out[v] & !(1 << b)) | 1 << a;
        }
    }
    // move `last` into slot `b`
    if b != last {
        out[b] = out[last];
        for row in out.iter_mut() {
            if *row >> last & 1 == 1 {
                *row = (*row & !(1 << last)) | 1 << b;
            }
        }
    }
    out.truncate(last);
    out
}

/// `m^c (m-1)^e` with binomial coefficients written out directly.
fn forest_polynomial(components: usize, edges: usize) -> IntPolynomial {
    let mut coeffs = vec![BigInt::zero(); components + edges + 1];
    let mut binom = BigInt::one();
    for j in 0..=edges {
        let c = if (edges - j).is_multiple_of(2) { binom.clone() } else { -binom.clone() };
        coeffs[components + j] = c;
        binom = binom * (edges - j) / (j + 1);
    }
    IntPolynomial::from_coeffs(coeffs)
}

/// Closed form for the generalized Theta graph on the given path lengths;
/// also valid for a single path (`k = 1`).
fn theta_closed_form(lengths: &[usize]) -> Result<IntPolynomial> {
    let a = IntPolynomial::m_minus_1();
    let m = IntPolynomial::m();
    let k = lengths.len();
    let odd_part: IntPolynomial = lengths
        .iter()
        .map(|&l| a.pow(l + 1) + a.scale(sign_pow(l + 1)))
        .product();
    let even_part: IntPolynomial =
        lengths.iter().map(|&l| a.pow(l) + a.scale(sign_pow(l))).product();
    let first = odd_part.exact_div(&(&m * &a).pow(k - 1))?;
    let second = even_part.exact_div(&m.pow(k - 1))?;
    Ok(first + second)
}

pub fn theta_chromatic(spec: &ThetaSpec) -> Result<IntPolynomial> {
    theta_closed_form(spec.lengths())
}

/// Chromatic polynomial of `Θ(l_1..l_k) - u v_{j,1}` (`j` is 1-based): the
/// Theta graph on the other paths with a pendant path of length `l_j - 1` at `w`.
pub fn theta_minus_edge_chromatic(spec: &ThetaSpec, j: usize) -> Result<IntPolynomial> {
    if j == 0 || j > spec.k() {
        return Err(Error::BadIndex { index: j, max: spec.k() });
    }
    let rest = theta_closed_form(&spec.without_path(j))?;
    Ok(rest * IntPolynomial::m_minus_1().pow(spec.length(j) - 1))
}

/// Chromatic polynomials of `G = Θ(l1,l2,l3)` and the four graphs derived
/// from the path `v_1_1, u, v_2_1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObservationForms {
    pub g: IntPolynomial,
    /// `G` minus both path edges.
    pub g0: IntPolynomial,
    /// `G` minus `v_1_1 u`.
    pub g1: IntPolynomial,
    /// `G` minus `u v_2_1`.
    pub g2: IntPolynomial,
    /// `G` plus the chord `v_1_1 v_2_1`.
    pub g_star: IntPolynomial,
}

impl ObservationForms {
    pub fn as_array(&self) -> [&IntPolynomial; 5] {
        [&self.g, &self.g0, &self.g1, &self.g2, &self.g_star]
    }
}

fn check_theta3(l1: usize, l2: usize, l3: usize) -> Result<()> {
    if !(2 <= l1 && l1 <= l2 && l2 <= l3) {
        return Err(Error::OutOfScope(format!("need 2 <= l1 <= l2 <= l3, got ({l1}, {l2}, {l3})")));
    }
    Ok(())
}

pub fn observation_forms(l1: usize, l2: usize, l3: usize) -> Result<ObservationForms> {
    check_theta3(l1, l2, l3)?;
    let a = IntPolynomial::m_minus_1();
    let m = IntPolynomial::m();
    let total = l1 + l2 + l3;
    let g_num = a.pow(total)
        + (&a * &IntPolynomial::m_minus(2)).scale(sign_pow(total))
        + a.pow(l3 + 1).scale(sign_pow(l1 + l2))
        + a.pow(l2 + 1).scale(sign_pow(l1 + l3))
        + a.pow(l1 + 1).scale(sign_pow(l2 + l3));
    let star_num = a.pow(total - 1)
        + a.pow(l1).scale(sign_pow(l2 + l3))
        + a.pow(l2).scale(sign_pow(l1 + l3))
        + a.pow(l3 + 1).scale(sign_pow(l1 + l2 + 1))
        + a.scale(2 * sign_pow(total));
    Ok(ObservationForms {
        g: g_num.exact_div(&m)?,
        g0: &m * &a.pow(total - 2),
        g1: a.pow(total - 1) + a.pow(l1).scale(sign_pow(l2 + l3)),
        g2: a.pow(total - 1) + a.pow(l2).scale(sign_pow(l1 + l3)),
        g_star: (IntPolynomial::m_minus(2) * star_num).exact_div(&m)?,
    })
}

/// The graphs `G, G_0, G_1, G_2, G*` behind [`observation_forms`], built
/// explicitly from `Θ(l1,l2,l3)`.
pub fn observation_graphs(l1: usize, l2: usize, l3: usize) -> Result<[Graph; 5]> {
    check_theta3(l1, l2, l3)?;
    let g = build_generalized_theta(&ThetaSpec::new(vec![l1, l2, l3])?);
    // e_1 = u v_1_1 and e_2 = u v_2_1 are the first two edges
    let g0 = g.spanning_subgraph(g.all_edges().difference(EdgeSubset::from_indices([0, 1])));
    let g1 = g.without_edge(0);
    let g2 = g.without_edge(1);
    let (x, y) = (g.require_vertex("v_1_1")?, g.require_vertex("v_2_1")?);
    let g_star = g.with_edge(x, y)?;
    Ok([g, g0, g1, g2, g_star])
}

/// Colors fixed on a subset of vertices; colors are 1-based and at most `bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Precoloring {
    assignment: BTreeMap<VertexId, usize>,
    bound: usize,
}

impl Precoloring {
    pub fn new(g: &Graph, assignment: BTreeMap<VertexId, usize>, bound: usize) -> Result<Self> {
        if bound < g.vertex_count() {
            return Err(Error::OutOfRange(format!(
                "color bound {bound} is below the vertex count {}",
                g.vertex_count()
            )));
        }
        for (&v, &c) in &assignment {
            if v >= g.vertex_count() {
                return Err(Error::InvalidGraph(format!("precolored vertex {v} does not exist")));
            }
            if c == 0 || c > bound {
                return Err(Error::OutOfRange(format!("color {c} outside 1..={bound}")));
            }
        }
        Ok(Precoloring { assignment, bound })
    }

    pub fn from_labels(g: &Graph, pairs: &[(&str, usize)], bound: usize) -> Result<Self> {
        let mut assignment = BTreeMap::new();
        for &(l, c) in pairs {
            assignment.insert(g.require_vertex(l)?, c);
        }
        Self::new(g, assignment, bound)
    }

    pub fn assignment(&self) -> &BTreeMap<VertexId, usize> {
        &self.assignment
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    fn conflicts(&self, g: &Graph) -> bool {
        g.edges().iter().any(|(a, b)| match (self.assignment.get(a), self.assignment.get(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        })
    }
}

/// Number of proper `m`-colorings of `g` that agree with the precoloring.
pub fn precolored_count(g: &Graph, pc: &Precoloring, m: usize) -> BigUint {
    let plan = TransferPlan::new(g);
    let identity: Vec<u32> = (0..m as u32).collect();
    let twists = vec![identity.as_slice(); g.edge_count()];
    let mut fixed = vec![None; g.vertex_count()];
    for (&v, &c) in &pc.assignment {
        fixed[v] = Some(c - 1);
    }
    plan.count_exact(m, &twists, &fixed)
}

/// Polynomial agreeing with [`precolored_count`] for every `m >= bound`.
///
/// Adds a clique on the precolored vertices, merges each color class into
/// one vertex and divides the chromatic polynomial of the result by the
/// falling factorial `m (m-1) ... (m-s+1)`, `s` the number of colors used.
pub fn precolored_polynomial(g: &Graph, pc: &Precoloring) -> Result<IntPolynomial> {
    if pc.conflicts(g) {
        return Ok(IntPolynomial::zero());
    }
    let colors: Vec<usize> = {
        let mut c: Vec<usize> = pc.assignment.values().copied().collect();
        c.sort_unstable();
        c.dedup();
        c
    };
    let mut new_id = vec![usize::MAX; g.vertex_count()];
    let mut labels: Vec<String> = Vec::new();
    for (v, id) in new_id.iter_mut().enumerate() {
        if !pc.assignment.contains_key(&v) {
            *id = labels.len();
            labels.push(g.label(v).to_string());
        }
    }
    let class_base = labels.len();
    for &c in &colors {
        labels.push(format!("#color{c}"));
    }
    for (&v, &c) in &pc.assignment {
        new_id[v] = class_base + colors.binary_search(&c).expect("color listed");
    }
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (new_id[a], new_id[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    for i in 0..colors.len() {
        for j in i + 1..colors.len() {
            edges.push((class_base + i, class_base + j));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let merged = Graph::new(labels, &edges)?;
    let falling: IntPolynomial = (0..colors.len()).map(|i| IntPolynomial::m_minus(i as i64)).product();
    chromatic_polynomial(&merged)?.exact_div(&falling)
}

/// `m^c`, `c` the number of components of the spanning subgraph on `s`.
pub fn whitney_b_count(g: &Graph, s: EdgeSubset, m: u64) -> BigUint {
    BigUint::from(m).pow(component_count(g, s) as u32)
}

pub const MAX_EXPANSION_EDGES: usize = 20;

/// `P(G, m)` as the alternating sum of `m^{c(S)}` over all edge subsets.
pub fn inclusion_exclusion_chromatic(g: &Graph, m: u64) -> Result<BigInt> {
    inclusion_exclusion_chromatic_with(g, m, Exec::default())
}

pub fn inclusion_exclusion_chromatic_with(g: &Graph, m: u64, exec: Exec) -> Result<BigInt> {
    if g.edge_count() > MAX_EXPANSION_EDGES {
        return Err(Error::TooLarge(format!(
            "{} edges exceed the expansion limit of {MAX_EXPANSION_EDGES}",
            g.edge_count()
        )));
    }
    let subsets = 1u64 << g.edge_count();
    Ok(exec.map_reduce(
        0..subsets,
        |bits| {
            let term = BigInt::from(whitney_b_count(g, EdgeSubset::from_bits(bits), m));
            if bits.count_ones() % 2 == 0 {
                term
            } else {
                -term
            }
        },
        BigInt::zero,
        |x, y| x + y,
    ))
}
