//! Closed forms for the DP color function of Theta graphs, the bound terms
//! and pairwise differences they are derived from, the one-edge test for
//! generalized Theta graphs, the feedback-vertex construction, bound checks
//! on individual covers, and the list-coloring threshold.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::chromatic::{
    chromatic_polynomial, observation_forms, precolored_polynomial, theta_chromatic,
    theta_minus_edge_chromatic, ObservationForms, Precoloring,
};
use crate::cover::{count_colorings, diagnostics, shift_cover, CoverDiagnostics, FullCover, PartitionSpec};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{
    build_generalized_theta, component_count, cycles_of_subset, find_feedback_vertex,
    star_forest_decomposition, EdgeSubset, FeedbackVertex, Graph, StarDecomposition, ThetaSpec,
};
use crate::poly::{eventual_compare, sign_pow, IntPolynomial};

// ---------------------------------------------------------------------------
// Theta graphs with three paths

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DpCase {
    /// `l1` differs in parity from both `l2` and `l3`.
    I,
    /// `l1` matches `l2` only.
    II,
    /// `l1` matches `l3` only.
    III,
    /// All three share a parity.
    IV,
}

impl DpCase {
    pub fn of(l1: usize, l2: usize, l3: usize) -> DpCase {
        match (l1 % 2 == l2 % 2, l1 % 2 == l3 % 2) {
            (false, false) => DpCase::I,
            (true, false) => DpCase::II,
            (false, true) => DpCase::III,
            (true, true) => DpCase::IV,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            DpCase::I => "i",
            DpCase::II => "ii",
            DpCase::III => "iii",
            DpCase::IV => "iv",
        }
    }

    /// Smallest `m` from which the case formula is asserted.
    pub fn threshold(self) -> u64 {
        match self {
            DpCase::I => 1,
            DpCase::II | DpCase::III => 2,
            DpCase::IV => 3,
        }
    }

    /// Index (1-based) of the bound term that is largest in this case.
    pub fn max_term(self) -> usize {
        match self {
            DpCase::I => 1,
            DpCase::II => 2,
            DpCase::III => 4,
            DpCase::IV => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DpFormulaResult {
    pub case: DpCase,
    pub polynomial: IntPolynomial,
    pub threshold: u64,
}

impl DpFormulaResult {
    /// The DP color function at `m`; zero below the threshold, since the
    /// graph has a cycle and at most two colors are available there.
    pub fn value(&self, m: u64) -> BigInt {
        if m < self.threshold {
            BigInt::zero()
        } else {
            self.polynomial.eval_at(m)
        }
    }
}

fn check_ordered(l1: usize, l2: usize, l3: usize) -> Result<()> {
    if l1 < 2 {
        return Err(Error::OutOfScope(format!("l1 = {l1}; paths of length 1 are not covered")));
    }
    if !(l1 <= l2 && l2 <= l3) {
        return Err(Error::OutOfScope(format!("need l1 <= l2 <= l3, got ({l1}, {l2}, {l3})")));
    }
    Ok(())
}

pub fn dp_formula_theta3(l1: usize, l2: usize, l3: usize) -> Result<DpFormulaResult> {
    check_ordered(l1, l2, l3)?;
    let case = DpCase::of(l1, l2, l3);
    let a = IntPolynomial::m_minus_1();
    let total = l1 + l2 + l3;
    let polynomial = match case {
        DpCase::I => theta_chromatic(&ThetaSpec::new(vec![l1, l2, l3])?)?,
        DpCase::II => (a.pow(total) + a.pow(l1) - a.pow(l2 + 1) - a.pow(l3)
            + IntPolynomial::m_minus(2).scale(sign_pow(l3 + 1)))
        .exact_div(&IntPolynomial::m())?,
        DpCase::III => (a.pow(total) + a.pow(l1) - a.pow(l3 + 1) - a.pow(l2)
            + IntPolynomial::m_minus(2).scale(sign_pow(l2 + 1)))
        .exact_div(&IntPolynomial::m())?,
        DpCase::IV => (a.pow(total) - a.pow(l1) - a.pow(l2) - a.pow(l3)
            + IntPolynomial::constant(2 * sign_pow(total)))
        .exact_div(&IntPolynomial::m())?,
    };
    Ok(DpFormulaResult { case, polynomial, threshold: case.threshold() })
}

/// The five bound terms as polynomials, built from the auxiliary forms.
pub fn lemma21_polynomials(forms: &ObservationForms) -> Result<[IntPolynomial; 5]> {
    let ObservationForms { g, g0, g1, g2, g_star } = forms;
    let a = IntPolynomial::m_minus_1();
    let g_over_a = g.exact_div(&a)?;
    Ok([
        g0 - g,
        g0 - g2 + &g_over_a,
        g0 - g1 + &g_over_a,
        (g1 + g2 + g_star - g).exact_div(&a)?,
        (g1 + g2 - g_star.exact_div(&IntPolynomial::m_minus(2))?).exact_div(&a)?,
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma21Terms {
    pub m: u64,
    pub terms: [BigInt; 5],
    pub p0: BigInt,
    /// `P(G_0, m) - max A_i`.
    pub bound: BigInt,
    /// Every index (1-based) attaining the maximum.
    pub argmax: Vec<usize>,
    pub case: DpCase,
}

impl Lemma21Terms {
    pub fn max_matches_case(&self) -> bool {
        self.argmax.contains(&self.case.max_term())
    }
}

pub fn lemma21_terms(l1: usize, l2: usize, l3: usize, m: u64) -> Result<Lemma21Terms> {
    check_ordered(l1, l2, l3)?;
    if m < 3 {
        return Err(Error::OutOfRange(format!("the bound terms need m >= 3, got {m}")));
    }
    let forms = observation_forms(l1, l2, l3)?;
    let polys = lemma21_polynomials(&forms)?;
    let terms = polys.map(|p| p.eval_at(m));
    let max = terms.iter().max().expect("five terms").clone();
    let argmax = (1..=5).filter(|&i| terms[i - 1] == max).collect();
    let p0 = forms.g0.eval_at(m);
    Ok(Lemma21Terms { m, bound: &p0 - &max, terms, p0, argmax, case: DpCase::of(l1, l2, l3) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rel {
    Eq,
    Ge,
    Le,
}

impl Rel {
    fn holds(self, a: &BigInt, b: &BigInt) -> bool {
        match self {
            Rel::Eq => a == b,
            Rel::Ge => a >= b,
            Rel::Le => a <= b,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DifferenceRow {
    /// For example `"A2-A3"`.
    pub name: &'static str,
    pub from_terms: BigInt,
    pub closed_form: BigInt,
    /// Predicted `>= 0`; otherwise `<= 0` is predicted.
    pub predicted_nonnegative: bool,
    pub agree: bool,
    pub sign_ok: bool,
}

/// One inequality chain: each step relates the previous value to the next,
/// starting from the difference itself and ending at 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainCheck {
    pub difference: &'static str,
    pub branch: &'static str,
    pub steps: Vec<(Rel, BigInt)>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqDifferences {
    pub l: [usize; 3],
    pub m: u64,
    pub rows: Vec<DifferenceRow>,
    pub chains: Vec<ChainCheck>,
}

impl EqDifferences {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.agree && r.sign_ok) && self.chains.iter().all(|c| c.holds)
    }
}

pub fn eq_differences(l1: usize, l2: usize, l3: usize, m: u64) -> Result<EqDifferences> {
    let t = lemma21_terms(l1, l2, l3, m)?;
    let a = BigInt::from(m - 1);
    let mm2 = BigInt::from(m - 2);
    let pw = |e: usize| a.pow(e as u32);
    let sg = |e: usize| BigInt::from(sign_pow(e));
    let total = l1 + l2 + l3;
    let [a1, a2, a3, a4, a5] = &t.terms;
    let rows_spec: [(&'static str, BigInt, BigInt, bool); 7] = [
        ("A2-A3", a2 - a3, sg(l2 + l3) * pw(l1) + sg(l1 + l3 + 1) * pw(l2), (l1 + l3) % 2 == 1),
        ("A5-A4", a5 - a4, sg(l1 + l2) * pw(l3) + sg(total + 1), (l1 + l2).is_multiple_of(2)),
        ("A2-A1", a2 - a1, sg(l2 + l3) * pw(l1) + sg(l1 + l2) * pw(l3) + sg(total) * &mm2, (l1 + l2).is_multiple_of(2)),
        ("A3-A1", a3 - a1, sg(l1 + l3) * pw(l2) + sg(l1 + l2) * pw(l3) + sg(total) * &mm2, (l1 + l2).is_multiple_of(2)),
        ("A4-A1", a4 - a1, sg(l2 + l3) * pw(l1) + sg(l1 + l3) * pw(l2) + sg(total) * &mm2, (l1 + l3).is_multiple_of(2)),
        ("A5-A2", a5 - a2, sg(l1 + l3) * pw(l2) + sg(total + 1), (l1 + l3).is_multiple_of(2)),
        ("A5-A3", a5 - a3, sg(l2 + l3) * pw(l1) + sg(total + 1), (l2 + l3).is_multiple_of(2)),
    ];
    let rows = rows_spec
        .into_iter()
        .map(|(name, from_terms, closed_form, predicted_nonnegative)| {
            let sign_ok = if predicted_nonnegative { !from_terms.is_negative() } else { !from_terms.is_positive() };
            DifferenceRow { name, agree: from_terms == closed_form, from_terms, closed_form, predicted_nonnegative, sign_ok }
        })
        .collect::<Vec<_>>();
    let chains = case_chains(l1, l2, l3, m, [&rows[2].from_terms, &rows[3].from_terms, &rows[4].from_terms]);
    Ok(EqDifferences { l: [l1, l2, l3], m, rows, chains })
}

/// The inequality chains behind the signs of `A2-A1`, `A3-A1` and `A4-A1`,
/// one branch per difference selected by the parities.
fn case_chains(l1: usize, l2: usize, l3: usize, m: u64, diffs: [&BigInt; 3]) -> Vec<ChainCheck> {
    let a = BigInt::from(m - 1);
    let mb = BigInt::from(m);
    let mm2 = BigInt::from(m - 2);
    let one = BigInt::one();
    let zero = BigInt::zero();
    let pw = |e: usize| a.pow(e as u32);
    let sg = |e: usize| BigInt::from(sign_pow(e));
    let total = l1 + l2 + l3;
    let same = l1 % 2 == l2 % 2 && l2 % 2 == l3 % 2;
    let even = |x: usize| x.is_multiple_of(2);
    let a2 = pw(2);
    let m_mm2_sq = &mb * &mm2 * &mm2;
    let quad: BigInt = BigInt::from(2 * m * m) - BigInt::from(5 * m) + BigInt::from(4);
    let upper_small = |lx: usize| -> Vec<(Rel, BigInt)> {
        vec![
            (Rel::Le, pw(lx) * (&one - &a) + &mm2),
            (Rel::Eq, &mm2 * (&one - pw(lx))),
            (Rel::Le, &mm2 * (&one - &a2)),
            (Rel::Eq, -m_mm2_sq.clone()),
            (Rel::Le, zero.clone()),
        ]
    };
    let lower_mixed = || -> Vec<(Rel, BigInt)> {
        vec![
            (Rel::Ge, &a2 * (&a - &one) - &mm2),
            (Rel::Eq, m_mm2_sq.clone()),
            (Rel::Ge, zero.clone()),
        ]
    };
    let lower_same = || -> Vec<(Rel, BigInt)> {
        vec![(Rel::Ge, BigInt::from(2) * &a2 - &mm2), (Rel::Eq, quad.clone()), (Rel::Ge, zero.clone())]
    };
    let upper_double = || -> Vec<(Rel, BigInt)> {
        vec![
            (Rel::Le, BigInt::from(-2) * &a2 + &mm2),
            (Rel::Eq, -quad.clone()),
            (Rel::Le, zero.clone()),
        ]
    };

    let mut out = Vec::new();
    let mut push = |difference: &'static str, branch: &'static str, first: BigInt, rest: Vec<(Rel, BigInt)>, d: &BigInt| {
        let mut steps = vec![(Rel::Eq, first)];
        steps.extend(rest);
        let mut prev = d.clone();
        let mut holds = true;
        for (rel, v) in &steps {
            holds &= rel.holds(&prev, v);
            prev = v.clone();
        }
        out.push(ChainCheck { difference, branch, steps, holds });
    };

    // A2 - A1
    if even(l1 + l2) && !same {
        let first = pw(l1) * (sg(l2 + l3) + pw(l3 - l1)) + sg(l3) * &mm2;
        push("A2-A1", "l1+l2 even, mixed parity", first, lower_mixed(), diffs[0]);
    } else if same {
        let first = pw(l1) + pw(l3) + sg(total) * &mm2;
        push("A2-A1", "all same parity", first, lower_same(), diffs[0]);
    } else {
        let first = pw(l1) * (sg(l2 + l3) - pw(l3 - l1)) + sg(l3 + 1) * &mm2;
        push("A2-A1", "l1+l2 odd", first, upper_small(l1), diffs[0]);
    }

    // A3 - A1
    if even(l1 + l2) && !same {
        let first = pw(l2) * (sg(l1 + l3) + pw(l3 - l2)) + sg(l3) * &mm2;
        push("A3-A1", "l1+l2 even, mixed parity", first, lower_mixed(), diffs[1]);
    } else if same {
        let first = pw(l2) + pw(l3) + sg(total) * &mm2;
        push("A3-A1", "all same parity", first, lower_same(), diffs[1]);
    } else if even(l1 + l3) {
        let first = pw(l2) * (&one - pw(l3 - l2)) + sg(l3 + 1) * &mm2;
        push("A3-A1", "l1+l2 odd, l1+l3 even", first, upper_small(l2), diffs[1]);
    } else {
        let first = pw(l2) * (-&one - pw(l3 - l2)) + sg(l3 + 1) * &mm2;
        let mut rest = vec![
            (Rel::Le, pw(l2) * BigInt::from(-2) + &mm2),
            (Rel::Eq, BigInt::from(-2) * pw(l2) + &mm2),
        ];
        rest.extend(upper_double());
        push("A3-A1", "l1+l2 odd, l1+l3 odd", first, rest, diffs[1]);
    }

    // A4 - A1
    if even(l1 + l3) && !same {
        let first = sg(l2 + l3) * pw(l1) + pw(l2) + sg(l2) * &mm2;
        let rest = vec![
            (Rel::Ge, -pw(l1) + pw(l1 + 1) - &mm2),
            (Rel::Eq, &mm2 * (pw(l1) - &one)),
            (Rel::Ge, &mm2 * (&a2 - &one)),
            (Rel::Eq, m_mm2_sq.clone()),
            (Rel::Ge, zero.clone()),
        ];
        push("A4-A1", "l1+l3 even, mixed parity", first, rest, diffs[2]);
    } else if same {
        // l1 = l2 is allowed here, so the second power is only bounded by a^2
        let first = pw(l1) + pw(l2) + sg(total) * &mm2;
        push("A4-A1", "all same parity", first, lower_same(), diffs[2]);
    } else if even(l2 + l3) {
        let first = pw(l1) - pw(l2) + sg(l2 + 1) * &mm2;
        let mut rest = vec![(Rel::Le, pw(l1) - pw(l1 + 1) + &mm2)];
        rest.extend(upper_small(l1).into_iter().skip(1));
        push("A4-A1", "l1+l3 odd, l2+l3 even", first, rest, diffs[2]);
    } else {
        let first = -pw(l1) - pw(l2) + sg(l2 + 1) * &mm2;
        push("A4-A1", "l1+l3 odd, l2+l3 odd", first, upper_double(), diffs[2]);
    }
    out
}

// ---------------------------------------------------------------------------
// Generalized Theta graphs

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma31Result {
    pub holds: bool,
    /// `m P(G, m) - (m-1) P(G-e, m)`.
    pub margin: BigInt,
}

/// `m P(G) - (m-1) P(G-e)` as a polynomial.
pub fn lemma31_margin_polynomial(g: &Graph, e: usize) -> Result<IntPolynomial> {
    if e >= g.edge_count() {
        return Err(Error::BadEdge(format!("edge index {e} out of range")));
    }
    let p = chromatic_polynomial(g)?;
    let q = chromatic_polynomial(&g.without_edge(e))?;
    Ok(IntPolynomial::m() * p - IntPolynomial::m_minus_1() * q)
}

/// Whether `(m-1) P(G-e, m) < m P(G, m)`, which forces `P_DP(G, m) < P(G, m)`.
pub fn lemma31_test(g: &Graph, e: usize, m: u64) -> Result<Lemma31Result> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("the one-edge test needs m >= 2, got {m}")));
    }
    let margin = lemma31_margin_polynomial(g, e)?.eval_at(m);
    Ok(Lemma31Result { holds: margin.is_positive(), margin })
}

pub const DEFAULT_SCAN_BUDGET: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Classification {
    EventuallyEqual,
    EventuallyLess {
        /// Smallest `j >= 2` whose length has the parity of `l_1` (1-based).
        witness: usize,
        /// Smallest `m <= budget` where the one-edge test succeeds.
        empirical_n: Option<u64>,
        /// The test keeps succeeding from `empirical_n` through the budget.
        holds_through_budget: bool,
        budget: u64,
    },
}

pub fn classify_generalized(spec: &ThetaSpec, budget: u64) -> Result<Classification> {
    let ls = spec.lengths();
    if !spec.is_normalized() {
        return Err(Error::OutOfScope(format!("{spec}: need l_2 <= ... <= l_k and l_2 >= max(l_1, 2)")));
    }
    let Some(j) = (2..=ls.len()).find(|&j| ls[j - 1] % 2 == ls[0] % 2) else {
        return Ok(Classification::EventuallyEqual);
    };
    let margin = IntPolynomial::m() * theta_chromatic(spec)?
        - IntPolynomial::m_minus_1() * theta_minus_edge_chromatic(spec, j)?;
    let holds: Vec<bool> = (2..=budget).map(|m| margin.eval_at(m).is_positive()).collect();
    let first = holds.iter().position(|&h| h);
    Ok(Classification::EventuallyLess {
        witness: j,
        empirical_n: first.map(|i| i as u64 + 2),
        holds_through_budget: first.is_some_and(|i| holds[i..].iter().all(|&h| h)),
        budget,
    })
}

// ---------------------------------------------------------------------------
// Graphs with a feedback vertex set of size one

/// Stars larger than this make the partition sweep impractical.
pub const MAX_STAR_VERTICES: usize = 10;

/// Colorings of the forest `G_0` that give `α_1` its part color and at
/// least one leaf its part color (colors are part indices plus one).
pub fn partition_weight(d: &StarDecomposition, p: &PartitionSpec) -> Result<IntPolynomial> {
    let g0 = &d.remainder;
    let bound = g0.vertex_count();
    let color = |v| p.part_of(v).map(|r| r + 1).ok_or_else(|| Error::InvalidPartition("vertex outside partition".into()));
    let center_color = color(d.center)?;
    let leaf_colors = d.leaves.iter().map(|&v| color(v)).collect::<Result<Vec<_>>>()?;
    let mut total = IntPolynomial::zero();
    for bits in 1u64..1 << d.leaves.len() {
        let mut assignment = std::collections::BTreeMap::new();
        assignment.insert(d.center, center_color);
        for (i, &leaf) in d.leaves.iter().enumerate() {
            if bits >> i & 1 == 1 {
                assignment.insert(leaf, leaf_colors[i]);
            }
        }
        let term = precolored_polynomial(g0, &Precoloring::new(g0, assignment, bound)?)?;
        total = if bits.count_ones() % 2 == 1 { total + term } else { total - term };
    }
    Ok(total)
}

#[derive(Clone, Debug)]
pub struct Fvs1Result {
    pub decomposition: StarDecomposition,
    pub partitions_considered: usize,
    /// Every partition whose weight equals the eventual maximum, in
    /// enumeration order; the first is the one used.
    pub maximizers: Vec<PartitionSpec>,
    pub weight: IntPolynomial,
    pub forest_polynomial: IntPolynomial,
    /// `P(G_0, m) - m * weight`.
    pub dp: IntPolynomial,
    /// From here on the maximizing weight dominates every other weight.
    pub bound: BigUint,
}

impl Fvs1Result {
    pub fn winner(&self) -> &PartitionSpec {
        &self.maximizers[0]
    }

    /// The shift cover of the winning partition at fold `m`.
    pub fn witness_cover(&self, g: &Graph, m: usize) -> Result<FullCover> {
        shift_cover(g, &self.decomposition, self.winner(), m)
    }
}

pub fn fvs1_dp_polynomial(g: &Graph, exec: Exec) -> Result<Fvs1Result> {
    let center = match find_feedback_vertex(g) {
        FeedbackVertex::Vertex(v) => v,
        FeedbackVertex::NoneNeeded if g.vertex_count() > 0 => 0,
        FeedbackVertex::NoneNeeded => return Err(Error::InvalidGraph("empty graph".into())),
        FeedbackVertex::NotSizeOne => {
            return Err(Error::OutOfScope("the graph has no feedback vertex set of size one".into()))
        }
    };
    let d = star_forest_decomposition(g, center)?;
    let star = d.star_vertices();
    if star.len() > MAX_STAR_VERTICES {
        return Err(Error::TooLarge(format!("star with {} vertices", star.len())));
    }
    let partitions = PartitionSpec::enumerate(&star);
    let weights = exec.map_collect(&partitions, |p| partition_weight(&d, p));
    let weights = weights.into_iter().collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for i in 1..weights.len() {
        if eventual_compare(&weights[i], &weights[best]).ordering == std::cmp::Ordering::Greater {
            best = i;
        }
    }
    let mut bound = BigUint::from(g.vertex_count().max(1));
    let mut maximizers = Vec::new();
    for (i, w) in weights.iter().enumerate() {
        if w == &weights[best] {
            maximizers.push(partitions[i].clone());
        } else {
            bound = bound.max(eventual_compare(&weights[best], w).bound);
        }
    }
    let forest_polynomial = chromatic_polynomial(&d.remainder)?;
    let weight = weights[best].clone();
    let dp = &forest_polynomial - &(IntPolynomial::m() * &weight);
    Ok(Fvs1Result { decomposition: d, partitions_considered: partitions.len(), maximizers, weight, forest_polynomial, dp, bound })
}

// ---------------------------------------------------------------------------
// Per-cover bound checks for generalized Theta graphs

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetViolation {
    pub subset: Vec<usize>,
    pub check: &'static str,
    pub diff: BigInt,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalBound {
    /// `P_DP(G, H) - P(G, m)`.
    pub gap: BigInt,
    /// `m^(n-l1-lμ) - 2^(l+2) m^(n-l1-lμ-1)`.
    pub lower: BigInt,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub m: u64,
    pub diagnostics: CoverDiagnostics,
    pub subsets_checked: u64,
    /// Subsets where the exact-value rules applied (zero, or one twisted cycle).
    pub exact_cases: u64,
    /// Subsets where one of the lower bounds for long cycles applied.
    pub lower_bound_cases: u64,
    pub violations: Vec<SubsetViolation>,
    /// Present when `μ > 0` and `m >= 2^(l+1)`.
    pub global: Option<GlobalBound>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.global.as_ref().is_none_or(|g| g.holds)
    }
}

/// Largest fold for which the exhaustive subset sweep is run.
pub const MAX_SWEEP_FOLD: usize = 1 << 12;

/// Checks every nonempty edge subset of the Theta graph against the bounds
/// on `|∩ S_e| - |∩ B_e|` and, when applicable, the global lower bound on
/// `P_DP(G, H) - P(G, m)`.
pub fn lemma_bound_checkers(spec: &ThetaSpec, c: &FullCover, exec: Exec) -> Result<BoundReport> {
    if !spec.is_normalized() {
        return Err(Error::AssumptionViolated(format!("{spec}: need l_2 <= ... <= l_k and l_2 >= max(l_1, 2)")));
    }
    let diag = diagnostics(spec, c)?;
    let g = build_generalized_theta(spec);
    if g.edge_count() > crate::chromatic::MAX_EXPANSION_EDGES {
        return Err(Error::TooLarge(format!("{} edges exceed the subset sweep limit", g.edge_count())));
    }
    let m = c.fold() as u64;
    let n = g.vertex_count();
    let total_len = spec.total_length();
    let l1 = spec.length(1);
    let mb = BigInt::from(m);
    let mpow = |e: i64| -> Option<BigInt> { (e >= 0).then(|| mb.pow(e as u32)) };

    type Outcome = (u64, u64, Vec<SubsetViolation>);
    let check_subset = |bits: u64| -> Result<Outcome> {
        let s = EdgeSubset::from_bits(bits);
        let comps = component_count(&g, s);
        let untwisted = mb.pow(comps as u32);
        let diff = BigInt::from(crate::cover::s_intersection_count(&g, c, s)?) - &untwisted;
        let mut bad = Vec::new();
        let mut flag = |check: &'static str, ok: bool, expected: String| {
            if !ok {
                bad.push(SubsetViolation { subset: s.iter().collect(), check, diff: diff.clone(), expected });
            }
        };
        flag("between -m^c and 0", diff <= BigInt::zero() && diff >= -untwisted.clone(), format!("in [-{untwisted}, 0]"));
        if diag.mu == 0 {
            flag("canonical cover", diff.is_zero(), "0".into());
            return Ok((1, 0, bad));
        }
        let target = l1 + spec.length(diag.mu);
        let cycles = cycles_of_subset(&g, s)?;
        let longest = cycles.iter().copied().max().unwrap_or(0);
        let p = s.len();
        let exp = n as i64 - target as i64;
        let (mut exact, mut lower) = (0, 0);
        if longest < target {
            exact = 1;
            flag("no long cycle", diff.is_zero(), "0".into());
        } else if p == target {
            let twisted = (2..=spec.k()).find(|&j| spec.length(j) == spec.length(diag.mu) && s.contains(j - 1));
            if let (Some(j), Some(scale)) = (twisted, mpow(exp)) {
                exact = 1;
                let expected = -BigInt::from(diag.x[j - 2]) * scale;
                flag("one shortest twisted cycle", diff == expected, expected.to_string());
            }
        } else if p > target {
            lower = 1;
            if p % 2 == 1 {
                flag("odd size", !diff.is_positive(), "<= 0".into());
            }
            if p == target + 1 {
                flag("one extra edge: components", comps as i64 == exp, format!("{exp} components"));
                flag("one extra edge: one cycle", cycles.len() == 1, "1 cycle".into());
                if let Some(scale) = mpow(exp - 1) {
                    let floor = -BigInt::from(2 * diag.s) * scale;
                    flag("one extra edge: lower bound", diff >= floor, format!(">= {floor}"));
                }
            } else if p.is_multiple_of(2) {
                if let Some(scale) = mpow(exp - 1) {
                    let floor = -scale;
                    flag("even size: lower bound", diff >= floor, format!(">= {floor}"));
                }
            }
        }
        Ok((exact, lower, bad))
    };

    let subsets = 1u64 << g.edge_count();
    let (exact_cases, lower_bound_cases, mut violations) = if c.fold() <= MAX_SWEEP_FOLD {
        exec.map_reduce(
            1..subsets,
            check_subset,
            || Ok((0, 0, Vec::new())),
            |a: Result<Outcome>, b: Result<Outcome>| {
                let (a, b) = (a?, b?);
                let mut v = a.2;
                v.extend(b.2);
                Ok((a.0 + b.0, a.1 + b.1, v))
            },
        )?
    } else {
        (0, 0, Vec::new())
    };
    violations.sort_by(|a, b| a.subset.cmp(&b.subset));
    let swept = if c.fold() <= MAX_SWEEP_FOLD { subsets - 1 } else { 0 };

    let global = if diag.mu > 0 && (total_len as u32) < 63 && m >= 1u64 << (total_len + 1) {
        let exp = n as i64 - (l1 + spec.length(diag.mu)) as i64;
        let gap = BigInt::from(count_colorings(&g, c)?) - theta_chromatic(spec)?.eval_at(m);
        let lower = mpow(exp).unwrap_or_default() - BigInt::from(2u32).pow(total_len as u32 + 2) * mpow(exp - 1).unwrap_or_default();
        Some(GlobalBound { holds: gap >= lower, gap, lower })
    } else {
        None
    };
    Ok(BoundReport { m, diagnostics: diag, subsets_checked: swept, exact_cases, lower_bound_cases, violations, global })
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Threshold {
    /// `(l - 1) / ln(1 + sqrt 2)`.
    pub value: f64,
    /// Least integer strictly above `value`, and at least 1.
    pub least_integer: u64,
}

/// Number of colors above which list and ordinary color functions of a
/// connected graph with `l` edges agree.
pub fn list_color_threshold(edges: u64) -> Threshold {
    let value = (edges as f64 - 1.0) / (1.0 + 2f64.sqrt()).ln();
    let least = (value.floor() + 1.0).max(1.0) as u64;
    Threshold { value, least_integer: least }
}
