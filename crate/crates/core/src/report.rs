//! Check records and the verification suites behind `dpchroma verify`.

use std::fmt::{self, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::analysis::{
    classify_generalized, dp_formula_theta3, eq_differences, fvs1_dp_polynomial, lemma21_terms,
    lemma31_test, lemma_bound_checkers, Classification, DEFAULT_SCAN_BUDGET,
};
use crate::chromatic::{
    chromatic_polynomial, inclusion_exclusion_chromatic_with, observation_forms, observation_graphs,
    theta_chromatic,
};
use crate::cover::{
    count_colorings, identity_cover, ie_dp_count, min_over_covers, random_cover, s_intersection_count,
    CoverCounter, SearchOptions,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{build_generalized_theta, EdgeSubset, Graph, ThetaSpec};
use crate::perm::Perm;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    /// Short identifier of the statement being checked.
    pub claim: String,
    pub instance: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(
        name: impl Into<String>,
        claim: &str,
        instance: impl Into<String>,
        expected: impl Display,
        actual: impl Display,
        pass: bool,
    ) -> Self {
        CheckRecord {
            name: name.into(),
            claim: claim.to_string(),
            instance: instance.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        }
    }

    /// A check whose expected and actual values must be equal.
    pub fn equal(name: impl Into<String>, claim: &str, instance: impl Into<String>, expected: impl Display, actual: impl Display) -> Self {
        let (e, a) = (expected.to_string(), actual.to_string());
        let pass = e == a;
        Self::new(name, claim, instance, e, a, pass)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(checks: Vec<CheckRecord>) -> Self {
        let failed = checks.iter().filter(|c| !c.pass).count();
        Report { passed: failed == 0, total: checks.len(), failed, checks }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.checks {
            w.serialize(c).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out += &format!("{tag} {} [{}] expected {} got {}\n", c.name, c.instance, c.expected, c.actual);
        }
        out += &format!("{} checks, {} failed\n", self.total, self.failed);
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Auxiliary closed forms against deletion–contraction.
    Observation,
    /// Bound terms and pairwise differences on the length grid.
    EqGrid,
    /// Per-cover bounds, the one-edge test and the classification.
    Lemmas,
    /// Inclusion–exclusion against direct counting.
    Ie,
    /// Closed forms and the feedback-vertex construction against cover search.
    Search,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["observation", "eq-grid", "lemmas", "ie", "search", "all"];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "observation" => Suite::Observation,
            "eq-grid" => Suite::EqGrid,
            "lemmas" => Suite::Lemmas,
            "ie" => Suite::Ie,
            "search" => Suite::Search,
            "all" => Suite::All,
            _ => return Err(Error::OutOfRange(format!("unknown suite {s:?}; expected one of {}", Suite::NAMES.join(", ")))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [Suite::Observation, Suite::EqGrid, Suite::Lemmas, Suite::Ie, Suite::Search, Suite::All]
            .iter()
            .position(|s| s == self)
            .expect("listed");
        f.write_str(Suite::NAMES[i])
    }
}

pub fn run_suite(suite: Suite, exec: Exec) -> Result<Report> {
    let checks = match suite {
        Suite::Observation => observation_suite()?,
        Suite::EqGrid => eq_grid_suite(exec)?,
        Suite::Lemmas => lemma_suite(exec)?,
        Suite::Ie => ie_suite(exec)?,
        Suite::Search => search_suite(exec)?,
        Suite::All => {
            let mut all = observation_suite()?;
            all.extend(eq_grid_suite(exec)?);
            all.extend(lemma_suite(exec)?);
            all.extend(ie_suite(exec)?);
            all.extend(search_suite(exec)?);
            all
        }
    };
    Ok(Report::new(checks))
}

fn ordered_triples(lo: usize, hi: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for l1 in lo..=hi {
        for l2 in l1..=hi {
            for l3 in l2..=hi {
                out.push((l1, l2, l3));
            }
        }
    }
    out
}

fn theta(ls: &[usize]) -> (ThetaSpec, Graph) {
    let spec = ThetaSpec::new(ls.to_vec()).expect("valid lengths");
    let g = build_generalized_theta(&spec);
    (spec, g)
}

fn observation_suite() -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (l1, l2, l3) in ordered_triples(2, 4) {
        let forms = observation_forms(l1, l2, l3)?;
        let graphs = observation_graphs(l1, l2, l3)?;
        for ((name, form), g) in ["G", "G0", "G1", "G2", "G*"].iter().zip(forms.as_array()).zip(&graphs) {
            out.push(CheckRecord::equal(
                format!("auxiliary form {name}"),
                "auxiliary-chromatic-forms",
                format!("({l1},{l2},{l3})"),
                chromatic_polynomial(g)?,
                form,
            ));
        }
    }
    Ok(out)
}

fn eq_grid_suite(exec: Exec) -> Result<Vec<CheckRecord>> {
    let mut cells = Vec::new();
    for t in ordered_triples(2, 6) {
        for m in 3..=12u64 {
            cells.push((t, m));
        }
    }
    let per_cell = exec.map_collect(&cells, |&((l1, l2, l3), m)| -> Result<Vec<CheckRecord>> {
        let instance = format!("theta:{l1},{l2},{l3} m={m}");
        let mut out = Vec::new();
        let terms = lemma21_terms(l1, l2, l3, m)?;
        let formula = dp_formula_theta3(l1, l2, l3)?.value(m);
        out.push(CheckRecord::equal("bound equals closed form", "bound-terms", &instance, formula, &terms.bound));
        out.push(CheckRecord::new(
            "largest bound term",
            "bound-terms",
            &instance,
            format!("A{} (case {})", terms.case.max_term(), terms.case.id()),
            format!("{:?}", terms.argmax),
            terms.max_matches_case(),
        ));
        let d = eq_differences(l1, l2, l3, m)?;
        for r in &d.rows {
            let sign = if r.predicted_nonnegative { ">= 0" } else { "<= 0" };
            out.push(CheckRecord::new(
                r.name,
                "difference-closed-form",
                &instance,
                format!("{} ({sign})", r.closed_form),
                &r.from_terms,
                r.agree && r.sign_ok,
            ));
        }
        for c in &d.chains {
            let steps: Vec<String> = c.steps.iter().map(|(rel, v)| format!("{} {v}", rel_symbol(*rel))).collect();
            out.push(CheckRecord::new(
                format!("chain {}", c.difference),
                "difference-chain",
                format!("{instance} ({})", c.branch),
                "every step holds",
                steps.join(" "),
                c.holds,
            ));
        }
        Ok(out)
    });
    Ok(per_cell.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}

fn rel_symbol(rel: crate::analysis::Rel) -> &'static str {
    match rel {
        crate::analysis::Rel::Eq => "=",
        crate::analysis::Rel::Ge => ">=",
        crate::analysis::Rel::Le => "<=",
    }
}

fn lemma_suite(exec: Exec) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let (spec, g) = theta(&[2, 3, 3]);

    // one twisted shortest cycle
    let c = identity_cover(&g, 3)?.with_twist(1, Perm::from_cycles(3, &[&[1, 2, 3]])?)?;
    let five = ["u v_1_1", "v_1_1 w", "u v_2_1", "v_2_1 v_2_2", "v_2_2 w"]
        .iter()
        .map(|pair| {
            let (a, b) = pair.split_once(' ').expect("pair");
            g.edge_by_labels(a, b)
        })
        .collect::<Result<Vec<_>>>()?;
    let five = EdgeSubset::from_indices(five);
    let diff = BigInt::from(s_intersection_count(&g, &c, five)?) - BigInt::from(27);
    out.push(CheckRecord::equal("shortest twisted cycle", "subset-intersections", "theta:2,3,3 m=3 e_2=(1 2 3)", -27, diff));

    for m in [3usize, 4, 5] {
        let mut rng = StdRng::seed_from_u64(0x5eed_0000 + m as u64);
        for i in 0..20 {
            let c = random_cover(&g, m, &mut rng)?;
            let r = lemma_bound_checkers(&spec, &c, exec)?;
            out.push(CheckRecord::new(
                "subset sweep",
                "subset-intersections",
                format!("{spec} m={m} cover {i}"),
                "0 violations",
                format!("{} violations over {} subsets", r.violations.len(), r.subsets_checked),
                r.passed(),
            ));
        }
    }

    for (m, covers) in [(512usize, 100), (1100, 5)] {
        let mut rng = StdRng::seed_from_u64(0x5eed_1000 + m as u64);
        let counter = CoverCounter::new(&g, m);
        let p = theta_chromatic(&spec)?.eval_at(m as u64);
        for i in 0..covers {
            let c = random_cover(&g, m, &mut rng)?;
            let r = lemma_bound_checkers(&spec, &c, exec)?;
            let Some(global) = r.global else { continue };
            debug_assert_eq!(global.gap, BigInt::from(counter.count(&c)) - &p);
            out.push(CheckRecord::new(
                "global lower bound",
                "global-gap",
                format!("{spec} m={m} cover {i}"),
                format!(">= {}", global.lower),
                &global.gap,
                global.holds,
            ));
        }
    }

    for (ls, edge, m, holds, margin) in [(&[2, 2, 3][..], "v_2_1", 3u64, true, Some(6)), (&[2, 3, 3][..], "v_2_1", 3, false, None)] {
        let (spec, g) = theta(ls);
        let r = lemma31_test(&g, g.edge_by_labels("u", edge)?, m)?;
        let expected = match margin {
            Some(x) => format!("{holds} (margin {x})"),
            None => holds.to_string(),
        };
        let actual = match margin {
            Some(_) => format!("{} (margin {})", r.holds, r.margin),
            None => r.holds.to_string(),
        };
        out.push(CheckRecord::equal("one-edge test", "one-edge-test", format!("{spec} e=u {edge} m={m}"), expected, actual));
    }

    let budget = DEFAULT_SCAN_BUDGET;
    let (spec, _) = theta(&[2, 2, 3]);
    let class = classify_generalized(&spec, budget)?;
    let shown = match &class {
        Classification::EventuallyLess { witness, empirical_n: Some(n), holds_through_budget: true, .. } => {
            format!("eventually-less j={witness} N={n}")
        }
        other => format!("{other:?}"),
    };
    out.push(CheckRecord::equal("classification", "classification", spec.to_string(), "eventually-less j=2 N=3", shown));

    // eventually-equal with three paths means equality at every searchable m
    for ls in [&[2, 3, 3][..], &[1, 2, 2], &[3, 4, 4]] {
        let (spec, g) = theta(ls);
        let class = classify_generalized(&spec, budget)?;
        out.push(CheckRecord::equal("classification", "classification", spec.to_string(), "EventuallyEqual", format!("{class:?}")));
        let p = chromatic_polynomial(&g)?;
        for m in 2..=4usize {
            let found = min_over_covers(&g, m, &SearchOptions { exec, ..SearchOptions::default() })?.minimum;
            out.push(CheckRecord::equal("equality at searched m", "classification", format!("{spec} m={m}"), p.eval_at(m as u64), found));
        }
    }
    let (spec, g) = theta(&[2, 3, 3, 3]);
    let p = chromatic_polynomial(&g)?.eval_at(3);
    let found = BigInt::from(min_over_covers(&g, 3, &SearchOptions { exec, ..SearchOptions::default() })?.minimum);
    out.push(CheckRecord::new(
        "minimum at most P",
        "classification",
        format!("{spec} m=3"),
        format!("<= {p}"),
        format!("{found} (gap {})", &p - &found),
        found <= p,
    ));
    Ok(out)
}

fn small_graphs() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = [&[2, 2, 2][..], &[2, 2, 3], &[2, 3, 3], &[1, 2, 3], &[1, 2, 2, 2]]
        .iter()
        .map(|ls| {
            let (spec, g) = theta(ls);
            (spec.to_string(), g)
        })
        .collect();
    let named: [(&str, &[(&str, &str)]); 5] = [
        ("triangle", &[("a", "b"), ("b", "c"), ("a", "c")]),
        ("K4", &[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")]),
        ("bowtie", &[("a", "b"), ("b", "c"), ("a", "c"), ("a", "d"), ("d", "e"), ("a", "e")]),
        ("C5", &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("a", "e")]),
        ("path", &[("a", "b"), ("b", "c"), ("c", "d")]),
    ];
    for (name, edges) in named {
        out.push((name.to_string(), Graph::from_labeled_edges(edges).expect("valid graph")));
    }
    out
}

fn ie_suite(exec: Exec) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (name, g) in small_graphs() {
        let p = chromatic_polynomial(&g)?;
        for m in 1..=4u64 {
            out.push(CheckRecord::equal(
                "chromatic by inclusion-exclusion",
                "inclusion-exclusion",
                format!("{name} m={m}"),
                p.eval_at(m),
                inclusion_exclusion_chromatic_with(&g, m, exec)?,
            ));
        }
    }
    for ls in [&[2, 2, 3][..], &[2, 3, 3]] {
        let (spec, g) = theta(ls);
        let mut rng = StdRng::seed_from_u64(0x5eed_2000 + ls.iter().sum::<usize>() as u64);
        for i in 0..50 {
            let c = random_cover(&g, 3, &mut rng)?;
            out.push(CheckRecord::equal(
                "cover count by inclusion-exclusion",
                "inclusion-exclusion",
                format!("{spec} m=3 cover {i}"),
                count_colorings(&g, &c)?,
                ie_dp_count(&g, &c, exec)?,
            ));
        }
    }
    Ok(out)
}

fn search_suite(exec: Exec) -> Result<Vec<CheckRecord>> {
    let opts = SearchOptions { exec, ..SearchOptions::default() };
    let mut out = Vec::new();
    for (l1, l2, l3) in ordered_triples(2, 4) {
        let (spec, g) = theta(&[l1, l2, l3]);
        let f = dp_formula_theta3(l1, l2, l3)?;
        for m in 3..=4usize {
            out.push(CheckRecord::equal(
                "closed form equals cover minimum",
                "theta-closed-form",
                format!("{spec} m={m} case {}", f.case.id()),
                min_over_covers(&g, m, &opts)?.minimum,
                f.value(m as u64),
            ));
        }
    }
    let (_, theta222) = theta(&[2, 2, 2]);
    let cases: [(&str, Graph, std::ops::RangeInclusive<usize>); 3] = [
        ("theta:2,2,2", theta222, 3..=5),
        ("triangle", small_graphs().remove(5).1, 3..=5),
        ("bowtie", small_graphs().remove(7).1, 3..=5),
    ];
    for (name, g, ms) in cases {
        let r = fvs1_dp_polynomial(&g, exec)?;
        for m in ms {
            let found = min_over_covers(&g, m, &opts)?.minimum;
            let witness = count_colorings(&g, &r.witness_cover(&g, m)?)?;
            out.push(CheckRecord::equal(
                "feedback-vertex polynomial equals cover minimum",
                "feedback-vertex-construction",
                format!("{name} m={m}"),
                &found,
                r.dp.eval_at(m as u64),
            ));
            out.push(CheckRecord::equal("shift cover attains minimum", "feedback-vertex-construction", format!("{name} m={m}"), found, witness));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats() {
        let r = Report::new(vec![
            CheckRecord::equal("a", "x", "i", 1, 1),
            CheckRecord::equal("b", "x", "i, j", 1, 2),
        ]);
        assert!(!r.passed);
        assert_eq!(r.failed, 1);
        let csv = r.to_csv();
        assert!(csv.starts_with("name,claim,instance,expected,actual,pass\n"));
        assert!(csv.contains("\"i, j\""));
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["checks"][1]["actual"], "2");
        assert!(r.to_text().contains("FAIL b [i, j] expected 1 got 2"));
    }

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        for suite in [Suite::Observation, Suite::Ie] {
            let r = run_suite(suite, Exec::Parallel).unwrap();
            assert!(r.passed, "{}", r.to_text());
        }
    }
}
