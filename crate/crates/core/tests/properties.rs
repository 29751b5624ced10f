use std::cmp::Ordering;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dpchroma::analysis::{
    dp_formula_theta3, eq_differences, fvs1_dp_polynomial, lemma_bound_checkers, DpCase,
};
use dpchroma::chromatic::{chromatic_polynomial, precolored_count, precolored_polynomial, Precoloring};
use dpchroma::cover::{count_colorings, min_over_covers, random_cover, SearchOptions, Symmetry};
use dpchroma::graph::{build_generalized_theta, Graph, ThetaSpec};
use dpchroma::perm::Perm;
use dpchroma::poly::{eventual_compare, IntPolynomial};
use dpchroma::Exec;

fn perm(m: usize) -> impl Strategy<Value = Perm> {
    Just((0..m as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

fn poly() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-20i64..=20, 0..6).prop_map(|c| IntPolynomial::from_i64s(&c))
}

/// A tree on `n` vertices plus a hub joined to some of them.
fn fvs1_graph() -> impl Strategy<Value = Graph> {
    (2usize..=6)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|v| 0..v).collect();
            (Just(n), parents, prop::collection::vec(any::<bool>(), n))
        })
        .prop_filter_map("hub needs a neighbor", |(n, parents, hub)| {
            let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
            let joined: Vec<usize> = (0..n).filter(|&v| hub[v]).take(4).collect();
            if joined.is_empty() {
                return None;
            }
            edges.extend(joined.iter().map(|&v| (v, n)));
            let labels: Vec<String> = (0..=n).map(|v| format!("x{v}")).collect();
            Some(Graph::new(labels, &edges).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn perm_group_laws(a in perm(6), b in perm(6), c in perm(6)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(a.conjugate(&b).cycle_type(), a.cycle_type());
        prop_assert_eq!(Perm::unrank(6, a.rank()).unwrap(), a);
    }

    #[test]
    fn polynomial_evaluation_is_a_ring_map(p in poly(), q in poly(), m in 0u64..50) {
        prop_assert_eq!((&p + &q).eval_at(m), p.eval_at(m) + q.eval_at(m));
        prop_assert_eq!((&p * &q).eval_at(m), p.eval_at(m) * q.eval_at(m));
        if !q.is_zero() {
            prop_assert_eq!((&p * &q).exact_div(&q).unwrap(), p);
        }
    }

    #[test]
    fn eventual_order_holds_past_the_bound(p in poly(), q in poly(), extra in 0u64..30) {
        let r = eventual_compare(&p, &q);
        let start: u64 = r.bound.try_into().unwrap();
        let m = start + extra;
        prop_assert_eq!(p.eval_at(m).cmp(&q.eval_at(m)), r.ordering);
        prop_assert_eq!(eventual_compare(&q, &p).ordering, r.ordering.reverse());
    }

    #[test]
    fn conjugating_every_twist_keeps_the_count(ls in prop::collection::vec(1usize..=4, 2..=4), m in 2usize..=4, seed: u64, tau in perm(4)) {
        let Ok(spec) = ThetaSpec::new(ls) else { return Ok(()) };
        let g = build_generalized_theta(&spec);
        let c = random_cover(&g, m, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let tau = Perm::from_images(tau.images().iter().copied().filter(|&x| (x as usize) < m).collect()).unwrap();
        prop_assert_eq!(count_colorings(&g, &c).unwrap(), count_colorings(&g, &c.conjugated(&tau)).unwrap());
    }

    #[test]
    fn differences_hold_beyond_the_grid(a in 2usize..=14, b in 0usize..=6, c in 0usize..=6, m in 3u64..=60) {
        let d = eq_differences(a, a + b, a + b + c, m).unwrap();
        prop_assert!(d.all_ok(), "{:?}", d);
    }

    #[test]
    fn closed_form_vanishes_where_asserted(a in 2usize..=14, b in 0usize..=6, c in 0usize..=6) {
        let f = dp_formula_theta3(a, a + b, a + b + c).unwrap();
        if f.case != DpCase::I {
            for m in f.threshold..=2 {
                prop_assert_eq!(f.polynomial.eval_at(m), BigInt::from(0));
            }
        }
        // the leading behaviour matches the chromatic polynomial
        let p = chromatic_polynomial(&build_generalized_theta(&ThetaSpec::new(vec![a, a + b, a + b + c]).unwrap())).unwrap();
        let d = p.degree().unwrap();
        prop_assert_eq!(f.polynomial.degree(), Some(d));
        prop_assert_eq!(f.polynomial.coeff(d), p.coeff(d));
    }

    #[test]
    fn feedback_vertex_polynomial_shares_top_terms(g in fvs1_graph()) {
        let r = fvs1_dp_polynomial(&g, Exec::Parallel).unwrap();
        let p = chromatic_polynomial(&g).unwrap();
        let d = p.degree().unwrap();
        for i in d.saturating_sub(2)..=d {
            prop_assert_eq!(r.dp.coeff(i), p.coeff(i));
        }
        let m = g.vertex_count();
        let witness = count_colorings(&g, &r.witness_cover(&g, m).unwrap()).unwrap();
        prop_assert_eq!(BigInt::from(witness), r.dp.eval_at(m as u64));
    }

    #[test]
    fn subset_bounds_hold_on_random_covers(ls in prop::collection::vec(0usize..=2, 2..=3), l1 in 1usize..=3, m in 2usize..=5, seed: u64) {
        let mut lengths = vec![l1];
        lengths.extend(ls.iter().map(|&d| l1.max(2) + d).map(|l| if l % 2 == l1 % 2 { l + 1 } else { l }));
        lengths[1..].sort_unstable();
        let spec = ThetaSpec::new(lengths).unwrap();
        let g = build_generalized_theta(&spec);
        if g.edge_count() > 14 {
            return Ok(());
        }
        let c = random_cover(&g, m, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let r = lemma_bound_checkers(&spec, &c, Exec::Parallel).unwrap();
        prop_assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn precolored_polynomial_matches_count(edges in prop::collection::btree_set((0usize..6, 0usize..6), 0..9), colors in prop::collection::vec(prop::option::of(1usize..=6), 6)) {
        let edges: Vec<_> = edges.into_iter().filter(|(a, b)| a < b).collect();
        let labels: Vec<String> = (0..6).map(|v| format!("x{v}")).collect();
        let g = Graph::new(labels, &edges).unwrap();
        let assignment = colors.iter().enumerate().filter_map(|(v, c)| c.map(|c| (v, c))).collect();
        let pc = Precoloring::new(&g, assignment, 6).unwrap();
        let poly = precolored_polynomial(&g, &pc).unwrap();
        for m in 6..=8 {
            prop_assert_eq!(poly.eval_at(m as u64), BigInt::from(precolored_count(&g, &pc, m)));
        }
    }

    #[test]
    fn graph_text_round_trip(edges in prop::collection::btree_set((0usize..7, 0usize..7), 0..12)) {
        let edges: Vec<_> = edges.into_iter().filter(|(a, b)| a < b).collect();
        let labels: Vec<String> = (0..7).map(|v| format!("v{v}")).collect();
        let g = Graph::new(labels, &edges).unwrap();
        let back = Graph::parse(&g.to_text()).unwrap();
        prop_assert_eq!(back.edge_count(), g.edge_count());
        prop_assert_eq!(chromatic_polynomial(&back).unwrap(), chromatic_polynomial(&g).unwrap());
    }
}

#[test]
fn global_gap_bound_is_informative_at_large_fold() {
    // at m = 1100 the lower bound m^2 - 2^10 m is positive for theta:2,3,3
    let spec = ThetaSpec::new(vec![2, 3, 3]).unwrap();
    let g = build_generalized_theta(&spec);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let c = random_cover(&g, 1100, &mut rng).unwrap();
        let r = lemma_bound_checkers(&spec, &c, Exec::Parallel).unwrap();
        let gb = r.global.expect("twisted cover");
        assert!(gb.lower > BigInt::from(0));
        assert!(gb.holds, "{gb:?}");
    }
}

#[test]
fn search_is_identical_across_strategies_and_symmetry() {
    for ls in [vec![2, 2, 2], vec![2, 2, 3], vec![1, 2, 2, 3]] {
        let g = build_generalized_theta(&ThetaSpec::new(ls).unwrap());
        for m in 2..=4 {
            let base = min_over_covers(&g, m, &SearchOptions { exec: Exec::Sequential, ..SearchOptions::default() }).unwrap();
            let par = min_over_covers(&g, m, &SearchOptions { exec: Exec::Parallel, ..SearchOptions::default() }).unwrap();
            assert_eq!(base, par);
            let conj = min_over_covers(&g, m, &SearchOptions { symmetry: Symmetry::TreeCanonicalConjugacy, ..SearchOptions::default() }).unwrap();
            assert_eq!(conj.minimum, base.minimum);
        }
    }
}

#[test]
fn eventual_maximum_is_never_beaten_past_the_bound() {
    let g = build_generalized_theta(&ThetaSpec::new(vec![2, 2, 3]).unwrap());
    let r = fvs1_dp_polynomial(&g, Exec::Sequential).unwrap();
    let start: u64 = r.bound.clone().try_into().unwrap();
    let d = &r.decomposition;
    for p in dpchroma::cover::PartitionSpec::enumerate(&d.star_vertices()) {
        let w = dpchroma::analysis::partition_weight(d, &p).unwrap();
        for m in start..start + 5 {
            assert_ne!(w.eval_at(m).cmp(&r.weight.eval_at(m)), Ordering::Greater);
        }
    }
}
