use std::cmp::Ordering;

use proptest::prelude::*;
use sharko::{
    default_omega, double_pattern, entropy_lower_bound, enumerate_loops, forces, induced_pattern,
    lap_count, pattern_entropy, sharkovskii_compare, sharkovskii_decompose, CylinderPoint, Loop,
    PLMap, Pattern, Rational, SignedGraph, UncoupledSkewProduct, DEFAULT_TOL,
};

/// A uniformly random cyclic permutation of `1..=n`: the cycle
/// `1 -> order[0] -> ... -> 1`.
fn cyclic(max: usize) -> impl Strategy<Value = Pattern> {
    (1..=max)
        .prop_flat_map(|n| Just((2..=n).collect::<Vec<usize>>()).prop_shuffle())
        .prop_map(|order| {
            let n = order.len() + 1;
            let mut cycle = vec![1];
            cycle.extend(order);
            let mut images = vec![0; n];
            for k in 0..n {
                images[cycle[k] - 1] = cycle[(k + 1) % n];
            }
            Pattern::new(images).unwrap()
        })
}

fn h(tau: &Pattern) -> f64 {
    pattern_entropy(tau, DEFAULT_TOL).unwrap().h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pattern_json_round_trip(tau in cyclic(9)) {
        let s = serde_json::to_string(&tau).unwrap();
        prop_assert_eq!(serde_json::from_str::<Pattern>(&s).unwrap(), tau.clone());
        prop_assert_eq!(tau.to_string().parse::<Pattern>().unwrap(), tau);
    }

    #[test]
    fn sharkovskii_order_is_total(a in 1u64..5000, b in 1u64..5000, c in 1u64..5000) {
        prop_assert_eq!(sharkovskii_compare(a, b), sharkovskii_compare(b, a).reverse());
        prop_assert_eq!(sharkovskii_compare(a, b) == Ordering::Equal, a == b);
        if sharkovskii_compare(a, b) == Ordering::Greater && sharkovskii_compare(b, c) == Ordering::Greater {
            prop_assert_eq!(sharkovskii_compare(a, c), Ordering::Greater);
        }
        prop_assert_eq!(sharkovskii_decompose(a).period(), a);
    }

    #[test]
    fn mirror_reverses_graph_and_keeps_entropy(tau in cyclic(7)) {
        let m = tau.mirror();
        prop_assert_eq!(m.mirror(), tau.clone());
        prop_assert_eq!(SignedGraph::of(&m), SignedGraph::of(&tau).reversed());
        prop_assert!((h(&m) - h(&tau)).abs() < 1e-9);
    }

    #[test]
    fn entropy_respects_lower_bound(tau in cyclic(8)) {
        let bound = entropy_lower_bound(tau.period() as u64).unwrap();
        prop_assert!(h(&tau) >= bound - 1e-9);
    }

    #[test]
    fn doubling_halves_entropy(tau in cyclic(6)) {
        let d = double_pattern(&tau);
        prop_assert_eq!(d.period(), 2 * tau.period());
        prop_assert!((h(&d) - h(&tau) / 2.0).abs() < 1e-9);
        prop_assert!(forces(&d, &Pattern::new(vec![2, 1]).unwrap()).unwrap());
    }

    #[test]
    fn forcing_basics(tau in cyclic(6)) {
        prop_assert!(forces(&tau, &tau).unwrap());
        prop_assert!(forces(&tau, &Pattern::new(vec![1]).unwrap()).unwrap());
        if tau.period() > 1 {
            prop_assert!(!forces(&Pattern::new(vec![1]).unwrap(), &tau).unwrap());
        }
    }

    #[test]
    fn induced_patterns_are_forced(tau in cyclic(5), m in 1usize..=5) {
        let g = SignedGraph::of(&tau);
        for l in enumerate_loops(&g, m).iter().filter(|l| l.is_simple()) {
            if let Some(nu) = induced_pattern(&tau, l).unwrap() {
                prop_assert_eq!(nu.period(), m);
                prop_assert!(forces(&tau, &nu).unwrap());
            }
        }
    }

    #[test]
    fn lap_recursion_matches_composition(tau in cyclic(6), k in 1usize..=4) {
        let explicit = PLMap::new(&tau).power(k).laps();
        prop_assert_eq!(lap_count(&tau, k).unwrap(), explicit.into());
    }

    #[test]
    fn loops_are_closed_walks(tau in cyclic(6), m in 1usize..=5) {
        let g = SignedGraph::of(&tau);
        for l in enumerate_loops(&g, m) {
            prop_assert_eq!(l.len(), m);
            prop_assert!(Loop::new(&g, l.vertices().to_vec()).is_ok());
        }
    }

    #[test]
    fn cylinder_round_trip(tau in cyclic(7)) {
        let f = UncoupledSkewProduct::new(&tau);
        let orbit = f.horizontal_orbit().unwrap();
        prop_assert_eq!(f.extract_pattern_from_bands(&orbit.bands).unwrap(), tau.clone());
        prop_assert_eq!(f.basic_band_graph(&orbit).unwrap(), SignedGraph::of(&tau));
    }

    #[test]
    fn skew_product_is_uncoupled(
        tau in cyclic(6),
        num in 0i64..1_000_000,
        xnum in 0i64..1_000,
        k in 0usize..12,
    ) {
        let f = UncoupledSkewProduct::new(&tau);
        let n = tau.period() as i64;
        let theta = Rational::new(num.into(), 1_000_000.into());
        let x = Rational::new((1_000 + xnum * (n - 1)).into(), 1_000.into());
        let p = f.iterate(&CylinderPoint { theta: theta.clone(), x: x.clone() }, k).unwrap();
        prop_assert_eq!(p.x, PLMap::new(&tau).eval_iter(&x, k).unwrap());
        let turns = &theta + default_omega() * Rational::from_integer((k as i64).into()) - &p.theta;
        prop_assert!(turns.is_integer());
        prop_assert!(p.theta >= Rational::from_integer(0.into()) && p.theta < Rational::from_integer(1.into()));
    }
}
