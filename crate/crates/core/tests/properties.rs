use std::collections::BTreeSet;

use csl_core::covering::{
    chromatic_finite_cover, chromatic_semilinear_cover, finite_set_cover, lambda_bound,
    simplex_lattice_cover,
};
use csl_core::layers::{representation_function, representation_mass, threshold_layer};
use csl_core::oracle::{brute_rep_function, min_translate_cover, verify_cover};
use csl_core::set_model::{
    enumerate_window, member_up_to_bound, normalize_tuple, refine_to_unbounded,
};
use csl_core::sumset::{chromatic_sumset, chromatic_sumset_window, h_fold, minkowski_sum};
use csl_core::{
    AmbientGroup, ColorClass, ColorTuple, Element, FiniteSet, HVector, Homomorphism, LinearSet,
    SemilinearSet, Window,
};
use itertools::Itertools;
use proptest::prelude::*;

fn ints(v: &[i64]) -> FiniteSet {
    FiniteSet::integers(v.iter().copied()).unwrap()
}

fn vals(s: &FiniteSet) -> Vec<i64> {
    s.to_ints().unwrap()
}

fn small_set(lo: i64, hi: i64, max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(lo..=hi, 1..=max_len).prop_map(|s| s.into_iter().collect())
}

fn tuple_and_h(
    lo: i64,
    hi: i64,
    max_len: usize,
    max_h: u64,
) -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<u64>)> {
    (1usize..=2).prop_flat_map(move |q| {
        (
            prop::collection::vec(small_set(lo, hi, max_len), q),
            prop::collection::vec(0..=max_h, q),
        )
    })
}

fn tuple(sets: &[Vec<i64>]) -> ColorTuple {
    let refs: Vec<&[i64]> = sets.iter().map(Vec::as_slice).collect();
    ColorTuple::integers(&refs).unwrap()
}

fn mixed() -> AmbientGroup {
    AmbientGroup::new(2, &[6]).unwrap()
}

fn mixed_element() -> impl Strategy<Value = (i64, i64, i64)> {
    (-50i64..50, -50i64..50, -20i64..20)
}

fn el(g: &AmbientGroup, (a, b, c): (i64, i64, i64)) -> Element {
    g.element(&[a, b], &[c]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_addition_is_associative_and_commutative(x in mixed_element(), y in mixed_element(), z in mixed_element()) {
        let g = mixed();
        let (x, y, z) = (el(&g, x), el(&g, y), el(&g, z));
        let left = g.add(&g.add(&x, &y).unwrap(), &z).unwrap();
        let right = g.add(&x, &g.add(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(g.add(&x, &y).unwrap(), g.add(&y, &x).unwrap());
        prop_assert_eq!(g.sub(&x, &x).unwrap(), g.zero());
    }

    #[test]
    fn scale_is_repeated_addition(x in mixed_element(), n in 0i64..=8) {
        let g = mixed();
        let x = el(&g, x);
        let mut acc = g.zero();
        for _ in 0..n {
            acc = g.add(&acc, &x).unwrap();
        }
        prop_assert_eq!(g.scale(n, &x).unwrap(), acc);
    }

    #[test]
    fn homomorphisms_distribute_over_addition(x in mixed_element(), y in mixed_element(), a in -3i64..3, b in -3i64..3) {
        let g = mixed();
        let target = AmbientGroup::new(1, &[3]).unwrap();
        // e1 -> (a, 1), e2 -> (b, 0), torsion generator of order 6 -> (0, 1) has order 3
        let images = vec![
            target.element(&[a], &[1]).unwrap(),
            target.element(&[b], &[0]).unwrap(),
            target.element(&[0], &[1]).unwrap(),
        ];
        let phi = Homomorphism::new(g.clone(), target.clone(), images).unwrap();
        let (x, y) = (el(&g, x), el(&g, y));
        let lhs = phi.apply(&g.add(&x, &y).unwrap()).unwrap();
        let rhs = target.add(&phi.apply(&x).unwrap(), &phi.apply(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn minkowski_sum_laws(a in small_set(-8, 8, 5), b in small_set(-8, 8, 5), c in small_set(-8, 8, 5)) {
        let (a, b, c) = (ints(&a), ints(&b), ints(&c));
        let ab = minkowski_sum(&a, &b).unwrap();
        prop_assert_eq!(&ab, &minkowski_sum(&b, &a).unwrap());
        prop_assert_eq!(
            minkowski_sum(&ab, &c).unwrap(),
            minkowski_sum(&a, &minkowski_sum(&b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(minkowski_sum(&a, &ints(&[0])).unwrap(), a.clone());
        let naive: BTreeSet<i64> = vals(&a).iter().cartesian_product(vals(&b)).map(|(x, y)| x + y).collect();
        prop_assert_eq!(vals(&ab), naive.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn scaling_identity_and_distributivity((sets, h) in tuple_and_h(-3, 3, 3, 3), r in 1u64..=3) {
        let t = tuple(&sets);
        let h = HVector::new(h);
        let base = chromatic_sumset(&t, &h).unwrap();
        prop_assert_eq!(h_fold(&base, r).unwrap(), chromatic_sumset(&t, &h.scaled(r)).unwrap());
        let parts: Vec<FiniteSet> = sets
            .iter()
            .zip(h.entries())
            .map(|(a, &hi)| h_fold(&h_fold(&ints(a), hi).unwrap(), r).unwrap())
            .collect();
        let spread = parts.iter().skip(1).fold(parts[0].clone(), |acc, p| minkowski_sum(&acc, p).unwrap());
        prop_assert_eq!(h_fold(&base, r).unwrap(), spread);
    }

    #[test]
    fn window_truncation_agrees((sets, h) in tuple_and_h(-4, 6, 3, 4), lo in -10i64..10, len in 0i64..20) {
        let t = tuple(&sets);
        let h = HVector::new(h);
        let w = Window::interval(lo, lo + len).unwrap();
        let full = chromatic_sumset(&t, &h).unwrap();
        let inside = chromatic_sumset_window(&t, &h, &w).unwrap();
        prop_assert_eq!(inside, full.filter(|x| w.contains(x)));
    }

    #[test]
    fn normalization_round_trip((sets, h) in tuple_and_h(-6, 9, 3, 3)) {
        let t = tuple(&sets);
        let h = HVector::new(h);
        let (norm, rec) = normalize_tuple(&t).unwrap();
        let back: BTreeSet<i64> = match norm {
            Some(n) => vals(&chromatic_sumset(&n, &rec.restrict(&h)).unwrap())
                .into_iter()
                .map(|v| rec.transport(v, &h))
                .collect(),
            None => [rec.shift(&h)].into(),
        };
        prop_assert_eq!(vals(&chromatic_sumset(&t, &h).unwrap()), back.into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn refinement_preserves_points(
        pieces in prop::collection::vec(
            (0i64..6, prop::collection::vec((1i64..5, 0u64..3), 1..=2), any::<bool>()),
            1..=2,
        ),
    ) {
        let g = AmbientGroup::integers();
        let pieces = pieces
            .into_iter()
            .map(|(base, gens, bounded)| {
                let base = g.int(base).unwrap();
                let els: Vec<Element> = gens.iter().map(|(v, _)| g.int(*v).unwrap()).collect();
                if bounded {
                    let bounds = gens.iter().map(|(_, b)| *b).collect();
                    LinearSet::bounded(base, els, bounds).unwrap()
                } else {
                    LinearSet::unbounded(base, els)
                }
            })
            .collect();
        let s = SemilinearSet::new(pieces).unwrap();
        let refined = refine_to_unbounded(&g, &s).unwrap();
        prop_assert!(refined.is_refined());
        let w = Window::interval(-2, 40).unwrap();
        let before = enumerate_window(&g, &ColorClass::Semilinear(s.clone()), &w).unwrap();
        let after = enumerate_window(&g, &ColorClass::Semilinear(refined), &w).unwrap();
        prop_assert_eq!(&before, &after);
        let c = ColorClass::Semilinear(s);
        for n in -2..=40 {
            let x = g.int(n).unwrap();
            prop_assert_eq!(member_up_to_bound(&g, &c, &x, &w).unwrap(), before.contains(&x));
        }
    }

    #[test]
    fn lattice_plan_catches_every_point(d in 1usize..=3, t in 1u64..=12, extra in 0u64..=11, pick in prop::collection::vec(0u64..=12, 3)) {
        let radius = (t + extra).min(12);
        let plan = simplex_lattice_cover(d, radius, t).unwrap();
        // a point of the simplex built from the picks, trimmed to sum <= R
        let mut left = radius;
        let x: Vec<i64> = pick[..d].iter().map(|&p| { let v = p.min(left); left -= v; v as i64 }).collect();
        let u = plan.assigned_translate(&x);
        prop_assert!(plan.translates.binary_search(&u).is_ok());
        prop_assert!(plan.tile_contains(&u, &x));
    }

    #[test]
    fn finite_covers_verify_within_bound((sets, h) in tuple_and_h(-3, 3, 3, 4), r in 1u64..=3) {
        let t = tuple(&sets);
        let h = HVector::new(h);
        let mut cert = chromatic_finite_cover(&t, r, &h).unwrap();
        let expected: u128 = sets.iter().map(|a| lambda_bound(r, a.len() as u64).unwrap()).product();
        prop_assert_eq!(cert.bound, expected);
        prop_assert!(cert.within_bound());
        let report = cert.verify().unwrap();
        prop_assert!(report.passed, "{}", report);
        let again = verify_cover(&t, r, &h, &cert.cover, None).unwrap();
        prop_assert!(again.passed);
    }

    #[test]
    fn one_color_reduces_to_finite_set_cover(a in small_set(-5, 5, 4), r in 1u64..=3, h in 0u64..=5) {
        let t = tuple(std::slice::from_ref(&a));
        let cert = chromatic_finite_cover(&t, r, &HVector::new(vec![h])).unwrap();
        prop_assert_eq!(cert.cover, finite_set_cover(&ints(&a), r, h).unwrap());
    }

    #[test]
    fn rep_profile_mass((sets, h) in tuple_and_h(0, 6, 4, 5)) {
        let t = tuple(&sets);
        let h = HVector::new(h);
        let profile = representation_function(&t, &h).unwrap();
        let sizes: Vec<usize> = sets.iter().map(Vec::len).collect();
        // multisets of size h from k elements: C(k + h - 1, h)
        let mut expected: u128 = 1;
        for (&k, &hi) in sizes.iter().zip(h.entries()) {
            let mut c: u128 = 1;
            for i in 1..=hi as u128 {
                c = c * (k as u128 + i - 1) / i;
            }
            expected *= c;
        }
        prop_assert_eq!(profile.total(), expected);
        prop_assert_eq!(representation_mass(&sizes, &h).unwrap(), expected);
        prop_assert!(profile.counts.values().all(|&c| c > 0));
    }

    #[test]
    fn dp_matches_enumeration((sets, h) in tuple_and_h(0, 4, 3, 4)) {
        let t = tuple(&sets);
        let h = HVector::new(h);
        prop_assert_eq!(representation_function(&t, &h).unwrap(), brute_rep_function(&t, &h).unwrap());
    }

    #[test]
    fn layers_nest_and_start_at_the_sumset((sets, h) in tuple_and_h(-2, 5, 3, 4), thr in 1u64..=6) {
        let t = tuple(&sets);
        let h = HVector::new(h);
        prop_assert_eq!(threshold_layer(&t, &h, 1).unwrap(), chromatic_sumset(&t, &h).unwrap());
        let upper = threshold_layer(&t, &h, thr + 1).unwrap();
        let lower = threshold_layer(&t, &h, thr).unwrap();
        prop_assert!(upper.is_subset(&lower));
    }

    #[test]
    fn minimum_covers_are_optimal(s in small_set(-6, 6, 12), t in small_set(-3, 3, 4)) {
        let (s_set, t_set) = (ints(&s), ints(&t));
        let x = min_translate_cover(&s_set, &t_set).unwrap();
        let covered = |xs: &[i64]| s.iter().all(|v| xs.iter().any(|x| t.contains(&(v - x))));
        prop_assert!(covered(&vals(&x)));
        // every useful translate is some s - t
        let candidates: Vec<i64> = s.iter().cartesian_product(&t).map(|(a, b)| a - b).collect::<BTreeSet<_>>().into_iter().collect();
        let k = x.len();
        if k > 1 {
            for smaller in candidates.iter().copied().combinations(k - 1) {
                prop_assert!(!covered(&smaller), "{:?} covers with fewer translates", smaller);
            }
        }
    }
}

fn two_piece(g: &AmbientGroup, a: i64, b: i64, step: i64) -> ColorClass {
    ColorClass::Semilinear(
        SemilinearSet::new(vec![
            LinearSet::unbounded(g.int(a).unwrap(), vec![g.int(step).unwrap()]),
            LinearSet::unbounded(g.int(b).unwrap(), vec![g.int(step).unwrap()]),
        ])
        .unwrap(),
    )
}

#[test]
fn semilinear_success_is_upward_closed() {
    let g = AmbientGroup::integers();
    let t = ColorTuple::new(
        g.clone(),
        vec![
            two_piece(&g, 0, 1, 2),
            ColorClass::Semilinear(
                SemilinearSet::new(vec![
                    LinearSet::unbounded(g.int(0).unwrap(), vec![g.int(3).unwrap()]),
                    LinearSet::unbounded(g.int(1).unwrap(), vec![g.int(3).unwrap()]),
                    LinearSet::unbounded(g.int(2).unwrap(), vec![g.int(3).unwrap()]),
                ])
                .unwrap(),
            ),
        ],
    )
    .unwrap();
    for r in 1..=2 {
        let grid: Vec<(u64, u64)> = (1..=14).cartesian_product(1..=14).collect();
        let ok: BTreeSet<(u64, u64)> = grid
            .iter()
            .copied()
            .filter(|&(a, b)| chromatic_semilinear_cover(&t, r, &HVector::new(vec![a, b])).is_ok())
            .collect();
        for &(a, b) in &ok {
            for &(c, d) in &grid {
                if c >= a && d >= b {
                    assert!(
                        ok.contains(&(c, d)),
                        "r={r}: ok at ({a},{b}) but not at ({c},{d})"
                    );
                }
            }
        }
        assert!(ok.contains(&(14, 14)));
    }
}
