//! Property tests over generated datasets.

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

use crate::betti_chern::{c_integer, coeffs_a, m_value};
use crate::corpus::{gen_product, gen_standard_cpn, mutate, MutationKind};
use crate::localization::{abbv_integral, chern_number_c1cn1, ChernMonomial};
use crate::model::{gamma_sum, morse_profile, validate, BettiVector, FixedPoint, FixedPointData};
use crate::rigidity::{detect_defect, extract_ad, rigidity_verdict, tolman_generators, Verdict};
use crate::skeleton::{analyze_skeleton, enumerate_skeletons};

fn distinct_tuple(len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-30i64..=30, len).prop_map(|s| s.into_iter().collect::<Vec<_>>()).prop_shuffle()
}

fn cpn() -> impl Strategy<Value = FixedPointData> {
    distinct_tuple(2..=5).prop_map(|m| gen_standard_cpn(&m).unwrap())
}

fn dataset() -> impl Strategy<Value = FixedPointData> {
    prop_oneof![
        cpn(),
        (distinct_tuple(2..=3), distinct_tuple(2..=3)).prop_map(|(a, b)| gen_product(
            &gen_standard_cpn(&a).unwrap(),
            &gen_standard_cpn(&b).unwrap()
        )
        .unwrap()),
    ]
}

fn shuffled(d: &FixedPointData, seed: u64) -> FixedPointData {
    let mut pts: Vec<FixedPoint> = d.points().to_vec();
    let k = pts.len();
    pts.rotate_left((seed as usize) % k);
    for (i, p) in pts.iter_mut().enumerate() {
        let len = p.weights.len();
        p.weights.rotate_right((seed as usize + i) % len);
    }
    FixedPointData::new(d.n(), pts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gamma_sum_vanishes_and_betti_is_consistent(d in dataset()) {
        let r = validate(&d);
        prop_assert!(r.is_ok(), "{:?}", r);
        prop_assert!(gamma_sum(&d).is_zero());
        let p = morse_profile(&d);
        prop_assert_eq!(p.betti.total(), p.euler);
        prop_assert!(p.betti.is_palindromic());
    }

    #[test]
    fn morse_profile_ignores_ordering(d in dataset(), seed in any::<u64>()) {
        let (a, b) = (morse_profile(&d), morse_profile(&shuffled(&d, seed)));
        prop_assert_eq!(a.betti, b.betti);
        prop_assert_eq!(a.euler, b.euler);
    }

    #[test]
    fn localization_vanishes_below_top_degree(d in dataset()) {
        let n = d.n();
        for deg in 0..n {
            for m in ChernMonomial::all_of_degree(deg, n) {
                prop_assert!(abbv_integral(&d, &m).unwrap().is_zero(), "{}", m);
            }
        }
        for m in ChernMonomial::all_of_degree(n, n) {
            prop_assert!(abbv_integral(&d, &m).unwrap().is_integer(), "{}", m);
        }
        let cn = ChernMonomial::new(vec![n], n).unwrap();
        prop_assert_eq!(abbv_integral(&d, &cn).unwrap(), (BigInt::from(d.len())).into());
    }

    #[test]
    fn top_degree_integrals_are_scale_invariant(d in dataset(), s in 2i64..6) {
        let scaled = d.scaled(s).unwrap();
        for m in ChernMonomial::all_of_degree(d.n(), d.n()) {
            prop_assert_eq!(abbv_integral(&d, &m).unwrap(), abbv_integral(&scaled, &m).unwrap());
        }
    }

    #[test]
    fn skeleton_sums_are_matching_independent(d in dataset(), s in 2i64..5) {
        let expected = chern_number_c1cn1(&d).unwrap();
        let set = enumerate_skeletons(&d, 200, false);
        prop_assert!(!set.skeletons.is_empty());
        let scaled = d.scaled(s).unwrap();
        let scaled_set = enumerate_skeletons(&scaled, 200, false);
        prop_assert_eq!(set.skeletons.len(), scaled_set.skeletons.len());
        for (sk, ss) in set.skeletons.iter().zip(&scaled_set.skeletons) {
            let a = analyze_skeleton(&d, sk).unwrap();
            prop_assert_eq!(&a.c1_sum, &expected);
            prop_assert_eq!(a.edge_count * 2, d.n() * d.len());
            let c1: Vec<_> = sk.edges.iter().map(|e| &e.c1).collect();
            let c1_scaled: Vec<_> = ss.edges.iter().map(|e| &e.c1).collect();
            prop_assert_eq!(c1, c1_scaled);
        }
    }

    #[test]
    fn c_integer_matches_edge_excess(d in dataset()) {
        let b = morse_profile(&d).betti;
        for sk in enumerate_skeletons(&d, 200, false).skeletons {
            let a = analyze_skeleton(&d, &sk).unwrap();
            let c = c_integer(&a.rho, d.n(), &b).unwrap().value;
            prop_assert_eq!(&c, &(&a.c1_sum - &a.rho * BigInt::from(a.edge_count)));
            prop_assert!(c >= BigInt::zero());
            prop_assert_eq!(c.is_zero(), a.all_equal_rho);
        }
    }

    #[test]
    fn a_coefficients(rho in -20i64..40, n in 1usize..30) {
        let rho = BigInt::from(rho);
        let a = coeffs_a(&rho, n);
        let total: BigInt = a.iter().sum();
        prop_assert_eq!(total, m_value(&rho, n));
        if rho >= BigInt::from(2) && n >= 4 {
            for i in 1..n / 2 {
                prop_assert!(a[i] < a[i - 1], "A_{} = {} vs A_{} = {}", i, a[i], i - 1, a[i - 1]);
            }
        }
    }

    #[test]
    fn unimodal_betti_excludes_large_rho(lower in prop::collection::vec(0usize..4, 0..6), extra in 0i64..10, odd in any::<bool>()) {
        let mut half = vec![1usize];
        for step in lower {
            half.push(half.last().unwrap() + step);
        }
        let n = 2 * (half.len() - 1) + usize::from(odd);
        let b = BettiVector((0..=n).map(|k| half[k.min(n - k)]).collect());
        prop_assume!(n >= 1);
        let rho = BigInt::from(n as i64 + 2 + extra);
        prop_assert!(c_integer(&rho, n, &b).unwrap().value < BigInt::zero());
    }

    #[test]
    fn standard_cpn_is_rigid(m in distinct_tuple(2..=6)) {
        let d = gen_standard_cpn(&m).unwrap();
        let x = extract_ad(&d).unwrap();
        let mut sorted = m.clone();
        sorted.sort_unstable();
        let a: Vec<BigInt> = sorted.iter().map(|&v| BigInt::from(sorted[0] - v)).collect();
        prop_assert_eq!(&x.a, &a);
        let sum: BigInt = a.iter().sum();
        prop_assert_eq!(&x.d, &-sum);
        let cert = rigidity_verdict(&d);
        prop_assert_eq!(&cert.verdict, &Verdict::Pass);
        prop_assert!(cert.laurent.iter().all(|q| q.as_ref().is_some_and(|q| q.is_one())));
    }

    #[test]
    fn rigidity_ignores_point_order(d in cpn(), seed in any::<u64>()) {
        let (a, b) = (rigidity_verdict(&d), rigidity_verdict(&shuffled(&d, seed)));
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.a, b.a);
        prop_assert_eq!(a.tolman_coeffs, b.tolman_coeffs);
    }

    #[test]
    fn rigidity_is_homogeneous(d in cpn(), s in 2i64..5) {
        let scaled = d.scaled(s).unwrap();
        let (a, b) = (rigidity_verdict(&d), rigidity_verdict(&scaled));
        prop_assert_eq!(&b.verdict, &Verdict::Pass);
        let sa: Vec<BigInt> = a.a.iter().map(|x| x * s).collect();
        prop_assert_eq!(&b.a, &sa);
        prop_assert_eq!(&a.weight_match, &b.weight_match);
        let (ta, tb) = (tolman_generators(&d).unwrap(), tolman_generators(&scaled).unwrap());
        prop_assert_eq!(ta.pairings, tb.pairings);
        prop_assert!(tb.ok);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn every_mutation_is_detected(m in distinct_tuple(3..=5), seed in any::<u64>(), kind in 0usize..4) {
        // on CP^1 a swap only relabels the two points
        let d = gen_standard_cpn(&m).unwrap();
        let kind = MutationKind::parse(MutationKind::NAMES[kind], std::num::NonZeroI64::new(1).unwrap()).unwrap();
        let m = mutate(&d, kind, seed);
        prop_assert_eq!(&m, &mutate(&d, kind, seed));
        prop_assert!(detect_defect(&m).is_some(), "{} undetected", kind);
    }
}
