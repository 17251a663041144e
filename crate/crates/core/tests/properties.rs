mod oracle;

use std::collections::BTreeMap;

use combq::cyclotomic::{cyclotomic_polynomial, Cyclotomic};
use combq::groups::{mz_splitter, GeneratedRep, Permutation};
use combq::interferometer::{arm_state, enumerate_branches, Arm, Circuit, OpticalElement};
use combq::linalg::{born, CycMatrix, CycVector, DEFAULT_ORDER_BOUND};
use combq::transport::{sequence_at, sequence_index, transition_probability, TransportBunch};
use combq::walk::{most_probable_path, one_step_entropy, WalkObservation, WalkParams};
use combq::zeno::{series_period, survival_series, Period};
use combq::Rational;
use num_traits::{One, Zero};
use oracle::q;
use proptest::prelude::*;

const CONDUCTORS: [u32; 6] = [1, 3, 4, 5, 8, 12];

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn element_in(n: u32) -> impl Strategy<Value = Cyclotomic> {
    proptest::collection::vec((0i64..n as i64 * 2, rational()), 0..5)
        .prop_map(move |terms| Cyclotomic::from_terms(n, &terms).unwrap())
}

fn element() -> impl Strategy<Value = Cyclotomic> {
    proptest::sample::select(&CONDUCTORS[..]).prop_flat_map(element_in)
}

fn triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
    (element(), element(), element())
}

proptest! {
    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Cyclotomic::one(1).unwrap(), a.clone());
    }

    #[test]
    fn nonzero_elements_invert(a in element()) {
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.invert().unwrap()).is_one());
    }

    #[test]
    fn conjugation_is_a_ring_homomorphism((a, b, _c) in triple()) {
        prop_assert_eq!((&a * &b).conjugate(), &a.conjugate() * &b.conjugate());
        prop_assert_eq!((&a + &b).conjugate(), &a.conjugate() + &b.conjugate());
        prop_assert_eq!(a.conjugate().conjugate(), a.clone());
        prop_assert!(a.abs_squared().is_real());
    }

    #[test]
    fn promotion_preserves_value(a in element(), k in 1u32..4) {
        let m = a.conductor() * k;
        prop_assert_eq!(a.promote(m).unwrap(), a.clone());
        let z = a.to_complex() - a.promote(m).unwrap().to_complex();
        prop_assert!(z.norm() < 1e-9);
    }

    #[test]
    fn cyclotomic_polynomial_divides_x_n_minus_1(n in 1u32..60) {
        let phi = cyclotomic_polynomial(n).unwrap();
        // long division of x^n - 1 by the monic Φ_n
        let mut rem = vec![0i64; n as usize + 1];
        rem[0] = -1;
        rem[n as usize] = 1;
        let d = phi.len() - 1;
        prop_assert_eq!(phi[d], 1);
        for top in (d..=n as usize).rev() {
            let c = rem[top];
            if c != 0 {
                for (i, &p) in phi.iter().enumerate() {
                    rem[top - d + i] -= c * p;
                }
            }
        }
        prop_assert!(rem.iter().all(|&c| c == 0));
        prop_assert!(Cyclotomic::root_of_unity(n, 1).unwrap().pow(n as u64).is_one());
    }
}

fn vector(n: u32, dim: usize) -> impl Strategy<Value = CycVector> {
    proptest::collection::vec(element_in(n), dim)
        .prop_map(|v| CycVector::new(v).unwrap())
        .prop_filter("nonzero", |v| !v.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn born_is_symmetric_and_scale_invariant(a in vector(8, 3), b in vector(8, 3), s in element_in(8)) {
        prop_assume!(!s.is_zero());
        let p = born(&a, &b).unwrap();
        prop_assert_eq!(&p, &born(&b, &a).unwrap());
        prop_assert_eq!(&p, &born(&a.scale(&s).unwrap(), &b).unwrap());
        prop_assert!(p.is_real());
        let f = p.to_f64();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        prop_assert!(born(&a, &a).unwrap().is_one());
    }
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

fn permutation_pair() -> impl Strategy<Value = (Permutation, Permutation)> {
    (1usize..8).prop_flat_map(|n| (permutation(n), permutation(n)))
}

proptest! {
    #[test]
    fn permutation_matrices_are_a_homomorphism((p, r) in permutation_pair()) {
        let composed = p.then(&r).unwrap().matrix();
        prop_assert_eq!(composed, p.matrix().compose(&r.matrix()).unwrap());
        prop_assert!(p.then(&p.inverse()).unwrap().matrix().is_identity());
        prop_assert_eq!(p.matrix().order(DEFAULT_ORDER_BOUND).unwrap(), Some(p.order()));
        prop_assert!(p.matrix().is_unitary());
    }
}

fn optical_element() -> impl Strategy<Value = OpticalElement> {
    let arm = prop_oneof![Just(Arm::Upper), Just(Arm::Lower)];
    prop_oneof![
        Just(OpticalElement::balanced_splitter()),
        Just(OpticalElement::Mirror),
        (arm.clone(), -8i64..8, proptest::sample::select(vec![3u32, 4, 8, 12]))
            .prop_map(|(a, k, n)| OpticalElement::phase_shifter(a, k, n).unwrap()),
        arm.prop_map(OpticalElement::Detector),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn branch_probabilities_sum_to_one(
        elements in proptest::collection::vec(optical_element(), 0..7),
        lower in any::<bool>(),
    ) {
        let circuit = Circuit::new(elements).unwrap();
        let input = arm_state(if lower { Arm::Lower } else { Arm::Upper });
        let branches = enumerate_branches(&circuit, &input).unwrap();
        let total = branches.iter().fold(Cyclotomic::zero(1).unwrap(), |acc, b| &acc + &b.probability);
        prop_assert!(total.is_one(), "total {} for {}", total, circuit);
        let reparsed: Circuit = circuit.to_string().parse().unwrap();
        prop_assert_eq!(reparsed.to_string(), circuit.to_string());
    }
}

fn c8_states() -> impl Strategy<Value = (CycVector, CycVector)> {
    (vector(8, 2), vector(8, 2))
}

fn weights(count: u64) -> impl Strategy<Value = BTreeMap<u64, Rational>> {
    proptest::collection::btree_map(0..count, 1i64..5, 1..5).prop_map(|raw| {
        let total: i64 = raw.values().sum();
        raw.into_iter().map(|(k, w)| (k, q(w, total))).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transport_is_invariant_under_relabeling(
        (prev, next) in c8_states(),
        order in Just((0..8usize).collect::<Vec<_>>()).prop_shuffle(),
        w in weights(64),
    ) {
        let rep = GeneratedRep::cyclic_mz(8).unwrap();
        // relabeled group: new label i carries old element order[i]
        let relabeled = GeneratedRep::with_orders(
            order.iter().map(|&g| (rep.labels()[g].clone(), rep.matrix(g).clone(), rep.orders()[g])).collect(),
        )
        .unwrap();
        let mut position = [0usize; 8];
        for (i, &g) in order.iter().enumerate() {
            position[g] = i;
        }
        let moved: BTreeMap<u64, Rational> = w
            .iter()
            .map(|(&idx, r)| {
                let seq: Vec<usize> = sequence_at(idx, 8, 2).iter().map(|&g| position[g]).collect();
                (sequence_index(&seq, 8).unwrap(), r.clone())
            })
            .collect();
        let a = transition_probability(&TransportBunch::new(rep, 2, w).unwrap(), &prev, &next).unwrap();
        let b = transition_probability(&TransportBunch::new(relabeled, 2, moved).unwrap(), &prev, &next).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn transport_is_affine_in_weights(
        (prev, next) in c8_states(),
        w1 in weights(64),
        w2 in weights(64),
        lambda in (0i64..=6).prop_map(|k| q(k, 6)),
    ) {
        let rep = GeneratedRep::cyclic_mz(8).unwrap();
        let p = |w: BTreeMap<u64, Rational>| {
            transition_probability(&TransportBunch::new(rep.clone(), 2, w).unwrap(), &prev, &next).unwrap()
        };
        let mut mixed: BTreeMap<u64, Rational> = BTreeMap::new();
        let mu = Rational::one() - &lambda;
        for (k, r) in &w1 {
            *mixed.entry(*k).or_insert_with(Rational::zero) += r * &lambda;
        }
        for (k, r) in &w2 {
            *mixed.entry(*k).or_insert_with(Rational::zero) += r * &mu;
        }
        let expected = &p(w1).scale(&lambda) + &p(w2).scale(&mu);
        prop_assert_eq!(p(mixed), expected);
    }
}

fn drift() -> impl Strategy<Value = WalkParams> {
    (-3i64..=3).prop_map(|k| WalkParams::from_ratio(k, 4).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn one_step_entropy_is_concave(params in drift(), half in 2u64..40, k in 0u64..100) {
        let dt = 2 * half;
        let x = 2 * (k % (half - 1)) as i64 - (dt as i64 - 2) + 2;
        prop_assume!(x.unsigned_abs() + 2 <= dt);
        let s = |x: i64| one_step_entropy(x, dt, &params).unwrap();
        prop_assert!(s(x - 2) + s(x + 2) <= 2.0 * s(x) + 1e-9);
    }

    #[test]
    fn equal_spread_is_optimal(params in drift(), intervals in 2u64..5, dt_half in 1u64..5, d_half in -3i64..=3) {
        let dt = 2 * dt_half;
        let d = 2 * d_half;
        prop_assume!(d.unsigned_abs() <= dt);
        let end = WalkObservation { t: intervals * dt, x: d * intervals as i64 };
        let times: Vec<u64> = (1..intervals).map(|i| i * dt).collect();
        let path = most_probable_path(WalkObservation { t: 0, x: 0 }, end, &times, std::slice::from_ref(&params)).unwrap();
        for (i, p) in path.points.iter().enumerate() {
            prop_assert_eq!(p.x, d * i as i64);
        }
    }
}

fn unitary_8() -> impl Strategy<Value = CycMatrix> {
    (3u32..=12, 1u64..12).prop_map(|(n, k)| mz_splitter(n).unwrap().power(k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn survival_is_dagger_invariant_and_palindromic(u in unitary_8(), coords in proptest::collection::vec(-3i64..=3, 2)) {
        prop_assume!(coords.iter().any(|&c| c != 0));
        let psi = CycVector::from_integers(u.conductor(), &coords).unwrap();
        let order = u.order(DEFAULT_ORDER_BOUND).unwrap().unwrap();
        let forward = survival_series(&u, &psi, order).unwrap();
        let backward = survival_series(&u.dagger(), &psi, order).unwrap();
        prop_assert_eq!(forward.probabilities(), backward.probabilities());
        for t in 0..=order {
            prop_assert_eq!(forward.get(t), forward.get(order - t));
        }
        prop_assert!(forward.get(0).is_one());
        if let Period::Finite(d) = series_period(&forward, order).unwrap() {
            prop_assert_eq!(order % d, 0);
        }
    }
}
