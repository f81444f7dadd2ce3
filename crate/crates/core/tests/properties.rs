use hodge_lattice_core::asymnorm::{ModelMetric, Region};
use hodge_lattice_core::exactlin::{eigen_projectors, jordan_chevalley, CycScalar, ExactMatrix};
use hodge_lattice_core::fixtures::{
    nilpotent_of_type, random_nilpotent, random_quasi_unipotent, unipotent_jordan,
};
use hodge_lattice_core::l2decide::{decide, decide_with_bases, HomogeneousBasis};
use hodge_lattice_core::lattice::{CanonicalFrame, FrameBasis, LaurentPoly, LaurentSection};
use hodge_lattice_core::monodromy::validate_tuple;
use hodge_lattice_core::quadrature::{log_weighted_disk_integral, default_cutoffs};
use hodge_lattice_core::weight::{multi_grading, weight_filtration};
use nalgebra::DVector;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scalar(order: u32) -> impl Strategy<Value = CycScalar> {
    proptest::collection::vec((-6i64..=6, 1i64..=4), 12).prop_map(move |cs| {
        let coeffs = cs
            .into_iter()
            .map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
            .collect();
        CycScalar::from_power_coeffs(coeffs, order).unwrap()
    })
}

fn field_triple() -> impl Strategy<Value = (CycScalar, CycScalar, CycScalar)> {
    prop_oneof![Just(1u32), Just(3), Just(4), Just(5), Just(8), Just(12)]
        .prop_flat_map(|m| (scalar(m), scalar(m), scalar(m)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b, c) in field_triple()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn mixed_orders_lift_consistently(a in scalar(3), b in scalar(4)) {
        let s = &a * &b;
        prop_assert_eq!(s.order(), 12);
        prop_assert!((s.to_complex() - a.to_complex() * b.to_complex()).norm() < 1e-9 * (1.0 + s.to_complex().norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jordan_chevalley_on_random_matrices(seed in any::<u64>(), n in 1usize..=4, m in prop_oneof![Just(1u32), Just(2), Just(3), Just(4), Just(6)]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_quasi_unipotent(&mut rng, n, m);
        let (s, u) = jordan_chevalley(&t).unwrap();
        prop_assert_eq!(s.mul(&u), t.clone());
        prop_assert_eq!(u.mul(&s), t.clone());
        prop_assert!(s.pow(m).is_identity());
        prop_assert!(u.sub(&ExactMatrix::identity(n, u.order())).is_nilpotent());
    }

    #[test]
    fn projectors_resolve_identity(seed in any::<u64>(), n in 1usize..=4, m in prop_oneof![Just(2u32), Just(3), Just(4), Just(6)]) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_quasi_unipotent(&mut rng, n, m);
        let tuple = validate_tuple(&[t.clone()]).unwrap();
        let log = &tuple.logs().logs[0];
        let eig: Vec<CycScalar> = log.blocks.iter().map(|b| b.eigenvalue.clone()).collect();
        let ps = eigen_projectors(&log.semisimple, &eig).unwrap();
        let order = log.semisimple.order();
        let mut sum = ExactMatrix::zeros(n, n, order);
        for (i, (l, p)) in ps.iter().enumerate() {
            sum = sum.add(p);
            prop_assert_eq!(log.semisimple.mul(p), p.scale(l));
            for (j, (_, q)) in ps.iter().enumerate() {
                let pq = p.mul(q);
                if i == j { prop_assert_eq!(&pq, p); } else { prop_assert!(pq.is_zero()); }
            }
        }
        prop_assert!(sum.is_identity());
        prop_assert_eq!(log.reconstruct(), t.lift(order));
        prop_assert!(log.a.commutes_with(&log.n));
    }

    #[test]
    fn weight_axioms_on_random_nilpotents(seed in any::<u64>(), n in 1usize..=6, c in -2i32..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nil = random_nilpotent(&mut rng, n);
        let w = weight_filtration(&nil, c).unwrap();
        prop_assert_eq!(w.verify(&nil), Ok(()));
    }

    #[test]
    fn frame_equivariance(seed in any::<u64>(), x in -2.0f64..2.0, y in 0.1f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_quasi_unipotent(&mut rng, 3, 4);
        let f = CanonicalFrame::new(validate_tuple(&[t.clone()]).unwrap(), FrameBasis::Standard).unwrap();
        let z = Complex64::new(x, y);
        let w = f.evaluate(&[z]).unwrap();
        let shifted = f.evaluate(&[z + 1.0]).unwrap();
        let tw = f.monodromy_complex(0) * &w;
        prop_assert!((shifted - tw).norm() < 1e-9 * w.norm());
    }

    #[test]
    fn decide_is_basis_invariant(seed in any::<u64>(), exps in proptest::collection::vec(-2i64..=2, 3), coeffs in proptest::collection::vec(-3i64..=3, 3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tuple = validate_tuple(&[unipotent_jordan(3)]).unwrap();
        let frame = CanonicalFrame::new(tuple, FrameBasis::Standard).unwrap();
        let polys = exps.iter().zip(&coeffs).map(|(&e, &c)| {
            LaurentPoly::monomial(vec![e], CycScalar::from_int(c))
        }).collect();
        let section = LaurentSection::new(&frame, polys).unwrap();
        let reference = decide(&section, &frame, 0).unwrap();
        // a degree-filtered change: upper triangular unimodular in the ascending-degree basis
        let base = HomogeneousBasis::of(&frame.tuple().logs().logs[0].n, 0).unwrap();
        let g = ExactMatrix::from_fn(3, 3, |r, c| {
            let v: i64 = if r == c { if rng.gen_bool(0.5) { 1 } else { -1 } } else if r < c { rng.gen_range(-3..=3) } else { 0 };
            CycScalar::from_int(v)
        });
        let changed = HomogeneousBasis { vectors: base.vectors.mul(&g), degrees: base.degrees.clone() };
        prop_assert!(changed.splits(&frame.tuple().logs().logs[0].n, 0).unwrap());
        let other = decide_with_bases(&section, &frame, &[changed]).unwrap();
        prop_assert_eq!(reference.is_l2, other.is_l2);
        prop_assert_eq!(reference.in_lattice, other.in_lattice);
    }

    #[test]
    fn model_metric_matches_single_log_form(l1 in -3i32..=3, l2 in -3i32..=3, y2 in 1.0f64..50.0, ratio in 1.0f64..50.0) {
        // ∏_{j<n} (y_j/y_{j+1})^{l_j} · (2π y_n)^{l_n} = (2π)^{l_n} y_1^{l_1} y_2^{l_2 − l_1}
        let g = multi_grading(&[nilpotent_of_type(&[1]), nilpotent_of_type(&[1])], &ExactMatrix::identity(1, 1), 0).unwrap();
        let m = ModelMetric::new(g).unwrap();
        let y1 = y2 * ratio;
        let lhs = m.weight_factor(&[l1, l2], &[y1, y2]);
        let rhs = (2.0 * std::f64::consts::PI).powi(l2) * y1.powi(l1) * y2.powi(l2 - l1);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
    }
}

#[test]
fn model_norm_is_monotone_in_degree() {
    let g = multi_grading(&[nilpotent_of_type(&[3])], &ExactMatrix::identity(3, 1), 0).unwrap();
    let m = ModelMetric::new(g).unwrap();
    let e = |i: usize| DVector::from_fn(3, |k, _| Complex64::new(if k == i { 1.0 } else { 0.0 }, 0.0));
    let heights = [1.0, 2.0, 4.0, 8.0];
    for (i, sign) in [(0usize, -1.0f64), (1, 0.0), (2, 1.0)] {
        let vals: Vec<f64> = heights.iter().map(|&y| m.norm_squared_at_heights(&e(i), &[y])).collect();
        assert!(vals.iter().all(|&v| v > 0.0));
        for w in vals.windows(2) {
            assert_eq!((w[1] - w[0]).signum() * sign.abs(), sign, "degree index {i}: {vals:?}");
        }
    }
}

#[test]
fn exponent_equivalence_is_exact() {
    for m in 1i64..=12 {
        for k in 0..m {
            for n in -5i64..=5 {
                assert_eq!(m * n + m - 1 - k >= 0, n >= 0, "m={m} k={k} n={n}");
            }
        }
    }
}

#[test]
fn cone_independence_is_logged() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut mismatches = 0;
    for _ in 0..20 {
        // commuting nilpotents: polynomials without constant term in one nilpotent
        let n = random_nilpotent(&mut rng, 4);
        let n1 = n.clone();
        let n2 = n.mul(&n).add(&n);
        let a = weight_filtration(&n1.add(&n2), 0).unwrap();
        let b = weight_filtration(&n1.scale(&CycScalar::from_int(2)).add(&n2.scale(&CycScalar::from_int(3))), 0).unwrap();
        if a != b {
            mismatches += 1;
        }
    }
    println!("cone independence: {mismatches} of 20 random commuting pairs differ");
}

#[test]
fn region_predicate_examples() {
    let r = Region::new(0.5, 1.0, 1).unwrap();
    assert!(r.contains(&[Complex64::new(0.2, 1.0)]));
    assert!(!r.contains(&[Complex64::new(0.6, 2.0)]));
    assert!(!r.contains(&[Complex64::new(0.0, 0.5)]));
}

#[test]
fn quadrature_is_deterministic() {
    let a = log_weighted_disk_integral(-2, -1.0, &default_cutoffs(), 1e-4).unwrap();
    let b = log_weighted_disk_integral(-2, -1.0, &default_cutoffs(), 1e-4).unwrap();
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
}
