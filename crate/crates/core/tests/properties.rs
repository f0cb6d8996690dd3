use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

use pi0::elliptic::{eisenstein, eisenstein_truncated, PeriodLattice};
use pi0::involution::sandwich_check;
use pi0::linalg::{abs_det, hnf, kernel_lattice, quotient_invariants, snf, IntegerMatrix, LatticeBasis};
use pi0::selftest::elementary_two;
use pi0::{classify_torus, direct_sum, h1_gamma, pi0, random};

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntegerMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r)
            .prop_map(move |rows| IntegerMatrix::from_rows(c, &rows).unwrap())
    })
}

fn square(max_dim: usize, bound: i64) -> impl Strategy<Value = IntegerMatrix> {
    (1..=max_dim).prop_flat_map(move |n| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, n), n)
            .prop_map(move |rows| IntegerMatrix::from_rows(n, &rows).unwrap())
    })
}

fn is_unimodular(m: &IntegerMatrix) -> bool {
    abs_det(m).is_one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hermite_form_is_a_fixed_point(m in matrix(5, 9)) {
        let h = hnf(&m);
        prop_assert_eq!(h.u.mul(&m).unwrap(), h.h.clone());
        prop_assert!(is_unimodular(&h.u));
        prop_assert_eq!(hnf(&h.h).h, h.h);
    }

    #[test]
    fn smith_factors_divide_and_multiply_to_det(m in square(5, 9)) {
        let s = snf(&m);
        let diag = IntegerMatrix::diagonal(&s.factors);
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), diag);
        for w in s.factors.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
        let product: BigInt = s.factors.iter().product();
        prop_assert_eq!(product, abs_det(&m));
    }

    #[test]
    fn kernel_is_saturated_and_annihilated(m in matrix(4, 5)) {
        let k = kernel_lattice(&m);
        prop_assert!(k.is_saturated());
        for v in k.vectors() {
            prop_assert!(m.apply(&v).unwrap().iter().all(Zero::is_zero));
        }
        let image_rank = hnf(&m).rank;
        prop_assert_eq!(k.rank() + image_rank, m.cols());
    }

    #[test]
    fn full_lattice_mod_two_is_elementary(m in square(4, 6)) {
        let l = LatticeBasis::from_generators(&m);
        let factors = quotient_invariants(&l, &l.scaled(2)).unwrap();
        let two = BigInt::from(2);
        let nonzero = factors.iter().filter(|d| **d == two).count();
        prop_assert_eq!(nonzero, l.rank());
    }

    #[test]
    fn involutions_classify_and_sandwich(seed in any::<u64>()) {
        let (l, built) = random::involution(&mut random::rng(seed, 0), 6);
        prop_assert!(sandwich_check(&l));
        prop_assert_eq!(classify_torus(&l).unwrap(), built);
    }

    #[test]
    fn rank_is_invariant_under_base_change(seed in any::<u64>()) {
        let mut rng = random::rng(seed, 0);
        let spec = random::spec(&mut rng, 4);
        let (u, u_inv) = random::unimodular(&mut rng, spec.rank());
        let changed = spec.base_change(&u, &u_inv).unwrap();
        prop_assert_eq!(pi0(&spec).unwrap().rank, pi0(&changed).unwrap().rank);
        prop_assert_eq!(
            h1_gamma(&spec).unwrap().invariant_factors,
            h1_gamma(&changed).unwrap().invariant_factors
        );
    }

    #[test]
    fn rank_is_additive(seed in any::<u64>()) {
        let mut rng = random::rng(seed, 0);
        let a = random::spec(&mut rng, 3);
        let b = random::spec(&mut rng, 3);
        let sum = direct_sum(&a, &b);
        prop_assert_eq!(pi0(&sum).unwrap().rank, pi0(&a).unwrap().rank + pi0(&b).unwrap().rank);
        prop_assert!(elementary_two(&sum).is_ok());
    }

    #[test]
    fn eisenstein_values_are_homogeneous(re in -0.5f64..0.5, im in 0.5f64..3.0, t in 0.3f64..3.0) {
        let lat = PeriodLattice::new(Complex64::new(1.0, 0.0), Complex64::new(re, im)).unwrap();
        let (a, b) = (eisenstein(&lat), eisenstein(&lat.scaled(t)));
        prop_assert!((b.g4 * t.powi(4) - a.g4).norm() <= 1e-12 * a.g4.norm().max(1.0));
        prop_assert!((b.g6 * t.powi(6) - a.g6).norm() <= 1e-12 * a.g6.norm().max(1.0));
        prop_assert!((b.discriminant * t.powi(12) - a.discriminant).abs() <= 1e-11 * a.discriminant.abs());
    }

    #[test]
    fn eisenstein_values_ignore_the_basis(re in -0.5f64..0.5, im in 0.6f64..2.0, k in -3i32..=3) {
        let w1 = Complex64::new(1.0, 0.0);
        let w2 = Complex64::new(re, im);
        let a = eisenstein(&PeriodLattice::new(w1, w2).unwrap());
        let b = eisenstein(&PeriodLattice::new(w2, w1 + w2 * k as f64).unwrap());
        prop_assert!((a.g4 - b.g4).norm() <= 1e-12 * a.g4.norm());
        prop_assert!((a.g6 - b.g6).norm() <= 1e-12 * a.g6.norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn series_matches_box_enumeration(re in -0.5f64..0.5, im in 0.8f64..1.6) {
        let lat = PeriodLattice::new(Complex64::new(1.0, 0.0), Complex64::new(re, im)).unwrap();
        let series = eisenstein(&lat);
        let direct = eisenstein_truncated(&lat, 40.0).unwrap();
        let err = (series.p - direct.p).abs().max((series.q - direct.q).abs());
        prop_assert!(err <= 10.0 * direct.tail_bound + 1e-9, "{} vs tail {}", err, direct.tail_bound);
    }
}
