//! Property tests for the exact kernel and the polynomial front-end
//! surfaces: exactness invariants that must hold for arbitrary inputs.

use conecert::exact::{
    format_rational, parse_rational, rat_int, rational_ldlt, rational_psd_check, rational_solve,
    snap_to_rational, PsdStatus, RatMatrix, Rational,
};
use conecert::poly::PolySpec;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn small_matrix(n: usize) -> impl Strategy<Value = RatMatrix> {
    proptest::collection::vec(-9i64..10, n * n)
        .prop_map(move |vals| RatMatrix::from_fn(n, n, |i, j| rat_int(vals[i * n + j])))
}

fn small_symmetric(n: usize) -> impl Strategy<Value = RatMatrix> {
    proptest::collection::vec(-9i64..10, n * (n + 1) / 2).prop_map(move |vals| {
        let mut m = RatMatrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in 0..=i {
                m[(i, j)] = rat_int(vals[k]);
                m[(j, i)] = rat_int(vals[k]);
                k += 1;
            }
        }
        m
    })
}

proptest! {
    #[test]
    fn solve_is_exact_or_detects_singularity(
        m in small_matrix(3),
        rhs in proptest::collection::vec(-9i64..10, 3),
    ) {
        let rhs: Vec<Rational> = rhs.into_iter().map(rat_int).collect();
        match rational_solve(&m, &rhs) {
            Ok(x) => prop_assert_eq!(m.mul_vec(&x), rhs),
            Err(_) => prop_assert!(m.rank() < 3),
        }
    }

    #[test]
    fn ldlt_reassembles_exactly(m in small_symmetric(4)) {
        let f = rational_ldlt(&m).unwrap();
        prop_assert_eq!(f.reassemble(), f.permuted(&m));
    }

    #[test]
    fn psd_definite_quadratic_forms_are_positive(
        g in small_matrix(3),
        v in proptest::collection::vec(-5i64..6, 3),
    ) {
        // G'G + I is positive definite for any integer G.
        let m = g.transpose().mul(&g).add(&RatMatrix::identity(3));
        prop_assert_eq!(rational_psd_check(&m).unwrap(), PsdStatus::PositiveDefinite);
        let v: Vec<Rational> = v.into_iter().map(rat_int).collect();
        if !v.iter().all(Zero::is_zero) {
            let mv = m.mul_vec(&v);
            let quad: Rational = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
            prop_assert!(quad.is_positive());
        }
    }

    #[test]
    fn rational_strings_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let r = Rational::new(p.into(), q.into());
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn snap_respects_cap_and_recovers_snappables(p in -500i64..500, q in 1i64..500) {
        let r = Rational::new(p.into(), q.into());
        let x = p as f64 / q as f64;
        let snapped = snap_to_rational(x, 1000);
        prop_assert!(snapped.denom().to_i64().unwrap() <= 1000);
        // Any rational with denominator within the cap is recovered exactly.
        prop_assert_eq!(snapped, r);
    }

    #[test]
    fn poly_text_round_trips(
        coeffs in proptest::collection::vec((-20i64..20, 1i64..7), 1..6),
        exps in proptest::collection::vec((0u32..5, 0u32..5), 1..6),
    ) {
        let n = 2;
        let mut p = PolySpec::new(n);
        for ((num, den), (e1, e2)) in coeffs.into_iter().zip(exps) {
            p.add_term(vec![e1, e2], Rational::new(num.into(), den.into()));
        }
        // The text format infers nvars from the highest variable index, so
        // round-tripping needs some term to actually mention x2.
        let mentions_last = p.terms().keys().any(|e| e[n - 1] > 0);
        if !p.is_zero() && mentions_last {
            let text = p.to_text();
            prop_assert_eq!(PolySpec::parse(&text).unwrap(), p);
        }
    }
}
