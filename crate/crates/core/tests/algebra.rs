//! Ring and field laws for the scalar types, and the series operations built
//! on them.

use num_rational::BigRational;
use proptest::prelude::*;
use qlorentz::scalar::{
    bits_for_digits, lagrange_interpolate, BigComplex, Field, FromGaussian, GaussianRational, Poly, Ring, Series,
};

type Q = GaussianRational;

fn gauss() -> impl Strategy<Value = Q> {
    (-40i64..40, 1i64..12, -40i64..40, 1i64..12).prop_map(|(a, b, c, d)| Q::complex(a, b, c, d))
}

fn series(order: usize) -> impl Strategy<Value = Series<Q>> {
    prop::collection::vec(gauss(), order + 1).prop_map(Series::from_coeffs)
}

fn poly() -> impl Strategy<Value = Poly<Q>> {
    prop::collection::vec(gauss(), 0..5).prop_map(Poly::from_coeffs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_field_laws(a in gauss(), b in gauss(), c in gauss()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), Q::zero());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), Q::one());
        }
        prop_assert_eq!(a.mul(&a.conj()).conj(), a.mul(&a.conj()));
    }

    #[test]
    fn gaussian_text_roundtrip(a in gauss()) {
        let back: Q = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn series_ring_laws(a in series(4), b in series(4), c in series(4)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&Series::one(4)), a.clone());
    }

    #[test]
    fn series_inverse(a in series(4)) {
        prop_assume!(!a.coeff(0).is_zero());
        prop_assert_eq!(a.mul(&a.inv().unwrap()), Series::one(4));
    }

    #[test]
    fn exp_is_a_homomorphism(x in gauss(), y in gauss()) {
        let e = |c: &Q| Series::exp_linear(c, 5);
        prop_assert_eq!(e(&x).mul(&e(&y)), e(&x.add(&y)));
    }

    #[test]
    fn poly_eval_is_a_homomorphism(f in poly(), g in poly(), x in gauss()) {
        prop_assert_eq!(f.mul(&g).eval(&x), f.eval(&x).mul(&g.eval(&x)));
        prop_assert_eq!(f.add(&g).eval(&x), f.eval(&x).add(&g.eval(&x)));
    }

    #[test]
    fn substitute_linear_composes(f in poly(), a in gauss(), b in gauss(), x in gauss()) {
        let g = f.substitute_linear(&a, &b);
        prop_assert_eq!(g.eval(&x), f.eval(&a.mul(&x).add(&b)));
    }

    #[test]
    fn interpolation_recovers(f in poly()) {
        let n = f.degree().unwrap_or(0) + 1;
        let xs: Vec<Q> = (0..n as i64).map(|k| Q::ratio(k, 2)).collect();
        let ys: Vec<Q> = xs.iter().map(|x| f.eval(x)).collect();
        prop_assert_eq!(lagrange_interpolate(&xs, &ys).unwrap(), f);
    }

    #[test]
    fn floats_track_exact_arithmetic(a in gauss(), b in gauss()) {
        let bits = bits_for_digits(60);
        let fa = BigComplex::from_gaussian(&a, bits);
        let fb = BigComplex::from_gaussian(&b, bits);
        let exact = BigComplex::from_gaussian(&a.mul(&b).add(&a), bits);
        prop_assert!(fa.mul(&fb).add(&fa).sub(&exact).norm_inf() < 1e-50 * (1.0 + exact.norm_inf()));
        let r = fa.sqrt();
        prop_assert!(r.mul(&r).sub(&fa).norm_inf() < 1e-50 * (1.0 + fa.norm_inf()));
    }
}

#[test]
fn rational_scaling_matches_multiplication() {
    let r = BigRational::new(7.into(), (-3).into());
    let a = Q::complex(2, 5, -1, 4);
    assert_eq!(a.scale_q(&r), a.mul(&Q::real(r)));
}
