//! Chord diagrams and weight systems against independent oracles.

use num_rational::BigRational;
use qlorentz::chord::{connected_sum, enumerate_diagrams, four_t_generators, quotient_dimension, ChordDiagram};
use qlorentz::scalar::{GaussianRational, Poly, Ring};
use qlorentz::weights::{
    lambda_mp_direct, lambda_mp_factorized, lambda_z_sl2, lambda_z_sl2_at, InfinitesimalRMatrix,
};

type Q = GaussianRational;

/// Rank over F_p of the 4T relation matrix; a prime this large cannot divide
/// any pivot that appears at these sizes.
fn rank_mod_p(rows: &[Vec<i64>], p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|x| x.rem_euclid(p)).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let pow = |mut b: i64, mut e: i64| {
        let mut acc = 1i64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow(m[rank][c], p - 2);
        let prow = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let f = row[c] * inv % p;
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x = (*x - f * y).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn quotient_dimensions_against_modular_rank() {
    let known = [1, 1, 2, 3, 6];
    for (n, &want) in known.iter().enumerate() {
        assert_eq!(quotient_dimension(n).unwrap(), want, "dim A_{n}");
        if n < 2 {
            continue;
        }
        let basis = enumerate_diagrams(n).unwrap();
        let rows: Vec<Vec<i64>> = four_t_generators(n)
            .unwrap()
            .iter()
            .map(|rel| {
                let mut row = vec![0i64; basis.len()];
                for (d, s) in &rel.terms {
                    row[basis.iter().position(|b| b == d).unwrap()] += *s as i64;
                }
                row
            })
            .collect();
        assert_eq!(basis.len() - rank_mod_p(&rows, 1_000_003), want, "mod-p dim A_{n}");
    }
}

#[test]
fn diagram_counts() {
    let counts: Vec<usize> = (0..=5).map(|n| enumerate_diagrams(n).unwrap().len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 5, 18, 105]);
}

#[test]
fn sl2_weights_vanish_on_four_chord_relations() {
    let t = InfinitesimalRMatrix::t_ck();
    for rel in four_t_generators(4).unwrap() {
        let mut acc = Poly::zero();
        for (d, s) in &rel.terms {
            acc = acc.add(&lambda_z_sl2(d, &t).unwrap().scale(&Q::int(*s as i64)));
        }
        assert!(acc.is_zero(), "{rel}");
    }
}

#[test]
fn sl2_weight_is_multiplicative() {
    let t = InfinitesimalRMatrix::t_jones();
    let all: Vec<ChordDiagram> = (0..=3).flat_map(|n| enumerate_diagrams(n).unwrap()).collect();
    for a in &all {
        for b in &all {
            if a.n() + b.n() > 4 {
                continue;
            }
            let lhs = lambda_z_sl2(&connected_sum(a, b), &t).unwrap();
            let rhs = lambda_z_sl2(a, &t).unwrap().mul(&lambda_z_sl2(b, &t).unwrap());
            assert_eq!(lhs, rhs, "{a} # {b}");
        }
    }
}

#[test]
fn basepoint_and_sign() {
    let t = InfinitesimalRMatrix::t_jones();
    let neg = t.neg();
    for n in 1..=3 {
        for d in enumerate_diagrams(n).unwrap() {
            let base = lambda_z_sl2(&d, &t).unwrap();
            for k in 1..2 * n {
                assert_eq!(lambda_z_sl2_at(&d, &t, k).unwrap(), base, "{d} from {k}");
            }
            let sign = if n % 2 == 0 { Q::one() } else { Q::int(-1) };
            assert_eq!(lambda_z_sl2(&d, &neg).unwrap(), base.scale(&sign), "{d}");
        }
    }
}

#[test]
fn quadratic_value_vanishes_exactly_when_unframed() {
    let th = ChordDiagram::theta();
    for m in -2..=2i64 {
        let v = lambda_mp_factorized(&th, &BigRational::from_integer(m.into())).unwrap();
        assert_eq!(v.is_zero(), m == 0, "m = {m}: {v}");
        assert!(v.eval(&Q::zero()).is_zero());
    }
}

#[test]
fn four_chord_direct_route_spot_check() {
    // a couple of 4-chord diagrams, the largest size the direct route supports
    for d in enumerate_diagrams(4).unwrap().into_iter().take(3) {
        let direct = lambda_mp_direct(&d, 1).unwrap();
        let fact = lambda_mp_factorized(&d, &BigRational::from_integer(1.into())).unwrap();
        assert_eq!(direct, fact, "{d}");
    }
}
