//! Braid-level invariants: Jones series under Markov moves, the Lorentz
//! invariant, and the quantum Lorentz braid sum in both p modes.

use qlorentz::braid::{catalog, markov_variants, parse_braid_auto};
use qlorentz::invariants::{equivalence_check, jones_relation_check, x_invariant};
use qlorentz::jones::{jones_z_interpolated, jones_zero_framing};
use qlorentz::qlg::{QlgEngine, QuantumCg, SymbolicP};
use qlorentz::scalar::{BigComplex, FromGaussian, GaussianRational};
use std::sync::Arc;

type Q = GaussianRational;

#[test]
fn figure_eight_markov_invariance() {
    let k = catalog("figure-eight").unwrap().braid;
    let base = jones_z_interpolated(&k, 3).unwrap();
    for v in markov_variants(&k) {
        assert!(v.is_knot());
        assert_eq!(jones_z_interpolated(&v, 3).unwrap(), base, "{v}");
    }
}

#[test]
fn figure_eight_is_amphichiral() {
    let k = catalog("figure-eight").unwrap().braid;
    assert_eq!(jones_z_interpolated(&k, 4).unwrap(), jones_z_interpolated(&k.mirror(), 4).unwrap());
}

#[test]
fn interpolation_matches_direct_spins() {
    let k = parse_braid_auto("s1 s1 s1").unwrap();
    let poly = jones_z_interpolated(&k, 3).unwrap();
    // the interpolation nodes stop at 2z = 8
    for two_z in [1u32, 9, 10, 13] {
        let direct = jones_zero_framing(&k, two_z, 3).unwrap();
        let z = Q::ratio(two_z as i64, 2);
        assert_eq!(poly.specialize(&z), direct, "2z = {two_z}");
    }
}

#[test]
fn lorentz_invariant_matches_jones_products() {
    let k = catalog("trefoil-left").unwrap().braid;
    for (z, w) in [(1, 1), (2, 0), (0, 2), (4, 2)] {
        assert!(jones_relation_check(&k, z, w, 3).unwrap().pass, "2z = {z}, 2w = {w}");
    }
    let x1 = x_invariant(&k, 1, 3).unwrap();
    let xm1 = x_invariant(&k.mirror(), -1, 3).unwrap();
    assert_eq!(x1.series, xm1.series);
}

#[test]
fn symbolic_braid_sum_specializes() {
    let order = 2;
    let cg = Arc::new(QuantumCg::new(order, 40));
    let bits = cg.bits();
    let sym = QlgEngine::new(SymbolicP, cg.clone()).braid_sum(&catalog("T-").unwrap().braid).unwrap();
    for p in [2, 3] {
        let num = QlgEngine::new(qlorentz::qlg::NumericP(Q::int(p)), cg.clone())
            .braid_sum(&catalog("T-").unwrap().braid)
            .unwrap();
        let at = sym.specialize(&BigComplex::from_gaussian(&Q::int(p), bits));
        assert!(at.max_abs_diff(&num) < 1e-25, "p = {p}");
    }
}

#[test]
fn equivalence_figure_eight_p3_n3() {
    let k = catalog("figure-eight").unwrap().braid;
    let r = equivalence_check(&k, 3, 3, 60).unwrap();
    assert!(r.pass, "{:?}", r.diffs);
}

#[test]
fn state_budget_is_a_resource_error() {
    let e = QlgEngine::numeric(Q::int(2), 3, 40).with_max_states(5);
    let err = e.braid_sum(&catalog("T+").unwrap().braid).unwrap_err();
    assert!(matches!(err, qlorentz::Error::Resource(_)), "{err}");
}
