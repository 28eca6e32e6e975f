//! X(m, p, K) assembled from z-coloured Jones series, and the comparison with
//! the quantum Lorentz group braid sums.

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::jones::{jones_z_interpolated, jones_zero_framing, PolySeries};
use crate::qlg::{CSeries, QlgEngine};
use crate::scalar::{q_integer, BigComplex, FromGaussian, GaussianRational, Poly, Ring, Series};
use serde::Serialize;

/// X(m, p, K) as a series whose h^n coefficients are polynomials in p.
#[derive(Clone, Debug, PartialEq)]
pub struct LorentzInvariant {
    pub m: i64,
    pub series: PolySeries,
    /// Framing relative to zero framing.
    pub framing: i64,
}

impl LorentzInvariant {
    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Evaluate every coefficient at p.
    pub fn at(&self, p: &GaussianRational) -> Series<GaussianRational> {
        self.series.specialize(p)
    }

    /// The same invariant at another framing: each unit multiplies by e^{−mph}.
    pub fn reframed(&self, framing: i64) -> Self {
        let d = framing - self.framing;
        let corr = lorentz_framing_factor(self.m * d.signum(), self.order()).pow(d.unsigned_abs() as u32);
        LorentzInvariant { m: self.m, series: self.series.mul(&corr), framing }
    }

    /// Structural facts every X(m, p, K) satisfies.
    pub fn structure(&self) -> StructureReport {
        let mut rep = StructureReport { degree_ok: true, even_ok: true, vanishes_at_one_ok: true, failures: Vec::new() };
        let one = GaussianRational::one();
        for (n, c) in self.series.coeffs().iter().enumerate() {
            if c.degree().is_some_and(|d| d > 2 * n) {
                rep.degree_ok = false;
                rep.failures.push(format!("h^{n}: degree {} > {}", c.degree().unwrap(), 2 * n));
            }
            if self.m == 0 && !c.is_even() {
                rep.even_ok = false;
                rep.failures.push(format!("h^{n}: odd powers of p at m = 0"));
            }
            if self.m == 0 && n > 0 && !c.eval(&one).is_zero() {
                rep.vanishes_at_one_ok = false;
                rep.failures.push(format!("h^{n}: value {} at p = 1", c.eval(&one)));
            }
        }
        rep
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// deg_p of the h^n coefficient is at most 2n.
    pub degree_ok: bool,
    /// Only even powers of p at m = 0.
    pub even_ok: bool,
    /// At m = 0 every h^n coefficient with n ≥ 1 vanishes at p = 1.
    pub vanishes_at_one_ok: bool,
    pub failures: Vec<String>,
}

impl StructureReport {
    pub fn ok(&self) -> bool {
        self.degree_ok && self.even_ok && self.vanishes_at_one_ok
    }
}

/// e^{−mph}: the factor one unit of framing contributes to X(m, p, K).
pub fn lorentz_framing_factor(m: i64, order: usize) -> PolySeries {
    let c = Poly::from_coeffs(vec![GaussianRational::zero(), GaussianRational::int(-m)]);
    Series::exp_linear(&c, order)
}

/// X(m, p, K) at zero framing: P*(z) P(w) with z = (p−1+m)/2, w = (p−1−m)/2,
/// P the z-coloured Jones series of K and P* that of its mirror image.
pub fn x_invariant(b: &BraidWord, m: i64, order: usize) -> Result<LorentzInvariant> {
    b.require_knot()?;
    let p_star = jones_z_interpolated(&b.mirror(), order)?;
    let p = if b.mirror() == *b { p_star.clone() } else { jones_z_interpolated(b, order)? };
    let half = GaussianRational::ratio(1, 2);
    let z = p_star.map(|c| c.substitute_linear(&half, &GaussianRational::ratio(m - 1, 2)));
    let w = p.map(|c| c.substitute_linear(&half, &GaussianRational::ratio(-1 - m, 2)));
    Ok(LorentzInvariant { m, series: z.mul(&w), framing: 0 })
}

/// Both sides of S_b(e^{h/2}, p) = X(0,p,K)(2α+1)²/[2α+1]², α = (p−1)/2.
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub p: u32,
    pub order: usize,
    pub digits: usize,
    pub braid_sum: CSeries,
    pub jones_side: CSeries,
    pub diffs: Vec<f64>,
    pub max_diff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// The Jones-side series X(0,p,K)·p²/[p]², exact.
pub fn equivalence_rhs(b: &BraidWord, p: u32, order: usize) -> Result<Series<GaussianRational>> {
    if p == 0 {
        return Err(Error::Invalid("p must be at least 1".into()));
    }
    let x = x_invariant(b, 0, order)?.at(&GaussianRational::int(p as i64));
    let qp = q_integer(p as i64, order);
    let norm = Series::constant(GaussianRational::int((p * p) as i64), order)
        .div(&qp.mul(&qp))
        .expect("[p] has constant term p");
    Ok(x.mul(&norm))
}

/// Compare the braid sum of the quantum Lorentz group (spin cutoff = order)
/// with the Jones side at integer p ≥ 1.
pub fn equivalence_check(b: &BraidWord, p: u32, order: usize, digits: usize) -> Result<EquivalenceReport> {
    let rhs = equivalence_rhs(b, p, order)?;
    let engine = QlgEngine::numeric(GaussianRational::int(p as i64), order, digits);
    let lhs = engine.braid_sum(b)?;
    Ok(compare(p, order, digits, lhs, &rhs, engine.cg_table().bits()))
}

/// Same as `equivalence_check` with a caller-supplied engine (shared caches).
pub fn equivalence_check_with(
    engine: &QlgEngine<crate::qlg::NumericP>,
    b: &BraidWord,
    p: u32,
    digits: usize,
) -> Result<EquivalenceReport> {
    if engine.mode().0 != GaussianRational::int(p as i64) {
        return Err(Error::Invalid("engine was built for a different p".into()));
    }
    let order = engine.order();
    let rhs = equivalence_rhs(b, p, order)?;
    let lhs = engine.braid_sum(b)?;
    Ok(compare(p, order, digits, lhs, &rhs, engine.cg_table().bits()))
}

fn compare(p: u32, order: usize, digits: usize, lhs: CSeries, rhs: &Series<GaussianRational>, bits: usize) -> EquivalenceReport {
    let rhs: CSeries = rhs.map(|c| BigComplex::from_gaussian(c, bits));
    let diffs = lhs.abs_diffs(&rhs);
    let max_diff = diffs.iter().copied().fold(0.0, f64::max);
    let tolerance = 10f64.powi(-(digits as i32 - 15));
    EquivalenceReport { p, order, digits, braid_sum: lhs, jones_side: rhs, diffs, max_diff, tolerance, pass: max_diff <= tolerance }
}

/// X(z−w, z+w+1, K) against J^z(K*)/(2z+1)·J^w(K)/(2w+1) computed directly
/// at the two spins.
#[derive(Clone, Debug, PartialEq)]
pub struct JonesRelationReport {
    pub two_z: u32,
    pub two_w: u32,
    pub from_x: Series<GaussianRational>,
    pub direct: Series<GaussianRational>,
    pub pass: bool,
}

/// z, w given doubled; z − w must be an integer.
pub fn jones_relation_check(b: &BraidWord, two_z: u32, two_w: u32, order: usize) -> Result<JonesRelationReport> {
    if !(two_z + two_w).is_multiple_of(2) {
        return Err(Error::Invalid("z − w must be an integer".into()));
    }
    let m = (two_z as i64 - two_w as i64) / 2;
    let p = GaussianRational::ratio(two_z as i64 + two_w as i64 + 2, 2);
    let from_x = x_invariant(b, m, order)?.at(&p);
    let direct = jones_zero_framing(&b.mirror(), two_z, order)?.mul(&jones_zero_framing(b, two_w, order)?);
    let pass = from_x == direct;
    Ok(JonesRelationReport { two_z, two_w, from_x, direct, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::catalog;
    use crate::scalar::q_dim;

    #[test]
    fn unknot_is_product_of_f() {
        let u = catalog("unknot").unwrap().braid;
        let x = x_invariant(&u, 0, 4).unwrap();
        for p in 1..5i64 {
            // F_α(h)² with α = (p−1)/2
            let f = q_dim((p - 1) as u32, 4).scale_q(&num_rational::BigRational::new(1.into(), p.into()));
            assert_eq!(x.at(&GaussianRational::int(p)), f.mul(&f));
        }
        assert!(x.structure().ok());
    }

    #[test]
    fn trefoil_mirror_and_structure() {
        let tp = catalog("T+").unwrap().braid;
        let tm = catalog("T-").unwrap().braid;
        let a = x_invariant(&tp, 0, 3).unwrap();
        let b = x_invariant(&tm, 0, 3).unwrap();
        assert_eq!(a, b);
        assert!(a.structure().ok(), "{:?}", a.structure());
        assert!(x_invariant(&tp, 1, 3).unwrap().structure().degree_ok);
    }

    #[test]
    fn framing_factor_trivial_only_at_m_zero() {
        assert_eq!(lorentz_framing_factor(0, 4), Series::one(4));
        assert_ne!(lorentz_framing_factor(1, 4), Series::one(4));
        let x = x_invariant(&catalog("T+").unwrap().braid, 1, 3).unwrap();
        assert_eq!(x.reframed(2).reframed(0), x);
        let x0 = x_invariant(&catalog("T+").unwrap().braid, 0, 3).unwrap();
        assert_eq!(x0.reframed(5).series, x0.series);
    }

    #[test]
    fn jones_relation_points() {
        let t = catalog("T+").unwrap().braid;
        for (z, w) in [(0, 0), (1, 1), (2, 0), (3, 1)] {
            let r = jones_relation_check(&t, z, w, 3).unwrap();
            assert!(r.pass, "{z} {w}");
        }
        assert!(jones_relation_check(&t, 1, 0, 3).is_err());
    }

    #[test]
    fn equivalence_small() {
        let t = catalog("T-").unwrap().braid;
        let r = equivalence_check(&t, 2, 2, 40).unwrap();
        assert!(r.pass, "{:?}", r.diffs);
        let u = catalog("unknot").unwrap().braid;
        let r = equivalence_check(&u, 1, 2, 40).unwrap();
        assert!(r.pass);
    }
}
