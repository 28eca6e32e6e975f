//! The Verma-type sl2 module of highest weight 2z, with z a formal variable.
//!
//! Label j ≥ 0 stands for v_{2z−j}:
//! E v_{2z−j} = j v_{2z−j+1}, F v_{2z−j} = (2z−j) v_{2z−j−1},
//! H v_{2z−j} = 2(z−j) v_{2z−j}.

use super::{apply_phi, Alphabet, Generator, InfinitesimalRMatrix, Module};
use crate::chord::{ChordDiagram, DiagramSum};
use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Poly, Ring};
use std::collections::BTreeMap;

pub type ZPoly = Poly<GaussianRational>;
pub type Sl2Vector = BTreeMap<u32, ZPoly>;

#[derive(Clone, Copy, Debug, Default)]
pub struct Sl2Module;

fn zpoly(a: i64, b: i64) -> ZPoly {
    // a·z + b
    Poly::linear(GaussianRational::int(a), GaussianRational::int(b))
}

impl Module for Sl2Module {
    type Vector = Sl2Vector;

    fn zero_vector(&self) -> Sl2Vector {
        BTreeMap::new()
    }

    fn is_zero_vector(&self, v: &Sl2Vector) -> bool {
        v.is_empty()
    }

    fn apply(&self, g: Generator, v: &Sl2Vector) -> Result<Sl2Vector> {
        let mut out = Sl2Vector::new();
        for (&j, c) in v {
            let (target, factor) = match g {
                Generator::E => {
                    if j == 0 {
                        continue;
                    }
                    (j - 1, zpoly(0, j as i64))
                }
                Generator::F => (j + 1, zpoly(2, -(j as i64))),
                Generator::H => (j, zpoly(2, -2 * j as i64)),
                other => return Err(Error::Invalid(format!("{other} does not act on an sl2 module"))),
            };
            push(&mut out, target, c.mul(&factor));
        }
        Ok(out)
    }

    fn scale_vector(&self, v: &Sl2Vector, c: &GaussianRational) -> Sl2Vector {
        v.iter()
            .map(|(j, p)| (*j, p.scale(c)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }

    fn add_vector(&self, acc: &mut Sl2Vector, v: &Sl2Vector) {
        for (j, p) in v {
            push(acc, *j, p.clone());
        }
    }
}

fn push(v: &mut Sl2Vector, j: u32, p: ZPoly) {
    if p.is_zero() {
        return;
    }
    let slot = v.entry(j).or_insert_with(Poly::zero);
    *slot = slot.add(&p);
    if slot.is_zero() {
        v.remove(&j);
    }
}

fn check_alphabet(t: &InfinitesimalRMatrix) -> Result<()> {
    if t.alphabet != Alphabet::Sl2 {
        return Err(Error::Invalid("lambda_z_sl2 needs a tensor over the sl2 alphabet".into()));
    }
    Ok(())
}

/// λ_z(φ_t(d)) as an exact polynomial in z, reading d from its canonical
/// basepoint.
pub fn lambda_z_sl2(d: &ChordDiagram, t: &InfinitesimalRMatrix) -> Result<ZPoly> {
    lambda_z_sl2_at(d, t, 0)
}

/// Same as `lambda_z_sl2` with the reading started at position `basepoint`.
pub fn lambda_z_sl2_at(d: &ChordDiagram, t: &InfinitesimalRMatrix, basepoint: usize) -> Result<ZPoly> {
    check_alphabet(t)?;
    let w = d.word();
    let seq: Vec<u8> = (0..w.len()).map(|k| w[(k + basepoint) % w.len()]).collect();
    let start: Sl2Vector = [(0u32, Poly::one())].into_iter().collect();
    let mut out = apply_phi(&Sl2Module, t, &seq, &start)?;
    let value = out.remove(&0).unwrap_or_else(Poly::zero);
    if let Some((j, _)) = out.iter().next() {
        return Err(Error::Consistency(format!(
            "φ_t({d}) is not central on the sl2 module: component v_(2z-{j}) survives"
        )));
    }
    Ok(value)
}

/// Linear extension of `lambda_z_sl2`.
pub fn lambda_z_sl2_sum(x: &DiagramSum, t: &InfinitesimalRMatrix) -> Result<ZPoly> {
    let mut acc = Poly::zero();
    for (d, c) in x.terms() {
        acc = acc.add(&lambda_z_sl2(d, t)?.scale(c));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord::parse_diagram;

    fn z2(c0: GaussianRational, c1: GaussianRational, c2: GaussianRational) -> ZPoly {
        Poly::from_coeffs(vec![c0, c1, c2])
    }

    #[test]
    fn commutators_hold() {
        // [E,F] = H, [H,E] = 2E, [H,F] = −2F on a few basis vectors
        let m = Sl2Module;
        for j in 0..5u32 {
            let v: Sl2Vector = [(j, Poly::one())].into_iter().collect();
            let ap = |g, v: &Sl2Vector| m.apply(g, v).unwrap();
            let sub = |a: Sl2Vector, b: Sl2Vector| {
                let mut out = a;
                m.add_vector(&mut out, &m.scale_vector(&b, &GaussianRational::int(-1)));
                out
            };
            use Generator::*;
            assert_eq!(sub(ap(E, &ap(F, &v)), ap(F, &ap(E, &v))), ap(H, &v));
            assert_eq!(
                sub(ap(H, &ap(E, &v)), ap(E, &ap(H, &v))),
                m.scale_vector(&ap(E, &v), &GaussianRational::int(2))
            );
            assert_eq!(
                sub(ap(H, &ap(F, &v)), ap(F, &ap(H, &v))),
                m.scale_vector(&ap(F, &v), &GaussianRational::int(-2))
            );
        }
    }

    #[test]
    fn theta_values() {
        let half = GaussianRational::ratio(1, 2);
        let ck = lambda_z_sl2(&ChordDiagram::theta(), &InfinitesimalRMatrix::t_ck()).unwrap();
        assert_eq!(ck, z2(GaussianRational::zero(), half.clone(), half.clone()));
        let j = lambda_z_sl2(&ChordDiagram::theta(), &InfinitesimalRMatrix::t_jones()).unwrap();
        assert_eq!(j, ck.neg());
        assert_eq!(lambda_z_sl2(&ChordDiagram::unit(), &InfinitesimalRMatrix::t_ck()).unwrap(), Poly::one());
    }

    #[test]
    fn rotation_does_not_matter() {
        let t = InfinitesimalRMatrix::t_ck();
        let d = parse_diagram("ABCACB").unwrap();
        let base = lambda_z_sl2(&d, &t).unwrap();
        for b in 1..6 {
            assert_eq!(lambda_z_sl2_at(&d, &t, b).unwrap(), base);
        }
    }

    #[test]
    fn wrong_alphabet() {
        assert!(lambda_z_sl2(&ChordDiagram::theta(), &InfinitesimalRMatrix::t_lorentz()).is_err());
    }
}
