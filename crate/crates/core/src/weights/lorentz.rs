//! Lorentz modules V(m) = ⊕_{α ≥ |m|} V_α with the p-dependent actions of
//! H±, H3, F±, F3, and the two routes to λ_{m,p}(φ_t(d)).

use super::sl2::{lambda_z_sl2, ZPoly};
use super::{apply_phi, Alphabet, Generator, InfinitesimalRMatrix, Module};
use crate::chord::{coproduct, ChordDiagram, DiagramSum};
use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Poly, Ring};
use num_integer::Integer;
use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;

pub type PPoly = Poly<GaussianRational>;

/// Largest chord count accepted by the direct route.
pub const MAX_DIRECT_CHORDS: usize = 4;

/// Σ (Π_{α ∈ mask} c_α) · √r · P_{mask,r}(p), with r squarefree.
///
/// c_α stands for C_α(m, p); its square is reduced to a polynomial in p, so
/// no symbol ever appears twice in a monomial.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct RadicalCoeff {
    terms: BTreeMap<(u32, u64), PPoly>,
}

fn squarefree_split(n: u64) -> (u64, u64) {
    // n = s^2 r with r squarefree
    let mut s = 1;
    let mut r = 1;
    let mut rest = n;
    let mut f = 2;
    while f * f <= rest {
        let mut e = 0;
        while rest.is_multiple_of(f) {
            rest /= f;
            e += 1;
        }
        s *= f.pow(e / 2);
        if e % 2 == 1 {
            r *= f;
        }
        f += 1;
    }
    (s, r * rest)
}

impl RadicalCoeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(p: PPoly) -> Self {
        let mut out = Self::zero();
        out.push((0, 1), p);
        out
    }

    /// √n for a nonnegative integer n.
    pub fn sqrt_int(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let (s, r) = squarefree_split(n);
        let mut out = Self::zero();
        out.push((0, r), Poly::constant(GaussianRational::int(s as i64)));
        out
    }

    /// The symbol c_α.
    pub fn c_symbol(alpha: u32) -> Self {
        let mut out = Self::zero();
        out.push((1 << alpha, 1), Poly::one());
        out
    }

    fn push(&mut self, key: (u32, u64), p: PPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Poly::zero);
        *slot = slot.add(&p);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (k, p) in &rhs.terms {
            out.push(*k, p.clone());
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            out.push(*k, p.scale(c));
        }
        out
    }

    /// The value when no radical symbol is left.
    pub fn as_scalar(&self) -> Option<PPoly> {
        match self.terms.len() {
            0 => Some(Poly::zero()),
            1 => self.terms.get(&(0, 1)).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u64), PPoly> {
        &self.terms
    }
}

impl fmt::Display for RadicalCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((mask, r), p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", p.to_string_in("p"))?;
            for a in 0..32 {
                if mask & (1 << a) != 0 {
                    write!(f, "*c{a}")?;
                }
            }
            if *r != 1 {
                write!(f, "*sqrt({r})")?;
            }
        }
        Ok(())
    }
}

/// The module V(m) with p kept symbolic.
#[derive(Clone, Debug)]
pub struct LorentzModule {
    m: i64,
    c_squared: Vec<PPoly>,
    b: Vec<PPoly>,
}

pub type LorentzVector = BTreeMap<(u32, i64), RadicalCoeff>;

impl LorentzModule {
    /// Supports spins up to `max_alpha`.
    pub fn new(m: i64, max_alpha: u32) -> Result<Self> {
        if max_alpha >= 31 {
            return Err(Error::Resource("Lorentz module spins are limited to 30".into()));
        }
        let r = |n: i64, d: i64| GaussianRational::ratio(n, d);
        let mm = m * m;
        let mut c_squared = vec![Poly::zero()];
        let mut b = vec![Poly::zero()];
        for a in 1..=(max_alpha as i64 + 1) {
            let a2 = a * a;
            // C_α² = −(α²−p²)(α²−m²)/(α²(4α²−1))
            let k = r(a2 - mm, a2 * (4 * a2 - 1));
            c_squared.push(Poly::from_coeffs(vec![k.scale_q(&BigRational::from_integer((-a2).into())), GaussianRational::zero(), k]));
            // B_α = i p m/(α(α+1))
            b.push(Poly::from_coeffs(vec![GaussianRational::zero(), GaussianRational::complex(0, 1, m, a * (a + 1))]));
        }
        Ok(LorentzModule { m, c_squared, b })
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    fn max_alpha(&self) -> u32 {
        (self.c_squared.len() - 2) as u32
    }

    /// C_α as a radical coefficient; zero for α ≤ |m|.
    fn c(&self, alpha: i64) -> RadicalCoeff {
        if alpha <= self.m.abs() {
            RadicalCoeff::zero()
        } else {
            RadicalCoeff::c_symbol(alpha as u32)
        }
    }

    fn b_coeff(&self, alpha: i64) -> RadicalCoeff {
        RadicalCoeff::scalar(self.b[alpha as usize].clone())
    }

    pub fn mul(&self, x: &RadicalCoeff, y: &RadicalCoeff) -> RadicalCoeff {
        let mut out = RadicalCoeff::zero();
        for ((m1, r1), p1) in &x.terms {
            for ((m2, r2), p2) in &y.terms {
                let mut p = p1.mul(p2);
                let common = m1 & m2;
                for a in 0..32 {
                    if common & (1 << a) != 0 {
                        p = p.mul(&self.c_squared[a]);
                    }
                }
                let g = r1.gcd(r2);
                let r = (r1 / g) * (r2 / g);
                p = p.scale(&GaussianRational::int(g as i64));
                out.push((m1 ^ m2, r), p);
            }
        }
        out
    }

    fn sqrt(&self, n: i64) -> Result<RadicalCoeff> {
        if n < 0 {
            return Err(Error::Consistency(format!("negative radicand {n} in a Lorentz module action")));
        }
        Ok(RadicalCoeff::sqrt_int(n as u64))
    }

    fn in_range(&self, alpha: i64, k: i64) -> bool {
        alpha >= self.m.abs() && k.abs() <= alpha
    }
}

impl Module for LorentzModule {
    type Vector = LorentzVector;

    fn zero_vector(&self) -> LorentzVector {
        BTreeMap::new()
    }

    fn is_zero_vector(&self, v: &LorentzVector) -> bool {
        v.is_empty()
    }

    fn apply(&self, g: Generator, v: &LorentzVector) -> Result<LorentzVector> {
        let mut out = LorentzVector::new();
        let int = |n: i64| RadicalCoeff::scalar(Poly::constant(GaussianRational::int(n)));
        for (&(alpha_u, k), coeff) in v {
            let a = alpha_u as i64;
            if a as u32 >= self.max_alpha() {
                return Err(Error::Resource(format!("spin {a} exceeds the module truncation")));
            }
            let mut contrib: Vec<((i64, i64), RadicalCoeff)> = Vec::new();
            match g {
                Generator::H3 => contrib.push(((a, k), int(k))),
                Generator::HMinus => contrib.push(((a, k - 1), self.sqrt((a + k) * (a - k + 1))?)),
                Generator::HPlus => contrib.push(((a, k + 1), self.sqrt((a + k + 1) * (a - k))?)),
                Generator::FPlus => {
                    contrib.push(((a - 1, k + 1), self.mul(&self.c(a), &self.sqrt((a - k) * (a - k - 1))?)));
                    contrib.push(((a, k + 1), self.mul(&self.b_coeff(a), &self.sqrt((a + k + 1) * (a - k))?).scale(&GaussianRational::int(-1))));
                    contrib.push(((a + 1, k + 1), self.mul(&self.c(a + 1), &self.sqrt((a + k + 1) * (a + k + 2))?)));
                }
                Generator::FMinus => {
                    contrib.push(((a - 1, k - 1), self.mul(&self.c(a), &self.sqrt((a + k) * (a + k - 1))?).scale(&GaussianRational::int(-1))));
                    contrib.push(((a, k - 1), self.mul(&self.b_coeff(a), &self.sqrt((a - k + 1) * (a + k))?).scale(&GaussianRational::int(-1))));
                    contrib.push(((a + 1, k - 1), self.mul(&self.c(a + 1), &self.sqrt((a - k + 1) * (a - k + 2))?).scale(&GaussianRational::int(-1))));
                }
                Generator::F3 => {
                    contrib.push(((a - 1, k), self.mul(&self.c(a), &self.sqrt(a * a - k * k)?)));
                    contrib.push(((a, k), self.mul(&self.b_coeff(a), &int(k)).scale(&GaussianRational::int(-1))));
                    contrib.push(((a + 1, k), self.mul(&self.c(a + 1), &self.sqrt((a + 1) * (a + 1) - k * k)?).scale(&GaussianRational::int(-1))));
                }
                other => return Err(Error::Invalid(format!("{other} does not act on a Lorentz module"))),
            }
            for ((ta, tk), factor) in contrib {
                if factor.is_zero() || !self.in_range(ta, tk) {
                    continue;
                }
                let value = self.mul(coeff, &factor);
                add_entry(&mut out, (ta as u32, tk), &value);
            }
        }
        Ok(out)
    }

    fn scale_vector(&self, v: &LorentzVector, c: &GaussianRational) -> LorentzVector {
        v.iter()
            .map(|(s, x)| (*s, x.scale(c)))
            .filter(|(_, x)| !x.is_zero())
            .collect()
    }

    fn add_vector(&self, acc: &mut LorentzVector, v: &LorentzVector) {
        for (s, x) in v {
            add_entry(acc, *s, x);
        }
    }
}

fn add_entry(v: &mut LorentzVector, s: (u32, i64), x: &RadicalCoeff) {
    let slot = v.entry(s).or_default();
    *slot = slot.add(x);
    if slot.is_zero() {
        v.remove(&s);
    }
}

/// λ_{m,p}(φ_{t_L}(d)) by acting on v^{|m|}_{|m|} in V(m).
pub fn lambda_mp_direct(d: &ChordDiagram, m: i64) -> Result<PPoly> {
    lambda_mp_direct_with(&InfinitesimalRMatrix::t_lorentz(), d, m)
}

/// `lambda_mp_direct` for any Lorentz tensor (t^l, t^r, t_L, …).
pub fn lambda_mp_direct_with(t: &InfinitesimalRMatrix, d: &ChordDiagram, m: i64) -> Result<PPoly> {
    if t.alphabet != Alphabet::Lorentz {
        return Err(Error::Invalid("lambda_mp_direct needs a tensor over the Lorentz alphabet".into()));
    }
    if d.n() > MAX_DIRECT_CHORDS {
        return Err(Error::Resource(format!("lambda_mp_direct is limited to {MAX_DIRECT_CHORDS} chords")));
    }
    let base = m.unsigned_abs() as u32;
    // each letter moves α by at most one
    let module = LorentzModule::new(m, base + 2 * d.n() as u32 + 1)?;
    let start_state = (base, m.abs());
    let start: LorentzVector = [(start_state, RadicalCoeff::scalar(Poly::one()))].into_iter().collect();
    let mut out = apply_phi(&module, t, d.word(), &start)?;
    let value = out.remove(&start_state).unwrap_or_default();
    if let Some(((a, k), _)) = out.iter().next() {
        return Err(Error::Consistency(format!(
            "φ_t({d}) is not central on V({m}): component v^{a}_{k} survives"
        )));
    }
    value
        .as_scalar()
        .ok_or_else(|| Error::Consistency(format!("radical symbols survive in λ_(m,p)(φ_t({d})): {value}")))
}

/// λ_{m,p}(φ_{t_L}(d)) = Σ λ_z(φ_t(d′)) λ_w(φ_{−t}(d″)) over Δ(d) = Σ d′ ⊗ d″,
/// with t the Cartan–Killing tensor, z = (p−1+m)/2 and w = (p−1−m)/2.
pub fn lambda_mp_factorized(d: &ChordDiagram, m: &BigRational) -> Result<PPoly> {
    let mut cache = BTreeMap::new();
    factorized_cached(d, m, &mut cache)
}

fn factorized_cached(d: &ChordDiagram, m: &BigRational, cache: &mut BTreeMap<ChordDiagram, ZPoly>) -> Result<PPoly> {
    let t = InfinitesimalRMatrix::t_ck();
    let half = GaussianRational::ratio(1, 2);
    let mg = GaussianRational::real(m.clone());
    let z_shift = mg.sub(&GaussianRational::one()).mul(&half);
    let w_shift = mg.neg().sub(&GaussianRational::one()).mul(&half);
    let mut lam = |x: &ChordDiagram| -> Result<ZPoly> {
        if let Some(v) = cache.get(x) {
            return Ok(v.clone());
        }
        let v = lambda_z_sl2(x, &t)?;
        cache.insert(x.clone(), v.clone());
        Ok(v)
    };
    let mut acc = Poly::zero();
    for ((a, b), c) in coproduct(d).terms() {
        let left = lam(a)?.substitute_linear(&half, &z_shift);
        let mut right = lam(b)?.substitute_linear(&half, &w_shift);
        if b.n() % 2 == 1 {
            right = right.neg();
        }
        acc = acc.add(&left.mul(&right).scale(c));
    }
    Ok(acc)
}

/// Linear extension of `lambda_mp_factorized`.
pub fn lambda_mp_factorized_sum(x: &DiagramSum, m: &BigRational) -> Result<PPoly> {
    let mut cache = BTreeMap::new();
    let mut acc = Poly::zero();
    for (d, c) in x.terms() {
        acc = acc.add(&factorized_cached(d, m, &mut cache)?.scale(c));
    }
    Ok(acc)
}

/// The eigenvalues ((p²+2mp+m²−1)/8, (p²−2mp+m²−1)/8) of C^l and C^r.
pub fn casimir_eigenvalues(m: i64, p: &GaussianRational) -> (GaussianRational, GaussianRational) {
    let (l, r) = casimir_polynomials(m);
    (l.eval(p), r.eval(p))
}

/// Casimir eigenvalues as polynomials in p.
pub fn casimir_polynomials(m: i64) -> (PPoly, PPoly) {
    let e = GaussianRational::ratio(1, 8);
    let c0 = GaussianRational::ratio(m * m - 1, 8);
    let l = Poly::from_coeffs(vec![c0.clone(), GaussianRational::ratio(2 * m, 8), e.clone()]);
    let r = Poly::from_coeffs(vec![c0, GaussianRational::ratio(-2 * m, 8), e]);
    (l, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(c: &[(i64, i64)]) -> PPoly {
        Poly::from_coeffs(c.iter().map(|(n, d)| GaussianRational::ratio(*n, *d)).collect())
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_split(12), (2, 3));
        assert_eq!(squarefree_split(1), (1, 1));
        assert_eq!(squarefree_split(49), (7, 1));
        assert_eq!(squarefree_split(30), (1, 30));
    }

    #[test]
    fn radicals_pair_up() {
        let md = LorentzModule::new(1, 4).unwrap();
        let s6 = RadicalCoeff::sqrt_int(6);
        let s3 = RadicalCoeff::sqrt_int(3);
        // √6·√3 = 3√2
        let prod = md.mul(&s6, &s3);
        assert_eq!(prod, {
            let mut r = RadicalCoeff::zero();
            r.push((0, 2), pp(&[(3, 1)]));
            r
        });
        let c2 = RadicalCoeff::c_symbol(2);
        assert_eq!(md.mul(&c2, &c2).as_scalar().unwrap(), md.c_squared[2]);
    }

    /// All fifteen commutation relations of the Lorentz algebra on low states.
    #[test]
    fn lorentz_relations() {
        use Generator::*;
        for m in [0i64, 1, 2] {
            let md = LorentzModule::new(m, 8).unwrap();
            let comm = |x: Generator, y: Generator, v: &LorentzVector| {
                let xy = md.apply(x, &md.apply(y, v).unwrap()).unwrap();
                let yx = md.apply(y, &md.apply(x, v).unwrap()).unwrap();
                let mut out = xy;
                md.add_vector(&mut out, &md.scale_vector(&yx, &GaussianRational::int(-1)));
                out
            };
            let lin = |g: Generator, c: i64, v: &LorentzVector| md.scale_vector(&md.apply(g, v).unwrap(), &GaussianRational::int(c));
            let abs = m.abs();
            for a in abs..abs + 3 {
                for k in -a..=a {
                    let v: LorentzVector = [((a as u32, k), RadicalCoeff::scalar(Poly::one()))].into_iter().collect();
                    let zero = LorentzVector::new();
                    let cases: Vec<(Generator, Generator, LorentzVector)> = vec![
                        (HPlus, H3, lin(HPlus, -1, &v)),
                        (HMinus, H3, lin(HMinus, 1, &v)),
                        (HPlus, HMinus, lin(H3, 2, &v)),
                        (FPlus, HPlus, zero.clone()),
                        (HMinus, FMinus, zero.clone()),
                        (H3, F3, zero.clone()),
                        (HPlus, F3, lin(FPlus, -1, &v)),
                        (HMinus, F3, lin(FMinus, 1, &v)),
                        (HPlus, FMinus, lin(F3, 2, &v)),
                        (HMinus, FPlus, lin(F3, -2, &v)),
                        (FPlus, H3, lin(FPlus, -1, &v)),
                        (FMinus, H3, lin(FMinus, 1, &v)),
                        (FPlus, F3, lin(HPlus, 1, &v)),
                        (FMinus, F3, lin(HMinus, -1, &v)),
                        (FPlus, FMinus, lin(H3, -2, &v)),
                    ];
                    for (x, y, want) in cases {
                        assert_eq!(comm(x, y, &v), want, "[{x},{y}] on v^{a}_{k}, m = {m}");
                    }
                }
            }
        }
    }

    #[test]
    fn theta_both_routes() {
        let th = ChordDiagram::theta();
        for m in 0..3i64 {
            let direct = lambda_mp_direct(&th, m).unwrap();
            let fact = lambda_mp_factorized(&th, &BigRational::from_integer(m.into())).unwrap();
            assert_eq!(direct, fact);
            assert_eq!(direct, pp(&[(0, 1), (m, 2)]));
        }
    }

    #[test]
    fn casimirs() {
        assert_eq!(
            casimir_eigenvalues(0, &GaussianRational::one()),
            (GaussianRational::zero(), GaussianRational::zero())
        );
        for m in 0..3 {
            let (l, r) = casimir_polynomials(m);
            let th = ChordDiagram::theta();
            assert_eq!(lambda_mp_direct_with(&InfinitesimalRMatrix::t_left(), &th, m).unwrap(), l);
            assert_eq!(lambda_mp_direct_with(&InfinitesimalRMatrix::t_right(), &th, m).unwrap(), r);
        }
    }
}
