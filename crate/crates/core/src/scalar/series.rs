use super::{BigComplex, Field, FromGaussian, GaussianRational, Poly, Ring};
use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;

/// Jet c_0 + c_1 h + … + c_N h^N of a power series in h.
///
/// Binary operations on series of different orders truncate to the smaller
/// order.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> Series<C> {
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        Series { coeffs }
    }

    /// Series with coefficients `f(0), …, f(order)`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> C) -> Self {
        Series { coeffs: (0..=order).map(f).collect() }
    }

    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut coeffs = vec![C::zero(); order + 1];
        coeffs[0] = c;
        Series { coeffs }
    }

    /// The series h (zero when order is 0).
    pub fn h(order: usize) -> Self {
        Self::from_fn(order, |k| if k == 1 { C::one() } else { C::zero() })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise the order of a jet");
        Series { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        Series { coeffs: (0..n).map(|k| self.coeffs[k].add(&rhs.coeffs[k])).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        Series { coeffs: (0..n).map(|k| self.coeffs[k].sub(&rhs.coeffs[k])).collect() }
    }

    pub fn add_assign(&mut self, rhs: &Self) {
        if rhs.coeffs.len() < self.coeffs.len() {
            self.coeffs.truncate(rhs.coeffs.len());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            a.add_assign(b);
        }
    }

    pub fn neg(&self) -> Self {
        Series { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut out = vec![C::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j].add_assign(&a.mul(b));
            }
        }
        Series { coeffs: out }
    }

    /// Multiply every coefficient by a scalar.
    pub fn scale(&self, c: &C) -> Self {
        Series { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn scale_q(&self, r: &BigRational) -> Self {
        Series { coeffs: self.coeffs.iter().map(|a| a.scale_q(r)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by h^k, dropping what falls beyond the order.
    pub fn shift(&self, k: usize) -> Self {
        Self::from_fn(self.order(), |n| if n >= k { self.coeffs[n - k].clone() } else { C::zero() })
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// exp(c·h) = Σ c^k h^k / k!
    pub fn exp_linear(c: &C, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = C::one();
        coeffs.push(term.clone());
        for k in 1..=order {
            term = term.mul(c).scale_q(&BigRational::new(1.into(), (k as i64).into()));
            coeffs.push(term.clone());
        }
        Series { coeffs }
    }

    /// exp(s) for a series with zero constant term.
    pub fn exp_nilpotent(&self) -> Self {
        assert!(self.coeffs[0].is_zero(), "exp needs a zero constant term");
        let order = self.order();
        let mut acc = Self::one(order);
        let mut term = Self::one(order);
        for k in 1..=order {
            term = term.mul(self).scale_q(&BigRational::new(1.into(), (k as i64).into()));
            acc = acc.add(&term);
        }
        acc
    }
}

impl<C: Field> Series<C> {
    /// Multiplicative inverse; `None` when the constant term is not invertible.
    pub fn inv(&self) -> Option<Self> {
        let a0inv = self.coeffs[0].inv()?;
        let n = self.coeffs.len();
        let mut r: Vec<C> = Vec::with_capacity(n);
        r.push(a0inv.clone());
        for k in 1..n {
            let mut s = C::zero();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                s.add_assign(&self.coeffs[j].mul(&r[k - j]));
            }
            r.push(s.mul(&a0inv).neg());
        }
        Some(Series { coeffs: r })
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    /// Square root given a square root `t0` of the constant term.
    pub fn sqrt_with_root(&self, t0: C) -> Option<Self> {
        let two_t0_inv = t0.add(&t0).inv()?;
        let n = self.coeffs.len();
        let mut t: Vec<C> = Vec::with_capacity(n);
        t.push(t0);
        for k in 1..n {
            let mut s = C::zero();
            for j in 1..k {
                s.add_assign(&t[j].mul(&t[k - j]));
            }
            t.push(self.coeffs[k].sub(&s).mul(&two_t0_inv));
        }
        Some(Series { coeffs: t })
    }
}

impl Series<BigComplex> {
    /// Square root with the constant-term branch of `BigComplex::sqrt`.
    /// `None` when the constant term vanishes.
    pub fn sqrt(&self) -> Option<Self> {
        if self.coeffs[0].is_zero() {
            return None;
        }
        let t0 = self.coeffs[0].sqrt();
        self.sqrt_with_root(t0)
    }

    /// Largest component magnitude over all coefficients.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_inf()).fold(0.0, f64::max)
    }

    /// Per-coefficient max(|Δre|, |Δim|).
    pub fn abs_diffs(&self, rhs: &Self) -> Vec<f64> {
        self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.sub(b).norm_inf()).collect()
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.abs_diffs(rhs).into_iter().fold(0.0, f64::max)
    }
}

impl<C: FromGaussian> Series<C> {
    pub fn from_exact(s: &Series<GaussianRational>, ctx: C::Ctx) -> Self {
        s.map(|g| C::from_gaussian(g, ctx))
    }
}

impl<C: Ring> Series<Poly<C>> {
    /// Evaluate every coefficient polynomial at `x`.
    pub fn specialize(&self, x: &C) -> Series<C> {
        self.map(|p| p.eval(x))
    }
}

impl<C: Ring + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*h")?,
                _ => write!(f, "({c})*h^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(h^{})", self.order() + 1)
    }
}

impl Serialize for Series<GaussianRational> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Series", 2)?;
        st.serialize_field("order", &self.order())?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

#[derive(Deserialize)]
struct ExactSeriesRepr {
    order: usize,
    coeffs: Vec<GaussianRational>,
}

impl<'de> Deserialize<'de> for Series<GaussianRational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ExactSeriesRepr::deserialize(d)?;
        if r.coeffs.len() != r.order + 1 {
            return Err(serde::de::Error::custom("coefficient count must be order + 1"));
        }
        Ok(Series { coeffs: r.coeffs })
    }
}

impl Series<BigComplex> {
    /// JSON form with decimal-string coefficients.
    pub fn to_json(&self, digits: usize) -> serde_json::Value {
        serde_json::json!({
            "order": self.order(),
            "coeffs": self.coeffs.iter().map(|c| c.to_decimal_string(digits)).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = GaussianRational;

    #[test]
    fn inverse_and_sqrt() {
        let s = Series::from_coeffs(vec![Q::int(4), Q::int(1), Q::ratio(-1, 3), Q::int(2)]);
        let inv = s.inv().unwrap();
        assert_eq!(s.mul(&inv), Series::one(3));
        let r = s.sqrt_with_root(Q::int(2)).unwrap();
        assert_eq!(r.mul(&r), s);
        assert!(Series::<Q>::h(3).inv().is_none());
    }

    #[test]
    fn exp_linear_matches_nilpotent() {
        let c = Q::complex(1, 3, -2, 5);
        let a = Series::exp_linear(&c, 6);
        let b = Series::h(6).scale(&c).exp_nilpotent();
        assert_eq!(a, b);
    }

    #[test]
    fn json_shape() {
        let s = Series::from_coeffs(vec![Q::int(1), Q::ratio(1, 2)]);
        let txt = serde_json::to_string(&s).unwrap();
        assert_eq!(txt, r#"{"order":1,"coeffs":[[1,1,0,1],[1,2,0,1]]}"#);
        let back: Series<Q> = serde_json::from_str(&txt).unwrap();
        assert_eq!(back, s);
    }
}
