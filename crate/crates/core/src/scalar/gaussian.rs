use super::{Field, FromGaussian, Ring};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Exact element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussianRational { re, im: BigRational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn complex(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussianRational {
            re: BigRational::new(re_num.into(), re_den.into()),
            im: BigRational::new(im_num.into(), im_den.into()),
        }
    }

    pub fn i() -> Self {
        GaussianRational { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -&self.im }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// The four integers (re_num, re_den, im_num, im_den).
    pub fn parts(&self) -> [BigInt; 4] {
        [
            self.re.numer().clone(),
            self.re.denom().clone(),
            self.im.numer().clone(),
            self.im.denom().clone(),
        ]
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Ring for GaussianRational {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::real(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
    fn sub(&self, rhs: &Self) -> Self {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Self::real(&self.re * &rhs.re);
        }
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
    fn neg(&self) -> Self {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
    fn from_i64(n: i64) -> Self {
        Self::int(n)
    }
    fn scale_q(&self, r: &BigRational) -> Self {
        GaussianRational { re: &self.re * r, im: &self.im * r }
    }
    fn add_assign(&mut self, rhs: &Self) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl Field for GaussianRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self::real(self.re.recip()));
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(GaussianRational { re: &self.re / &n, im: -&self.im / &n })
    }
}

impl FromGaussian for GaussianRational {
    type Ctx = ();
    fn from_gaussian(g: &GaussianRational, _: ()) -> Self {
        g.clone()
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(r: BigRational) -> Self {
        Self::real(r)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im_abs = self.im.abs();
        let im_txt = if im_abs.is_one() { String::new() } else { fmt_rational(&im_abs) };
        if self.re.is_zero() {
            let sign = if self.im.is_negative() { "-" } else { "" };
            return write!(f, "{sign}{im_txt}i");
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{sign}{im_txt}i", fmt_rational(&self.re))
    }
}

#[derive(Debug, thiserror::Error)]
#[error("cannot parse '{0}' as a Gaussian rational")]
pub struct ParseGaussianError(String);

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((mant, e)) = s.split_once(['e', 'E']) {
        let e: i32 = e.parse().ok()?;
        let ten = BigRational::from_integer(BigInt::from(10));
        return Some(parse_rational(mant)? * num_traits::pow::Pow::pow(&ten, e));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else if let Some((ip, fp)) = s.split_once('.') {
        let neg = ip.trim_start().starts_with('-');
        let ip = if ip.trim().is_empty() || ip.trim() == "-" { "0" } else { ip.trim() };
        let whole = BigInt::from_str(ip).ok()?;
        let frac = BigInt::from_str(fp).ok()?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let frac = BigRational::new(frac, den);
        let whole = BigRational::from_integer(whole);
        Some(if neg { whole - frac } else { whole + frac })
    } else {
        BigInt::from_str(s).ok().map(BigRational::from_integer)
    }
}

impl FromStr for GaussianRational {
    type Err = ParseGaussianError;

    /// Accepts "3/2", "-1", "0.25", "1.5e-3", "i", "2i", "1/2+1/3i", "1-i".
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGaussianError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        if !t.ends_with('i') {
            return parse_rational(&t).map(Self::real).ok_or_else(err);
        }
        let body = &t[..t.len() - 1];
        // split at the last sign that is not the leading one
        let split = body
            .char_indices()
            .rev()
            .find(|&(k, c)| k > 0 && (c == '+' || c == '-') && !body[..k].ends_with(['/', 'e', 'E']))
            .map(|(k, _)| k);
        let (re_txt, im_txt) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im_txt {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.trim_start_matches('+')).ok_or_else(err)?,
        };
        let re = parse_rational(re_txt).ok_or_else(err)?;
        Ok(GaussianRational { re, im })
    }
}

fn int_to_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<serde_json::Value> = self.parts().iter().map(int_to_json).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<serde_json::Value> = Vec::deserialize(d)?;
        if v.len() != 4 {
            return Err(D::Error::custom("expected [re_num, re_den, im_num, im_den]"));
        }
        let mut ints = Vec::with_capacity(4);
        for x in &v {
            let n = match x {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| D::Error::custom("non-integer entry"))?,
                serde_json::Value::String(t) => {
                    BigInt::from_str(t).map_err(|_| D::Error::custom("bad integer string"))?
                }
                _ => return Err(D::Error::custom("bad entry")),
            };
            ints.push(n);
        }
        if ints[1].is_zero() || ints[3].is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        let re = BigRational::new(ints[0].clone(), ints[1].clone());
        let im = BigRational::new(ints[2].clone(), ints[3].clone());
        Ok(GaussianRational { re, im })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for (txt, want) in [
            ("3/2", "3/2"),
            ("-1", "-1"),
            ("i", "i"),
            ("-i", "-i"),
            ("1/2+1/3i", "1/2+1/3i"),
            ("1-i", "1-i"),
            ("0.25", "1/4"),
            ("-2/3i", "-2/3i"),
            ("1.5e-3", "3/2000"),
            ("2e2-2.5e-1i", "200-1/4i"),
            ("-1e-2+1E1i", "-1/100+10i"),
        ] {
            let g: GaussianRational = txt.parse().unwrap();
            assert_eq!(g.to_string(), want, "{txt}");
        }
        assert!("".parse::<GaussianRational>().is_err());
        assert!("1/0".parse::<GaussianRational>().is_err());
    }

    #[test]
    fn field_ops() {
        let a = GaussianRational::complex(1, 2, 3, 4);
        let b = GaussianRational::complex(-2, 3, 1, 5);
        let q = a.div(&b).unwrap();
        assert_eq!(q.mul(&b), a);
        assert_eq!(GaussianRational::i().mul(&GaussianRational::i()), GaussianRational::int(-1));
        assert!(GaussianRational::zero().inv().is_none());
    }

    #[test]
    fn json_roundtrip() {
        let a = GaussianRational::complex(1, 2, -3, 4);
        let txt = serde_json::to_string(&a).unwrap();
        assert_eq!(txt, "[1,2,-3,4]");
        let b: GaussianRational = serde_json::from_str(&txt).unwrap();
        assert_eq!(a, b);
    }
}
