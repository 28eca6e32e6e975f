use super::{Field, FromGaussian, GaussianRational, Ring};
use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;
use std::str::FromStr;

/// Binary arbitrary-precision float used for both components.
pub type Float = FBig<HalfEven, 2>;

/// Working precision in decimal digits when none is given.
pub const DEFAULT_DIGITS: usize = 60;

/// Complex number with arbitrary-precision float components.
///
/// Values built from exact integers (`zero`, `one`, `from_i64`) carry no
/// precision of their own and adopt the precision of whatever they are
/// combined with.
#[derive(Clone, PartialEq, Debug)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

/// Bits needed for `digits` decimal digits, with a guard margin.
pub fn bits_for_digits(digits: usize) -> usize {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 32
}

fn bigint_to_ibig(n: &BigInt) -> IBig {
    IBig::from_str(&n.to_string()).expect("decimal integer")
}

fn rational_to_float(r: &BigRational, bits: usize) -> Float {
    let num = Float::from(bigint_to_ibig(r.numer())).with_precision(bits).value();
    let den = Float::from(bigint_to_ibig(r.denom())).with_precision(bits).value();
    num / den
}

fn float_is_zero(x: &Float) -> bool {
    x.repr().significand().is_zero()
}

fn max_prec(a: &Float, b: &Float) -> usize {
    a.precision().max(b.precision())
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    /// Embed an exact value at `digits` decimal digits of precision.
    pub fn from_gaussian_digits(g: &GaussianRational, digits: usize) -> Self {
        Self::from_gaussian(g, bits_for_digits(digits))
    }

    pub fn precision_bits(&self) -> usize {
        max_prec(&self.re, &self.im)
    }

    pub fn with_precision_bits(&self, bits: usize) -> Self {
        BigComplex {
            re: self.re.clone().with_precision(bits).value(),
            im: self.im.clone().with_precision(bits).value(),
        }
    }

    pub fn i() -> Self {
        BigComplex { re: Float::ZERO, im: Float::ONE }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    /// max(|re|, |im|), as an f64 (underflows only below 1e-308).
    pub fn norm_inf(&self) -> f64 {
        let a = self.re.to_f64().value().abs();
        let b = self.im.to_f64().value().abs();
        a.max(b)
    }

    /// Components with absolute value below `tol` replaced by exact zero.
    pub fn chop(&self, tol: f64) -> Self {
        let keep = |x: &Float| if x.to_f64().value().abs() < tol { Float::ZERO } else { x.clone() };
        BigComplex { re: keep(&self.re), im: keep(&self.im) }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64().value(), self.im.to_f64().value())
    }

    /// Square root on the branch with argument in [0, π): the argument of
    /// the input is taken in [0, 2π) and halved.
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let bits = self.precision_bits().max(bits_for_digits(DEFAULT_DIGITS));
        let re = self.re.clone().with_precision(bits).value();
        let im = self.im.clone().with_precision(bits).value();
        let r = (&re * &re + &im * &im).sqrt();
        let two = Float::from(2).with_precision(bits).value();
        let a = ((&r + &re) / &two).sqrt();
        let b = ((&r - &re) / &two).sqrt();
        match im.repr().sign() {
            _ if float_is_zero(&im) => {
                if re.repr().sign() == dashu_int::Sign::Negative {
                    BigComplex { re: Float::ZERO.with_precision(bits).value(), im: b }
                } else {
                    BigComplex { re: a, im: Float::ZERO.with_precision(bits).value() }
                }
            }
            dashu_int::Sign::Positive => BigComplex { re: a, im: b },
            dashu_int::Sign::Negative => BigComplex { re: -a, im: b },
        }
    }

    /// Decimal rendering with `digits` significant digits per component.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let re = fmt_float(&self.re, digits);
        if float_is_zero(&self.im) {
            return re;
        }
        let im = fmt_float(&self.im, digits);
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }

    /// Parse "re" or "re+imi" with decimal components at `digits` precision.
    pub fn parse_decimal(s: &str, digits: usize) -> Option<Self> {
        let g: GaussianRational = s.parse().ok()?;
        Some(Self::from_gaussian_digits(&g, digits))
    }
}

fn fmt_float(x: &Float, digits: usize) -> String {
    if float_is_zero(x) {
        return "0".to_string();
    }
    // convert with guard digits, then round the digit string half-up
    let digits = digits.max(1);
    let d = x.clone().with_base_and_precision::<10>(digits + 8).value();
    let (sig, exp) = d.into_repr().into_parts();
    let neg = sig.sign() == dashu_int::Sign::Negative;
    let mut txt = sig.to_string().trim_start_matches('-').to_string();
    let mut exp = exp;
    if txt.len() > digits {
        let drop = txt.len() - digits;
        let round_up = txt.as_bytes()[digits] >= b'5';
        let mut kept: Vec<u8> = txt.as_bytes()[..digits].to_vec();
        exp += drop as isize;
        if round_up {
            let mut k = kept.len();
            loop {
                if k == 0 {
                    kept.insert(0, b'1');
                    kept.pop();
                    exp += 1;
                    break;
                }
                k -= 1;
                if kept[k] == b'9' {
                    kept[k] = b'0';
                } else {
                    kept[k] += 1;
                    break;
                }
            }
        }
        txt = String::from_utf8(kept).expect("ascii digits");
    }
    // strip trailing zeros of the significand
    while txt.len() > 1 && txt.ends_with('0') {
        txt.pop();
        exp += 1;
    }
    let sci_exp = exp + txt.len() as isize - 1;
    let mantissa = if txt.len() > 1 {
        format!("{}.{}", &txt[..1], &txt[1..])
    } else {
        txt.clone()
    };
    let body = if (-5..=15).contains(&sci_exp) {
        // plain positional notation
        if exp >= 0 {
            format!("{}{}", txt, "0".repeat(exp as usize))
        } else {
            let shift = (-exp) as usize;
            if txt.len() > shift {
                format!("{}.{}", &txt[..txt.len() - shift], &txt[txt.len() - shift..])
            } else {
                format!("0.{}{}", "0".repeat(shift - txt.len()), txt)
            }
        }
    } else {
        format!("{mantissa}e{sci_exp}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl Ring for BigComplex {
    fn zero() -> Self {
        BigComplex { re: Float::ZERO, im: Float::ZERO }
    }
    fn one() -> Self {
        BigComplex { re: Float::ONE, im: Float::ZERO }
    }
    fn is_zero(&self) -> bool {
        float_is_zero(&self.re) && float_is_zero(&self.im)
    }
    fn add(&self, rhs: &Self) -> Self {
        BigComplex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
    fn sub(&self, rhs: &Self) -> Self {
        BigComplex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let a_real = float_is_zero(&self.im);
        let b_real = float_is_zero(&rhs.im);
        match (a_real, b_real) {
            (true, true) => BigComplex { re: &self.re * &rhs.re, im: Float::ZERO },
            (true, false) => BigComplex { re: &self.re * &rhs.re, im: &self.re * &rhs.im },
            (false, true) => BigComplex { re: &self.re * &rhs.re, im: &self.im * &rhs.re },
            (false, false) => BigComplex {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
    fn neg(&self) -> Self {
        BigComplex { re: -self.re.clone(), im: -self.im.clone() }
    }
    fn from_i64(n: i64) -> Self {
        BigComplex { re: Float::from(n), im: Float::ZERO }
    }
    fn scale_q(&self, r: &BigRational) -> Self {
        let bits = self.precision_bits().max(if r.is_integer() { 0 } else { 64 });
        let bits = if bits == 0 { bits_for_digits(DEFAULT_DIGITS) } else { bits };
        let f = rational_to_float(r, bits);
        BigComplex { re: &self.re * &f, im: &self.im * &f }
    }
    fn add_assign(&mut self, rhs: &Self) {
        self.re += &rhs.re;
        if !float_is_zero(&rhs.im) {
            self.im += &rhs.im;
        }
    }
}

impl Field for BigComplex {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let bits = self.precision_bits();
        let bits = if bits == 0 { bits_for_digits(DEFAULT_DIGITS) } else { bits };
        let re = self.re.clone().with_precision(bits).value();
        let im = self.im.clone().with_precision(bits).value();
        if float_is_zero(&im) {
            return Some(BigComplex { re: Float::ONE.with_precision(bits).value() / re, im: Float::ZERO });
        }
        let n = &re * &re + &im * &im;
        Some(BigComplex { re: &re / &n, im: -(im / &n) })
    }
}

impl FromGaussian for BigComplex {
    /// Precision in bits.
    type Ctx = usize;
    fn from_gaussian(g: &GaussianRational, bits: usize) -> Self {
        let re = if g.re.is_zero() { Float::ZERO } else { rational_to_float(&g.re, bits) };
        let im = if g.im.is_zero() { Float::ZERO } else { rational_to_float(&g.im, bits) };
        BigComplex { re, im }
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{}", self.to_decimal_string(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bc(re: i64, im: i64) -> BigComplex {
        BigComplex::from_gaussian(&GaussianRational::complex(re, 1, im, 1), 200)
    }

    #[test]
    fn sqrt_branch() {
        let m1 = bc(-1, 0).sqrt();
        assert!(m1.sub(&BigComplex::i()).norm_inf() < 1e-50);
        let four = bc(4, 0).sqrt();
        assert!(four.sub(&bc(2, 0)).norm_inf() < 1e-50);
        // arg(-2i) = 3π/2 -> 3π/4
        let s = bc(0, -2).sqrt();
        assert!(s.sub(&bc(-1, 1)).norm_inf() < 1e-50);
        let t = bc(3, 4).sqrt();
        assert!(t.sub(&bc(2, 1)).norm_inf() < 1e-50);
    }

    #[test]
    fn inverse() {
        let a = bc(3, -7);
        let b = a.inv().unwrap().mul(&a);
        assert!(b.sub(&BigComplex::one()).norm_inf() < 1e-55);
    }

    #[test]
    fn decimal_output() {
        let x = BigComplex::from_gaussian(&GaussianRational::ratio(1, 3), 200);
        assert_eq!(x.to_decimal_string(5), "0.33333");
        let y = BigComplex::from_gaussian(&GaussianRational::complex(-5, 2, 1, 4), 200);
        assert_eq!(y.to_decimal_string(6), "-2.5+0.25i");
        assert_eq!(BigComplex::zero().to_decimal_string(6), "0");
        let z = BigComplex::from_gaussian(&GaussianRational::ratio(1, 1_000_000_000), 200);
        assert_eq!(z.to_decimal_string(3), "1e-9");
    }

    #[test]
    fn decimal_roundtrip_with_exponents() {
        let bits = bits_for_digits(60);
        let x = BigComplex::from_gaussian(&GaussianRational::complex(1, 7, -3, 1_000_000_000_000), bits)
            .mul(&BigComplex::from_gaussian(&GaussianRational::ratio(1, 1_000_000_000), bits));
        let back = BigComplex::parse_decimal(&x.to_decimal_string(70), 60).unwrap();
        assert!(back.sub(&x).norm_inf() < 1e-75);
        let c = x.chop(1e-9);
        assert_eq!(x.chop(1e-15).to_decimal_string(3), "1.43e-10");
        assert!(c.im.repr().significand().is_zero() && c.re.repr().significand().is_zero());
    }
}
