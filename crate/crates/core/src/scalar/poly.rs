use super::{Field, Ring};
use num_rational::BigRational;
use std::fmt;

/// Polynomial in one formal parameter; `coeffs[k]` multiplies x^k.
/// Trailing zero coefficients are never stored.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> Poly<C> {
    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: C) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial x.
    pub fn x() -> Self {
        Self::from_coeffs(vec![C::zero(), C::one()])
    }

    /// a·x + b
    pub fn linear(a: C, b: C) -> Self {
        Self::from_coeffs(vec![b, a])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of x^k (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    /// Largest index with a nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// p(a·x + b)
    pub fn substitute_linear(&self, a: &C, b: &C) -> Self {
        let lin = Poly::linear(a.clone(), b.clone());
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// True when every odd-degree coefficient vanishes.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| c.is_zero())
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

impl<C: Ring> Ring for Poly<C> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        Poly { coeffs: vec![C::one()] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(out)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j].add_assign(&a.mul(b));
            }
        }
        Self::from_coeffs(out)
    }
    fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(C::from_i64(n))
    }
    fn scale_q(&self, r: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.scale_q(r)).collect())
    }
}

impl<C: Ring + fmt::Display> Poly<C> {
    /// Human-readable form in the variable `var`, highest degree first.
    pub fn to_string_in(&self, var: &str) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let ct = c.to_string();
            let ct = if ct.contains(['+', '-']) && !(ct.starts_with('-') && !ct[1..].contains(['+', '-'])) {
                format!("({ct})")
            } else {
                ct
            };
            let mono = match k {
                0 => ct,
                _ => {
                    let v = if k == 1 { var.to_string() } else { format!("{var}^{k}") };
                    match ct.as_str() {
                        "1" => v,
                        "-1" => format!("-{v}"),
                        _ => format!("{ct}*{v}"),
                    }
                }
            };
            parts.push(mono);
        }
        let mut out = String::new();
        for (n, p) in parts.iter().enumerate() {
            if n == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

impl<C: Ring + fmt::Display> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in("x"))
    }
}

/// The unique polynomial of degree < n through the n points (xs[k], ys[k]).
/// Returns `None` when two nodes coincide.
pub fn lagrange_interpolate<C: Field>(xs: &[C], ys: &[C]) -> Option<Poly<C>> {
    assert_eq!(xs.len(), ys.len());
    let mut acc = Poly::zero();
    for (k, (xk, yk)) in xs.iter().zip(ys).enumerate() {
        if yk.is_zero() {
            continue;
        }
        let mut basis = Poly::one();
        let mut denom = C::one();
        for (j, xj) in xs.iter().enumerate() {
            if j == k {
                continue;
            }
            basis = basis.mul(&Poly::linear(C::one(), xj.neg()));
            denom = denom.mul(&xk.sub(xj));
        }
        let scale = yk.div(&denom)?;
        acc = acc.add(&basis.scale(&scale));
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::int(n)
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let p = Poly::from_coeffs(vec![g(1), GaussianRational::ratio(-1, 2), g(0), g(3)]);
        let xs: Vec<_> = (0..4).map(|k| GaussianRational::ratio(k, 2)).collect();
        let ys: Vec<_> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(lagrange_interpolate(&xs, &ys).unwrap(), p);
    }

    #[test]
    fn substitution() {
        // p(x) = x^2, p(2x+1) = 4x^2+4x+1
        let p = Poly::from_coeffs(vec![g(0), g(0), g(1)]);
        let q = p.substitute_linear(&g(2), &g(1));
        assert_eq!(q, Poly::from_coeffs(vec![g(1), g(4), g(4)]));
    }

    #[test]
    fn display() {
        let p = Poly::from_coeffs(vec![g(-1), g(0), GaussianRational::ratio(1, 8)]);
        assert_eq!(p.to_string_in("p"), "1/8*p^2 - 1");
        assert_eq!(Poly::<GaussianRational>::zero().to_string_in("p"), "0");
    }
}
