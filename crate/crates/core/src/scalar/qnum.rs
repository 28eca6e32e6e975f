//! q-numbers as exact jets in h, with q = e^{h/2}.

use super::{GaussianRational, Ring, Series};
use num_rational::BigRational;

/// e^{r h} to order N.
pub fn exp_scaled(r: &GaussianRational, order: usize) -> Series<GaussianRational> {
    Series::exp_linear(r, order)
}

/// q^x = e^{x h / 2} for a rational exponent x.
pub fn q_pow(x: &BigRational, order: usize) -> Series<GaussianRational> {
    let half = BigRational::new(1.into(), 2.into());
    exp_scaled(&GaussianRational::real(x * half), order)
}

/// [n] = (q^n − q^{−n})/(q − q^{−1}) = sinh(n h/2)/sinh(h/2).
pub fn q_integer(n: i64, order: usize) -> Series<GaussianRational> {
    // Both sinh series are odd; divide each by h first.
    let reduced = |a: i64| {
        let half = BigRational::new(a.into(), 2.into());
        let mut term = half.clone(); // (a/2)^{k+1}/(k+1)! for k = 0
        let mut out = Vec::with_capacity(order + 1);
        for k in 0..=order {
            if k > 0 {
                term = term * &half / BigRational::from_integer(((k + 1) as i64).into());
            }
            out.push(if k % 2 == 0 { GaussianRational::real(term.clone()) } else { GaussianRational::zero() });
        }
        Series::from_coeffs(out)
    };
    reduced(n).div(&reduced(1)).expect("sinh(h/2)/h has constant term 1/2")
}

/// [n]! = [1][2]…[n].
pub fn q_factorial(n: u32, order: usize) -> Series<GaussianRational> {
    let mut acc = Series::one(order);
    for k in 1..=n {
        acc = acc.mul(&q_integer(k as i64, order));
    }
    acc
}

/// Quantum dimension [2α+1] of the spin-α module, α = two_alpha/2.
pub fn q_dim(two_alpha: u32, order: usize) -> Series<GaussianRational> {
    q_integer(two_alpha as i64 + 1, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = GaussianRational;

    #[test]
    fn exp_examples() {
        assert_eq!(exp_scaled(&Q::zero(), 4), Series::one(4));
        let e = exp_scaled(&Q::ratio(1, 2), 2);
        assert_eq!(e.coeffs(), &[Q::int(1), Q::ratio(1, 2), Q::ratio(1, 8)]);
        let prod = exp_scaled(&Q::ratio(-1, 2), 2).mul(&e);
        assert_eq!(prod, Series::one(2));
    }

    #[test]
    fn q_integer_identity() {
        // [n](q − q^{-1}) = q^n − q^{-n}
        for n in 0..8 {
            let lhs = q_integer(n, 7).mul(&q_pow(&BigRational::from_integer(1.into()), 7).sub(&q_pow(
                &BigRational::from_integer((-1).into()),
                7,
            )));
            let rhs = q_pow(&BigRational::from_integer(n.into()), 7)
                .sub(&q_pow(&BigRational::from_integer((-n).into()), 7));
            assert_eq!(lhs, rhs, "n = {n}");
            assert_eq!(q_integer(n, 7).coeff(0), &Q::int(n));
        }
        assert_eq!(q_integer(1, 4), Series::one(4));
        // [2] = 2 cosh(h/2) = 2 + h^2/4 + ...
        assert_eq!(q_integer(2, 2).coeffs(), &[Q::int(2), Q::zero(), Q::ratio(1, 4)]);
    }

    #[test]
    fn factorial_and_dim() {
        assert_eq!(q_factorial(0, 3), Series::one(3));
        assert_eq!(q_dim(0, 3), Series::one(3));
        assert_eq!(q_dim(2, 4).coeff(0), &Q::int(3));
    }
}
