//! U_q(sl2) coloured Jones series in h, q = e^{h/2}.
//!
//! Spin-α modules use the weight basis e_k, k = −α..α, stored as doubled
//! integers. The universal R-matrix acts as
//! R(e_k⊗e_l) = Σ_n q^{2(k+n)(l−n)} q^{n(n−1)/2} (q−q⁻¹)^n/[n]! Π_{t<n}[α−k−t][α+l−t] e_{k+n}⊗e_{l−n},
//! a positive crossing as P∘R and a negative one as R⁻¹∘P.
//!
//! Every matrix entry is an integer combination of powers q^{e/2}. Such a
//! series Σ c_n h^n has integral n!·4^n·c_n, and products become binomial
//! convolutions, so braid evaluation runs on big integers only.

use crate::braid::BraidWord;
use crate::chord::ChordDiagram;
use crate::error::{Error, Result};
use crate::par;
use crate::scalar::{lagrange_interpolate, q_dim, q_factorial, q_integer, q_pow, GaussianRational, Poly, Ring, Series};
use crate::weights::{lambda_z_sl2, InfinitesimalRMatrix};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

/// Truncated power series whose h^n coefficients are polynomials in one
/// parameter (z or p).
pub type PolySeries = Series<Poly<GaussianRational>>;

/// Largest spin accepted by the braid evaluator, doubled.
pub const MAX_TWO_ALPHA: u32 = 30;
/// Largest strand count accepted by the braid evaluator.
pub const MAX_STRANDS: usize = 12;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// A jet stored as d_n = n!·4^n·c_n with integer d_n.
#[derive(Clone, Debug, PartialEq)]
struct Egf(Vec<BigInt>);

struct EgfCtx {
    order: usize,
    binom: Vec<Vec<BigInt>>,
    scale: Vec<BigInt>, // n!·4^n
}

impl EgfCtx {
    fn new(order: usize) -> Self {
        let mut binom = vec![vec![BigInt::one()]];
        for n in 1..=order {
            let prev = &binom[n - 1];
            let mut row = vec![BigInt::one(); n + 1];
            for i in 1..n {
                row[i] = &prev[i - 1] + &prev[i];
            }
            binom.push(row);
        }
        let mut scale = vec![BigInt::one()];
        for n in 1..=order {
            let s = &scale[n - 1] * BigInt::from(4 * n as u64);
            scale.push(s);
        }
        EgfCtx { order, binom, scale }
    }

    fn zero(&self) -> Egf {
        Egf(vec![BigInt::zero(); self.order + 1])
    }

    /// q^{e/2} as an EGF: d_n = e^n.
    fn qpow_half(&self, e: i64) -> Egf {
        let mut out = Vec::with_capacity(self.order + 1);
        let mut acc = BigInt::one();
        for _ in 0..=self.order {
            out.push(acc.clone());
            acc *= e;
        }
        Egf(out)
    }

    fn mul(&self, a: &Egf, b: &Egf) -> Egf {
        let mut out = self.zero();
        for n in 0..=self.order {
            let mut s = BigInt::zero();
            for i in 0..=n {
                if a.0[i].is_zero() || b.0[n - i].is_zero() {
                    continue;
                }
                s += &self.binom[n][i] * &a.0[i] * &b.0[n - i];
            }
            out.0[n] = s;
        }
        out
    }

    fn egf_of(&self, s: &Series<GaussianRational>) -> Egf {
        Egf(s
            .coeffs()
            .iter()
            .zip(&self.scale)
            .map(|(c, k)| {
                assert!(c.im.is_zero(), "R-matrix entries are real");
                let v = &c.re * BigRational::from_integer(k.clone());
                assert!(v.is_integer(), "R-matrix entry is not an integer combination of q^(1/2) powers");
                v.to_integer()
            })
            .collect())
    }

    fn to_series(&self, e: &Egf) -> Series<GaussianRational> {
        Series::from_fn(self.order, |n| {
            GaussianRational::real(BigRational::new(e.0[n].clone(), self.scale[n].clone()))
        })
    }
}

fn add_into(a: &mut Egf, b: &Egf) {
    for (x, y) in a.0.iter_mut().zip(&b.0) {
        *x += y;
    }
}

/// Nonzero R or R⁻¹ entries for e_k⊗e_l: ((K', L'), value), weights doubled.
type Entries = Vec<((i32, i32), Series<GaussianRational>)>;

struct QTable {
    order: usize,
    ints: Vec<Series<GaussianRational>>,
    inv_fact: Vec<Series<GaussianRational>>,
    q_minus: Series<GaussianRational>,
}

impl QTable {
    fn new(two_alpha: u32, order: usize) -> Self {
        let top = two_alpha as i64 + 1;
        let ints = (0..=top).map(|j| q_integer(j, order)).collect();
        let inv_fact = (0..=top as u32)
            .map(|n| q_factorial(n, order).inv().expect("[n]! is invertible"))
            .collect();
        let q_minus = q_pow(&rat(1, 1), order).sub(&q_pow(&rat(-1, 1), order));
        QTable { order, ints, inv_fact, q_minus }
    }
}

fn r_entries(two_alpha: u32, k: i32, l: i32, inverse: bool, qt: &QTable) -> Entries {
    let a = two_alpha as i32;
    let order = qt.order;
    let mut out = Vec::new();
    let mut n = 0i32;
    let mut prod = Series::one(order);
    while k + 2 * n <= a && l - 2 * n >= -a {
        if n > 0 {
            let t = n - 1;
            prod = prod
                .mul(&qt.ints[((a - k) / 2 - t) as usize])
                .mul(&qt.ints[((a + l) / 2 - t) as usize])
                .mul(&qt.q_minus);
        }
        let mut c = prod.mul(&qt.inv_fact[n as usize]);
        let nn = (n * (n - 1)) as i64;
        let (k2, l2) = (k + 2 * n, l - 2 * n);
        if inverse {
            c = c.mul(&q_pow(&rat(-nn - (k as i64) * l as i64, 2), order));
            if n % 2 == 1 {
                c = c.neg();
            }
        } else {
            c = c.mul(&q_pow(&rat(nn + k2 as i64 * l2 as i64, 2), order));
        }
        if !c.is_zero() {
            out.push(((k2, l2), c));
        }
        n += 1;
    }
    out
}

fn weights(two_alpha: u32) -> Vec<i32> {
    (0..=two_alpha as i32).map(|j| 2 * j - two_alpha as i32).collect()
}

/// Dense matrix of exact series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesOperator {
    dim: usize,
    entries: Vec<Series<GaussianRational>>,
}

impl SeriesOperator {
    pub fn zero(dim: usize, order: usize) -> Self {
        SeriesOperator { dim, entries: vec![Series::zero(order); dim * dim] }
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        let mut out = Self::zero(dim, order);
        for i in 0..dim {
            out.entries[i * dim + i] = Series::one(order);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Series<GaussianRational> {
        &self.entries[row * self.dim + col]
    }

    fn set(&mut self, row: usize, col: usize, v: Series<GaussianRational>) {
        self.entries[row * self.dim + col] = v;
    }

    pub fn order(&self) -> usize {
        self.entries[0].order()
    }

    /// self ∘ rhs
    pub fn compose(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = Self::zero(d, self.order().min(rhs.order()));
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.entries[i * d + j].add_assign(&a.mul(b));
                }
            }
        }
        out
    }

    /// self ⊗ id_m or id_m ⊗ self.
    pub fn extend(&self, m: usize, on_left: bool) -> Self {
        let d = self.dim;
        let mut out = Self::zero(d * m, self.order());
        for i in 0..d {
            for j in 0..d {
                let v = self.get(i, j);
                if v.is_zero() {
                    continue;
                }
                for t in 0..m {
                    if on_left {
                        out.set(i * m + t, j * m + t, v.clone());
                    } else {
                        out.set(t * d + i, t * d + j, v.clone());
                    }
                }
            }
        }
        out
    }

    /// Constant terms only.
    pub fn classical_limit(&self) -> Self {
        SeriesOperator {
            dim: self.dim,
            entries: self.entries.iter().map(|s| Series::constant(s.coeff(0).clone(), 0)).collect(),
        }
    }

    /// The flip of V⊗V for dim V = d.
    pub fn flip(d: usize, order: usize) -> Self {
        let mut out = Self::zero(d * d, order);
        for a in 0..d {
            for b in 0..d {
                out.set(b * d + a, a * d + b, Series::one(order));
            }
        }
        out
    }
}

fn operator_from_entries(two_alpha: u32, order: usize, inverse: bool) -> SeriesOperator {
    let w = weights(two_alpha);
    let d = w.len();
    let idx = |k: i32| ((k + two_alpha as i32) / 2) as usize;
    let qt = QTable::new(two_alpha, order);
    let mut out = SeriesOperator::zero(d * d, order);
    for &k in &w {
        for &l in &w {
            for ((k2, l2), c) in r_entries(two_alpha, k, l, inverse, &qt) {
                out.set(idx(k2) * d + idx(l2), idx(k) * d + idx(l), c);
            }
        }
    }
    out
}

/// The R-matrix on V_α⊗V_α, α = two_alpha/2.
pub fn r_matrix(two_alpha: u32, order: usize) -> SeriesOperator {
    operator_from_entries(two_alpha, order, false)
}

/// R⁻¹ on V_α⊗V_α.
pub fn r_matrix_inverse(two_alpha: u32, order: usize) -> SeriesOperator {
    operator_from_entries(two_alpha, order, true)
}

/// Ř = P∘R, the operator of a positive crossing.
pub fn braiding(two_alpha: u32, order: usize) -> SeriesOperator {
    SeriesOperator::flip(two_alpha as usize + 1, order).compose(&r_matrix(two_alpha, order))
}

/// Nonzero entries of one operator by source basis pair.
type EntryMap = HashMap<(i32, i32), Vec<((i32, i32), Egf)>>;

struct Tables {
    two_alpha: u32,
    pos: EntryMap,
    neg: EntryMap,
}

impl Tables {
    fn new(two_alpha: u32, ctx: &EgfCtx) -> Self {
        let w = weights(two_alpha);
        let mut pos = HashMap::new();
        let mut neg = HashMap::new();
        let qt = QTable::new(two_alpha, ctx.order);
        for &k in &w {
            for &l in &w {
                let conv = |e: Entries| e.into_iter().map(|(t, s)| (t, ctx.egf_of(&s))).collect::<Vec<_>>();
                pos.insert((k, l), conv(r_entries(two_alpha, k, l, false, &qt)));
                neg.insert((k, l), conv(r_entries(two_alpha, k, l, true, &qt)));
            }
        }
        Tables { two_alpha, pos, neg }
    }
}

// Tensor basis states packed 5 bits per strand: index (K + A)/2.
fn unpack(key: u64, s: usize, a: i32) -> i32 {
    (((key >> (5 * s)) & 31) as i32) * 2 - a
}

fn repack(key: u64, s: usize, k: i32, a: i32) -> u64 {
    let v = ((k + a) / 2) as u64;
    (key & !(31u64 << (5 * s))) | (v << (5 * s))
}

fn propagate(b: &BraidWord, tab: &Tables, ctx: &EgfCtx, start: u64) -> HashMap<u64, Egf> {
    let a = tab.two_alpha as i32;
    let mut vec: HashMap<u64, Egf> = HashMap::new();
    vec.insert(start, ctx.qpow_half(0));
    for l in b.letters() {
        let (i, j) = (l.index - 1, l.index);
        let mut next: HashMap<u64, Egf> = HashMap::with_capacity(vec.len() * 2);
        for (key, v) in &vec {
            let (k1, k2) = (unpack(*key, i, a), unpack(*key, j, a));
            if l.positive {
                for ((n1, n2), c) in &tab.pos[&(k1, k2)] {
                    // P∘R: the R output is swapped onto the two positions
                    let nk = repack(repack(*key, i, *n2, a), j, *n1, a);
                    let t = ctx.mul(v, c);
                    match next.get_mut(&nk) {
                        Some(slot) => add_into(slot, &t),
                        None => {
                            next.insert(nk, t);
                        }
                    }
                }
            } else {
                // R⁻¹∘P: swap first
                for ((n1, n2), c) in &tab.neg[&(k2, k1)] {
                    let nk = repack(repack(*key, i, *n1, a), j, *n2, a);
                    let t = ctx.mul(v, c);
                    match next.get_mut(&nk) {
                        Some(slot) => add_into(slot, &t),
                        None => {
                            next.insert(nk, t);
                        }
                    }
                }
            }
        }
        next.retain(|_, v| v.0.iter().any(|x| !x.is_zero()));
        vec = next;
    }
    vec
}

fn check_sizes(b: &BraidWord, two_alpha: u32) -> Result<()> {
    if two_alpha > MAX_TWO_ALPHA {
        return Err(Error::Resource(format!("spin limited to {}", MAX_TWO_ALPHA / 2)));
    }
    if b.strands() > MAX_STRANDS {
        return Err(Error::Resource(format!("braids limited to {MAX_STRANDS} strands")));
    }
    Ok(())
}

/// The (1,1)-tangle value: the open strand 1 carries V_α, strands 2.. are
/// closed with the enhancement q^{2H}. The result is asserted to be a
/// multiple of the identity on V_α; the empty braid gives 1.
pub fn tangle_scalar(b: &BraidWord, two_alpha: u32, order: usize) -> Result<Series<GaussianRational>> {
    b.require_knot()?;
    check_sizes(b, two_alpha)?;
    let ctx = EgfCtx::new(order);
    let tab = Tables::new(two_alpha, &ctx);
    let a = two_alpha as i32;
    let d = two_alpha as u64 + 1;
    let n = b.strands();
    let total = d.pow(n as u32);
    let starts: Vec<u64> = (0..total)
        .map(|mut x| {
            let mut key = 0u64;
            for s in 0..n {
                key |= (x % d) << (5 * s);
                x /= d;
            }
            key
        })
        .collect();
    let diag: Vec<(i32, Egf)> = par::map(&starts, |&start| {
        let out = propagate(b, &tab, &ctx, start);
        let k0 = unpack(start, 0, a);
        let Some(v) = out.get(&start) else { return (k0, ctx.zero()) };
        // q^{2k} on every closed strand: q^{K} = q^{2K/2}
        let e: i64 = (1..n).map(|s| 2 * unpack(start, s, a) as i64).sum();
        (k0, ctx.mul(v, &ctx.qpow_half(e)))
    });
    let mut per_k0: Vec<Egf> = vec![ctx.zero(); d as usize];
    for (k0, v) in diag {
        add_into(&mut per_k0[((k0 + a) / 2) as usize], &v);
    }
    if let Some(bad) = per_k0.iter().position(|v| *v != per_k0[0]) {
        return Err(Error::Consistency(format!(
            "partial trace of '{b}' is not scalar on V_{}/2 (weight index {bad})",
            two_alpha
        )));
    }
    Ok(ctx.to_series(&per_k0[0]))
}

/// F_α = [2α+1]/(2α+1), the normalized unknot.
pub fn unknot_value(two_alpha: u32, order: usize) -> Series<GaussianRational> {
    q_dim(two_alpha, order).scale_q(&rat(1, two_alpha as i64 + 1))
}

/// J^α(K)/(2α+1) at the blackboard framing of b.
pub fn jones_framed(b: &BraidWord, two_alpha: u32, order: usize) -> Result<Series<GaussianRational>> {
    Ok(tangle_scalar(b, two_alpha, order)?.mul(&unknot_value(two_alpha, order)))
}

/// λ_z(φ_t(⊖)) with the Cartan–Killing tensor, as a polynomial in z.
pub fn theta_eigenvalue() -> Poly<GaussianRational> {
    lambda_z_sl2(&ChordDiagram::theta(), &InfinitesimalRMatrix::t_ck()).expect("⊖ is central")
}

/// The factor one unit of framing multiplies J^z by: exp(2 λ_z(φ_t(⊖)) h),
/// t the Cartan–Killing tensor, which is e^{z(z+1)h}.
pub fn framing_factor(two_alpha: u32, order: usize) -> Series<GaussianRational> {
    let z = GaussianRational::ratio(two_alpha as i64, 2);
    let lam = theta_eigenvalue().eval(&z);
    Series::exp_linear(&lam.add(&lam), order)
}

/// `framing_factor` with z kept symbolic.
pub fn framing_factor_poly(order: usize) -> PolySeries {
    let lam = theta_eigenvalue();
    Series::exp_linear(&lam.add(&lam), order)
}

/// J^α(K)/(2α+1) corrected to zero framing.
pub fn jones_zero_framing(b: &BraidWord, two_alpha: u32, order: usize) -> Result<Series<GaussianRational>> {
    let j = jones_framed(b, two_alpha, order)?;
    let f = framing_factor(two_alpha, order);
    let w = b.writhe();
    let corr = if w >= 0 {
        f.inv().expect("framing factor is invertible").pow(w as u32)
    } else {
        f.pow((-w) as u32)
    };
    Ok(j.mul(&corr))
}

/// Σ_n P_n(z) h^n with P_n(α) = J^α(K)/(2α+1) at zero framing.
///
/// Samples α = 0, 1/2, …, N+1; the h^n polynomial is interpolated through
/// the first 2n+1 samples and must reproduce all the others.
pub fn jones_z_interpolated(b: &BraidWord, order: usize) -> Result<PolySeries> {
    b.require_knot()?;
    let nodes: Vec<u32> = (0..=(2 * order as u32 + 2)).collect();
    let samples: Vec<Result<Series<GaussianRational>>> = par::map(&nodes, |&ta| jones_zero_framing(b, ta, order));
    let samples: Vec<Series<GaussianRational>> = samples.into_iter().collect::<Result<_>>()?;
    let xs: Vec<GaussianRational> = nodes.iter().map(|&t| GaussianRational::ratio(t as i64, 2)).collect();
    let mut coeffs = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let ys: Vec<GaussianRational> = samples.iter().map(|s| s.coeff(n).clone()).collect();
        let used = 2 * n + 1;
        let poly = lagrange_interpolate(&xs[..used], &ys[..used]).expect("distinct nodes");
        for k in used..xs.len() {
            if poly.eval(&xs[k]) != ys[k] {
                return Err(Error::Consistency(format!(
                    "degree bound: the h^{n} coefficient of '{b}' is not a polynomial of degree <= {} in z",
                    2 * n
                )));
            }
        }
        coeffs.push(poly);
    }
    Ok(Series::from_coeffs(coeffs))
}
