//! Quantum Clebsch-Gordan coefficients, Λ coefficients, the balanced
//! representation V(p) = ⊕_α V_α of the quantum Lorentz group, and truncated
//! braid sums S_b(q, p).
//!
//! Spin labels of Clebsch-Gordan and Λ coefficients are doubled integers
//! (2I, 2m, ...). States of V(p) carry integer spins.

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::par;
use crate::scalar::{
    bits_for_digits, exp_scaled, FromGaussian, q_factorial, q_integer, q_pow, BigComplex, GaussianRational, Poly, Ring, Series,
};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::io::{Read, Write};
use std::path::Path;
use std::sync::{Arc, Mutex};

pub type CSeries = Series<BigComplex>;
type Exact = Series<GaussianRational>;

/// Default cap on live states in `braid_sum`.
pub const DEFAULT_MAX_STATES: usize = 2_000_000;

fn spin_ok(j2: i64, m2: i64) -> bool {
    j2 >= 0 && m2.abs() <= j2 && (j2 - m2) % 2 == 0
}

fn triangle(i2: i64, j2: i64, k2: i64) -> bool {
    i2 >= 0 && j2 >= 0 && k2 >= (i2 - j2).abs() && k2 <= i2 + j2 && (i2 + j2 + k2) % 2 == 0
}

fn parity_sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Exact q-factorials and their inverses, grown on demand.
struct FactorialTable {
    order: usize,
    facts: Mutex<Vec<(Exact, Exact)>>,
}

impl FactorialTable {
    fn new(order: usize) -> Self {
        FactorialTable { order, facts: Mutex::new(Vec::new()) }
    }

    fn get(&self, n: i64) -> (Exact, Exact) {
        let n = usize::try_from(n).expect("negative factorial argument");
        let mut t = self.facts.lock().unwrap();
        while t.len() <= n {
            let k = t.len() as u32;
            let f = q_factorial(k, self.order);
            let inv = f.inv().expect("[n]! has constant term n!");
            t.push((f, inv));
        }
        t[n].clone()
    }

    fn fact(&self, n: i64) -> Exact {
        self.get(n).0
    }

    fn inv_fact(&self, n: i64) -> Exact {
        self.get(n).1
    }
}

/// Memoized quantum Clebsch-Gordan coefficients at fixed order and precision.
pub struct QuantumCg {
    order: usize,
    digits: usize,
    bits: usize,
    facts: FactorialTable,
    cache: Mutex<HashMap<[i64; 6], CSeries>>,
}

impl QuantumCg {
    pub fn new(order: usize, digits: usize) -> Self {
        QuantumCg {
            order,
            digits,
            bits: bits_for_digits(digits),
            facts: FactorialTable::new(order),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// CG(I,J,K; m,n,p) from doubled labels. Zero unless the selection rules hold.
    pub fn get(&self, i2: i64, j2: i64, k2: i64, m2: i64, n2: i64, p2: i64) -> CSeries {
        let key = [i2, j2, k2, m2, n2, p2];
        if let Some(v) = self.cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let v = self.compute(key);
        self.cache.lock().unwrap().insert(key, v.clone());
        v
    }

    fn compute(&self, [i2, j2, k2, m2, n2, p2]: [i64; 6]) -> CSeries {
        let order = self.order;
        if !(spin_ok(i2, m2) && spin_ok(j2, n2) && spin_ok(k2, p2) && m2 + n2 == p2 && triangle(i2, j2, k2)) {
            return Series::zero(order);
        }
        let f = |n2: i64| self.facts.fact(n2 / 2);
        let fi = |n2: i64| self.facts.inv_fact(n2 / 2);

        let pre_exp = BigRational::new(
            (2 * m2 * (p2 + 2) + j2 * (j2 + 2) - i2 * (i2 + 2) - k2 * (k2 + 2)).into(),
            8.into(),
        );
        let pre = q_pow(&pre_exp, order);
        let sign = parity_sign((i2 - m2) / 2);

        let mut rad = q_integer(k2 + 1, order);
        for n in [i2 + j2 - k2, i2 - m2, j2 - n2, k2 - p2, k2 + p2] {
            rad = rad.mul(&f(n));
        }
        for n in [k2 + j2 - i2, i2 + k2 - j2, i2 + j2 + k2 + 2, i2 + m2, j2 + n2] {
            rad = rad.mul(&fi(n));
        }

        let lo = 0.max((k2 - j2 - m2) / 2);
        let hi = ((k2 - p2) / 2).min((i2 - m2) / 2);
        let mut sum: Exact = Series::zero(order);
        for v in lo..=hi {
            let args_num = [i2 + m2 + 2 * v, j2 + k2 - m2 - 2 * v];
            let args_den = [2 * v, k2 - p2 - 2 * v, i2 - m2 - 2 * v, j2 - k2 + m2 + 2 * v];
            if args_num.iter().chain(args_den.iter()).any(|&a| a < 0) {
                continue;
            }
            let mut t = q_pow(&BigRational::new((v * (k2 + p2 + 2)).into(), 2.into()), order);
            for a in args_num {
                t = t.mul(&f(a));
            }
            for a in args_den {
                t = t.mul(&fi(a));
            }
            if v % 2 == 0 {
                sum = sum.add(&t);
            } else {
                sum = sum.sub(&t);
            }
        }
        let exact = pre.mul(&sum).scale(&GaussianRational::int(sign));
        let root = Series::<BigComplex>::from_exact(&rad, self.bits).sqrt().expect("CG radicand has nonzero constant term");
        Series::<BigComplex>::from_exact(&exact, self.bits).mul(&root)
    }

    /// Write the cache as `cg.bin` plus a `manifest.json` describing it.
    pub fn dump(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Resource(e.to_string()))?;
        let mut entries: Vec<([i64; 6], CSeries)> =
            self.cache.lock().unwrap().iter().map(|(k, v)| (*k, v.clone())).collect();
        entries.sort_by_key(|a| a.0);
        let mut buf: Vec<u8> = Vec::new();
        buf.extend_from_slice(CACHE_MAGIC);
        buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        buf.extend_from_slice(&(entries.len() as u64).to_le_bytes());
        for (key, s) in &entries {
            for k in key {
                buf.extend_from_slice(&(*k as i32).to_le_bytes());
            }
            for c in s.coeffs() {
                let text = c.to_decimal_string(self.digits + 10);
                buf.extend_from_slice(&(text.len() as u32).to_le_bytes());
                buf.extend_from_slice(text.as_bytes());
            }
        }
        let manifest = CacheManifest {
            version: CACHE_VERSION,
            kind: "quantum-cg".into(),
            order: self.order,
            digits: self.digits,
            entries: entries.len(),
            data: "cg.bin".into(),
        };
        let write = |name: &str, bytes: &[u8]| -> Result<()> {
            let mut f = std::fs::File::create(dir.join(name)).map_err(|e| Error::Resource(e.to_string()))?;
            f.write_all(bytes).map_err(|e| Error::Resource(e.to_string()))
        };
        write("cg.bin", &buf)?;
        write("manifest.json", serde_json::to_string_pretty(&manifest).unwrap().as_bytes())
    }

    /// Merge a cache written by `dump`. Order and precision must match.
    pub fn load(&self, dir: &Path) -> Result<usize> {
        let text = std::fs::read_to_string(dir.join("manifest.json")).map_err(|e| Error::Resource(e.to_string()))?;
        let m: CacheManifest = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
        if m.version != CACHE_VERSION || m.kind != "quantum-cg" {
            return Err(Error::Invalid(format!("unsupported cache version {} ({})", m.version, m.kind)));
        }
        if m.order != self.order || m.digits != self.digits {
            return Err(Error::Invalid(format!(
                "cache built for order {} digits {}, wanted order {} digits {}",
                m.order, m.digits, self.order, self.digits
            )));
        }
        let mut bytes = Vec::new();
        std::fs::File::open(dir.join(&m.data))
            .and_then(|mut f| f.read_to_end(&mut bytes))
            .map_err(|e| Error::Resource(e.to_string()))?;
        let bad = || Error::Parse("truncated or corrupt cache file".into());
        let mut pos = 0usize;
        let mut take = |n: usize| -> Result<&[u8]> {
            let s = bytes.get(pos..pos + n).ok_or_else(bad)?;
            pos += n;
            Ok(s)
        };
        if take(CACHE_MAGIC.len())? != CACHE_MAGIC {
            return Err(bad());
        }
        let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
        if version != CACHE_VERSION {
            return Err(bad());
        }
        let count = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
        let mut loaded = Vec::with_capacity(count);
        for _ in 0..count {
            let mut key = [0i64; 6];
            for k in key.iter_mut() {
                *k = i32::from_le_bytes(take(4)?.try_into().unwrap()) as i64;
            }
            let mut coeffs = Vec::with_capacity(self.order + 1);
            for _ in 0..=self.order {
                let len = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
                let s = std::str::from_utf8(take(len)?).map_err(|_| bad())?;
                coeffs.push(BigComplex::parse_decimal(s, self.digits).ok_or_else(bad)?);
            }
            loaded.push((key, Series::from_coeffs(coeffs)));
        }
        let mut cache = self.cache.lock().unwrap();
        for (k, v) in loaded {
            cache.insert(k, v);
        }
        Ok(count)
    }
}

const CACHE_MAGIC: &[u8] = b"QLGCG\0";
const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Debug)]
struct CacheManifest {
    version: u32,
    kind: String,
    order: usize,
    digits: usize,
    entries: usize,
    data: String,
}

/// CG(I,J,K; m,n,p) with doubled labels, to order N at D digits.
pub fn quantum_cg(labels: [i64; 6], order: usize, digits: usize) -> CSeries {
    let [i2, j2, k2, m2, n2, p2] = labels;
    QuantumCg::new(order, digits).get(i2, j2, k2, m2, n2, p2)
}

/// How the representation parameter p enters: a number, or a formal variable.
pub trait PMode: Send + Sync {
    type C: Ring;
    fn embed(&self, x: &BigComplex) -> Self::C;
    /// q^{2σp} = e^{σph} with σ = two_sigma/2.
    fn q_two_sigma_p(&self, two_sigma: i64, order: usize, bits: usize) -> Series<Self::C>;
    fn label(&self) -> String;
}

/// Numeric p, an exact Gaussian rational.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericP(pub GaussianRational);

impl PMode for NumericP {
    type C = BigComplex;

    fn embed(&self, x: &BigComplex) -> BigComplex {
        x.clone()
    }

    fn q_two_sigma_p(&self, two_sigma: i64, order: usize, bits: usize) -> CSeries {
        let r = self.0.mul(&GaussianRational::ratio(two_sigma, 2));
        Series::from_exact(&exp_scaled(&r, order), bits)
    }

    fn label(&self) -> String {
        self.0.to_string()
    }
}

/// p kept as a polynomial variable; coefficients are polynomials in p.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymbolicP;

impl PMode for SymbolicP {
    type C = Poly<BigComplex>;

    fn embed(&self, x: &BigComplex) -> Poly<BigComplex> {
        Poly::constant(x.clone())
    }

    fn q_two_sigma_p(&self, two_sigma: i64, order: usize, bits: usize) -> Series<Poly<BigComplex>> {
        // e^{σph}: the h^n coefficient is σ^n p^n / n!
        let sigma = GaussianRational::ratio(two_sigma, 2);
        let mut c = GaussianRational::one();
        Series::from_fn(order, |n| {
            if n > 0 {
                c = c.mul(&sigma).mul(&GaussianRational::ratio(1, n as i64));
            }
            let mut coeffs = vec![BigComplex::zero(); n + 1];
            coeffs[n] = BigComplex::from_gaussian(&c, bits);
            Poly::from_coeffs(coeffs)
        })
    }

    fn label(&self) -> String {
        "symbolic".into()
    }
}

/// v^β_i in V(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BalancedState {
    pub beta: u32,
    pub i: i32,
}

impl BalancedState {
    pub fn new(beta: u32, i: i32) -> Result<Self> {
        if i.unsigned_abs() > beta {
            return Err(Error::Invalid(format!("|{i}| exceeds spin {beta}")));
        }
        Ok(BalancedState { beta, i })
    }

    pub fn vacuum() -> Self {
        BalancedState { beta: 0, i: 0 }
    }
}

pub type StateMap<C> = BTreeMap<BalancedState, Series<C>>;

type GAction<C> = Arc<Vec<(BalancedState, Series<C>)>>;

/// A partial product of the walk with its valuation bound.
type BraidEntry<C> = (BraidKey, (Series<C>, u32));

fn push_state<C: Ring>(out: &mut StateMap<C>, s: BalancedState, v: Series<C>) {
    match out.get_mut(&s) {
        Some(acc) => *acc = acc.add(&v),
        None => {
            out.insert(s, v);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    X(usize),
    G(usize),
    GInv(usize),
    Twist,
}

/// Operator word for the closure of b, read along the knot from the bottom of
/// strand 1: X at the strand that enters a positive crossing on the left (a
/// negative one on the right), g or S⁻¹(g) at the other strand, and the twist
/// G whenever the walk passes the top at a position other than 1.
fn operator_word(b: &BraidWord) -> Vec<Op> {
    let mut ops = Vec::new();
    let mut pos = 1usize;
    loop {
        for (k, l) in b.letters().iter().enumerate() {
            let i = l.index;
            if pos == i {
                ops.push(if l.positive { Op::X(k) } else { Op::GInv(k) });
                pos = i + 1;
            } else if pos == i + 1 {
                ops.push(if l.positive { Op::G(k) } else { Op::X(k) });
                pos = i;
            }
        }
        if pos == 1 {
            break;
        }
        ops.push(Op::Twist);
    }
    ops
}

/// Open crossing label (α, i, j, opened_by_g); α = −1 when closed.
type Label = [i8; 4];
const NO_LABEL: Label = [-1, 0, 0, 0];
type BraidKey = (Vec<Label>, BalancedState);

/// Least h-order the rest of the walk must still add. Every label opened by g
/// has its X still ahead, at position `x_at[k]` of the operator word, where
/// the walk must sit at that label's spin; after the last op it must be at 0.
/// Spin only changes at g-steps, each costing at least the change.
fn still_needed((labels, st): &BraidKey, x_at: &[usize]) -> u32 {
    let mut stops: Vec<(usize, u32)> = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| l[0] >= 0 && l[3] == 1)
        .map(|(k, l)| (x_at[k], l[0] as u32))
        .collect();
    stops.sort_unstable();
    let mut at = st.beta;
    let mut cost = 0;
    for (_, spin) in stops {
        cost += at.abs_diff(spin);
        at = spin;
    }
    cost + at
}

/// Λ coefficients, actions on V(p) and braid sums at fixed order, precision,
/// spin cutoff and p.
pub struct QlgEngine<M: PMode> {
    mode: M,
    cg: Arc<QuantumCg>,
    cutoff: u32,
    max_states: usize,
    prune: bool,
    lambda: Mutex<HashMap<[i64; 4], Series<M::C>>>,
    gact: Mutex<HashMap<[i64; 5], GAction<M::C>>>,
}

impl QlgEngine<NumericP> {
    pub fn numeric(p: GaussianRational, order: usize, digits: usize) -> Self {
        Self::new(NumericP(p), Arc::new(QuantumCg::new(order, digits)))
    }
}

impl QlgEngine<SymbolicP> {
    pub fn symbolic(order: usize, digits: usize) -> Self {
        Self::new(SymbolicP, Arc::new(QuantumCg::new(order, digits)))
    }
}

impl<M: PMode> QlgEngine<M> {
    /// Spin cutoff defaults to the order.
    pub fn new(mode: M, cg: Arc<QuantumCg>) -> Self {
        let cutoff = cg.order() as u32;
        QlgEngine {
            mode,
            cg,
            cutoff,
            max_states: DEFAULT_MAX_STATES,
            prune: true,
            lambda: Mutex::new(HashMap::new()),
            gact: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_cutoff(mut self, cutoff: u32) -> Self {
        self.cutoff = cutoff;
        self.gact.lock().unwrap().clear();
        self
    }

    pub fn with_max_states(mut self, max_states: usize) -> Self {
        self.max_states = max_states;
        self
    }

    /// Turn h-order pruning in `braid_sum` on or off (on by default).
    pub fn with_pruning(mut self, prune: bool) -> Self {
        self.prune = prune;
        self
    }

    pub fn order(&self) -> usize {
        self.cg.order()
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn mode(&self) -> &M {
        &self.mode
    }

    pub fn cg_table(&self) -> &Arc<QuantumCg> {
        &self.cg
    }

    fn cg(&self, l: [i64; 6]) -> Series<M::C> {
        self.cg.get(l[0], l[1], l[2], l[3], l[4], l[5]).map(|c| self.mode.embed(c))
    }

    fn q_pow(&self, x: BigRational) -> Series<M::C> {
        Series::<BigComplex>::from_exact(&q_pow(&x, self.order()), self.cg.bits()).map(|c| self.mode.embed(c))
    }

    /// Λ^{AB C}_D(p) from doubled labels:
    /// Σ_σ CG(C,B,A; σ,−σ,0) q^{2σp} CG(B,C,D; −σ,σ,0) over |σ| ≤ B.
    pub fn lambda_coeff(&self, a2: i64, b2: i64, c2: i64, d2: i64) -> Series<M::C> {
        let key = [a2, b2, c2, d2];
        if let Some(v) = self.lambda.lock().unwrap().get(&key) {
            return v.clone();
        }
        let order = self.order();
        let mut acc: Series<M::C> = Series::zero(order);
        if c2 >= 0 && b2 >= 0 {
            let mut s2 = -c2;
            while s2 <= c2 {
                if s2.abs() <= b2 {
                    let left = self.cg([c2, b2, a2, s2, -s2, 0]);
                    if !left.is_zero() {
                        let right = self.cg([b2, c2, d2, -s2, s2, 0]);
                        if !right.is_zero() {
                            let q = self.mode.q_two_sigma_p(s2, order, self.cg.bits());
                            acc = acc.add(&left.mul(&q).mul(&right));
                        }
                    }
                }
                s2 += 2;
            }
        }
        self.lambda.lock().unwrap().insert(key, acc.clone());
        acc
    }

    fn gact(&self, alpha: i64, i: i64, j: i64, st: BalancedState) -> GAction<M::C> {
        let (b, ib) = (st.beta as i64, st.i as i64);
        let key = [alpha, i, j, b, ib];
        if let Some(v) = self.gact.lock().unwrap().get(&key) {
            return v.clone();
        }
        let mut out: StateMap<M::C> = BTreeMap::new();
        for g in 0..=self.cutoff as i64 {
            if (g - b).abs() > 2 * alpha {
                continue;
            }
            let ig = j + ib - i;
            if ig.abs() > g {
                continue;
            }
            let x = ig + i;
            for d in (g - alpha).abs()..=g + alpha {
                if x.abs() > d {
                    continue;
                }
                let c1 = self.cg([2 * g, 2 * alpha, 2 * d, 2 * ig, 2 * i, 2 * x]);
                if c1.is_zero() {
                    continue;
                }
                let c2 = self.cg([2 * alpha, 2 * b, 2 * d, 2 * j, 2 * ib, 2 * x]);
                if c2.is_zero() {
                    continue;
                }
                let lam = self.lambda_coeff(2 * g, 2 * alpha, 2 * d, 2 * b);
                let term = c1.mul(&c2).mul(&lam);
                push_state(&mut out, BalancedState { beta: g as u32, i: ig as i32 }, term);
            }
        }
        let v: Arc<Vec<_>> = Arc::new(out.into_iter().filter(|(_, s)| !s.is_zero()).collect());
        self.gact.lock().unwrap().insert(key, v.clone());
        v
    }

    /// g^α_{i j} acting on v^β_{i_β}, normalizers set to 1. Output spins are
    /// limited by the cutoff, which is exact when cutoff ≥ β + 2α.
    pub fn g_action(&self, alpha: u32, i: i32, j: i32, st: BalancedState) -> StateMap<M::C> {
        self.gact(alpha as i64, i as i64, j as i64, st).iter().cloned().collect()
    }

    /// S⁻¹(g^α_{i j}) = q^{−i+j}(−1)^{i−j} g^α_{−i,−j} acting on v^β_{i_β}.
    pub fn g_inverse_action(&self, alpha: u32, i: i32, j: i32, st: BalancedState) -> StateMap<M::C> {
        let fac = self.antipode_factor(i as i64, j as i64);
        self.gact(alpha as i64, -(i as i64), -(j as i64), st)
            .iter()
            .map(|(s, v)| (*s, v.mul(&fac)))
            .collect()
    }

    fn antipode_factor(&self, i: i64, j: i64) -> Series<M::C> {
        let q = self.q_pow(BigRational::from_integer((j - i).into()));
        if parity_sign(i - j) < 0 {
            q.neg()
        } else {
            q
        }
    }

    /// X^α_{i j} v^β_{i_β} = δ(α,β) δ(i,i_β) v^α_j.
    pub fn x_action(&self, alpha: u32, i: i32, j: i32, st: BalancedState) -> StateMap<M::C> {
        let mut out = BTreeMap::new();
        if alpha == st.beta && i == st.i && j.unsigned_abs() <= alpha {
            out.insert(BalancedState { beta: alpha, i: j }, Series::one(self.order()));
        }
        out
    }

    /// G v^α_i = q^{2i} v^α_i.
    pub fn group_like_action(&self, st: BalancedState) -> StateMap<M::C> {
        let mut out = BTreeMap::new();
        out.insert(st, self.q_pow(BigRational::from_integer((2 * st.i as i64).into())));
        out
    }

    /// ⟨v⁰₀, ∏ T v⁰₀⟩ for the closure of b, crossing labels truncated at the
    /// spin cutoff.
    ///
    /// With pruning on, each partial product carries a lower bound on its
    /// h-adic order: a g-step from spin β to γ costs |β−γ|, and the rest of
    /// the walk must climb to every spin still owed to an open X and return to
    /// 0. Terms whose bound exceeds the order are dropped.
    pub fn braid_sum(&self, b: &BraidWord) -> Result<Series<M::C>> {
        b.require_knot()?;
        let order = self.order();
        if self.cutoff > 60 {
            return Err(Error::Resource(format!("spin cutoff {} too large", self.cutoff)));
        }
        let ops = operator_word(b);
        let n = b.len();
        let mut x_at = vec![0; n];
        for (t, op) in ops.iter().enumerate() {
            if let Op::X(k) = op {
                x_at[*k] = t;
            }
        }
        let mut states: BTreeMap<BraidKey, (Series<M::C>, u32)> = BTreeMap::new();
        states.insert((vec![NO_LABEL; n], BalancedState::vacuum()), (Series::one(order), 0));
        for op in ops {
            let entries: Vec<BraidEntry<M::C>> = std::mem::take(&mut states).into_iter().collect();
            let produced = par::map(&entries, |(key, (val, bound))| self.step(op, key, val, *bound));
            for batch in produced {
                for (k, v, bound) in batch {
                    if self.prune && bound + still_needed(&k, &x_at) > order as u32 {
                        continue;
                    }
                    match states.get_mut(&k) {
                        Some(acc) => {
                            acc.0 = acc.0.add(&v);
                            acc.1 = acc.1.min(bound);
                        }
                        None => {
                            states.insert(k, (v, bound));
                        }
                    }
                }
            }
            states.retain(|_, v| !v.0.is_zero());
            if states.len() > self.max_states {
                return Err(Error::Resource(format!(
                    "braid sum exceeded {} live states; lower the order or cutoff",
                    self.max_states
                )));
            }
        }
        let mut total = Series::zero(order);
        for ((labels, st), (v, _)) in &states {
            if labels.iter().any(|l| l[0] >= 0) {
                return Err(Error::Consistency("crossing label left open after the walk".into()));
            }
            if st.beta == 0 {
                total = total.add(v);
            }
        }
        Ok(total)
    }

    fn step(&self, op: Op, key: &BraidKey, val: &Series<M::C>, bound: u32) -> Vec<(BraidKey, Series<M::C>, u32)> {
        let (labels, st) = key;
        let mut out = Vec::new();
        match op {
            Op::Twist => {
                for (s, c) in self.group_like_action(*st) {
                    out.push(((labels.clone(), s), val.mul(&c), bound));
                }
            }
            Op::X(k) => {
                let l = labels[k];
                if l[0] >= 0 {
                    if l[0] as u32 == st.beta && l[1] as i32 == st.i {
                        let mut nl = labels.clone();
                        nl[k] = NO_LABEL;
                        out.push(((nl, BalancedState { beta: st.beta, i: l[2] as i32 }), val.clone(), bound));
                    }
                } else {
                    let b = st.beta as i32;
                    for j in -b..=b {
                        let mut nl = labels.clone();
                        nl[k] = [st.beta as i8, st.i as i8, j as i8, 0];
                        out.push(((nl, BalancedState { beta: st.beta, i: j }), val.clone(), bound));
                    }
                }
            }
            Op::G(k) | Op::GInv(k) => {
                let inverse = matches!(op, Op::GInv(_));
                let apply = |a: i8, i: i8, j: i8| -> StateMap<M::C> {
                    if inverse {
                        self.g_inverse_action(a as u32, i as i32, j as i32, *st)
                    } else {
                        self.g_action(a as u32, j as i32, i as i32, *st)
                    }
                };
                let cost = |s: &BalancedState| bound + s.beta.abs_diff(st.beta);
                let l = labels[k];
                if l[0] >= 0 {
                    let mut nl = labels.clone();
                    nl[k] = NO_LABEL;
                    for (s, c) in apply(l[0], l[1], l[2]) {
                        out.push(((nl.clone(), s), val.mul(&c), cost(&s)));
                    }
                } else {
                    // a label opened here must later be reached by the walk,
                    // which costs at least a more orders of h
                    let top = if self.prune { (self.order() as u32).saturating_sub(bound).min(self.cutoff) } else { self.cutoff };
                    for a in 0..=top as i8 {
                        for i in -a..=a {
                            for j in -a..=a {
                                let mut nl = labels.clone();
                                nl[k] = [a, i, j, 1];
                                for (s, c) in apply(a, i, j) {
                                    out.push(((nl.clone(), s), val.mul(&c), cost(&s)));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Σ_{α ≤ cutoff} [2α+1] Λ^{0αα}_α Λ^{ααα}_0.
    pub fn trefoil_closed_sum(&self) -> Series<M::C> {
        let order = self.order();
        let mut acc = Series::zero(order);
        for a in 0..=self.cutoff as i64 {
            let d = Series::<BigComplex>::from_exact(&q_integer(2 * a + 1, order), self.cg.bits())
                .map(|c| self.mode.embed(c));
            let t = d
                .mul(&self.lambda_coeff(0, 2 * a, 2 * a, 2 * a))
                .mul(&self.lambda_coeff(2 * a, 2 * a, 2 * a, 0));
            acc = acc.add(&t);
        }
        acc
    }
}

/// S_b at numeric p with spin cutoff N.
pub fn braid_sum(b: &BraidWord, p: &GaussianRational, order: usize, digits: usize) -> Result<CSeries> {
    QlgEngine::numeric(p.clone(), order, digits).braid_sum(b)
}

/// Σ_{α ≤ N} [2α+1] Λ^{0αα}_α Λ^{ααα}_0 at numeric p.
pub fn trefoil_closed_sum(p: &GaussianRational, order: usize, digits: usize) -> CSeries {
    QlgEngine::numeric(p.clone(), order, digits).trefoil_closed_sum()
}

/// The four closed forms for Λ^{A ½ C'}_D at integer C ≥ 0, exact in h at
/// numeric p. Entries are (doubled labels [2A, 1, 2C', 2D], value); the first
/// shape needs C ≥ 1.
pub fn lfor_closed_forms(c: i64, p: &GaussianRational, order: usize) -> Vec<([i64; 4], Exact)> {
    let q = |x: i64| q_pow(&BigRational::from_integer(x.into()), order);
    // q^{±p} = e^{±ph/2}
    let qp = |sign: i64| exp_scaled(&p.mul(&GaussianRational::ratio(sign, 2)), order);
    let one: Exact = Series::one(order);
    let sum_p = qp(1).add(&qp(-1));
    let den2 = q(2 * c + 2).add(&one);
    let mut out = Vec::new();
    if c >= 1 {
        let v = q(c).mul(&sum_p).div(&q(2 * c).add(&one)).unwrap();
        out.push(([2 * c, 1, 2 * c - 1, 2 * c], v));
    }
    out.push(([2 * c, 1, 2 * c + 1, 2 * c], q(c + 1).mul(&sum_p).div(&den2).unwrap().neg()));
    out.push(([2 * c, 1, 2 * c + 1, 2 * c + 2], q(2 * c + 2).mul(&qp(1)).sub(&qp(-1)).div(&den2).unwrap()));
    out.push(([2 * c + 2, 1, 2 * c + 1, 2 * c], q(2 * c + 2).mul(&qp(-1)).sub(&qp(1)).div(&den2).unwrap()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{catalog, parse_braid};

    const D: usize = 60;

    fn tol() -> f64 {
        10f64.powi(-(D as i32 - 15))
    }

    fn f64_of(s: &CSeries, k: usize) -> f64 {
        s.coeff(k).to_f64_pair().0
    }

    /// Classical CG by the Racah formula in f64.
    fn racah(j1: i64, j2: i64, j: i64, m1: i64, m2: i64, m: i64) -> f64 {
        // doubled labels
        if m1 + m2 != m || !triangle(j1, j2, j) || !spin_ok(j1, m1) || !spin_ok(j2, m2) || !spin_ok(j, m) {
            return 0.0;
        }
        let f = |n2: i64| -> f64 { (1..=n2 / 2).map(|k| k as f64).product() };
        let pre = ((j + 1) as f64 * f(j + j1 - j2) * f(j - j1 + j2) * f(j1 + j2 - j) / f(j1 + j2 + j + 2)).sqrt();
        let pre2 = (f(j + m) * f(j - m) * f(j1 - m1) * f(j1 + m1) * f(j2 - m2) * f(j2 + m2)).sqrt();
        let mut sum = 0.0;
        for k in 0..=40i64 {
            let args = [j1 + j2 - j - 2 * k, j1 - m1 - 2 * k, j2 + m2 - 2 * k, j - j2 + m1 + 2 * k, j - j1 - m2 + 2 * k];
            if args.iter().any(|&a| a < 0) {
                continue;
            }
            let den: f64 = f(2 * k) * args.iter().map(|&a| f(a)).product::<f64>();
            sum += if k % 2 == 0 { 1.0 } else { -1.0 } / den;
        }
        pre * pre2 * sum
    }

    #[test]
    fn cg_trivial_and_selection() {
        let t = QuantumCg::new(3, D);
        assert_eq!(f64_of(&t.get(0, 0, 0, 0, 0, 0), 0), 1.0);
        assert!(t.get(2, 2, 2, 2, 2, 2).is_zero()); // m+n ≠ p
        assert!(t.get(2, 2, 6, 0, 0, 0).is_zero()); // triangle
        assert!(t.get(1, 1, 1, 1, 0, 1).is_zero()); // parity
    }

    #[test]
    fn cg_classical_limit_matches_racah() {
        let t = QuantumCg::new(2, D);
        for i2 in 0..=3i64 {
            for j2 in 0..=3 {
                for k2 in (i2 - j2).abs()..=i2 + j2 {
                    if !triangle(i2, j2, k2) {
                        continue;
                    }
                    // the q-phase conventions agree with Racah up to a sign fixed by (I,J,K)
                    let mut ratio: Option<f64> = None;
                    for m2 in (-i2..=i2).step_by(2) {
                        for n2 in (-j2..=j2).step_by(2) {
                            let p2 = m2 + n2;
                            if p2.abs() > k2 {
                                continue;
                            }
                            let q = f64_of(&t.get(i2, j2, k2, m2, n2, p2), 0);
                            let c = racah(i2, j2, k2, m2, n2, p2);
                            assert!((q.abs() - c.abs()).abs() < 1e-12, "{i2} {j2} {k2} {m2} {n2}: {q} vs {c}");
                            if c.abs() > 1e-9 {
                                let r = q / c;
                                if let Some(r0) = ratio {
                                    assert!((r - r0).abs() < 1e-12);
                                }
                                ratio = Some(r);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cg_orthogonality() {
        let t = QuantumCg::new(4, D);
        for i2 in 0..=2i64 {
            for j2 in 0..=2 {
                for k2 in (i2 - j2).abs()..=i2 + j2 {
                    for kk2 in (i2 - j2).abs()..=i2 + j2 {
                        if !triangle(i2, j2, k2) || !triangle(i2, j2, kk2) {
                            continue;
                        }
                        for p2 in (-k2..=k2).step_by(2) {
                            let mut acc: CSeries = Series::zero(4);
                            for m2 in (-i2..=i2).step_by(2) {
                                let n2 = p2 - m2;
                                acc = acc.add(&t.get(i2, j2, k2, m2, n2, p2).mul(&t.get(i2, j2, kk2, m2, n2, p2)));
                            }
                            let want: CSeries = if k2 == kk2 { Series::one(4) } else { Series::zero(4) };
                            assert!(acc.max_abs_diff(&want) < tol(), "{i2} {j2} {k2} {kk2} {p2}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lambda_identities() {
        for p in [2, 3] {
            let e = QlgEngine::numeric(GaussianRational::int(p), 4, D);
            for a2 in (0..=6).step_by(2) {
                let one: CSeries = Series::one(4);
                assert!(e.lambda_coeff(a2, 0, a2, a2).max_abs_diff(&one) < tol());
            }
            for c in 0..=3 {
                for (l, want) in lfor_closed_forms(c, &GaussianRational::int(p), 4) {
                    let got = e.lambda_coeff(l[0], l[1], l[2], l[3]);
                    assert!(got.max_abs_diff(&Series::from_exact(&want, e.cg_table().bits())) < tol(), "{l:?}");
                }
            }
            // half-integer α: Λ^{ααα}_0 = 0
            assert!(e.lambda_coeff(1, 1, 1, 0).max_abs() < tol());
        }
    }

    #[test]
    fn symbolic_p_specializes() {
        let s = QlgEngine::symbolic(3, D);
        let p = GaussianRational::complex(1, 3, 2, 5);
        let n = QlgEngine::numeric(p.clone(), 3, D);
        let x = BigComplex::from_gaussian(&p, n.cg_table().bits());
        for l in [[2, 1, 1, 0], [2, 2, 2, 0], [0, 2, 2, 2], [4, 2, 2, 2]] {
            let sym = s.lambda_coeff(l[0], l[1], l[2], l[3]).specialize(&x);
            assert!(sym.max_abs_diff(&n.lambda_coeff(l[0], l[1], l[2], l[3])) < tol());
            // degree in p of the h^n coefficient is at most n
            for (k, c) in s.lambda_coeff(l[0], l[1], l[2], l[3]).coeffs().iter().enumerate() {
                assert!(c.degree().is_none_or(|d| d <= k));
            }
        }
    }

    #[test]
    fn actions() {
        let e = QlgEngine::numeric(GaussianRational::int(2), 3, D);
        let v = |b, i| BalancedState::new(b, i).unwrap();
        // g⁰₀₀ acts as the identity
        for st in [v(0, 0), v(1, -1), v(2, 1)] {
            let out = e.g_action(0, 0, 0, st);
            assert_eq!(out.len(), 1);
            assert!(out[&st].max_abs_diff(&Series::one(3)) < tol());
        }
        let x = e.x_action(1, 1, 0, v(1, 1));
        assert!(x.contains_key(&v(1, 0)));
        assert!(e.x_action(1, 1, 0, v(2, 1)).is_empty());
        let g = e.group_like_action(v(1, 1));
        let eh: CSeries = Series::from_exact(&exp_scaled(&GaussianRational::one(), 3), e.cg_table().bits());
        assert!(g[&v(1, 1)].max_abs_diff(&eh) < tol());
        // couplings with a trivial spin are 1
        for a2 in 0..=4i64 {
            for m2 in (-a2..=a2).step_by(2) {
                assert!(e.cg_table().get(0, a2, a2, 0, m2, m2).max_abs_diff(&Series::one(3)) < tol());
                assert!(e.cg_table().get(a2, 0, a2, m2, 0, m2).max_abs_diff(&Series::one(3)) < tol());
            }
        }
        // ⟨v⁰⁰, g^α_{ij} v^α_{i−j}⟩ = CG(α,α,α; j, i−j, i) Λ^{0αα}_α
        for a in 1..=2i32 {
            for i in -a..=a {
                for j in -a..=a {
                    if (i - j).abs() > a {
                        continue;
                    }
                    let st = v(a as u32, i - j);
                    let got = e.g_action(a as u32, i, j, st).get(&v(0, 0)).cloned().unwrap_or_else(|| Series::zero(3));
                    let (a2, i2, j2) = (2 * a as i64, 2 * i as i64, 2 * j as i64);
                    let want = e.cg_table().get(a2, a2, a2, j2, i2 - j2, i2).mul(&e.lambda_coeff(0, a2, a2, a2));
                    assert!(got.max_abs_diff(&want) < tol());
                }
            }
        }
    }

    /// ⟨v^γ| g^α |v^β⟩ = O(h^{|β−γ|}), which the pruning in `braid_sum` uses.
    #[test]
    fn order_bound_of_matrix_elements() {
        let order = 4;
        let e = QlgEngine::numeric(GaussianRational::int(3), order, D);
        for a in 0..=3u32 {
            for b in 0..=3u32 {
                for ib in -(b as i32)..=b as i32 {
                    for i in -(a as i32)..=a as i32 {
                        for j in -(a as i32)..=a as i32 {
                            let st = BalancedState { beta: b, i: ib };
                            for (inverse, out) in [(false, e.g_action(a, i, j, st)), (true, e.g_inverse_action(a, i, j, st))] {
                                for (s, c) in out {
                                    let gap = s.beta.abs_diff(b) as usize;
                                    for k in 0..gap.min(order + 1) {
                                        assert!(
                                            f64_of(&c, k).abs() < tol() && c.coeff(k).to_f64_pair().1.abs() < tol(),
                                            "inverse={inverse} g^{a}_({i},{j}) v^{b}_{ib} -> {s:?} at h^{k}"
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn trefoil_sums() {
        let e = QlgEngine::numeric(GaussianRational::int(2), 4, D);
        let closed = e.trefoil_closed_sum();
        assert!((f64_of(&closed, 0) - 1.0).abs() < tol());
        for name in ["trefoil-right", "trefoil-left"] {
            let s = e.braid_sum(&catalog(name).unwrap().braid).unwrap();
            assert!(s.max_abs_diff(&closed) < tol(), "{name}");
        }
        let unknot = e.braid_sum(&catalog("unknot").unwrap().braid).unwrap();
        assert!(unknot.max_abs_diff(&Series::one(4)) < tol());
        assert!(e.braid_sum(&parse_braid("s1 s1", 2).unwrap()).is_err());
    }

    #[test]
    fn pruning_changes_nothing() {
        let b = catalog("figure-eight").unwrap().braid;
        let e = QlgEngine::numeric(GaussianRational::int(2), 3, D);
        let pruned = e.braid_sum(&b).unwrap();
        let full = QlgEngine::numeric(GaussianRational::int(2), 3, D).with_pruning(false).braid_sum(&b).unwrap();
        assert!(pruned.max_abs_diff(&full) < tol());
    }

    #[test]
    fn state_budget() {
        let e = QlgEngine::numeric(GaussianRational::int(2), 3, D).with_pruning(false).with_max_states(10);
        let r = e.braid_sum(&catalog("trefoil-left").unwrap().braid);
        assert!(matches!(r, Err(Error::Resource(_))));
    }

    #[test]
    fn cache_roundtrip() {
        let t = QuantumCg::new(2, D);
        let v = t.get(2, 2, 2, 2, -2, 0);
        let dir = std::env::temp_dir().join(format!("qlg-cache-test-{}", std::process::id()));
        t.dump(&dir).unwrap();
        let u = QuantumCg::new(2, D);
        assert_eq!(u.load(&dir).unwrap(), 1);
        assert!(u.get(2, 2, 2, 2, -2, 0).max_abs_diff(&v) < 1e-55);
        assert!(QuantumCg::new(3, D).load(&dir).is_err());
        std::fs::remove_dir_all(&dir).ok();
    }
}
