//! The acceptance suite: ten end-to-end checks tying the two pipelines
//! together. Shared by the `acceptance` test target and `qlorentz verify`.

use crate::braid::{catalog, markov_variants, BraidWord};
use crate::chord::{enumerate_diagrams, four_t_generators, ChordDiagram};
use crate::invariants::{equivalence_check_with, x_invariant};
use crate::jones::{jones_z_interpolated, PolySeries};
use crate::qlg::{lfor_closed_forms, CSeries, QlgEngine, QuantumCg, SymbolicP};
use crate::scalar::{BigComplex, FromGaussian, GaussianRational, Poly, Ring, Series, DEFAULT_DIGITS};
use crate::weights::{
    lambda_mp_direct, lambda_mp_direct_with, lambda_mp_factorized, lambda_z_sl2, InfinitesimalRMatrix,
};
use num_rational::BigRational;
use serde::Serialize;
use std::sync::Arc;
use std::time::Instant;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Caps the truncation order of every criterion; `None` runs each at its own.
    pub max_order: Option<usize>,
    /// Working precision D. Float comparisons use tolerance 10^{−(D−15)}.
    pub digits: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_order: None, digits: DEFAULT_DIGITS }
    }
}

impl SuiteConfig {
    fn order(&self, own: usize) -> usize {
        self.max_order.map_or(own, |m| m.min(own))
    }

    pub fn tolerance(&self) -> f64 {
        10f64.powi(-(self.digits as i32 - 15))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag}  criterion {} {}: {} [{:.1}s]", self.id, self.name, self.detail, self.seconds)
    }
}

type Check = fn(&SuiteConfig) -> Result<String, String>;

const CRITERIA: [(&str, Check); 10] = [
    ("unknot closed form", c1_unknot),
    ("4T vanishing", c2_four_term),
    ("character-route agreement", c3_character_route),
    ("degree/parity/vanishing", c4_structure),
    ("mirror and orientation", c5_mirror),
    ("Markov invariance", c6_markov),
    ("Λ closed forms", c7_lfor),
    ("trefoil closed sum", c8_trefoil_closed),
    ("S_b = X(0,p)·(2α+1)²/[2α+1]²", c9_equivalence),
    ("truncation soundness", c10_truncation),
];

pub fn criterion_names() -> Vec<(usize, &'static str)> {
    CRITERIA.iter().enumerate().map(|(i, (n, _))| (i + 1, *n)).collect()
}

/// Run the selected criteria (all when `only` is empty), calling `report`
/// as each finishes. A panic inside a check counts as a failure.
pub fn run_suite(cfg: &SuiteConfig, only: &[usize], mut report: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    let mut out = Vec::new();
    for (i, (name, check)) in CRITERIA.iter().enumerate() {
        let id = i + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let r = std::panic::catch_unwind(|| check(cfg)).unwrap_or_else(|_| Err("panicked".into()));
        let (pass, detail) = match r {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let res = CriterionResult { id, name, pass, detail, seconds: t.elapsed().as_secs_f64() };
        report(&res);
        out.push(res);
    }
    out
}

type Q = GaussianRational;

fn knot(name: &str) -> BraidWord {
    catalog(name).unwrap().braid
}

fn fail(msg: String) -> Result<String, String> {
    Err(msg)
}

/// F_z(h) = sinh((2z+1)h/2) / ((2z+1) sinh(h/2)) with coefficients in Q[z]:
/// with u = 2z+1 both sinh series divided by their linear term give
/// Σ_k u^{2k}(h/2)^{2k}/(2k+1)! over Σ_k (h/2)^{2k}/(2k+1)!.
fn unknot_oracle(order: usize) -> PolySeries {
    let u = Poly::linear(Q::int(2), Q::one());
    let mut num = Vec::new();
    let mut den = Vec::new();
    let mut fk = BigRational::from_integer(1.into()); // (2k+1)!
    for n in 0..=order {
        if n % 2 == 1 {
            num.push(Poly::zero());
            den.push(Q::zero());
            continue;
        }
        let k = n / 2;
        if k > 0 {
            fk *= BigRational::from_integer(((2 * k) * (2 * k + 1)).into());
        }
        let c = Q::real(BigRational::new(1.into(), 2.into()).pow(n as i32) / &fk);
        num.push(u.pow(n as u32).scale(&c));
        den.push(c);
    }
    let den_inv = Series::from_coeffs(den).inv().unwrap();
    let num: PolySeries = Series::from_coeffs(num);
    num.mul(&den_inv.map(|c| Poly::constant(c.clone())))
}

fn c1_unknot(cfg: &SuiteConfig) -> Result<String, String> {
    let n = cfg.order(6);
    let got = jones_z_interpolated(&knot("unknot"), n).map_err(|e| e.to_string())?;
    let want = unknot_oracle(n);
    if got == want {
        Ok(format!("jones_z_interpolated(unknot, {n}) = Taylor(F_z), orders 0..{n}"))
    } else {
        fail(format!("mismatch: got {got} want {want}"))
    }
}

fn c2_four_term(_: &SuiteConfig) -> Result<String, String> {
    let t = InfinitesimalRMatrix::t_ck();
    let mut count = 0;
    for n in 2..=3 {
        for rel in four_t_generators(n).map_err(|e| e.to_string())? {
            // termwise, so that relations which collect to zero still get evaluated
            let mut sl2 = Poly::zero();
            for (d, s) in &rel.terms {
                sl2 = sl2.add(&lambda_z_sl2(d, &t).unwrap().scale(&Q::int(*s as i64)));
            }
            if !sl2.is_zero() {
                return fail(format!("sl2 weight of {rel} is {sl2}"));
            }
            for m in 0..=2 {
                let m = BigRational::from_integer(m.into());
                let mut acc = Poly::zero();
                for (d, s) in &rel.terms {
                    acc = acc.add(&lambda_mp_factorized(d, &m).unwrap().scale(&Q::int(*s as i64)));
                }
                if !acc.is_zero() {
                    return fail(format!("Lorentz weight (m={m}) of {rel} is {acc}"));
                }
            }
            count += 1;
        }
    }
    Ok(format!("{count} relations (n = 2, 3) vanish for sl2 and Lorentz m = 0, 1, 2"))
}

fn c3_character_route(_: &SuiteConfig) -> Result<String, String> {
    let mut count = 0;
    for n in 0..=3 {
        for d in enumerate_diagrams(n).unwrap() {
            for m in 0..=2i64 {
                let direct = lambda_mp_direct(&d, m).map_err(|e| e.to_string())?;
                let fact = lambda_mp_factorized(&d, &BigRational::from_integer(m.into())).map_err(|e| e.to_string())?;
                if direct != fact {
                    return fail(format!("{d}, m={m}: direct {direct} vs factorized {fact}"));
                }
                count += 1;
            }
        }
    }
    let th = ChordDiagram::theta();
    for m in 0..=2i64 {
        let eighth = Q::ratio(1, 8);
        let want = |s: i64| {
            Poly::from_coeffs(vec![Q::ratio(m * m - 1, 8), Q::ratio(2 * s * m, 8), eighth.clone()])
        };
        let l = lambda_mp_direct_with(&InfinitesimalRMatrix::t_left(), &th, m).unwrap();
        let r = lambda_mp_direct_with(&InfinitesimalRMatrix::t_right(), &th, m).unwrap();
        if l != want(1) || r != want(-1) {
            return fail(format!("Casimirs at m={m}: {l}, {r}"));
        }
    }
    Ok(format!("{count} (diagram, m) pairs agree; Casimirs (p²±2mp+m²−1)/8"))
}

fn c4_structure(cfg: &SuiteConfig) -> Result<String, String> {
    let order = cfg.order(5);
    for name in ["trefoil-right", "trefoil-left", "figure-eight"] {
        let b = knot(name);
        for m in [0, 1] {
            let x = x_invariant(&b, m, order).map_err(|e| e.to_string())?;
            let s = x.structure();
            if !s.ok() {
                return fail(format!("{name}, m={m}: {:?}", s.failures));
            }
            // independent restatement of the three properties
            for (n, c) in x.series.coeffs().iter().enumerate() {
                if c.degree().unwrap_or(0) > 2 * n {
                    return fail(format!("{name}: degree at h^{n}"));
                }
                if m == 0 {
                    if c.coeffs().iter().enumerate().any(|(k, a)| k % 2 == 1 && !a.is_zero()) {
                        return fail(format!("{name}: odd power at h^{n}"));
                    }
                    if n > 0 && !c.eval(&Q::one()).is_zero() {
                        return fail(format!("{name}: nonzero at p=1, h^{n}"));
                    }
                }
            }
        }
    }
    Ok(format!("T+, T-, figure-eight at N={order}: deg ≤ 2n, even at m=0, zero at p=1"))
}

fn c5_mirror(cfg: &SuiteConfig) -> Result<String, String> {
    let n = cfg.order(4);
    let a = x_invariant(&knot("T+"), 0, n).unwrap();
    let b = x_invariant(&knot("T-"), 0, n).unwrap();
    if a != b {
        return fail("X(0,p,T+) ≠ X(0,p,T-)".into());
    }
    for name in ["trefoil-right", "figure-eight"] {
        let k = knot(name);
        let p = jones_z_interpolated(&k, n).unwrap();
        let pm = jones_z_interpolated(&k.mirror(), n).unwrap();
        for i in 0..=n {
            let sign = if i % 2 == 0 { Q::one() } else { Q::int(-1) };
            if pm.coeff(i) != &p.coeff(i).scale(&sign) {
                return fail(format!("{name}: mirror parity fails at h^{i}"));
            }
        }
        let r = k.reverse();
        if jones_z_interpolated(&r, n).unwrap() != p {
            return fail(format!("{name}: reversal changes the Jones series"));
        }
        for m in [0, 1] {
            if x_invariant(&r, m, n).unwrap() != x_invariant(&k, m, n).unwrap() {
                return fail(format!("{name}: reversal changes X(m={m})"));
            }
        }
    }
    Ok(format!("X(T+) = X(T-); mirror gives (-1)^n; reversal invariant (N={n})"))
}

fn max_diff(a: &CSeries, b: &CSeries) -> f64 {
    a.max_abs_diff(b)
}

fn c6_markov(cfg: &SuiteConfig) -> Result<String, String> {
    let n = cfg.order(4);
    let t = knot("T+");
    let variants = markov_variants(&t);
    if variants.len() < 6 {
        return fail(format!("only {} variants", variants.len()));
    }
    let base = jones_z_interpolated(&t, n).unwrap();
    for v in &variants {
        if jones_z_interpolated(v, n).unwrap() != base {
            return fail(format!("Jones differs on {v}"));
        }
    }
    let mut worst: f64 = 0.0;
    for p in [2, 3] {
        let e = QlgEngine::numeric(Q::int(p), n, cfg.digits);
        let s0 = e.braid_sum(&t).map_err(|e| e.to_string())?;
        for v in &variants {
            let s = e.braid_sum(v).map_err(|e| e.to_string())?;
            let d = max_diff(&s, &s0);
            worst = worst.max(d);
            if d > cfg.tolerance() {
                return fail(format!("braid_sum differs on {v} at p={p}: {d:e}"));
            }
        }
    }
    Ok(format!("{} variants; Jones exact; braid_sum max diff {worst:.1e} (p=2,3)", variants.len()))
}

fn c7_lfor(cfg: &SuiteConfig) -> Result<String, String> {
    let n = cfg.order(4);
    let cg = Arc::new(QuantumCg::new(n, cfg.digits));
    let bits = cg.bits();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for p in [2, 3] {
        let e = QlgEngine::new(crate::qlg::NumericP(Q::int(p)), cg.clone());
        for c in 0..=3 {
            for (l, want) in lfor_closed_forms(c, &Q::int(p), n) {
                let got = e.lambda_coeff(l[0], l[1], l[2], l[3]);
                let d = got.max_abs_diff(&Series::from_exact(&want, bits));
                worst = worst.max(d);
                count += 1;
                if d > cfg.tolerance() {
                    return fail(format!("p={p}, labels {l:?}: {d:e}"));
                }
            }
        }
    }
    let sym = QlgEngine::new(SymbolicP, cg.clone());
    for p in [Q::i(), Q::complex(1, 2, 1, 3), Q::complex(-2, 3, 5, 4)] {
        let x = BigComplex::from_gaussian(&p, bits);
        for c in 0..=3 {
            for (l, want) in lfor_closed_forms(c, &p, n) {
                let got = sym.lambda_coeff(l[0], l[1], l[2], l[3]).specialize(&x);
                let d = got.max_abs_diff(&Series::from_exact(&want, bits));
                worst = worst.max(d);
                count += 1;
                if d > cfg.tolerance() {
                    return fail(format!("symbolic at p={p}, labels {l:?}: {d:e}"));
                }
            }
        }
    }
    Ok(format!("{count} closed forms (C = 0..3, p = 2, 3, three complex points via symbolic p); max diff {worst:.1e}"))
}

fn c8_trefoil_closed(cfg: &SuiteConfig) -> Result<String, String> {
    let n = cfg.order(4);
    let mut worst: f64 = 0.0;
    for p in [2, 3] {
        let e = QlgEngine::numeric(Q::int(p), n, cfg.digits);
        let closed = e.trefoil_closed_sum();
        let minus = e.braid_sum(&knot("T-")).map_err(|e| e.to_string())?;
        let plus = e.braid_sum(&knot("T+")).map_err(|e| e.to_string())?;
        let d1 = max_diff(&minus, &closed);
        let d2 = max_diff(&minus, &plus);
        worst = worst.max(d1).max(d2);
        if d1 > cfg.tolerance() || d2 > cfg.tolerance() {
            return fail(format!("p={p}: |S(T-) - closed| = {d1:e}, |S(T-) - S(T+)| = {d2:e}"));
        }
    }
    Ok(format!("S(T-) = closed sum = S(T+) at p = 2, 3, N={n}; max diff {worst:.1e}"))
}

fn c9_equivalence(cfg: &SuiteConfig) -> Result<String, String> {
    let n = cfg.order(4);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for p in [1u32, 2, 3] {
        let e = QlgEngine::numeric(Q::int(p as i64), n, cfg.digits);
        for name in ["trefoil-right", "trefoil-left", "figure-eight"] {
            let r = equivalence_check_with(&e, &knot(name), p, cfg.digits).map_err(|e| e.to_string())?;
            worst = worst.max(r.max_diff);
            if !r.pass {
                failures.push(format!("{name} p={p}: {:e}", r.max_diff));
            }
            if p == 1 {
                let one: CSeries = Series::one(n);
                if max_diff(&r.braid_sum, &one) > cfg.tolerance() || max_diff(&r.jones_side, &one) > cfg.tolerance() {
                    failures.push(format!("{name} p=1: sides are not 1"));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("T+, T-, figure-eight at p = 1, 2, 3, N={n}; max diff {worst:.1e}"))
    } else {
        fail(failures.join("; "))
    }
}

fn c10_truncation(cfg: &SuiteConfig) -> Result<String, String> {
    let n = cfg.order(3);
    let mut worst: f64 = 0.0;
    for name in ["trefoil-right", "trefoil-left"] {
        for p in [2, 3] {
            let cg = Arc::new(QuantumCg::new(n, cfg.digits));
            let base = QlgEngine::new(crate::qlg::NumericP(Q::int(p)), cg.clone()).with_pruning(false);
            let raised = QlgEngine::new(crate::qlg::NumericP(Q::int(p)), cg).with_pruning(false).with_cutoff(n as u32 + 1);
            let a = base.braid_sum(&knot(name)).map_err(|e| e.to_string())?;
            let b = raised.braid_sum(&knot(name)).map_err(|e| e.to_string())?;
            let d = max_diff(&a, &b);
            worst = worst.max(d);
            if d > cfg.tolerance() {
                return fail(format!("{name} p={p}: cutoff {n} vs {} differ by {d:e}", n + 1));
            }
        }
    }
    Ok(format!("trefoils, p = 2, 3, N={n}, no pruning: cutoff {n} vs {} max diff {worst:.1e}", n + 1))
}

