//! One function per subcommand, each producing a `Report`.

use crate::config::{PValue, RunConfig};
use crate::output::Report;
use crate::Command;
use clap::ValueEnum;
use num_rational::BigRational;
use qlorentz::braid::{catalog, parse_braid_auto, BraidWord};
use qlorentz::chord::{enumerate_diagrams, four_t_generators, parse_diagram, quotient_dimension, ChordDiagram};
use qlorentz::invariants::{equivalence_check_with, equivalence_rhs, x_invariant};
use qlorentz::jones::{jones_framed, jones_z_interpolated, jones_zero_framing};
use qlorentz::qlg::{NumericP, PMode, QlgEngine, QuantumCg, SymbolicP};
use qlorentz::scalar::{BigComplex, GaussianRational, Poly, Ring, Series};
use qlorentz::verify::{run_suite, SuiteConfig};
use qlorentz::weights::{lambda_mp_direct, lambda_mp_factorized, lambda_z_sl2, InfinitesimalRMatrix};
use qlorentz::{Error, Result};
use serde_json::{json, Value};
use std::path::Path;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algebra {
    Sl2,
    Lorentz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Direct,
    Factorized,
    Both,
}

pub struct Outcome {
    pub report: Report,
    /// Name of an identity that failed to hold, if any.
    pub failed: Option<String>,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Outcome { report, failed: None, notes: Vec::new() }
    }
}

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Command::Diagrams { chords, relations, dimensions, .. } => diagrams(*chords, *relations, *dimensions),
        Command::Weights { diagrams, chords, algebra, route, .. } => weights(cfg, diagrams, *chords, *algebra, *route),
        Command::Jones { spin, blackboard, .. } => jones(cfg, spin.as_deref(), *blackboard),
        Command::Lorentz { check_equivalence, framing, .. } => lorentz(cfg, *check_equivalence, *framing),
        Command::Qlg { lambda, closed_trefoil, no_prune, max_states, .. } => {
            qlg(cfg, lambda.as_deref(), *closed_trefoil, !*no_prune, *max_states)
        }
        Command::Verify { criteria, .. } => verify(cfg, criteria),
    }
}

/// The knot named by --knot or spelled by --braid (exactly one).
pub fn resolve_knot(cfg: &RunConfig) -> Result<(BraidWord, String)> {
    match (&cfg.braid, &cfg.knot) {
        (Some(_), Some(_)) => Err(Error::Invalid("give either a braid or a knot name, not both".into())),
        (Some(b), None) => {
            let w = parse_braid_auto(b)?;
            let text = w.to_string();
            Ok((w, text))
        }
        (None, Some(k)) => {
            let kp = catalog(k)?;
            Ok((kp.braid, kp.name.unwrap_or_else(|| k.clone())))
        }
        (None, None) => Err(Error::Invalid("a knot is required: use --braid or --knot".into())),
    }
}

fn rational_strings(p: &Poly<GaussianRational>) -> Value {
    if p.is_zero() {
        return json!(["0"]);
    }
    json!(p.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn diagrams(n: usize, relations: bool, dimensions: bool) -> Result<Outcome> {
    if dimensions {
        let mut r = Report::new("quotient-dimensions", &["chords", "diagrams", "dimension"]);
        for k in 0..=n {
            r.row(vec![json!(k), json!(enumerate_diagrams(k)?.len()), json!(quotient_dimension(k)?)]);
        }
        return Ok(r.into());
    }
    if relations {
        let mut r = Report::new("four-term-relations", &["chords", "relation", "collected"]);
        for rel in four_t_generators(n)? {
            r.row(vec![json!(n), json!(rel.to_string()), json!(rel.to_sum().to_string())]);
        }
        r.param("chords", n);
        return Ok(r.into());
    }
    let mut r = Report::new("diagrams", &["chords", "diagram", "pairing"]);
    for d in enumerate_diagrams(n)? {
        r.row(vec![json!(n), json!(d.to_string()), json!(d.pairing())]);
    }
    Ok(r.into())
}

fn weights(cfg: &RunConfig, words: &[String], chords: usize, algebra: Algebra, route: Route) -> Result<Outcome> {
    let list: Vec<ChordDiagram> = if words.is_empty() {
        enumerate_diagrams(chords)?
    } else {
        words.iter().map(|w| parse_diagram(w)).collect::<Result<_>>()?
    };
    let mut out: Outcome;
    match algebra {
        Algebra::Sl2 => {
            let t = InfinitesimalRMatrix::t_ck();
            let mut r = Report::new("weights-sl2", &["diagram", "polynomial", "coefficients"]);
            r.param("tensor", "cartan-killing").param("variable", "z");
            for d in &list {
                let v = lambda_z_sl2(d, &t)?;
                r.row(vec![json!(d.to_string()), json!(v.to_string_in("z")), rational_strings(&v)]);
            }
            out = r.into();
        }
        Algebra::Lorentz => {
            let m = cfg.m;
            let mut r = Report::new("weights-lorentz", &["diagram", "m", "polynomial", "coefficients"]);
            r.param("variable", "p").param("route", format!("{route:?}").to_lowercase());
            let mut failed = None;
            for d in &list {
                let v = match route {
                    Route::Direct => lambda_mp_direct(d, m)?,
                    Route::Factorized => lambda_mp_factorized(d, &BigRational::from_integer(m.into()))?,
                    Route::Both => {
                        let a = lambda_mp_direct(d, m)?;
                        let b = lambda_mp_factorized(d, &BigRational::from_integer(m.into()))?;
                        if a != b && failed.is_none() {
                            failed = Some(format!("direct = factorized character on {d} at m = {m}"));
                        }
                        a
                    }
                };
                r.row(vec![json!(d.to_string()), json!(m), json!(v.to_string_in("p")), rational_strings(&v)]);
            }
            out = r.into();
            out.failed = failed;
        }
    }
    Ok(out)
}

fn two_spin(text: &str) -> Result<u32> {
    let s: GaussianRational =
        text.parse().map_err(|_| Error::Parse(format!("spin must be a half-integer such as 3/2, got '{text}'")))?;
    let two = s.add(&s);
    let n = (0..=qlorentz::jones::MAX_TWO_ALPHA).find(|k| GaussianRational::int(*k as i64) == two);
    n.ok_or_else(|| {
        Error::Invalid(format!("spin must be a half-integer in [0, {}]", qlorentz::jones::MAX_TWO_ALPHA / 2))
    })
}

fn jones(cfg: &RunConfig, spin: Option<&str>, blackboard: bool) -> Result<Outcome> {
    let (b, name) = resolve_knot(cfg)?;
    let n = cfg.order;
    match spin {
        Some(s) => {
            let ta = two_spin(s)?;
            let series = if blackboard { jones_framed(&b, ta, n)? } else { jones_zero_framing(&b, ta, n)? };
            let mut r = Report::new("jones-spin", &["n", "coefficient"]);
            r.param("knot", name).param("order", n).param("spin", s).param(
                "framing",
                if blackboard { json!(b.writhe()) } else { json!(0) },
            );
            r.param("normalization", "J/(2z+1)");
            for (k, c) in series.coeffs().iter().enumerate() {
                r.row(vec![json!(k), json!(c.to_string())]);
            }
            Ok(r.into())
        }
        None => {
            let series = jones_z_interpolated(&b, n)?;
            let mut r = Report::new("jones-interpolated", &["n", "polynomial", "coefficients"]);
            r.param("knot", name).param("order", n).param("variable", "z").param("framing", 0);
            r.param("normalization", "J/(2z+1)");
            for (k, c) in series.coeffs().iter().enumerate() {
                r.row(vec![json!(k), json!(c.to_string_in("z")), rational_strings(c)]);
            }
            Ok(r.into())
        }
    }
}

/// Significant digits printed for float results: those within the tolerance.
fn print_digits(cfg: &RunConfig) -> usize {
    cfg.precision - 15
}

/// Decimal text with round-off below the tolerance 10^{−(D−15)} shown as 0.
fn float_text(z: &BigComplex, cfg: &RunConfig) -> String {
    z.chop(10f64.powi(-(print_digits(cfg) as i32))).to_decimal_string(print_digits(cfg))
}

fn lorentz(cfg: &RunConfig, check: bool, framing: i64) -> Result<Outcome> {
    let (b, name) = resolve_knot(cfg)?;
    let n = cfg.order;
    if check {
        let p = integer_p(cfg)?;
        if cfg.m != 0 {
            return Err(Error::Invalid("the equivalence check is for m = 0".into()));
        }
        let engine = QlgEngine::numeric(GaussianRational::int(p as i64), n, cfg.precision).with_cutoff(cfg.cutoff);
        let rep = equivalence_check_with(&engine, &b, p, cfg.precision)?;
        let mut r = Report::new("equivalence", &["n", "braid_sum", "jones_side", "diff"]);
        r.param("knot", name).param("order", n).param("p", p).param("precision", cfg.precision);
        for k in 0..=n {
            r.row(vec![
                json!(k),
                json!(float_text(rep.braid_sum.coeff(k), cfg)),
                json!(float_text(rep.jones_side.coeff(k), cfg)),
                json!(format!("{:.3e}", rep.diffs[k])),
            ]);
        }
        r.summary("max_diff", format!("{:.3e}", rep.max_diff))
            .summary("tolerance", format!("{:.0e}", rep.tolerance))
            .summary("pass", rep.pass);
        let mut out: Outcome = r.into();
        if !rep.pass {
            out.failed = Some(format!("S_b = X(0,p)·p²/[p]² for {} at p = {p}", b));
        }
        return Ok(out);
    }
    let x = x_invariant(&b, cfg.m, n)?.reframed(framing);
    let structure = x.structure();
    let mut out: Outcome = match &cfg.p {
        None => {
            let mut r = Report::new("lorentz", &["n", "polynomial", "coefficients"]);
            r.param("knot", name).param("m", cfg.m).param("order", n).param("framing", framing).param("variable", "p");
            for (k, c) in x.series.coeffs().iter().enumerate() {
                r.row(vec![json!(k), json!(c.to_string_in("p")), rational_strings(c)]);
            }
            r.summary("structure_ok", structure.ok());
            r.into()
        }
        Some(PValue::Symbolic) => return Err(Error::Invalid("lorentz takes a numeric p; omit --p for polynomials".into())),
        Some(PValue::Number(p)) => {
            let vals = x.at(p);
            // at integer p ≥ 1 and m = 0, X·p²/[p]² is the braid-sum normalization
            let normalized = match integer_p(cfg) {
                Ok(ip) if cfg.m == 0 && framing == 0 => Some(equivalence_rhs(&b, ip, n)?),
                _ => None,
            };
            let columns: &[&'static str] =
                if normalized.is_some() { &["n", "coefficient", "times_p2_over_qp2"] } else { &["n", "coefficient"] };
            let mut r = Report::new("lorentz-at-p", columns);
            r.param("knot", name).param("m", cfg.m).param("order", n).param("framing", framing).param("p", p.to_string());
            for (k, c) in vals.coeffs().iter().enumerate() {
                let mut row = vec![json!(k), json!(c.to_string())];
                if let Some(s) = &normalized {
                    row.push(json!(s.coeff(k).to_string()));
                }
                r.row(row);
            }
            r.into()
        }
    };
    if framing == 0 && !structure.ok() {
        out.failed = Some(format!("degree/parity/vanishing structure of X: {}", structure.failures.join("; ")));
    }
    Ok(out)
}

fn integer_p(cfg: &RunConfig) -> Result<u32> {
    match &cfg.p {
        Some(PValue::Number(p)) => (1..=1000u32)
            .find(|k| GaussianRational::int(*k as i64) == *p)
            .ok_or_else(|| Error::Invalid(format!("p must be an integer between 1 and 1000 here, got {p}"))),
        _ => Err(Error::Invalid("an integer p is required".into())),
    }
}

fn parse_labels(text: &str) -> Result<[i64; 4]> {
    let v: Vec<i64> = text
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse(format!("labels must be four integers like 2,1,3,2; got '{text}'")))?;
    match v.as_slice() {
        [a, b, c, d] if v.iter().all(|x| *x >= 0) => Ok([*a, *b, *c, *d]),
        _ => Err(Error::Parse(format!("labels must be four nonnegative doubled spins; got '{text}'"))),
    }
}

/// Load the CG table from `dir` when a compatible cache exists.
fn open_cache(cg: &QuantumCg, dir: Option<&Path>, notes: &mut Vec<String>) {
    let Some(dir) = dir else { return };
    if !dir.join("manifest.json").exists() {
        return;
    }
    match cg.load(dir) {
        Ok(k) => notes.push(format!("loaded {k} CG coefficients from {}", dir.display())),
        Err(e) => notes.push(format!("ignoring cache in {}: {e}", dir.display())),
    }
}

fn save_cache(cg: &QuantumCg, dir: Option<&Path>, notes: &mut Vec<String>) {
    let Some(dir) = dir else { return };
    match std::fs::create_dir_all(dir).map_err(|e| Error::Resource(e.to_string())).and_then(|_| cg.dump(dir)) {
        Ok(()) => notes.push(format!("saved {} CG coefficients to {}", cg.len(), dir.display())),
        Err(e) => notes.push(format!("could not write cache to {}: {e}", dir.display())),
    }
}

fn qlg(cfg: &RunConfig, lambda: Option<&str>, closed: bool, prune: bool, max_states: usize) -> Result<Outcome> {
    let p = cfg.p.clone().ok_or_else(|| Error::Invalid("qlg needs --p (a number or 'symbolic')".into()))?;
    let n = cfg.order;
    let cg = Arc::new(QuantumCg::new(n, cfg.precision));
    let mut notes = Vec::new();
    let dir = cfg.cache_dir.as_deref();
    open_cache(&cg, dir, &mut notes);
    let digits = print_digits(cfg);
    let mut r = match p {
        PValue::Number(ref x) => {
            let e = QlgEngine::new(NumericP(x.clone()), cg.clone())
                .with_cutoff(cfg.cutoff)
                .with_pruning(prune)
                .with_max_states(max_states);
            let (s, mut r) = qlg_series(cfg, &e, lambda, closed, &["n", "coefficient"])?;
            for (k, c) in s.coeffs().iter().enumerate() {
                r.row(vec![json!(k), json!(float_text(c, cfg))]);
            }
            r
        }
        PValue::Symbolic => {
            let e = QlgEngine::new(SymbolicP, cg.clone())
                .with_cutoff(cfg.cutoff)
                .with_pruning(prune)
                .with_max_states(max_states);
            let (s, mut r) = qlg_series(cfg, &e, lambda, closed, &["n", "polynomial", "coefficients"])?;
            for (k, c) in s.coeffs().iter().enumerate() {
                let mut cs: Vec<String> = c.coeffs().iter().map(|z| float_text(z, cfg)).collect();
                if cs.is_empty() {
                    cs.push("0".into());
                }
                r.row(vec![json!(k), json!(complex_poly_string(&cs, "p")), json!(cs)]);
            }
            r
        }
    };
    r.param("p", p.to_string()).param("order", n).param("cutoff", cfg.cutoff).param("precision", cfg.precision);
    r.param("printed_digits", digits);
    save_cache(&cg, dir, &mut notes);
    Ok(Outcome { report: r, failed: None, notes })
}

/// The requested series together with a report whose columns fit the mode.
fn qlg_series<M: PMode>(
    cfg: &RunConfig,
    e: &QlgEngine<M>,
    lambda: Option<&str>,
    closed: bool,
    columns: &[&'static str],
) -> Result<(Series<M::C>, Report)> {
    if let Some(text) = lambda {
        let l = parse_labels(text)?;
        let mut r = Report::new("qlg-lambda", columns);
        r.param("labels_doubled", json!(l));
        return Ok((e.lambda_coeff(l[0], l[1], l[2], l[3]), r));
    }
    if closed {
        let mut r = Report::new("qlg-closed-trefoil", columns);
        r.param("knot", "trefoil (closed form)");
        return Ok((e.trefoil_closed_sum(), r));
    }
    let (b, name) = resolve_knot(cfg)?;
    let s = e.braid_sum(&b)?;
    let mut r = Report::new("qlg-braid-sum", columns);
    r.param("knot", name);
    Ok((s, r))
}

fn complex_poly_string(coeffs: &[String], var: &str) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.as_str() != "0")
        .map(|(k, c)| match k {
            0 => format!("({c})"),
            1 => format!("({c})*{var}"),
            _ => format!("({c})*{var}^{k}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn verify(cfg: &RunConfig, only: &[usize]) -> Result<Outcome> {
    let suite = SuiteConfig { max_order: Some(cfg.order), digits: cfg.precision };
    let results = run_suite(&suite, only, |_| {});
    if results.is_empty() {
        return Err(Error::Invalid(format!("no criterion among {only:?}; they are numbered 1 to 10")));
    }
    let mut r = Report::new("verify", &["criterion", "name", "pass", "detail", "seconds"]);
    r.param("max_order", cfg.order).param("precision", cfg.precision);
    r.param("tolerance", format!("{:.0e}", suite.tolerance()));
    for x in &results {
        r.row(vec![json!(x.id), json!(x.name), json!(x.pass), json!(x.detail), json!((x.seconds * 10.0).round() / 10.0)]);
    }
    let failed: Vec<String> = results.iter().filter(|x| !x.pass).map(|x| format!("criterion {} ({})", x.id, x.name)).collect();
    r.summary("passed", results.len() - failed.len()).summary("failed", failed.len());
    let mut out: Outcome = r.into();
    if !failed.is_empty() {
        out.failed = Some(failed.join(", "));
    }
    Ok(out)
}
