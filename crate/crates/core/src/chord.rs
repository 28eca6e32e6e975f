//! Chord diagrams on an oriented circle, their formal linear combinations,
//! 4T relations, connected sum and coproduct.

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Ring};
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Largest chord count `enumerate_diagrams` accepts.
pub const MAX_ENUMERATE: usize = 6;
/// Largest chord count `quotient_dimension` accepts.
pub const MAX_QUOTIENT: usize = 4;

/// A pairing of 2n points on an oriented circle, up to rotation.
///
/// Stored in canonical form: the Gauss word (chords labelled 0, 1, … in
/// order of first visit) that is lexicographically least among all
/// rotations. Position 0 of that word is the canonical basepoint.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChordDiagram {
    word: Vec<u8>,
}

fn relabel(seq: &[u8]) -> Vec<u8> {
    let mut map: BTreeMap<u8, u8> = BTreeMap::new();
    seq.iter()
        .map(|c| {
            let next = map.len() as u8;
            *map.entry(*c).or_insert(next)
        })
        .collect()
}

impl ChordDiagram {
    /// The diagram with no chords.
    pub fn unit() -> Self {
        ChordDiagram { word: Vec::new() }
    }

    /// ⊖, the unique one-chord diagram.
    pub fn theta() -> Self {
        ChordDiagram { word: vec![0, 0] }
    }

    /// Canonicalize a circular sequence in which every label occurs twice.
    pub fn from_sequence(seq: &[u8]) -> Self {
        let len = seq.len();
        let mut best: Option<Vec<u8>> = None;
        for r in 0..len.max(1) {
            let rotated: Vec<u8> = (0..len).map(|k| seq[(r + k) % len]).collect();
            let cand = relabel(&rotated);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        ChordDiagram { word: best.unwrap_or_default() }
    }

    /// Build from a pairing array: `pairing[k]` is the partner of point k.
    pub fn from_pairing(pairing: &[usize]) -> Result<Self> {
        let len = pairing.len();
        if !len.is_multiple_of(2) {
            return Err(Error::Invalid("pairing must have even length".into()));
        }
        let mut label = vec![u8::MAX; len];
        let mut next = 0u8;
        for k in 0..len {
            let j = pairing[k];
            if j >= len || j == k || pairing[j] != k {
                return Err(Error::Invalid(format!("pairing is not a fixed-point-free involution at {k}")));
            }
            if label[k] == u8::MAX {
                label[k] = next;
                label[j] = next;
                next += 1;
            }
        }
        Ok(Self::from_sequence(&label))
    }

    /// Number of chords.
    pub fn n(&self) -> usize {
        self.word.len() / 2
    }

    /// Canonical Gauss word with labels 0..n in first-visit order.
    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// Partner position of every point in the canonical presentation.
    pub fn pairing(&self) -> Vec<usize> {
        let mut first: BTreeMap<u8, usize> = BTreeMap::new();
        let mut out = vec![0; self.word.len()];
        for (k, c) in self.word.iter().enumerate() {
            if let Some(j) = first.remove(c) {
                out[k] = j;
                out[j] = k;
            } else {
                first.insert(*c, k);
            }
        }
        out
    }

    /// Gauss word with letters A, B, C, …
    pub fn to_letters(&self) -> String {
        self.word.iter().map(|c| (b'A' + c) as char).collect()
    }

    /// The same chords on the circle with reversed orientation.
    pub fn reverse_orientation(&self) -> Self {
        let rev: Vec<u8> = self.word.iter().rev().copied().collect();
        Self::from_sequence(&rev)
    }

    /// Sub-diagram on the chords whose labels are in `keep` (a bitmask).
    pub fn restrict(&self, keep: u32) -> Self {
        let seq: Vec<u8> = self.word.iter().copied().filter(|c| keep & (1 << c) != 0).collect();
        Self::from_sequence(&seq)
    }
}

impl Ord for ChordDiagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word.len().cmp(&other.word.len()).then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for ChordDiagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", self.to_letters())
        }
    }
}

impl fmt::Debug for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChordDiagram({self})")
    }
}

/// Parse a Gauss word such as "ABACBC"; every letter must occur exactly twice.
pub fn parse_diagram(text: &str) -> Result<ChordDiagram> {
    let t: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() || t == ['1'] {
        return Ok(ChordDiagram::unit());
    }
    let mut counts: BTreeMap<char, usize> = BTreeMap::new();
    for c in &t {
        if !c.is_alphanumeric() {
            return Err(Error::Parse(format!("unexpected character '{c}' in Gauss word")));
        }
        *counts.entry(*c).or_default() += 1;
    }
    if let Some((c, k)) = counts.iter().find(|(_, k)| **k != 2) {
        return Err(Error::Parse(format!("letter '{c}' occurs {k} times, expected 2")));
    }
    if counts.len() > 26 {
        return Err(Error::Resource("at most 26 chords".into()));
    }
    let index: BTreeMap<char, u8> = counts.keys().enumerate().map(|(k, c)| (*c, k as u8)).collect();
    let seq: Vec<u8> = t.iter().map(|c| index[c]).collect();
    Ok(ChordDiagram::from_sequence(&seq))
}

fn matchings(points: usize) -> Vec<Vec<u8>> {
    // all perfect matchings of 0..points as label sequences
    fn go(seq: &mut Vec<Option<u8>>, next: u8, out: &mut Vec<Vec<u8>>) {
        let Some(first) = seq.iter().position(|s| s.is_none()) else {
            out.push(seq.iter().map(|s| s.unwrap()).collect());
            return;
        };
        seq[first] = Some(next);
        for j in first + 1..seq.len() {
            if seq[j].is_none() {
                seq[j] = Some(next);
                go(seq, next + 1, out);
                seq[j] = None;
            }
        }
        seq[first] = None;
    }
    let mut out = Vec::new();
    go(&mut vec![None; points], 0, &mut out);
    out
}

/// All n-chord diagrams, each once, in canonical order.
pub fn enumerate_diagrams(n: usize) -> Result<Vec<ChordDiagram>> {
    if n > MAX_ENUMERATE {
        return Err(Error::Resource(format!("enumerate_diagrams is limited to n <= {MAX_ENUMERATE}")));
    }
    let set: BTreeSet<ChordDiagram> =
        matchings(2 * n).iter().map(|m| ChordDiagram::from_sequence(m)).collect();
    Ok(set.into_iter().collect())
}

/// Cut both circles at their canonical basepoints and join them.
///
/// Well defined on diagrams only modulo 4T; on representatives the result
/// depends on the basepoints.
pub fn connected_sum(d1: &ChordDiagram, d2: &ChordDiagram) -> ChordDiagram {
    let off = d1.n() as u8;
    let seq: Vec<u8> = d1.word.iter().copied().chain(d2.word.iter().map(|c| c + off)).collect();
    ChordDiagram::from_sequence(&seq)
}

/// Finite formal combination of chord diagrams with exact coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DiagramSum {
    terms: BTreeMap<ChordDiagram, GaussianRational>,
}

impl DiagramSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(d: ChordDiagram) -> Self {
        let mut s = Self::zero();
        s.add_term(d, GaussianRational::one());
        s
    }

    pub fn add_term(&mut self, d: ChordDiagram, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(d.clone()).or_insert_with(GaussianRational::zero);
        slot.add_assign(&c);
        if slot.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn terms(&self) -> &BTreeMap<ChordDiagram, GaussianRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common chord count of all terms, if there is one.
    pub fn grade(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|d| d.n());
        let first = it.next()?;
        it.all(|n| n == first).then_some(first)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.add_term(d.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (d, a) in &self.terms {
            out.add_term(d.clone(), a.mul(c));
        }
        out
    }

    /// Bilinear extension of `connected_sum`.
    pub fn connected_sum(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (d1, a) in &self.terms {
            for (d2, b) in &rhs.terms {
                out.add_term(connected_sum(d1, d2), a.mul(b));
            }
        }
        out
    }

    /// Σ_k x^k / k! truncated at k = order, with the connected-sum product.
    pub fn exp_truncated(x: &DiagramSum, order: usize) -> Self {
        let mut acc = Self::single(ChordDiagram::unit());
        let mut term = Self::single(ChordDiagram::unit());
        for k in 1..=order {
            term = term.connected_sum(x).scale(&GaussianRational::ratio(1, k as i64));
            acc = acc.add(&term);
        }
        acc
    }

}

impl fmt::Display for DiagramSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(d, c)| format!("({c})·{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct SumEntry {
    word: String,
    coeff: GaussianRational,
}

impl Serialize for DiagramSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<SumEntry> = self
            .terms
            .iter()
            .map(|(d, c)| SumEntry { word: d.to_letters(), coeff: c.clone() })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiagramSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<SumEntry> = Vec::deserialize(d)?;
        let mut out = DiagramSum::zero();
        for e in v {
            let dg = parse_diagram(&e.word).map_err(serde::de::Error::custom)?;
            out.add_term(dg, e.coeff);
        }
        Ok(out)
    }
}

/// Finite combination of ordered pairs of diagrams.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TensorDiagramSum {
    terms: BTreeMap<(ChordDiagram, ChordDiagram), GaussianRational>,
}

impl TensorDiagramSum {
    pub fn add_term(&mut self, a: ChordDiagram, b: ChordDiagram, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let slot = self.terms.entry(key.clone()).or_insert_with(GaussianRational::zero);
        slot.add_assign(&c);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(ChordDiagram, ChordDiagram), GaussianRational> {
        &self.terms
    }
}

/// Δ(d) = Σ_{S ⊆ chords} d|_S ⊗ d|_{S^c}.
pub fn coproduct(d: &ChordDiagram) -> TensorDiagramSum {
    let n = d.n();
    let all = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut out = TensorDiagramSum::default();
    for s in 0..=all {
        out.add_term(d.restrict(s), d.restrict(all & !s), GaussianRational::one());
    }
    out
}

/// Linear extension of `coproduct`.
pub fn coproduct_sum(x: &DiagramSum) -> TensorDiagramSum {
    let mut out = TensorDiagramSum::default();
    for (d, c) in x.terms() {
        for ((a, b), k) in coproduct(d).terms() {
            out.add_term(a.clone(), b.clone(), k.mul(c));
        }
    }
    out
}

/// One 4T relation, kept as its four signed diagrams before collection.
///
/// In low degree the four diagrams can cancel pairwise once canonicalized;
/// the uncollected form keeps such relations visible.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FourTermRelation {
    pub terms: [(ChordDiagram, i8); 4],
}

impl FourTermRelation {
    /// The collected linear combination.
    pub fn to_sum(&self) -> DiagramSum {
        let mut out = DiagramSum::zero();
        for (d, s) in &self.terms {
            out.add_term(d.clone(), GaussianRational::int(*s as i64));
        }
        out
    }

    fn key(&self) -> Vec<(ChordDiagram, i8)> {
        let mut k: Vec<_> = self.terms.to_vec();
        k.sort();
        k
    }
}

impl fmt::Display for FourTermRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (d, s)) in self.terms.iter().enumerate() {
            let sign = if *s < 0 { "-" } else if k > 0 { "+" } else { "" };
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{sign}{d}")?;
        }
        Ok(())
    }
}

/// Every distinct 4T relation with n chords.
///
/// A chord c with endpoints P, Q and a second chord whose far end sits
/// elsewhere; its near end y is placed just before P, just after P, just
/// before Q, just after Q, with signs −, +, −, +.
pub fn four_t_generators(n: usize) -> Result<Vec<FourTermRelation>> {
    if !(2..=5).contains(&n) {
        return Err(Error::Invalid(format!("four_t_generators needs 2 <= n <= 5, got {n}")));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mover = (n - 1) as u8;
    for base in matchings(2 * n - 2) {
        for c in 0..(n - 1) as u8 {
            for slot in 0..=base.len() {
                let mut seq = base.clone();
                seq.insert(slot, mover);
                let p = seq.iter().position(|&l| l == c).unwrap();
                let q = seq.iter().rposition(|&l| l == c).unwrap();
                let place = |at: usize| {
                    let mut s = seq.clone();
                    s.insert(at, mover);
                    ChordDiagram::from_sequence(&s)
                };
                let rel = FourTermRelation {
                    terms: [(place(p), -1), (place(p + 1), 1), (place(q), -1), (place(q + 1), 1)],
                };
                if seen.insert(rel.key()) {
                    out.push(rel);
                }
            }
        }
    }
    Ok(out)
}

/// Rank of a set of rational row vectors by exact elimination.
pub fn rational_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        let pivot = m[rank][col].clone();
        let prow: Vec<BigRational> = m[rank].iter().map(|x| x / &pivot).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for c in col..cols {
                    let t = &prow[c] * &f;
                    row[c] -= t;
                }
            }
        }
        m[rank] = prow;
        rank += 1;
    }
    rank
}

/// dim 𝒜_n = dim V_n − rank(4T_n).
pub fn quotient_dimension(n: usize) -> Result<usize> {
    if n > MAX_QUOTIENT {
        return Err(Error::Resource(format!("quotient_dimension is limited to n <= {MAX_QUOTIENT}")));
    }
    let basis = enumerate_diagrams(n)?;
    if n < 2 {
        return Ok(basis.len());
    }
    let index: BTreeMap<&ChordDiagram, usize> = basis.iter().enumerate().map(|(k, d)| (d, k)).collect();
    let rows: Vec<Vec<BigRational>> = four_t_generators(n)?
        .iter()
        .map(|rel| {
            let mut row = vec![BigRational::zero(); basis.len()];
            for (d, c) in rel.to_sum().terms() {
                assert!(c.im.is_zero(), "4T relations have rational coefficients");
                row[index[d]] = c.re.clone();
            }
            row
        })
        .collect();
    Ok(basis.len() - rational_rank(&rows))
}

/// Helper used by tests and the CLI: a diagram sum's coefficient on `d`.
pub fn coefficient_of(x: &DiagramSum, d: &ChordDiagram) -> GaussianRational {
    x.terms().get(d).cloned().unwrap_or_else(GaussianRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        assert_eq!(parse_diagram("AA").unwrap(), ChordDiagram::theta());
        let x = parse_diagram("ABAB").unwrap();
        assert_eq!(x.n(), 2);
        assert_ne!(parse_diagram("ABBA").unwrap(), parse_diagram("ABAB").unwrap());
        // ABBA and AABB are rotations of each other
        assert_eq!(parse_diagram("ABBA").unwrap(), parse_diagram("AABB").unwrap());
        assert_eq!(parse_diagram("").unwrap(), ChordDiagram::unit());
        assert!(matches!(parse_diagram("ABA"), Err(Error::Parse(_))));
        assert!(matches!(parse_diagram("AAA"), Err(Error::Parse(_))));
    }

    #[test]
    fn canonical_is_idempotent() {
        for d in enumerate_diagrams(4).unwrap() {
            let again = parse_diagram(&d.to_letters()).unwrap();
            assert_eq!(again, d);
            assert_eq!(ChordDiagram::from_pairing(&d.pairing()).unwrap(), d);
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_diagrams(0).unwrap(), vec![ChordDiagram::unit()]);
        assert_eq!(enumerate_diagrams(1).unwrap(), vec![ChordDiagram::theta()]);
        assert_eq!(enumerate_diagrams(2).unwrap().len(), 2);
        assert!(matches!(enumerate_diagrams(7), Err(Error::Resource(_))));
    }

    #[test]
    fn connected_sum_examples() {
        let t = ChordDiagram::theta();
        assert_eq!(connected_sum(&ChordDiagram::unit(), &t), t);
        assert_eq!(connected_sum(&t, &t), parse_diagram("AABB").unwrap());
    }

    #[test]
    fn coproduct_of_theta() {
        let c = coproduct(&ChordDiagram::theta());
        let mut want = TensorDiagramSum::default();
        want.add_term(ChordDiagram::theta(), ChordDiagram::unit(), GaussianRational::one());
        want.add_term(ChordDiagram::unit(), ChordDiagram::theta(), GaussianRational::one());
        assert_eq!(c, want);
        let u = coproduct(&ChordDiagram::unit());
        assert_eq!(u.terms().len(), 1);
    }

    #[test]
    fn four_t_small() {
        let g2 = four_t_generators(2).unwrap();
        assert!(!g2.is_empty());
        for rel in &g2 {
            assert!(rel.terms.iter().all(|(d, _)| d.n() == 2));
            // only two 2-chord diagrams exist, so the terms cancel in pairs
            assert!(rel.to_sum().is_zero());
        }
        for rel in four_t_generators(3).unwrap() {
            assert!(rel.terms.iter().all(|(d, _)| d.n() == 3));
        }
        assert!(four_t_generators(1).is_err());
    }

    #[test]
    fn quotient_guards() {
        assert_eq!(quotient_dimension(0).unwrap(), 1);
        assert_eq!(quotient_dimension(1).unwrap(), 1);
        assert!(matches!(quotient_dimension(5), Err(Error::Resource(_))));
    }
}
