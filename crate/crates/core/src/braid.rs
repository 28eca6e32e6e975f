//! Braid words in the Artin generators, their closures, Markov moves and a
//! small catalog of knots.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// σ_index^{+1} when `positive`, σ_index^{-1} otherwise. Indices start at 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub struct BraidLetter {
    pub index: usize,
    pub positive: bool,
}

impl BraidLetter {
    pub fn sign(self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }

    pub fn inverse(self) -> Self {
        BraidLetter { index: self.index, positive: !self.positive }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<BraidLetter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<BraidLetter>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Invalid("a braid needs at least one strand".into()));
        }
        if let Some(l) = letters.iter().find(|l| l.index == 0 || l.index >= strands) {
            return Err(Error::Invalid(format!("generator s{} out of range for {strands} strands", l.index)));
        }
        Ok(BraidWord { strands, letters })
    }

    /// Build from signed indices: `3` is σ_3, `-3` is σ_3^{-1}.
    pub fn from_signed(strands: usize, word: &[i64]) -> Result<Self> {
        let letters = word
            .iter()
            .map(|&s| {
                if s == 0 {
                    Err(Error::Invalid("generator index 0".into()))
                } else {
                    Ok(BraidLetter { index: s.unsigned_abs() as usize, positive: s > 0 })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of crossing signs.
    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|l| l.sign()).sum()
    }

    /// perm[k] = final position of the strand starting at position k.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect(); // at[pos] = strand
        for l in &self.letters {
            at.swap(l.index - 1, l.index);
        }
        let mut perm = vec![0; self.strands];
        for (pos, strand) in at.iter().enumerate() {
            perm[*strand] = pos;
        }
        perm
    }

    /// Number of components of the closure.
    pub fn components(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut count = 0;
        for s in 0..self.strands {
            if !seen[s] {
                count += 1;
                let mut k = s;
                while !seen[k] {
                    seen[k] = true;
                    k = perm[k];
                }
            }
        }
        count
    }

    pub fn is_knot(&self) -> bool {
        self.components() == 1
    }

    /// Error unless the closure is a knot.
    pub fn require_knot(&self) -> Result<()> {
        if self.is_knot() {
            Ok(())
        } else {
            Err(Error::Invalid(format!("closure of '{self}' has {} components", self.components())))
        }
    }

    /// Every crossing flipped.
    pub fn mirror(&self) -> Self {
        BraidWord { strands: self.strands, letters: self.letters.iter().map(|l| l.inverse()).collect() }
    }

    /// The word read backwards; its closure is the closure with reversed
    /// orientation (up to the flip of the braid plane, which preserves knot type).
    pub fn reverse(&self) -> Self {
        BraidWord { strands: self.strands, letters: self.letters.iter().rev().copied().collect() }
    }

    /// σ·b·σ^{-1}
    pub fn conjugate(&self, by: BraidLetter) -> Self {
        let mut letters = vec![by];
        letters.extend_from_slice(&self.letters);
        letters.push(by.inverse());
        BraidWord { strands: self.strands, letters }
    }

    /// Add a strand and append σ_n^{±1}.
    pub fn stabilize(&self, positive: bool) -> Self {
        let mut letters = self.letters.clone();
        letters.push(BraidLetter { index: self.strands, positive });
        BraidWord { strands: self.strands + 1, letters }
    }

    /// Move the first k letters to the end.
    pub fn rotate(&self, k: usize) -> Self {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        BraidWord { strands: self.strands, letters }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| format!("{}s{}", if l.positive { "" } else { "-" }, l.index))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Parse tokens "s<i>" and "-s<i>" separated by whitespace.
pub fn parse_braid(text: &str, strands: usize) -> Result<BraidWord> {
    let mut letters = Vec::new();
    for tok in text.split_whitespace() {
        let (positive, body) = match tok.strip_prefix('-') {
            Some(rest) => (false, rest),
            None => (true, tok),
        };
        let idx = body
            .strip_prefix('s')
            .or_else(|| body.strip_prefix('S'))
            .ok_or_else(|| Error::Parse(format!("bad braid token '{tok}'")))?;
        let index: usize = idx.parse().map_err(|_| Error::Parse(format!("bad braid token '{tok}'")))?;
        letters.push(BraidLetter { index, positive });
    }
    BraidWord::new(strands, letters)
}

/// Parse with the strand count inferred as one more than the largest index.
pub fn parse_braid_auto(text: &str) -> Result<BraidWord> {
    let probe = parse_braid(text, usize::MAX)?;
    let strands = probe.letters.iter().map(|l| l.index + 1).max().unwrap_or(1);
    BraidWord::new(strands, probe.letters)
}

/// A braid with a target framing relative to the blackboard framing.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KnotPresentation {
    pub braid: BraidWord,
    pub framing: i64,
    pub name: Option<String>,
}

impl KnotPresentation {
    pub fn new(braid: BraidWord, framing: i64, name: Option<String>) -> Result<Self> {
        braid.require_knot()?;
        Ok(KnotPresentation { braid, framing, name })
    }
}

/// Names accepted by `catalog`.
pub const CATALOG: [&str; 4] = ["unknot", "trefoil-right", "trefoil-left", "figure-eight"];

/// Catalog knots at zero target framing: unknot, T₊ (trefoil-right, also
/// "T+"), T₋ (trefoil-left, "T-") and the figure-eight ("4_1").
pub fn catalog(name: &str) -> Result<KnotPresentation> {
    let (canonical, braid) = match name.to_ascii_lowercase().as_str() {
        "unknot" | "0_1" => ("unknot", BraidWord::new(1, vec![])?),
        "trefoil-right" | "t+" | "right-trefoil" => ("trefoil-right", parse_braid("s1 s1 s1", 2)?),
        "trefoil-left" | "t-" | "left-trefoil" => ("trefoil-left", parse_braid("-s1 -s1 -s1", 2)?),
        "figure-eight" | "4_1" | "figure8" => ("figure-eight", parse_braid("s1 -s2 s1 -s2", 3)?),
        _ => return Err(Error::Invalid(format!("unknown knot '{name}'; known: {}", CATALOG.join(", ")))),
    };
    KnotPresentation::new(braid, 0, Some(canonical.to_string()))
}

/// A finite sample of braids with the same closure: conjugates by every
/// generator and its inverse, both stabilizations, and the nontrivial cyclic
/// rotations of the word and of each stabilization.
pub fn markov_variants(b: &BraidWord) -> Vec<BraidWord> {
    let mut out: Vec<BraidWord> = Vec::new();
    let mut push = |w: BraidWord| {
        if w != *b && !out.contains(&w) {
            out.push(w);
        }
    };
    for i in 1..b.strands {
        for positive in [true, false] {
            push(b.conjugate(BraidLetter { index: i, positive }));
        }
    }
    for positive in [true, false] {
        push(b.stabilize(positive));
    }
    for k in 1..b.len() {
        push(b.rotate(k));
    }
    for positive in [true, false] {
        let s = b.stabilize(positive);
        for k in 1..s.len() {
            push(s.rotate(k));
        }
    }
    out
}
