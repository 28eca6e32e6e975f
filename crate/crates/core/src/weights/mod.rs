//! Weight systems φ_t: chord diagrams → U(g), composed with central
//! characters of sl2 spin-z modules and of the Lorentz modules (m, p).
//!
//! Convention for a word: a chord diagram is read from its basepoint along
//! the orientation. The first time chord c is met the left factor a of its
//! chosen tensor term is applied, the second time the right factor b. Later
//! letters act after earlier ones, so the product is written right to left.

mod lorentz;
mod sl2;

pub use lorentz::{
    casimir_eigenvalues, casimir_polynomials, lambda_mp_direct, lambda_mp_direct_with, lambda_mp_factorized,
    lambda_mp_factorized_sum, LorentzModule, RadicalCoeff,
};
pub use sl2::{lambda_z_sl2, lambda_z_sl2_at, lambda_z_sl2_sum, Sl2Module};

use crate::chord::ChordDiagram;
use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Ring};
use std::fmt;

/// The two generator alphabets.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Alphabet {
    Sl2,
    Lorentz,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Generator {
    E,
    F,
    H,
    HPlus,
    HMinus,
    H3,
    FPlus,
    FMinus,
    F3,
}

impl Generator {
    pub fn alphabet(self) -> Alphabet {
        match self {
            Generator::E | Generator::F | Generator::H => Alphabet::Sl2,
            _ => Alphabet::Lorentz,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::E => "E",
            Generator::F => "F",
            Generator::H => "H",
            Generator::HPlus => "H+",
            Generator::HMinus => "H-",
            Generator::H3 => "H3",
            Generator::FPlus => "F+",
            Generator::FMinus => "F-",
            Generator::F3 => "F3",
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A symmetric invariant 2-tensor Σ c_k a_k ⊗ b_k.
#[derive(Clone, PartialEq, Debug)]
pub struct InfinitesimalRMatrix {
    pub alphabet: Alphabet,
    pub terms: Vec<(GaussianRational, Generator, Generator)>,
}

fn q(n: i64, d: i64) -> GaussianRational {
    GaussianRational::ratio(n, d)
}

fn qi(n: i64, d: i64) -> GaussianRational {
    GaussianRational::complex(0, 1, n, d)
}

impl InfinitesimalRMatrix {
    pub fn new(alphabet: Alphabet, terms: Vec<(GaussianRational, Generator, Generator)>) -> Result<Self> {
        if let Some((_, a, b)) = terms.iter().find(|(_, a, b)| a.alphabet() != alphabet || b.alphabet() != alphabet) {
            return Err(Error::Invalid(format!("generators {a}, {b} are not in the {alphabet:?} alphabet")));
        }
        Ok(InfinitesimalRMatrix { alphabet, terms })
    }

    /// −¼(E⊗F + F⊗E + ½ H⊗H), the tensor used with the coloured Jones
    /// polynomial.
    pub fn t_jones() -> Self {
        use Generator::*;
        InfinitesimalRMatrix {
            alphabet: Alphabet::Sl2,
            terms: vec![(q(-1, 4), E, F), (q(-1, 4), F, E), (q(-1, 8), H, H)],
        }
    }

    /// The Cartan–Killing tensor, −t_jones().
    pub fn t_ck() -> Self {
        Self::t_jones().neg()
    }

    /// Left Lorentz tensor t^l.
    pub fn t_left() -> Self {
        Self::lorentz_lr(1)
    }

    /// Right Lorentz tensor t^r (t^l with i ↦ −i).
    pub fn t_right() -> Self {
        Self::lorentz_lr(-1)
    }

    fn lorentz_lr(s: i64) -> Self {
        use Generator::*;
        InfinitesimalRMatrix {
            alphabet: Alphabet::Lorentz,
            terms: vec![
                (q(1, 8), H3, H3),
                (q(-1, 8), F3, F3),
                (qi(s, 8), H3, F3),
                (qi(s, 8), F3, H3),
                (q(1, 16), HPlus, HMinus),
                (qi(s, 16), HPlus, FMinus),
                (qi(s, 16), FPlus, HMinus),
                (q(-1, 16), FPlus, FMinus),
                (q(1, 16), HMinus, HPlus),
                (qi(s, 16), HMinus, FPlus),
                (qi(s, 16), FMinus, HPlus),
                (q(-1, 16), FMinus, FPlus),
            ],
        }
    }

    /// t_L = t^l − t^r.
    pub fn t_lorentz() -> Self {
        use Generator::*;
        InfinitesimalRMatrix {
            alphabet: Alphabet::Lorentz,
            terms: vec![
                (qi(1, 4), H3, F3),
                (qi(1, 4), F3, H3),
                (qi(1, 8), HMinus, FPlus),
                (qi(1, 8), FMinus, HPlus),
                (qi(1, 8), HPlus, FMinus),
                (qi(1, 8), FPlus, HMinus),
            ],
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&GaussianRational::int(-1))
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        InfinitesimalRMatrix {
            alphabet: self.alphabet,
            terms: self.terms.iter().map(|(k, a, b)| (k.mul(c), *a, *b)).collect(),
        }
    }

    /// a·self + b·other, terms concatenated and collected.
    pub fn combine(&self, a: &GaussianRational, other: &Self, b: &GaussianRational) -> Result<Self> {
        if self.alphabet != other.alphabet {
            return Err(Error::Invalid("cannot combine tensors over different alphabets".into()));
        }
        let mut terms = self.scale(a).terms;
        terms.extend(other.scale(b).terms);
        Ok(InfinitesimalRMatrix { alphabet: self.alphabet, terms }.collected())
    }

    /// Merge repeated (a, b) pairs and drop zero terms.
    pub fn collected(&self) -> Self {
        let mut map: std::collections::BTreeMap<(Generator, Generator), GaussianRational> = Default::default();
        for (c, a, b) in &self.terms {
            map.entry((*a, *b)).or_insert_with(GaussianRational::zero).add_assign(c);
        }
        InfinitesimalRMatrix {
            alphabet: self.alphabet,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), c)| (c, a, b)).collect(),
        }
    }

    /// Symmetric as a tensor: swapping the factors gives the same tensor.
    pub fn is_symmetric(&self) -> bool {
        let swapped = InfinitesimalRMatrix {
            alphabet: self.alphabet,
            terms: self.terms.iter().map(|(c, a, b)| (c.clone(), *b, *a)).collect(),
        };
        swapped.collected() == self.collected()
    }
}

/// One letter of a weight-system word: the a or b factor of chord `chord`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Letter {
    pub chord: u8,
    pub second: bool,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.second { 'b' } else { 'a' }, self.chord + 1)
    }
}

/// Letter pattern of a Gauss sequence read from position 0, written right
/// to left (the last letter of the result is applied first).
pub fn word_pattern(seq: &[u8]) -> Vec<Letter> {
    let mut seen = [false; 256];
    let mut out: Vec<Letter> = seq
        .iter()
        .map(|&c| {
            let second = seen[c as usize];
            seen[c as usize] = true;
            Letter { chord: c, second }
        })
        .collect();
    out.reverse();
    out
}

/// All words φ_t(d) expands into, with their coefficients. Each word is
/// written right to left as in `word_pattern`.
pub fn phi_words(t: &InfinitesimalRMatrix, d: &ChordDiagram) -> Vec<(GaussianRational, Vec<Generator>)> {
    let pattern = word_pattern(d.word());
    let n = d.n();
    let k = t.terms.len();
    let mut out = Vec::new();
    let total = k.checked_pow(n as u32).expect("term count overflow");
    for mut idx in 0..total {
        let mut choice = vec![0usize; n];
        for c in choice.iter_mut() {
            *c = idx % k;
            idx /= k;
        }
        let mut coeff = GaussianRational::one();
        for c in &choice {
            coeff = coeff.mul(&t.terms[*c].0);
        }
        let word = pattern
            .iter()
            .map(|l| {
                let (_, a, b) = &t.terms[choice[l.chord as usize]];
                if l.second {
                    *b
                } else {
                    *a
                }
            })
            .collect();
        out.push((coeff, word));
    }
    out
}

/// A module on which generators act, used to evaluate φ_t words.
pub trait Module {
    type Vector: Clone;
    fn zero_vector(&self) -> Self::Vector;
    fn is_zero_vector(&self, v: &Self::Vector) -> bool;
    fn apply(&self, g: Generator, v: &Self::Vector) -> Result<Self::Vector>;
    fn scale_vector(&self, v: &Self::Vector, c: &GaussianRational) -> Self::Vector;
    fn add_vector(&self, acc: &mut Self::Vector, v: &Self::Vector);
}

/// φ_t(d) applied to `start`, reading the Gauss sequence `seq` from its
/// position 0. Depth-first over term choices so shared prefixes are applied
/// once.
pub fn apply_phi<M: Module>(module: &M, t: &InfinitesimalRMatrix, seq: &[u8], start: &M::Vector) -> Result<M::Vector> {
    let mut choice = vec![usize::MAX; 256];
    let mut acc = module.zero_vector();
    walk(module, t, seq, 0, start.clone(), GaussianRational::one(), &mut choice, &mut acc)?;
    Ok(acc)
}

#[allow(clippy::too_many_arguments)]
fn walk<M: Module>(
    module: &M,
    t: &InfinitesimalRMatrix,
    seq: &[u8],
    pos: usize,
    state: M::Vector,
    coeff: GaussianRational,
    choice: &mut [usize],
    acc: &mut M::Vector,
) -> Result<()> {
    if module.is_zero_vector(&state) {
        return Ok(());
    }
    let Some(&c) = seq.get(pos) else {
        module.add_vector(acc, &module.scale_vector(&state, &coeff));
        return Ok(());
    };
    let c = c as usize;
    if choice[c] == usize::MAX {
        for (k, (tc, a, _)) in t.terms.iter().enumerate() {
            choice[c] = k;
            let next = module.apply(*a, &state)?;
            walk(module, t, seq, pos + 1, next, coeff.mul(tc), choice, acc)?;
        }
        choice[c] = usize::MAX;
    } else {
        let next = module.apply(t.terms[choice[c]].2, &state)?;
        walk(module, t, seq, pos + 1, next, coeff, choice, acc)?;
    }
    Ok(())
}
