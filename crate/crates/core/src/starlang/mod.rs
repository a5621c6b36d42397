//! Simply starred languages `U_0 V_1* U_1 ... V_α* U_α` over a finite
//! symmetric generating set of `Z^N`.

mod build;
mod checks;

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ratcore::{QVector, Rational};
use crate::{Error, Result};

pub use build::{build_polyfun, verify_length_bound, BuiltPolyFun, LengthBoundReport, LengthViolation, XiCertificate};
pub use checks::{
    fellow_traveller_check, finite_to_one_check, independence_certificate, FellowTravellerReport,
    FiniteToOneReport, IndependenceReport, WordMetric,
};

/// A word as a list of letter names.
pub type Word = Vec<String>;

/// Space-separated rendering used in reports.
pub fn format_word(w: &[String]) -> String {
    if w.is_empty() {
        "(empty)".into()
    } else {
        w.join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub name: String,
    pub image: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct Alphabet {
    rank: usize,
    letters: Vec<Letter>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    /// Requires unique names, a common rank, a letter with image zero, and
    /// closure of the images under negation.
    pub fn new(letters: Vec<(String, Vec<i64>)>) -> Result<Self> {
        let rank = match letters.first() {
            Some((_, img)) => img.len(),
            None => return Err(Error::InvalidAlphabet("no letters".into())),
        };
        if rank == 0 {
            return Err(Error::InvalidAlphabet("images must have positive rank".into()));
        }
        let mut index = HashMap::new();
        let mut out = Vec::with_capacity(letters.len());
        for (i, (name, image)) in letters.into_iter().enumerate() {
            if image.len() != rank {
                return Err(Error::InvalidAlphabet(format!(
                    "letter {name} has rank {} instead of {rank}",
                    image.len()
                )));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate letter {name}")));
            }
            out.push(Letter { name, image });
        }
        if !out.iter().any(|l| l.image.iter().all(|&c| c == 0)) {
            return Err(Error::InvalidAlphabet("no letter maps to zero".into()));
        }
        for l in &out {
            let neg: Vec<i64> = l.image.iter().map(|c| -c).collect();
            if !out.iter().any(|m| m.image == neg) {
                return Err(Error::InvalidAlphabet(format!("letter {} has no inverse", l.name)));
            }
        }
        Ok(Alphabet {
            rank,
            letters: out,
            index,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, name: &str) -> Result<&Letter> {
        self.index
            .get(name)
            .map(|&i| &self.letters[i])
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    pub fn word_image_ints(&self, w: &[String]) -> Result<Vec<i64>> {
        let mut acc = vec![0i64; self.rank];
        for name in w {
            for (a, c) in acc.iter_mut().zip(&self.letter(name)?.image) {
                *a += c;
            }
        }
        Ok(acc)
    }

    /// `Ū`, the sum of the letter images.
    pub fn word_image(&self, w: &[String]) -> Result<QVector> {
        Ok(QVector::from_ints(&self.word_image_ints(w)?))
    }

    /// `η² = max ‖x̄‖²`.
    pub fn eta_sq(&self) -> Rational {
        self.letters
            .iter()
            .map(|l| Rational::from_integer(l.image.iter().map(|c| c * c).sum::<i64>().into()))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Distinct letter images in order of first appearance.
    pub fn distinct_images(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = Vec::new();
        for l in &self.letters {
            if !out.contains(&l.image) {
                out.push(l.image.clone());
            }
        }
        out
    }
}

/// `U_0 V_1* U_1 ... V_α* U_α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarredBranch {
    u: Vec<Word>,
    v: Vec<Word>,
}

impl StarredBranch {
    pub fn new(u: Vec<Word>, v: Vec<Word>) -> Result<Self> {
        if u.len() != v.len() + 1 {
            return Err(Error::InvalidBranch(format!(
                "{} fixed segments for {} starred ones",
                u.len(),
                v.len()
            )));
        }
        if v.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidBranch("starred segment is empty".into()));
        }
        Ok(StarredBranch { u, v })
    }

    pub fn alpha(&self) -> usize {
        self.v.len()
    }

    pub fn u_segments(&self) -> &[Word] {
        &self.u
    }

    pub fn v_segments(&self) -> &[Word] {
        &self.v
    }

    /// `Σ_k |U_k|`, the length of the word with all exponents zero.
    pub fn fixed_length(&self) -> usize {
        self.u.iter().map(Vec::len).sum()
    }

    /// The word `U_0 V_1^{β_1} U_1 ... V_α^{β_α} U_α`.
    pub fn word(&self, exponents: &[usize]) -> Word {
        assert_eq!(exponents.len(), self.alpha());
        let mut w = self.u[0].clone();
        for (k, &b) in exponents.iter().enumerate() {
            for _ in 0..b {
                w.extend(self.v[k].iter().cloned());
            }
            w.extend(self.u[k + 1].iter().cloned());
        }
        w
    }
}

#[derive(Clone, Debug)]
pub struct StarredLanguage {
    alphabet: Alphabet,
    branches: Vec<StarredBranch>,
}

impl StarredLanguage {
    pub fn new(alphabet: Alphabet, branches: Vec<StarredBranch>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidBranch("language has no branches".into()));
        }
        for b in &branches {
            for name in b.u.iter().chain(&b.v).flatten() {
                alphabet.letter(name)?;
            }
        }
        Ok(StarredLanguage { alphabet, branches })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn branches(&self) -> &[StarredBranch] {
        &self.branches
    }

    pub fn rank(&self) -> usize {
        self.alphabet.rank
    }

    pub fn enumerate_words(&self, max_len: usize) -> WordIter<'_> {
        WordIter::new(self, max_len)
    }
}

/// One word of the language together with where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumerated {
    pub word: Word,
    pub branch: usize,
    pub exponents: Vec<usize>,
}

/// Odometer over star exponents, branch by branch. Words that arise from
/// several branches or exponent vectors are produced once per origin.
pub struct WordIter<'a> {
    lang: &'a StarredLanguage,
    max_len: usize,
    branch: usize,
    exponents: Vec<usize>,
    len: usize,
    fresh: bool,
}

impl<'a> WordIter<'a> {
    fn new(lang: &'a StarredLanguage, max_len: usize) -> Self {
        let mut it = WordIter {
            lang,
            max_len,
            branch: 0,
            exponents: Vec::new(),
            len: 0,
            fresh: true,
        };
        it.seek_branch();
        it
    }

    /// Moves to the first branch at or after `self.branch` whose fixed part
    /// fits.
    fn seek_branch(&mut self) {
        while let Some(b) = self.lang.branches.get(self.branch) {
            if b.fixed_length() <= self.max_len {
                self.exponents = vec![0; b.alpha()];
                self.len = b.fixed_length();
                self.fresh = true;
                return;
            }
            self.branch += 1;
        }
    }

    fn advance(&mut self) -> bool {
        let b = &self.lang.branches[self.branch];
        for i in 0..b.alpha() {
            let step = b.v[i].len();
            self.exponents[i] += 1;
            self.len += step;
            if self.len <= self.max_len {
                return true;
            }
            self.len -= self.exponents[i] * step;
            self.exponents[i] = 0;
        }
        false
    }
}

impl Iterator for WordIter<'_> {
    type Item = Enumerated;

    fn next(&mut self) -> Option<Enumerated> {
        loop {
            let b = self.lang.branches.get(self.branch)?;
            if self.fresh || self.advance() {
                self.fresh = false;
                return Some(Enumerated {
                    word: b.word(&self.exponents),
                    branch: self.branch,
                    exponents: self.exponents.clone(),
                });
            }
            self.branch += 1;
            self.seek_branch();
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LetterRepr {
    name: String,
    image: QVector,
}

#[derive(Serialize, Deserialize)]
struct BranchRepr {
    u: Vec<Word>,
    v: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct LanguageRepr {
    #[serde(rename = "N")]
    n: usize,
    alphabet: Vec<LetterRepr>,
    branches: Vec<BranchRepr>,
}

fn image_to_ints(v: &QVector) -> Result<Vec<i64>> {
    v.iter()
        .map(|r| {
            if r.is_integer() {
                i64::try_from(r.to_integer()).map_err(|_| Error::NotInteger(r.to_string()))
            } else {
                Err(Error::NotInteger(r.to_string()))
            }
        })
        .collect()
}

impl Serialize for StarredLanguage {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LanguageRepr {
            n: self.rank(),
            alphabet: self
                .alphabet
                .letters
                .iter()
                .map(|l| LetterRepr {
                    name: l.name.clone(),
                    image: QVector::from_ints(&l.image),
                })
                .collect(),
            branches: self
                .branches
                .iter()
                .map(|b| BranchRepr {
                    u: b.u.clone(),
                    v: b.v.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StarredLanguage {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = LanguageRepr::deserialize(d)?;
        let build = || -> Result<StarredLanguage> {
            let letters = repr
                .alphabet
                .into_iter()
                .map(|l| Ok((l.name, image_to_ints(&l.image)?)))
                .collect::<Result<Vec<_>>>()?;
            let alphabet = Alphabet::new(letters)?;
            if alphabet.rank() != repr.n {
                return Err(Error::DimensionMismatch {
                    expected: repr.n,
                    found: alphabet.rank(),
                });
            }
            let branches = repr
                .branches
                .into_iter()
                .map(|b| StarredBranch::new(b.u, b.v))
                .collect::<Result<Vec<_>>>()?;
            StarredLanguage::new(alphabet, branches)
        };
        build().map_err(D::Error::custom)
    }
}
