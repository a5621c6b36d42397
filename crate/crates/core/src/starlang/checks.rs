use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use super::{format_word, Alphabet, StarredBranch, StarredLanguage, Word};
use crate::cones::Cone;
use crate::ratcore::{rat, Lattice, QMatrix, QVector};

/// Direction data of one branch: `z_k = V̄_k / |V_k|`.
#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub z_vectors: Vec<QVector>,
    pub distinct_z: Vec<QVector>,
    /// Indices of starred segments whose image is zero.
    pub zero_segments: Vec<usize>,
    pub independent: bool,
    /// Some nonnegative combination of the `z` vanishes. Only possible for
    /// dependent branches, and a proof that the language is not finite to one.
    pub nonnegative_dependency: bool,
}

pub fn independence_certificate(alphabet: &Alphabet, branch: &StarredBranch) -> IndependenceReport {
    let n = alphabet.rank();
    let mut z_vectors = Vec::with_capacity(branch.alpha());
    let mut zero_segments = Vec::new();
    for (k, v) in branch.v_segments().iter().enumerate() {
        let img = alphabet.word_image(v).expect("language letters are checked");
        if img.is_zero() {
            zero_segments.push(k);
        }
        z_vectors.push(img.scale(&rat(1, v.len() as i64)));
    }
    let mut distinct_z: Vec<QVector> = Vec::new();
    for z in &z_vectors {
        if !distinct_z.contains(z) {
            distinct_z.push(z.clone());
        }
    }
    let rank = if distinct_z.is_empty() {
        0
    } else {
        QMatrix::from_rows(distinct_z.clone(), n).unwrap().rank()
    };
    let independent = zero_segments.is_empty() && rank == distinct_z.len();
    let nonnegative_dependency = !zero_segments.is_empty()
        || (!distinct_z.is_empty()
            && Cone::from_generators(n, distinct_z.clone()).unwrap().lineality_dim() > 0);
    IndependenceReport {
        z_vectors,
        distinct_z,
        zero_segments,
        independent,
        nonnegative_dependency,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteToOneReport {
    pub branches: Vec<IndependenceReport>,
    pub all_independent: bool,
    pub certified_not_finite_to_one: bool,
    pub max_len: usize,
    pub distinct_words: usize,
    pub max_fiber_size: usize,
    pub fiber_witness: Option<Vec<i64>>,
    /// The fiber table only bounds-checks a finite part of the language.
    pub heuristic: bool,
}

/// Certified part: branch independence. Empirical part: the largest number of
/// distinct words of length at most `max_len` sharing one image.
pub fn finite_to_one_check(lang: &StarredLanguage, max_len: usize) -> FiniteToOneReport {
    let branches: Vec<IndependenceReport> = lang
        .branches()
        .iter()
        .map(|b| independence_certificate(lang.alphabet(), b))
        .collect();
    let words = distinct_words(lang, max_len);
    let mut fibers: HashMap<Vec<i64>, usize> = HashMap::new();
    for w in &words {
        *fibers.entry(lang.alphabet().word_image_ints(w).unwrap()).or_default() += 1;
    }
    let (fiber_witness, max_fiber_size) = fibers
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))
        .map(|(img, c)| (Some(img), c))
        .unwrap_or((None, 0));
    FiniteToOneReport {
        all_independent: branches.iter().all(|r| r.independent),
        certified_not_finite_to_one: branches.iter().any(|r| r.nonnegative_dependency),
        branches,
        max_len,
        distinct_words: words.len(),
        max_fiber_size,
        fiber_witness,
        heuristic: true,
    }
}

fn distinct_words(lang: &StarredLanguage, max_len: usize) -> Vec<Word> {
    let mut words: Vec<Word> = lang.enumerate_words(max_len).map(|e| e.word).collect();
    words.sort();
    words.dedup();
    words
}

/// Word length `|v|_X` in `Z^N` with respect to the letter images, from a
/// breadth-first ball table grown on demand.
pub struct WordMetric {
    steps: Vec<Vec<i64>>,
    lattice: Lattice,
    dist: HashMap<Vec<i64>, u32>,
    frontier: Vec<Vec<i64>>,
    radius: u32,
}

impl WordMetric {
    pub fn new(alphabet: &Alphabet) -> Self {
        let steps: Vec<Vec<i64>> = alphabet
            .distinct_images()
            .into_iter()
            .filter(|v| v.iter().any(|&c| c != 0))
            .collect();
        let rows: Vec<Vec<BigInt>> = steps.iter().map(|v| v.iter().map(|&c| c.into()).collect()).collect();
        let lattice = Lattice::from_int_rows(alphabet.rank(), rows);
        let origin = vec![0i64; alphabet.rank()];
        let mut dist = HashMap::new();
        dist.insert(origin.clone(), 0);
        WordMetric {
            steps,
            lattice,
            dist,
            frontier: vec![origin],
            radius: 0,
        }
    }

    fn grow(&mut self) {
        let mut next = Vec::new();
        for p in &self.frontier {
            for s in &self.steps {
                let q: Vec<i64> = p.iter().zip(s).map(|(a, b)| a + b).collect();
                if !self.dist.contains_key(&q) {
                    self.dist.insert(q.clone(), self.radius + 1);
                    next.push(q);
                }
            }
        }
        self.frontier = next;
        self.radius += 1;
    }

    /// `None` when `v` is not in the subgroup generated by the letters.
    pub fn norm(&mut self, v: &[i64]) -> Option<u32> {
        let big: Vec<BigInt> = v.iter().map(|&c| c.into()).collect();
        if !self.lattice.contains_ints(&big) {
            return None;
        }
        loop {
            if let Some(&d) = self.dist.get(v) {
                return Some(d);
            }
            self.grow();
        }
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FellowTravellerReport {
    pub max_len: usize,
    pub lambda_observed: u32,
    pub kappa_observed: usize,
    pub pairs_checked: usize,
    /// Human readable pair attaining `lambda_observed`.
    pub lambda_witness: Option<(String, String)>,
    /// Only words up to `max_len` are examined.
    pub heuristic: bool,
}

fn prefix_images(alphabet: &Alphabet, w: &[String]) -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(w.len() + 1);
    let mut acc = vec![0i64; alphabet.rank()];
    out.push(acc.clone());
    for name in w {
        for (a, c) in acc.iter_mut().zip(&alphabet.letter(name).unwrap().image) {
            *a += c;
        }
        out.push(acc.clone());
    }
    out
}

/// For all `U, V` in the language up to `max_len` with `Ū = ā + V̄ + b̄` for
/// letters `a, b`: `λ = max_t |Ū(t) - ā - V̄(t)|_X` and `κ = max ||U| - |V||`.
pub fn fellow_traveller_check(lang: &StarredLanguage, max_len: usize) -> FellowTravellerReport {
    let alphabet = lang.alphabet();
    let words = distinct_words(lang, max_len);
    let prefixes: Vec<Vec<Vec<i64>>> = words.iter().map(|w| prefix_images(alphabet, w)).collect();
    let mut by_image: HashMap<&[i64], Vec<usize>> = HashMap::new();
    for (i, p) in prefixes.iter().enumerate() {
        by_image.entry(p.last().unwrap().as_slice()).or_default().push(i);
    }
    let images = alphabet.distinct_images();
    let mut metric = WordMetric::new(alphabet);
    let mut lambda = 0u32;
    let mut kappa = 0usize;
    let mut pairs = 0usize;
    let mut witness = None;
    for (vi, pv) in prefixes.iter().enumerate() {
        let v_end = pv.last().unwrap();
        for a in &images {
            for b in &images {
                let target: Vec<i64> = (0..v_end.len()).map(|i| v_end[i] + a[i] + b[i]).collect();
                let Some(us) = by_image.get(target.as_slice()) else {
                    continue;
                };
                for &ui in us {
                    let pu = &prefixes[ui];
                    pairs += 1;
                    kappa = kappa.max(pu.len().abs_diff(pv.len()));
                    let steps = pu.len().max(pv.len());
                    for t in 0..steps {
                        let u_t = &pu[t.min(pu.len() - 1)];
                        let v_t = &pv[t.min(pv.len() - 1)];
                        let gap: Vec<i64> = (0..a.len()).map(|i| u_t[i] - a[i] - v_t[i]).collect();
                        let d = metric.norm(&gap).expect("difference of word images");
                        if d > lambda {
                            lambda = d;
                            witness = Some((format_word(&words[ui]), format_word(&words[vi])));
                        }
                    }
                }
            }
        }
    }
    FellowTravellerReport {
        max_len,
        lambda_observed: lambda,
        kappa_observed: kappa,
        pairs_checked: pairs,
        lambda_witness: witness,
        heuristic: true,
    }
}
