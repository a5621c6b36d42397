use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use super::{independence_certificate, StarredLanguage, Word};
use crate::cones::Cone;
use crate::polyfun::{Piece, PolyFun, ValidationReport};
use crate::ratcore::{serde_rational, sqrt_upper_bound, QMatrix, QVector, Rational};
use crate::{Error, Result};

/// Constants of the length bound `f(Ū) - ξ <= |U| <= f(Ū) + ξ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XiCertificate {
    /// Largest total length of the fixed segments of a starred branch.
    pub delta: u64,
    #[serde(with = "serde_rational")]
    pub eta_sq: Rational,
    #[serde(with = "serde_rational")]
    pub zeta_sq: Rational,
    /// Rational upper bound for `ζη`.
    #[serde(with = "serde_rational")]
    pub zeta_eta_bound: Rational,
    /// `zeta_eta_bound · δ + δ`, before accounting for starless branches.
    #[serde(with = "serde_rational")]
    pub xi_starred: Rational,
    #[serde(with = "serde_rational")]
    pub xi: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuiltPolyFun {
    pub polyfun: PolyFun,
    pub certificate: XiCertificate,
    pub validation: ValidationReport,
}

/// Grid used for the square root in `ζη`.
const SQRT_GRID: u64 = 2;

/// One piece per starred branch: the cone over the distinct `z_{j,k}` and the
/// minimum norm `y_j` with `<z_{j,k}, y_j> = 1`.
pub fn build_polyfun(lang: &StarredLanguage) -> Result<BuiltPolyFun> {
    let n = lang.rank();
    let mut pieces = Vec::new();
    let mut delta = 0u64;
    for (j, b) in lang.branches().iter().enumerate() {
        if b.alpha() == 0 {
            continue;
        }
        let cert = independence_certificate(lang.alphabet(), b);
        if !cert.independent {
            return Err(Error::DependentBranch { branch: j });
        }
        let z = QMatrix::from_rows(cert.distinct_z.clone(), n)?;
        let ones = QVector::new(vec![Rational::one(); z.nrows()]);
        let gram_inv = (&z * &z.transpose())
            .inverse()
            .map_err(|_| Error::Internal(format!("branch {j}: singular Gram matrix")))?;
        let y = z.transpose().mul_vec(&gram_inv.mul_vec(&ones));
        pieces.push(Piece::new(Cone::from_generators(n, cert.distinct_z)?, y)?);
        delta = delta.max(b.fixed_length() as u64);
    }
    let polyfun = PolyFun::new(n, pieces)?;

    let eta_sq = lang.alphabet().eta_sq();
    let zeta_sq = polyfun.zeta_sq();
    let zeta_eta_bound = sqrt_upper_bound(&(&zeta_sq * &eta_sq), SQRT_GRID);
    let d = Rational::from_integer(delta.into());
    let xi_starred = &zeta_eta_bound * &d + &d;
    let mut xi = xi_starred.clone();
    for b in lang.branches().iter().filter(|b| b.alpha() == 0) {
        let slack = slack(lang, &polyfun, &b.word(&[]));
        if slack > xi {
            xi = slack;
        }
    }
    let validation = polyfun.validate().clone();
    Ok(BuiltPolyFun {
        polyfun,
        certificate: XiCertificate {
            delta,
            eta_sq,
            zeta_sq,
            zeta_eta_bound,
            xi_starred,
            xi,
        },
        validation,
    })
}

fn slack(lang: &StarredLanguage, f: &PolyFun, w: &Word) -> Rational {
    let img = lang.alphabet().word_image(w).expect("language letters are checked");
    (Rational::from_integer(w.len().into()) - f.eval(&img)).abs()
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthViolation {
    pub word: Word,
    pub branch: usize,
    pub length: usize,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthBoundReport {
    pub max_len: usize,
    #[serde(with = "serde_rational")]
    pub xi: Rational,
    pub words_checked: usize,
    pub passed: bool,
    #[serde(with = "serde_rational")]
    pub worst_slack: Rational,
    pub worst_word: Option<Word>,
    pub worst_branch: Option<usize>,
    pub violation_count: usize,
    /// The first few violations in enumeration order.
    pub violations: Vec<LengthViolation>,
}

const MAX_REPORTED: usize = 20;

/// Checks `||U| - f(Ū)| <= ξ` for every word of length at most `max_len`.
pub fn verify_length_bound(
    lang: &StarredLanguage,
    f: &PolyFun,
    xi: &Rational,
    max_len: usize,
) -> LengthBoundReport {
    let words: Vec<_> = lang.enumerate_words(max_len).collect();
    let slacks: Vec<Rational> = words.par_iter().map(|e| slack(lang, f, &e.word)).collect();
    let mut worst: Option<usize> = None;
    let mut violations = Vec::new();
    let mut violation_count = 0;
    for (i, s) in slacks.iter().enumerate() {
        if worst.map_or(true, |w| *s > slacks[w]) {
            worst = Some(i);
        }
        if s > xi {
            violation_count += 1;
            if violations.len() < MAX_REPORTED {
                let e = &words[i];
                violations.push(LengthViolation {
                    word: e.word.clone(),
                    branch: e.branch,
                    length: e.word.len(),
                    value: f.eval(&lang.alphabet().word_image(&e.word).unwrap()),
                });
            }
        }
    }
    LengthBoundReport {
        max_len,
        xi: xi.clone(),
        words_checked: words.len(),
        passed: violation_count == 0,
        worst_slack: worst.map_or_else(|| Rational::from_integer(0.into()), |w| slacks[w].clone()),
        worst_word: worst.map(|w| words[w].word.clone()),
        worst_branch: worst.map(|w| words[w].branch),
        violation_count,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{pentagon_polyfun, pentagon_language, planar_alphabet};
    use crate::ratcore::rat;
    use crate::starlang::StarredBranch;

    fn w(s: &str) -> Word {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn example_language_gives_the_pentagon_function() {
        let built = build_polyfun(&pentagon_language()).unwrap();
        let reference = pentagon_polyfun();
        assert_eq!(built.polyfun.pieces().len(), 6);
        for (p, q) in built.polyfun.pieces().iter().zip(reference.pieces()) {
            assert_eq!(p.cone().generators(), q.cone().generators());
            assert_eq!(p.form(), q.form());
        }
        assert!(built.validation.valid);
        let c = &built.certificate;
        assert_eq!(c.delta, 1);
        assert_eq!(c.eta_sq, rat(1, 1));
        assert_eq!(c.zeta_sq, rat(20, 1));
        assert_eq!(c.zeta_eta_bound, rat(9, 2));
        assert_eq!(c.xi, rat(11, 2));
    }

    #[test]
    fn single_branch_does_not_cover() {
        let lang = StarredLanguage::new(
            planar_alphabet(),
            vec![StarredBranch::new(vec![vec![], vec![], vec![]], vec![w("ey"), w("eX")]).unwrap()],
        )
        .unwrap();
        let built = build_polyfun(&lang).unwrap();
        assert_eq!(built.polyfun.pieces().len(), 1);
        assert_eq!(built.polyfun.pieces()[0].form(), &QVector::from_ints(&[-2, 2]));
        assert!(!built.validation.cover.passed);
        assert!(built.validation.positivity.passed);
    }

    #[test]
    fn minimum_norm_form_for_a_single_ray() {
        let lang = StarredLanguage::new(
            planar_alphabet(),
            vec![StarredBranch::new(vec![w("x"), vec![]], vec![w("xy")]).unwrap()],
        )
        .unwrap();
        let built = build_polyfun(&lang).unwrap();
        assert_eq!(built.polyfun.pieces()[0].form(), &QVector::from_ints(&[1, 1]));
        assert_eq!(built.certificate.delta, 1);
    }

    #[test]
    fn dependent_branches_are_rejected() {
        let lang = StarredLanguage::new(
            planar_alphabet(),
            vec![StarredBranch::new(vec![vec![], vec![], vec![]], vec![w("x"), w("X")]).unwrap()],
        )
        .unwrap();
        assert!(matches!(build_polyfun(&lang), Err(Error::DependentBranch { branch: 0 })));
    }

    #[test]
    fn starless_branches_enlarge_xi() {
        let mut branches = pentagon_language().branches().to_vec();
        branches.push(StarredBranch::new(vec![w("eeeeeeeeeeex")], vec![]).unwrap());
        let lang = StarredLanguage::new(planar_alphabet(), branches).unwrap();
        let built = build_polyfun(&lang).unwrap();
        assert_eq!(built.certificate.xi_starred, rat(11, 2));
        // |U| = 12 and f(1, 0) = 4.
        assert_eq!(built.certificate.xi, rat(8, 1));
        let r = verify_length_bound(&lang, &built.polyfun, &built.certificate.xi, 14);
        assert!(r.passed);
    }

    #[test]
    fn length_bound_holds() {
        let lang = pentagon_language();
        let built = build_polyfun(&lang).unwrap();
        let r = verify_length_bound(&lang, &built.polyfun, &built.certificate.xi, 30);
        assert!(r.passed, "{:?}", r.violations);
        assert!(r.worst_slack <= rat(11, 2));
        let f = &built.polyfun;
        assert_eq!(f.eval(&QVector::from_ints(&[0, 1])), rat(2, 1));
        let tight = verify_length_bound(&lang, f, &rat(0, 1), 30);
        assert!(!tight.passed);
        assert!(tight.violations.len() <= MAX_REPORTED);
    }
}
