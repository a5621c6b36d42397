use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linalg::{QMatrix, QVector};
use super::scalar::{format_rational, serde_rational_vec, Rational};

/// Univariate polynomial over `Q`, coefficients lowest degree first, with no
/// trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPolynomial(Vec<Rational>);

impl QPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPolynomial(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        QPolynomial(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        QPolynomial(c)
    }

    /// `x^k - 1`.
    pub fn x_pow_minus_one(k: usize) -> Self {
        let mut p = Self::monomial(k);
        p.0[0] -= Rational::one();
        Self::new(p.0)
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => {
                let inv = l.recip();
                QPolynomial(self.0.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// `p(A)` by Horner's rule.
    pub fn eval_matrix(&self, a: &QMatrix) -> QMatrix {
        let n = a.nrows();
        self.0.iter().rev().fold(QMatrix::zeros(n, n), |acc, c| {
            &(&acc * a) + &QMatrix::scalar(n, c)
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        let z = Rational::zero();
        Self::new(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QPolynomial(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.0[dd].recip();
        let mut rem = self.0.clone();
        let qlen = rem.len().saturating_sub(dd);
        let mut q = vec![Rational::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }

    /// `self / d` when the division is exact.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// `x^deg p(1/x)`.
    pub fn reciprocal(&self) -> Self {
        Self::new(self.0.iter().rev().cloned().collect())
    }

    /// Yun's squarefree decomposition: monic squarefree, pairwise coprime
    /// `f_1, f_2, ...` with `monic(self) = f_1 f_2^2 f_3^3 ...`.
    pub fn squarefree_decomposition(&self) -> Vec<Self> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let d = f.derivative();
        let a0 = f.gcd(&d);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let mut c = d.exact_div(&a0).expect("gcd divides");
        let mut out = Vec::new();
        loop {
            let cd = c.sub(&b.derivative());
            let a = b.gcd(&cd);
            b = b.exact_div(&a).expect("gcd divides");
            c = cd.exact_div(&a).expect("gcd divides");
            out.push(a);
            if b.degree() == Some(0) {
                break;
            }
        }
        out
    }

    /// Distinct real roots in the open interval `(lo, hi)` by Sturm's theorem.
    /// Neither endpoint may be a root.
    pub fn count_real_roots_between(&self, lo: &Rational, hi: &Rational) -> usize {
        assert!(!self.is_zero());
        assert!(!self.eval(lo).is_zero() && !self.eval(hi).is_zero());
        let seq = sturm_sequence(self);
        sign_variations(&seq, lo) - sign_variations(&seq, hi)
    }
}

fn sturm_sequence(p: &QPolynomial) -> Vec<QPolynomial> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1.neg();
        seq.push(r);
    }
    seq.pop();
    seq
}

fn sign_variations(seq: &[QPolynomial], x: &Rational) -> usize {
    let signs: Vec<bool> = seq
        .iter()
        .map(|p| p.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                let s = format_rational(&a);
                if a.is_integer() || i == 0 {
                    write!(f, "{s}")?;
                } else {
                    write!(f, "({s})")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for QPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rational_vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for QPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        serde_rational_vec::deserialize(d).map(QPolynomial::new)
    }
}

/// Monic polynomial of least degree annihilating a square matrix, found as
/// the first linear dependency among `I, A, A^2, ...`.
pub fn minimal_polynomial(a: &QMatrix) -> QPolynomial {
    assert!(a.is_square(), "minimal polynomial of a non-square matrix");
    let n = a.nrows();
    let mut powers = vec![QMatrix::identity(n)];
    loop {
        let next = &powers[powers.len() - 1] * a;
        let cols: Vec<QVector> = powers.iter().map(QMatrix::flatten).collect();
        let m = QMatrix::from_columns(&cols, n * n).expect("uniform flattening");
        if let Some(c) = m.solve(&next.flatten()) {
            let mut coeffs: Vec<Rational> = c.iter().map(|x| -x).collect();
            coeffs.push(Rational::one());
            return QPolynomial::new(coeffs);
        }
        powers.push(next);
    }
}

/// Complex roots on the unit circle, counted with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircleRoots {
    pub on_circle: usize,
    pub degree: usize,
    pub all_on_circle: bool,
}

/// Counts roots of modulus one exactly.
///
/// Zero roots are stripped, `±1` are counted by repeated division, and the
/// remaining circle roots all lie in `g = gcd(p, reciprocal(p))`, which is
/// palindromic of even degree `2m`. Writing `g(x) = x^m q(x + 1/x)`, each real
/// root of `q` in `(-2, 2)` of multiplicity `k` accounts for `2k` roots on the
/// circle.
pub fn count_unit_circle_roots(p: &QPolynomial) -> CircleRoots {
    let degree = p.degree().expect("zero polynomial has no root count");
    let mut rest = p.monic();
    while rest.coeffs().first().is_some_and(Zero::is_zero) {
        rest = QPolynomial::new(rest.coeffs()[1..].to_vec());
    }
    let mut on_circle = 0;
    for r in [Rational::one(), -Rational::one()] {
        let lin = QPolynomial::linear_root(&r);
        while rest.eval(&r).is_zero() {
            rest = rest.exact_div(&lin).expect("root divides");
            on_circle += 1;
        }
    }
    let g = rest.gcd(&rest.reciprocal());
    let gdeg = g.degree().unwrap_or(0);
    if gdeg > 0 {
        debug_assert!(gdeg % 2 == 0);
        let q = palindromic_to_trace(&g);
        let two = Rational::from_integer(BigInt::from(2));
        for (k, factor) in q.squarefree_decomposition().iter().enumerate() {
            if factor.degree().unwrap_or(0) == 0 {
                continue;
            }
            on_circle += 2 * (k + 1) * factor.count_real_roots_between(&-two.clone(), &two);
        }
    }
    CircleRoots {
        on_circle,
        degree,
        all_on_circle: on_circle == degree,
    }
}

/// For palindromic `g` of degree `2m`, the polynomial `q` of degree `m` with
/// `g(x) = x^m q(x + 1/x)`.
fn palindromic_to_trace(g: &QPolynomial) -> QPolynomial {
    let c = g.coeffs();
    let m = c.len() / 2;
    // P_0 = 2, P_1 = u, P_{k+1} = u P_k - P_{k-1}  with  P_k(x + 1/x) = x^k + x^-k.
    let u = QPolynomial::monomial(1);
    let mut prev = QPolynomial::from_ints(&[2]);
    let mut cur = u.clone();
    let mut q = QPolynomial::constant(c[m].clone());
    for k in 1..=m {
        if k > 1 {
            let next = u.mul(&cur).sub(&prev);
            prev = cur;
            cur = next;
        }
        q = q.add(&cur.scale(&c[m + k]));
    }
    q
}

/// Euler's totient.
pub fn euler_phi(mut k: u64) -> u64 {
    let mut result = k;
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            while k % p == 0 {
                k /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if k > 1 {
        result -= result / k;
    }
    result
}

fn mobius(mut k: u64) -> i8 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= k {
        if k % p == 0 {
            k /= p;
            if k % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if k > 1 {
        sign = -sign;
    }
    sign
}

/// The `k`-th cyclotomic polynomial via the Möbius product
/// `Φ_k = Π_{d | k} (x^d - 1)^{μ(k/d)}`.
pub fn cyclotomic(k: u64) -> QPolynomial {
    assert!(k >= 1);
    let mut num = QPolynomial::one();
    let mut den = QPolynomial::one();
    for d in (1..=k).filter(|d| k % d == 0) {
        match mobius(k / d) {
            1 => num = num.mul(&QPolynomial::x_pow_minus_one(d as usize)),
            -1 => den = den.mul(&QPolynomial::x_pow_minus_one(d as usize)),
            _ => {}
        }
    }
    num.exact_div(&den).expect("Möbius product is exact")
}

/// Every `k` with `φ(k) = d`. Uses `φ(k) >= sqrt(k/2)`, so `k <= 2 d^2`.
pub(crate) fn indices_with_totient(d: u64) -> impl Iterator<Item = u64> {
    (1..=2 * d * d).filter(move |&k| euler_phi(k) == d)
}

/// `Some(k)` when the monic normalization of `p` is `Φ_k`.
pub fn cyclotomic_index(p: &QPolynomial) -> Option<u64> {
    let d = p.degree()? as u64;
    if d == 0 {
        return None;
    }
    let m = p.monic();
    if !m.has_integer_coefficients() {
        return None;
    }
    indices_with_totient(d).find(|&k| cyclotomic(k) == m)
}
