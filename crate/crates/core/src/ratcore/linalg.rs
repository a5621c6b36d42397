use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{format_rational, serde_rational_vec, Rational};
use crate::{Error, Result};

/// A vector in `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        QVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        QVector(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        QVector(
            entries
                .iter()
                .map(|&e| Rational::from_integer(BigInt::from(e)))
                .collect(),
        )
    }

    pub fn from_bigints(entries: &[BigInt]) -> Self {
        QVector(entries.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|r| r.is_integer())
    }

    /// Integer entries, or `None` when some entry has a denominator.
    pub fn to_bigints(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|r| r.is_integer().then(|| r.to_integer()))
            .collect()
    }

    /// Standard inner product. Panics on a dimension mismatch.
    pub fn dot(&self, other: &QVector) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dot product of unequal dimensions");
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn norm_sq(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, c: &Rational) -> QVector {
        QVector(self.0.iter().map(|a| a * c).collect())
    }

    /// The positive multiple of `self` with coprime integer entries. The zero
    /// vector is returned unchanged.
    pub fn primitive(&self) -> QVector {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|r| r.numer() * (&lcm / r.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        QVector(
            ints.into_iter()
                .map(|x| Rational::from_integer(x / &g))
                .collect(),
        )
    }

    /// Primitive scaling with the sign fixed so the first nonzero entry is
    /// positive; identifies a line through the origin.
    pub fn primitive_line(&self) -> QVector {
        let p = self.primitive();
        match p.0.iter().find(|r| !r.is_zero()) {
            Some(first) if first.is_negative() => -&p,
            _ => p,
        }
    }
}

impl Index<usize> for QVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add for &QVector {
    type Output = QVector;
    fn add(self, rhs: &QVector) -> QVector {
        assert_eq!(self.dim(), rhs.dim());
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVector {
    type Output = QVector;
    fn sub(self, rhs: &QVector) -> QVector {
        assert_eq!(self.dim(), rhs.dim());
        QVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVector {
    type Output = QVector;
    fn neg(self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rational(r))?;
        }
        write!(f, ")")
    }
}

impl FromIterator<Rational> for QVector {
    fn from_iter<T: IntoIterator<Item = Rational>>(iter: T) -> Self {
        QVector(iter.into_iter().collect())
    }
}

impl Serialize for QVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rational_vec::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        serde_rational_vec::deserialize(d).map(QVector)
    }
}

/// Result of row reduction: the reduced matrix and its pivot columns.
pub struct Rref {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
}

/// A dense rational matrix; vectors act as columns (`A v`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMatrix {
    rows: Vec<QVector>,
    ncols: usize,
}

impl QMatrix {
    /// Builds a matrix from rows. `ncols` is needed when `rows` is empty.
    pub fn from_rows(rows: Vec<QVector>, ncols: usize) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.dim() != ncols {
                return Err(Error::Ragged {
                    row: i,
                    expected: ncols,
                    found: r.dim(),
                });
            }
        }
        Ok(QMatrix { rows, ncols })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| QVector::from_ints(r)).collect(), ncols)
            .expect("rectangular integer literal")
    }

    pub fn from_columns(cols: &[QVector], nrows: usize) -> Result<Self> {
        for c in cols {
            if c.dim() != nrows {
                return Err(Error::DimensionMismatch {
                    expected: nrows,
                    found: c.dim(),
                });
            }
        }
        let rows = (0..nrows)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Ok(QMatrix {
            rows,
            ncols: cols.len(),
        })
    }

    pub fn identity(n: usize) -> Self {
        QMatrix {
            rows: (0..n).map(|i| QVector::unit(n, i)).collect(),
            ncols: n,
        }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        QMatrix {
            rows: vec![QVector::zeros(ncols); nrows],
            ncols,
        }
    }

    pub fn scalar(n: usize, c: &Rational) -> Self {
        Self::identity(n).scale(c)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &QVector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> QVector {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<QVector> {
        (0..self.ncols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> QMatrix {
        QMatrix {
            rows: self.columns(),
            ncols: self.nrows(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self.rows.iter().enumerate().all(|(i, r)| {
                r.iter()
                    .enumerate()
                    .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
            })
    }

    pub fn is_integral(&self) -> bool {
        self.rows.iter().all(QVector::is_integral)
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows.iter().map(|r| r.scale(c)).collect(),
            ncols: self.ncols,
        }
    }

    pub fn mul_vec(&self, v: &QVector) -> QVector {
        assert_eq!(self.ncols, v.dim(), "matrix-vector dimension mismatch");
        self.rows.iter().map(|r| r.dot(v)).collect()
    }

    pub fn mul_mat(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.ncols, other.nrows(), "matrix product dimension mismatch");
        let cols = other.columns();
        QMatrix {
            rows: self
                .rows
                .iter()
                .map(|r| cols.iter().map(|c| r.dot(c)).collect())
                .collect(),
            ncols: other.ncols,
        }
    }

    pub fn pow(&self, mut e: u64) -> QMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = QMatrix::identity(self.ncols);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mat(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mat(&base);
            }
        }
        acc
    }

    /// Reduced row echelon form by exact Gauss–Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m: Vec<Vec<Rational>> = self.rows.iter().map(|r| r.entries().to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == m.len() {
                break;
            }
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for x in m[r].iter_mut() {
                *x = &*x * &inv;
            }
            for i in 0..m.len() {
                if i != r && !m[i][c].is_zero() {
                    let f = m[i][c].clone();
                    for j in c..self.ncols {
                        let d = &f * &m[r][j];
                        m[i][j] -= d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: QMatrix {
                rows: m.into_iter().map(QVector).collect(),
                ncols: self.ncols,
            },
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{x : A x = 0}`, one vector per free column, read off the
    /// reduced row echelon form.
    pub fn nullspace(&self) -> Vec<QVector> {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = QVector::zeros(self.ncols);
                v.0[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v.0[p] = -matrix.get(i, f);
                }
                v
            })
            .collect()
    }

    /// Some solution of `A x = b`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &QVector) -> Option<QVector> {
        assert_eq!(self.nrows(), b.dim());
        let aug_rows = self
            .rows
            .iter()
            .zip(b.iter())
            .map(|(r, bi)| {
                let mut e = r.entries().to_vec();
                e.push(bi.clone());
                QVector(e)
            })
            .collect();
        let aug = QMatrix {
            rows: aug_rows,
            ncols: self.ncols + 1,
        };
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.ncols) {
            return None;
        }
        let mut x = QVector::zeros(self.ncols);
        for (i, &p) in pivots.iter().enumerate() {
            x.0[p] = matrix.get(i, self.ncols).clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.nrows(),
                cols: self.ncols,
            });
        }
        let n = self.ncols;
        let mut m: Vec<Vec<Rational>> = self.rows.iter().map(|r| r.entries().to_vec()).collect();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= &m[c][c];
            for i in c + 1..n {
                if !m[i][c].is_zero() {
                    let f = &m[i][c] / &m[c][c];
                    for j in c..n {
                        let d = &f * &m[c][j];
                        m[i][j] -= d;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.nrows(),
                cols: self.ncols,
            });
        }
        let n = self.ncols;
        let aug_rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut e = r.entries().to_vec();
                e.extend(QVector::unit(n, i).0);
                QVector(e)
            })
            .collect();
        let aug = QMatrix {
            rows: aug_rows,
            ncols: 2 * n,
        };
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        Ok(QMatrix {
            rows: matrix
                .rows
                .into_iter()
                .map(|r| QVector(r.0[n..].to_vec()))
                .collect(),
            ncols: n,
        })
    }

    /// Entries flattened row by row.
    pub fn flatten(&self) -> QVector {
        self.rows.iter().flat_map(|r| r.iter().cloned()).collect()
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        self.mul_mat(rhs)
    }
}

impl Add for &QMatrix {
    type Output = QMatrix;
    fn add(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.nrows(), self.ncols), (rhs.nrows(), rhs.ncols));
        QMatrix {
            rows: self.rows.iter().zip(&rhs.rows).map(|(a, b)| a + b).collect(),
            ncols: self.ncols,
        }
    }
}

impl Sub for &QMatrix {
    type Output = QMatrix;
    fn sub(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!((self.nrows(), self.ncols), (rhs.nrows(), rhs.ncols));
        QMatrix {
            rows: self.rows.iter().zip(&rhs.rows).map(|(a, b)| a - b).collect(),
            ncols: self.ncols,
        }
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: Vec<QVector>,
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        let ncols = repr.rows.first().map_or(0, QVector::dim);
        QMatrix::from_rows(repr.rows, ncols).map_err(serde::de::Error::custom)
    }
}
