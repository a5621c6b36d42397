use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linalg::{QMatrix, QVector};
use super::scalar::Rational;
use crate::{Error, Result};

/// Integer row reduction of `rows[..][..reduce_cols]`. Applies unimodular row
/// operations to whole rows (so trailing columns act as a transform record)
/// and returns the rank. With `reduce_above`, entries above each pivot land
/// in `[0, pivot)`.
fn echelonize(rows: &mut [Vec<BigInt>], reduce_cols: usize, reduce_above: bool) -> usize {
    let mut r = 0;
    for c in 0..reduce_cols {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()));
            let Some(best) = best else { break };
            rows.swap(r, best);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        if reduce_above {
            let pivot_row = rows[r].clone();
            for row in rows[..r].iter_mut() {
                let q = row[c].div_floor(&pivot_row[c]);
                if !q.is_zero() {
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x -= &q * p;
                    }
                }
            }
        }
        r += 1;
    }
    r
}

/// Canonical Hermite normal form of the lattice spanned by integer rows.
///
/// Rows of the result are upper echelon with positive pivots, and every entry
/// above a pivot is reduced into `[0, pivot)`; zero rows are dropped.
pub fn hnf(rows: &[QVector]) -> Result<Lattice> {
    let ambient_dim = match rows.first() {
        Some(r) => r.dim(),
        None => return Err(Error::DimensionMismatch { expected: 1, found: 0 }),
    };
    Lattice::from_rows(ambient_dim, rows)
}

/// Index of one lattice in another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            LatticeIndex::Finite(k) => write!(f, "{k}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// A subgroup of `Z^n`, stored by its Hermite normal form basis so that two
/// lattices are equal iff their bases are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    ambient_dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn from_rows(ambient_dim: usize, rows: &[QVector]) -> Result<Self> {
        let ints = rows
            .iter()
            .map(|r| {
                if r.dim() != ambient_dim {
                    return Err(Error::DimensionMismatch {
                        expected: ambient_dim,
                        found: r.dim(),
                    });
                }
                r.to_bigints()
                    .ok_or_else(|| Error::NotInteger(r.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_int_rows(ambient_dim, ints))
    }

    pub fn from_int_rows(ambient_dim: usize, mut rows: Vec<Vec<BigInt>>) -> Self {
        let rank = echelonize(&mut rows, ambient_dim, true);
        rows.truncate(rank);
        Lattice {
            ambient_dim,
            basis: rows,
        }
    }

    /// `Z^n`.
    pub fn standard(n: usize) -> Self {
        Self::scaled(n, 1)
    }

    /// `k Z^n`.
    pub fn scaled(n: usize, k: i64) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::from(k) } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Self::from_int_rows(n, rows)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<QVector> {
        self.basis.iter().map(|r| QVector::from_bigints(r)).collect()
    }

    pub fn basis_matrix(&self) -> QMatrix {
        QMatrix::from_rows(self.basis_vectors(), self.ambient_dim).expect("basis rows are uniform")
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    fn pivot_columns(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|x| !x.is_zero()).expect("zero row in basis"))
            .collect()
    }

    /// Membership of an integer vector, by reduction against the echelon basis.
    pub fn contains_ints(&self, v: &[BigInt]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let mut w = v.to_vec();
        for (row, p) in self.basis.iter().zip(self.pivot_columns()) {
            if w[..p].iter().any(|x| !x.is_zero()) {
                return false;
            }
            let (q, rem) = w[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return false;
            }
            for (x, b) in w.iter_mut().zip(row) {
                *x -= &q * b;
            }
        }
        w.iter().all(Zero::is_zero)
    }

    pub fn contains(&self, v: &QVector) -> bool {
        v.to_bigints().is_some_and(|ints| self.contains_ints(&ints))
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|r| other.contains_ints(r))
    }

    /// `self ∩ other`, from the integer left kernel of the stacked bases.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let n = self.ambient_dim;
        let r1 = self.rank();
        let total = r1 + other.rank();
        let mut aug: Vec<Vec<BigInt>> = self
            .basis
            .iter()
            .chain(&other.basis)
            .enumerate()
            .map(|(i, row)| {
                let mut e = row.clone();
                e.extend((0..total).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
                e
            })
            .collect();
        let rank = echelonize(&mut aug, n, false);
        let gens = aug[rank..]
            .iter()
            .map(|row| {
                let coeffs = &row[n..n + r1];
                (0..n)
                    .map(|c| {
                        coeffs
                            .iter()
                            .zip(&self.basis)
                            .fold(BigInt::zero(), |acc, (a, b)| acc + a * &b[c])
                    })
                    .collect()
            })
            .collect();
        Ok(Lattice::from_int_rows(n, gens))
    }

    /// `[sup : self]`.
    pub fn index_in(&self, sup: &Lattice) -> Result<LatticeIndex> {
        if self.ambient_dim != sup.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: sup.ambient_dim,
                found: self.ambient_dim,
            });
        }
        if !self.is_sublattice_of(sup) {
            return Err(Error::NotSublattice);
        }
        if self.rank() != sup.rank() {
            return Ok(LatticeIndex::Infinite);
        }
        // Equal rank and containment force the same pivot columns, so the index
        // is the ratio of the pivot products.
        let prod = |l: &Lattice| {
            l.basis
                .iter()
                .zip(l.pivot_columns())
                .fold(BigInt::one(), |acc, (r, p)| acc * &r[p])
        };
        Ok(LatticeIndex::Finite(prod(self) / prod(sup)))
    }

    /// Divides every basis vector by `k`; `k` must divide every entry.
    pub(crate) fn divide_exact(&self, k: &BigInt) -> Lattice {
        let rows = self
            .basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        debug_assert!(x.is_multiple_of(k));
                        x / k
                    })
                    .collect()
            })
            .collect();
        Lattice::from_int_rows(self.ambient_dim, rows)
    }

    /// The lattice spanned by rational vectors after scaling by `k`.
    pub(crate) fn from_scaled(ambient_dim: usize, vectors: &[QVector], k: &BigInt) -> Result<Self> {
        let kq = Rational::from_integer(k.clone());
        let scaled: Vec<QVector> = vectors.iter().map(|v| v.scale(&kq)).collect();
        Lattice::from_rows(ambient_dim, &scaled)
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    ambient_dim: usize,
    basis: Vec<QVector>,
}

impl Serialize for Lattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeRepr {
            ambient_dim: self.ambient_dim,
            basis: self.basis_vectors(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Lattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = LatticeRepr::deserialize(d)?;
        Lattice::from_rows(repr.ambient_dim, &repr.basis).map_err(serde::de::Error::custom)
    }
}
