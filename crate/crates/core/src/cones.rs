//! Polyhedral cones `C(Z) = { Σ μ_i z_i : μ_i >= 0 }` with both a generator
//! (V-) and a halfspace (H-) description.
//!
//! A halfspace normal `w` stands for `{ v : <v, w> >= 0 }`. Conversion in both
//! directions goes through [`h_to_v`], an exact double description method;
//! [`v_to_h`] is the same routine applied to the dual cone. Outputs are
//! canonical: primitive integer vectors, sorted, without duplicates, with any
//! lineality space listed as `±` pairs of its reduced echelon basis.

use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ratcore::{QMatrix, QVector, Rational};
use crate::{Error, Result};

/// Extreme rays (plus `±` lineality pairs) of `{ v : <v, w> >= 0 for all w }`.
pub fn h_to_v(dim: usize, normals: &[QVector]) -> Vec<QVector> {
    for w in normals {
        assert_eq!(w.dim(), dim, "halfspace normal of the wrong dimension");
    }
    let w = QMatrix::from_rows(normals.to_vec(), dim).expect("uniform normals");
    let mut out = Vec::new();
    for l in subspace_basis(w.nullspace(), dim) {
        out.push(-&l);
        out.push(l);
    }
    out.extend(pointed_rays(dim, normals));
    canonicalize(out)
}

/// Halfspace normals cutting out `C(generators)`; by duality these are the
/// generators of the dual cone `{ w : <z, w> >= 0 for all z }`. Lower
/// dimensional cones get `±` pairs spanning the orthogonal complement.
pub fn v_to_h(dim: usize, generators: &[QVector]) -> Vec<QVector> {
    h_to_v(dim, generators)
}

fn canonicalize(mut vs: Vec<QVector>) -> Vec<QVector> {
    vs.retain(|v| !v.is_zero());
    let mut vs: Vec<QVector> = vs.iter().map(QVector::primitive).collect();
    vs.sort();
    vs.dedup();
    vs
}

/// Reduced echelon basis of a subspace, each row scaled to primitive.
fn subspace_basis(spanning: Vec<QVector>, dim: usize) -> Vec<QVector> {
    if spanning.is_empty() {
        return Vec::new();
    }
    let m = QMatrix::from_rows(spanning, dim).expect("uniform vectors");
    let rref = m.rref();
    rref.matrix.rows()[..rref.pivots.len()]
        .iter()
        .map(QVector::primitive)
        .collect()
}

struct Ray {
    v: QVector,
    tight: Vec<bool>,
}

/// Double description inside the row space `R` of the normals, where the
/// cone is pointed. Starts from the simplicial cone of a maximal independent
/// subset of the normals and inserts the remaining constraints one at a time.
fn pointed_rays(dim: usize, normals: &[QVector]) -> Vec<QVector> {
    let m = normals.len();
    let mut basis_idx: Vec<usize> = Vec::new();
    for (i, w) in normals.iter().enumerate() {
        let mut trial: Vec<QVector> = basis_idx.iter().map(|&j| normals[j].clone()).collect();
        trial.push(w.clone());
        if QMatrix::from_rows(trial, dim).unwrap().rank() > basis_idx.len() {
            basis_idx.push(i);
        }
    }
    let r = basis_idx.len();
    if r == 0 {
        return Vec::new();
    }
    let wb = QMatrix::from_rows(basis_idx.iter().map(|&j| normals[j].clone()).collect(), dim)
        .unwrap();
    let gram_inv = (&wb * &wb.transpose())
        .inverse()
        .expect("independent rows have an invertible Gram matrix");
    let dual = &wb.transpose() * &gram_inv;

    let mut processed = vec![false; m];
    for &j in &basis_idx {
        processed[j] = true;
    }
    let mut rays: Vec<Ray> = (0..r)
        .map(|k| {
            let mut tight = vec![false; m];
            for (l, &j) in basis_idx.iter().enumerate() {
                tight[j] = l != k;
            }
            Ray {
                v: dual.column(k).primitive(),
                tight,
            }
        })
        .collect();

    let tight_rank = |mask: &[bool]| -> usize {
        let rows: Vec<QVector> = (0..m).filter(|&k| mask[k]).map(|k| normals[k].clone()).collect();
        if rows.is_empty() {
            0
        } else {
            QMatrix::from_rows(rows, dim).unwrap().rank()
        }
    };

    for i in 0..m {
        if processed[i] {
            continue;
        }
        let w = &normals[i];
        let vals: Vec<Rational> = rays.iter().map(|ray| ray.v.dot(w)).collect();
        if vals.iter().all(|x| !x.is_negative()) {
            for (ray, val) in rays.iter_mut().zip(&vals) {
                ray.tight[i] = val.is_zero();
            }
            processed[i] = true;
            continue;
        }
        let mut next = Vec::new();
        for (ray, val) in rays.iter().zip(&vals) {
            if !val.is_negative() {
                let mut tight = ray.tight.clone();
                tight[i] = val.is_zero();
                next.push(Ray {
                    v: ray.v.clone(),
                    tight,
                });
            }
        }
        if r >= 2 {
            for (p, vp) in rays.iter().zip(&vals).filter(|(_, v)| v.is_positive()) {
                for (q, vq) in rays.iter().zip(&vals).filter(|(_, v)| v.is_negative()) {
                    let common: Vec<bool> = (0..m)
                        .map(|k| processed[k] && p.tight[k] && q.tight[k])
                        .collect();
                    if tight_rank(&common) != r - 2 {
                        continue;
                    }
                    let v = &q.v.scale(vp) - &p.v.scale(vq);
                    let mut tight = common;
                    tight[i] = true;
                    next.push(Ray {
                        v: v.primitive(),
                        tight,
                    });
                }
            }
        }
        rays = next;
        processed[i] = true;
    }
    rays.into_iter().map(|ray| ray.v).collect()
}

/// A polyhedral cone in `R^dim`.
///
/// The generators are kept as supplied; the canonical halfspace and minimal
/// generator descriptions are computed on first use and cached.
#[derive(Clone, Debug)]
pub struct Cone {
    dim: usize,
    generators: Vec<QVector>,
    halfspaces: OnceLock<Vec<QVector>>,
    extreme: OnceLock<Vec<QVector>>,
}

impl Cone {
    pub fn from_generators(dim: usize, generators: Vec<QVector>) -> Result<Self> {
        check_dims(dim, &generators)?;
        Ok(Cone {
            dim,
            generators,
            halfspaces: OnceLock::new(),
            extreme: OnceLock::new(),
        })
    }

    pub fn from_halfspaces(dim: usize, normals: Vec<QVector>) -> Result<Self> {
        check_dims(dim, &normals)?;
        let generators = h_to_v(dim, &normals);
        let extreme = OnceLock::new();
        let _ = extreme.set(generators.clone());
        Ok(Cone {
            dim,
            generators,
            halfspaces: OnceLock::new(),
            extreme,
        })
    }

    pub fn zero(dim: usize) -> Self {
        Cone::from_generators(dim, Vec::new()).unwrap()
    }

    pub fn full(dim: usize) -> Self {
        Cone::from_halfspaces(dim, Vec::new()).unwrap()
    }

    /// The nonnegative orthant.
    pub fn orthant(dim: usize) -> Self {
        Cone::from_generators(dim, (0..dim).map(|i| QVector::unit(dim, i)).collect()).unwrap()
    }

    pub fn dim_ambient(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[QVector] {
        &self.generators
    }

    /// Canonical H-representation.
    pub fn halfspaces(&self) -> &[QVector] {
        self.halfspaces
            .get_or_init(|| v_to_h(self.dim, &self.generators))
    }

    /// Canonical minimal generating set.
    pub fn extreme_generators(&self) -> &[QVector] {
        self.extreme
            .get_or_init(|| h_to_v(self.dim, self.halfspaces()))
    }

    pub fn contains(&self, v: &QVector) -> bool {
        assert_eq!(v.dim(), self.dim, "membership test of the wrong dimension");
        self.halfspaces().iter().all(|w| !v.dot(w).is_negative())
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let normals = self
            .halfspaces()
            .iter()
            .chain(other.halfspaces())
            .cloned()
            .collect();
        Cone::from_halfspaces(self.dim, normals)
    }

    /// Dimension of the linear span.
    pub fn cone_dim(&self) -> usize {
        if self.generators.is_empty() {
            return 0;
        }
        QMatrix::from_rows(self.generators.clone(), self.dim)
            .unwrap()
            .rank()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.iter().all(QVector::is_zero)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.cone_dim() == self.dim
    }

    /// Dimension of the largest linear subspace inside the cone.
    pub fn lineality_dim(&self) -> usize {
        let h = self.halfspaces();
        if h.is_empty() {
            return self.dim;
        }
        self.dim - QMatrix::from_rows(h.to_vec(), self.dim).unwrap().rank()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality_dim() == 0
    }

    /// `{ v' : B v' ∈ C }` for an `N x n` matrix `B` of full column rank.
    pub fn pullback(&self, b: &QMatrix) -> Result<Cone> {
        if b.nrows() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: b.nrows(),
            });
        }
        let rank = b.rank();
        if rank < b.ncols() {
            return Err(Error::RankDeficient {
                rank,
                cols: b.ncols(),
            });
        }
        let bt = b.transpose();
        let normals = self.halfspaces().iter().map(|w| bt.mul_vec(w)).collect();
        Cone::from_halfspaces(b.ncols(), normals)
    }

    /// Set equality, by mutual containment of minimal generators.
    pub fn same_set(&self, other: &Cone) -> bool {
        self.dim == other.dim
            && self.extreme_generators().iter().all(|g| other.contains(g))
            && other.extreme_generators().iter().all(|g| self.contains(g))
    }

    /// A point in the relative interior: the sum of the minimal generators.
    pub fn relative_interior_point(&self) -> QVector {
        self.extreme_generators()
            .iter()
            .fold(QVector::zeros(self.dim), |acc, g| &acc + g)
    }
}

fn check_dims(dim: usize, vs: &[QVector]) -> Result<()> {
    if dim == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    match vs.iter().find(|v| v.dim() != dim) {
        Some(v) => Err(Error::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        }),
        None => Ok(()),
    }
}

#[derive(Serialize, Deserialize)]
struct ConeRepr {
    dim: usize,
    generators: Vec<QVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    halfspaces: Option<Vec<QVector>>,
}

impl Serialize for Cone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConeRepr {
            dim: self.dim,
            generators: self.generators.clone(),
            halfspaces: Some(self.halfspaces().to_vec()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ConeRepr::deserialize(d)?;
        let cone = Cone::from_generators(repr.dim, repr.generators).map_err(D::Error::custom)?;
        if let Some(h) = repr.halfspaces {
            let other = Cone::from_halfspaces(repr.dim, h).map_err(D::Error::custom)?;
            if !cone.same_set(&other) {
                return Err(D::Error::custom(Error::InconsistentCone));
            }
        }
        Ok(cone)
    }
}

/// Helper for writing small integer vector lists in tests and fixtures.
pub fn int_vectors(rows: &[&[i64]]) -> Vec<QVector> {
    rows.iter().map(|r| QVector::from_ints(r)).collect()
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.same_set(other)
    }
}
