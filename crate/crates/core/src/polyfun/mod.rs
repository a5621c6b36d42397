//! Piecewise linear functions `f(v) = max_j f_{C_j, y_j}(v)` where
//! `f_{C,y}(v)` is `<v, y>` on the cone `C` and `0` elsewhere.

mod symmetry;
mod validate;

use std::cmp::Ordering;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cones::Cone;
use crate::ratcore::{format_rational, rational_to_f64, sqrt_upper_bound, QMatrix, QVector, Rational};
use crate::{Error, Result};

pub use symmetry::HyperplaneSet;
pub use validate::{
    CompatibilityViolation, Condition, CoverViolation, PositivityViolation, ValidationReport,
};

/// A cone together with the linear form used on it.
#[derive(Clone, Debug)]
pub struct Piece {
    cone: Cone,
    form: QVector,
}

impl Piece {
    pub fn new(cone: Cone, form: QVector) -> Result<Self> {
        if form.dim() != cone.dim_ambient() {
            return Err(Error::DimensionMismatch {
                expected: cone.dim_ambient(),
                found: form.dim(),
            });
        }
        if cone.is_zero() {
            return Err(Error::ZeroConePiece);
        }
        Ok(Piece { cone, form })
    }

    pub fn from_generators(generators: Vec<QVector>, form: QVector) -> Result<Self> {
        let dim = form.dim();
        Piece::new(Cone::from_generators(dim, generators)?, form)
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn form(&self) -> &QVector {
        &self.form
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.cone.is_full_dimensional()
    }
}

/// A candidate polyhedral function. Validity is checked on demand by
/// [`PolyFun::validate`] and the report is cached.
#[derive(Clone, Debug)]
pub struct PolyFun {
    dim: usize,
    pieces: Vec<Piece>,
    validation: OnceLock<ValidationReport>,
}

impl PolyFun {
    pub fn new(dim: usize, pieces: Vec<Piece>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidPolyFun("dimension must be positive".into()));
        }
        if let Some(p) = pieces.iter().find(|p| p.form.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.form.dim(),
            });
        }
        Ok(PolyFun {
            dim,
            pieces,
            validation: OnceLock::new(),
        })
    }

    /// Builds from `(generators, form)` pairs.
    pub fn from_data(dim: usize, data: Vec<(Vec<QVector>, QVector)>) -> Result<Self> {
        let pieces = data
            .into_iter()
            .map(|(g, y)| Piece::new(Cone::from_generators(dim, g)?, y))
            .collect::<Result<Vec<_>>>()?;
        PolyFun::new(dim, pieces)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn full_dimensional_pieces(&self) -> impl Iterator<Item = &Piece> {
        self.pieces.iter().filter(|p| p.is_full_dimensional())
    }

    pub fn validate(&self) -> &ValidationReport {
        self.validation
            .get_or_init(|| validate::validate(self.dim, &self.pieces))
    }

    pub fn is_valid(&self) -> bool {
        self.validate().valid
    }

    pub fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.valid {
            Ok(())
        } else {
            Err(Error::InvalidPolyFun(report.summary()))
        }
    }

    pub fn eval(&self, v: &QVector) -> Rational {
        assert_eq!(v.dim(), self.dim, "evaluation point of the wrong dimension");
        self.pieces
            .iter()
            .filter(|p| p.cone.contains(v))
            .map(|p| v.dot(&p.form))
            .fold(Rational::zero(), |a, b| if b > a { b } else { a })
    }

    /// `g(v') = f(B v')` for an `N x n` matrix `B` of full column rank.
    pub fn restrict(&self, b: &QMatrix) -> Result<PolyFun> {
        let bt = b.transpose();
        let mut pieces: Vec<Piece> = Vec::new();
        for p in &self.pieces {
            let cone = p.cone.pullback(b)?;
            if cone.is_zero() {
                continue;
            }
            let form = bt.mul_vec(&p.form);
            if pieces
                .iter()
                .any(|q| q.form == form && q.cone.same_set(&cone))
            {
                continue;
            }
            pieces.push(Piece { cone, form });
        }
        let g = PolyFun::new(b.ncols(), pieces)?;
        g.require_valid()?;
        Ok(g)
    }

    pub fn invariant_hyperplanes(&self) -> Result<HyperplaneSet> {
        symmetry::invariant_hyperplanes(self)
    }

    /// Exact decision of `f(Av) = f(v)` for all `v`.
    pub fn is_invariant(&self, a: &QMatrix) -> Result<bool> {
        symmetry::is_invariant(self, a)
    }

    /// All `A` in `GL_n(Q)` with `f ∘ A = f`, sorted.
    pub fn symmetry_group(&self) -> Result<Vec<QMatrix>> {
        symmetry::symmetry_group(self)
    }

    /// `ζ² = max_j ‖y_j‖²`.
    pub fn zeta_sq(&self) -> Rational {
        self.pieces
            .iter()
            .map(|p| p.form.norm_sq())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// A rational upper bound for `ζ` on the grid `1/denom`.
    pub fn zeta_upper_bound(&self, denom: u64) -> Rational {
        sqrt_upper_bound(&self.zeta_sq(), denom)
    }

    /// Vertices of the polygon `f⁻¹(c)` in the plane, counterclockwise
    /// starting from the positive x-axis.
    pub fn level_set_polyline(&self, c: &Rational) -> Result<Vec<QVector>> {
        if self.dim != 2 {
            return Err(Error::NotPlanar(self.dim));
        }
        if !c.is_positive() {
            return Err(Error::NonPositiveLevel);
        }
        self.require_valid()?;
        let mut vertices: Vec<QVector> = Vec::new();
        for p in self.full_dimensional_pieces() {
            for z in p.cone.extreme_generators() {
                let v = z.scale(&(c / z.dot(&p.form)));
                if !vertices.contains(&v) {
                    vertices.push(v);
                }
            }
        }
        vertices.sort_by(angle_cmp);
        Ok(vertices)
    }
}

fn half(v: &QVector) -> u8 {
    let (x, y) = (&v[0], &v[1]);
    if y.is_positive() || (y.is_zero() && x.is_positive()) {
        0
    } else {
        1
    }
}

/// Orders nonzero plane vectors by angle in `[0, 2π)`.
pub fn angle_cmp(a: &QVector, b: &QVector) -> Ordering {
    half(a).cmp(&half(b)).then_with(|| {
        let cross = &a[0] * &b[1] - &a[1] * &b[0];
        Rational::zero().cmp(&cross)
    })
}

/// CSV lines `x,y,x_decimal,y_decimal` for a list of plane points.
pub fn polyline_csv(points: &[QVector]) -> String {
    let mut out = String::from("x,y,x_decimal,y_decimal\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_rational(&p[0]),
            format_rational(&p[1]),
            rational_to_f64(&p[0]),
            rational_to_f64(&p[1])
        ));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct PieceRepr {
    generators: Vec<QVector>,
    y: QVector,
}

#[derive(Serialize, Deserialize)]
struct PolyFunRepr {
    dim: usize,
    pieces: Vec<PieceRepr>,
}

impl Serialize for PolyFun {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyFunRepr {
            dim: self.dim,
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceRepr {
                    generators: p.cone.generators().to_vec(),
                    y: p.form.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyFun {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PolyFunRepr::deserialize(d)?;
        PolyFun::from_data(
            repr.dim,
            repr.pieces.into_iter().map(|p| (p.generators, p.y)).collect(),
        )
        .map_err(D::Error::custom)
    }
}
