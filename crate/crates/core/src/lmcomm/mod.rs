//! Commensurators of `Z^n` as rational matrices, and the classification of
//! the groups `G(A, L) = <x_1..x_n, t | [x_i, x_j], t x^v t⁻¹ = x^{Av} (v ∈ L)>`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::polyfun::PolyFun;
use crate::ratcore::{
    count_unit_circle_roots, cyclotomic, euler_phi, minimal_polynomial, serde_rational, CircleRoots,
    Lattice, LatticeIndex, QMatrix, QPolynomial, Rational,
};
use crate::{Error, Result};

/// The class `[ψ_A]` of the partial automorphism `v ↦ Av`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommElement {
    matrix: QMatrix,
}

impl CommElement {
    pub fn new(matrix: QMatrix) -> Result<Self> {
        check_invertible(&matrix)?;
        Ok(CommElement { matrix })
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn compose(&self, other: &CommElement) -> Result<CommElement> {
        if self.matrix.nrows() != other.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                found: other.matrix.nrows(),
            });
        }
        Ok(CommElement {
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn invert(&self) -> CommElement {
        CommElement {
            matrix: self.matrix.inverse().expect("invertible by construction"),
        }
    }

    /// Agreeing with the identity on a finite index subgroup of `Z^n` forces
    /// `A = I`, since such a subgroup spans `Q^n`.
    pub fn centralizes_finite_index(&self) -> bool {
        self.matrix.is_identity()
    }
}

fn check_invertible(a: &QMatrix) -> Result<Rational> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    let det = a.determinant()?;
    if det.is_zero() {
        return Err(Error::Singular);
    }
    Ok(det)
}

fn common_denominator(a: &QMatrix) -> BigInt {
    a.rows()
        .iter()
        .flat_map(|r| r.iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// `Z^n ∩ A⁻¹Z^n` and its index in `Z^n`.
pub fn domain_lattice(a: &QMatrix) -> Result<(Lattice, BigInt)> {
    check_invertible(a)?;
    let n = a.nrows();
    let inv = a.inverse()?;
    let d = common_denominator(&inv);
    // D·A⁻¹Z^n ∩ D·Z^n, then divide by D.
    let image = Lattice::from_scaled(n, &inv.columns(), &d)?;
    let dz = Lattice::from_int_rows(
        n,
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { d.clone() } else { BigInt::zero() }).collect())
            .collect(),
    );
    let lattice = image.intersect(&dz)?.divide_exact(&d);
    let index = finite_index(&lattice)?;
    Ok((lattice, index))
}

fn finite_index(l: &Lattice) -> Result<BigInt> {
    match l.index_in(&Lattice::standard(l.ambient_dim()))? {
        LatticeIndex::Finite(k) => Ok(k),
        LatticeIndex::Infinite => Err(Error::InvalidGroup("lattice does not have full rank".into())),
    }
}

/// Order of a matrix in `GL_n(Q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixOrder {
    Finite(u64),
    Infinite,
}

impl MatrixOrder {
    pub fn is_finite(&self) -> bool {
        matches!(self, MatrixOrder::Finite(_))
    }
}

impl fmt::Display for MatrixOrder {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        match self {
            MatrixOrder::Finite(k) => write!(f, "{k}"),
            MatrixOrder::Infinite => write!(f, "infinite"),
        }
    }
}

impl Serialize for MatrixOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MatrixOrder::Finite(k) => s.serialize_u64(*k),
            MatrixOrder::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Splitting of the minimal polynomial into cyclotomic factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderCertificate {
    pub minimal_polynomial: QPolynomial,
    pub squarefree: bool,
    /// Indices `d` of the factors `Φ_d` divided out, in increasing order.
    pub cyclotomic_factors: Vec<u64>,
    /// What is left after dividing out the cyclotomic factors; constant iff
    /// the order is finite (given squarefreeness).
    pub remainder: QPolynomial,
    pub order: MatrixOrder,
}

fn order_certificate(a: &QMatrix) -> Result<OrderCertificate> {
    check_invertible(a)?;
    let p = minimal_polynomial(a);
    let squarefree = p.is_squarefree();
    let mut rest = p.clone();
    let mut factors = Vec::new();
    let deg = p.degree().unwrap_or(0) as u64;
    // φ(k) >= sqrt(k / 2), so every Φ_k of degree <= deg has k <= 2 deg².
    for k in 1..=2 * deg * deg {
        let rdeg = rest.degree().unwrap_or(0) as u64;
        if rdeg == 0 {
            break;
        }
        if euler_phi(k) > rdeg {
            continue;
        }
        if let Some(q) = rest.exact_div(&cyclotomic(k)) {
            rest = q;
            factors.push(k);
        }
    }
    let order = if squarefree && rest.degree() == Some(0) {
        MatrixOrder::Finite(factors.iter().fold(1u64, |acc, &k| acc.lcm(&k)))
    } else {
        MatrixOrder::Infinite
    };
    Ok(OrderCertificate {
        minimal_polynomial: p,
        squarefree,
        cyclotomic_factors: factors,
        remainder: rest,
        order,
    })
}

/// Finite iff the minimal polynomial is a product of distinct cyclotomic
/// polynomials; the order is then the lcm of their indices.
pub fn matrix_order(a: &QMatrix) -> Result<MatrixOrder> {
    Ok(order_certificate(a)?.order)
}

/// Conjugate in `GL_n(R)` to an orthogonal matrix: diagonalizable over `C`
/// with every eigenvalue of modulus one.
pub fn is_orthogonalizable(a: &QMatrix) -> Result<bool> {
    check_invertible(a)?;
    let p = minimal_polynomial(a);
    Ok(p.is_squarefree() && count_unit_circle_roots(&p).all_on_circle)
}

/// Validated data `(A, L)` with `L ⊆ Z^n ∩ A⁻¹Z^n` of finite index.
#[derive(Clone, Debug)]
pub struct LMGroup {
    a: QMatrix,
    l: Lattice,
}

impl LMGroup {
    pub fn new(a: QMatrix, l: Lattice) -> Result<Self> {
        check_invertible(&a)?;
        let n = a.nrows();
        if l.ambient_dim() != n {
            return Err(Error::InvalidGroup(format!(
                "lattice lives in Z^{} but A is {n}x{n}",
                l.ambient_dim()
            )));
        }
        if !l.is_full_rank() {
            return Err(Error::InvalidGroup("L does not have finite index in Z^n".into()));
        }
        for b in l.basis_vectors() {
            let image = a.mul_vec(&b);
            if !image.is_integral() {
                return Err(Error::InvalidGroup(format!("A maps the basis vector {b} to {image}")));
            }
        }
        Ok(LMGroup { a, l })
    }

    /// Uses the largest admissible lattice `Z^n ∩ A⁻¹Z^n`.
    pub fn with_domain_lattice(a: QMatrix) -> Result<Self> {
        let (l, _) = domain_lattice(&a)?;
        LMGroup::new(a, l)
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.a
    }

    pub fn lattice(&self) -> &Lattice {
        &self.l
    }

    pub fn rank(&self) -> usize {
        self.a.nrows()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificates {
    #[serde(with = "serde_rational")]
    pub determinant: Rational,
    #[serde(flatten)]
    pub order: OrderCertificate,
    pub circle_roots: CircleRoots,
    pub note: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub order: MatrixOrder,
    pub cat0: bool,
    pub biautomatic: bool,
    pub embeddable: bool,
    #[serde(serialize_with = "serialize_bigint")]
    pub l_index: BigInt,
    pub certificates: Certificates,
}

fn serialize_bigint<S: Serializer>(k: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match k.to_u64() {
        Some(v) => s.serialize_u64(v),
        None => s.serialize_str(&k.to_string()),
    }
}

/// `G(A, L)` is CAT(0) iff `A` is orthogonalizable, and biautomatic iff it
/// embeds in a biautomatic group iff `A` has finite order. Neither depends on
/// `L`.
pub fn classify(g: &LMGroup) -> Classification {
    let det = g.a.determinant().expect("square");
    let order = order_certificate(&g.a).expect("validated group");
    let circle_roots = count_unit_circle_roots(&order.minimal_polynomial);
    let cat0 = order.squarefree && circle_roots.all_on_circle;
    let finite = order.order.is_finite();
    assert!(!finite || cat0, "finite order matrices are orthogonalizable");
    let l_index = finite_index(&g.l).expect("validated group");
    Classification {
        order: order.order,
        cat0,
        biautomatic: finite,
        embeddable: finite,
        l_index,
        certificates: Certificates {
            determinant: det,
            order,
            circle_roots,
            note: "classification depends on A only; L is validated and its index reported",
        },
    }
}

/// Symmetries of `f` restricted to the sublattice spanned by the columns of
/// `B`, in `B`-coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct CommImageBound {
    pub group: Vec<QMatrix>,
    pub order: usize,
}

pub fn comm_image_bound(f: &PolyFun, b: &QMatrix) -> Result<CommImageBound> {
    if !b.is_integral() {
        return Err(Error::NotInteger(b.to_string()));
    }
    let group = f.restrict(b)?.symmetry_group()?;
    Ok(CommImageBound {
        order: group.len(),
        group,
    })
}
