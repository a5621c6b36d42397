//! Exact arithmetic substrate: rationals, vectors, matrices, integer lattices
//! in Hermite normal form, and univariate polynomials over `Q`.

mod lattice;
mod linalg;
mod poly;
mod scalar;

pub use lattice::{hnf, Lattice, LatticeIndex};
pub use linalg::{QMatrix, QVector};
pub use poly::{
    count_unit_circle_roots, cyclotomic, cyclotomic_index, euler_phi, minimal_polynomial,
    CircleRoots, QPolynomial,
};
pub use scalar::{
    ceil_isqrt, format_rational, parse_rational, rat, rational_to_f64, serde_rational,
    serde_rational_vec, sqrt_upper_bound, Rational,
};
