//! Exact polyhedral geometry on `Q^N`, simply-starred languages over `Z^N`,
//! and commensurator computations for Leary–Minasyan groups `G(A, L)`.
//!
//! Every computation is carried out over arbitrary-precision rationals; there
//! is no floating point in the library apart from the decimal columns of the
//! level-set export.
//!
//! The modules build on one another bottom-up:
//!
//! * [`ratcore`]: rationals, vectors, matrices, integer lattices, polynomials.
//! * [`cones`]: polyhedral cones with generator and halfspace descriptions.
//! * [`polyfun`]: polyhedral functions, their restrictions and symmetry groups.
//! * [`starlang`]: simply-starred languages and the polyhedral function they induce.
//! * [`lmcomm`]: `Comm(Z^n) = GL_n(Q)` and the classification of `G(A, L)`.

pub mod cones;
mod error;
pub mod fixtures;
pub mod lmcomm;
pub mod polyfun;
pub mod ratcore;
pub mod starlang;

pub use error::{Error, Result};
