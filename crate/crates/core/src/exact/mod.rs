//! Exact rational arithmetic, dense linear algebra and matrix polynomials.

pub mod matpoly;
pub mod matrix;
pub mod polyn;
pub mod rational;

pub use matpoly::{matpoly_derivative, matpoly_mul, MatPoly};
pub use matrix::{nullspace_rows, rref, MatrixR};
pub use polyn::PolyN;
pub use rational::{int, parse_rational, rat, Rational};

use crate::error::Result;

pub fn mat_inverse(m: &MatrixR) -> Result<MatrixR> {
    m.inverse()
}

pub fn linsolve(a: &MatrixR, b: &MatrixR) -> Result<MatrixR> {
    a.solve(b)
}

pub fn nullspace_basis(m: &MatrixR) -> Vec<Vec<Rational>> {
    m.nullspace()
}
