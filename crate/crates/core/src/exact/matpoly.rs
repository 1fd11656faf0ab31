//! Polynomials in `x` with square rational matrix coefficients.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::MatrixR;
use super::rational::{int, Rational};
use crate::error::{Error, Result};

/// `sum_d coeffs[d] x^d` with `N x N` coefficients. The coefficient list is
/// trimmed so the last entry is nonzero; the zero polynomial has none.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatPoly {
    size: usize,
    coeffs: Vec<MatrixR>,
}

impl MatPoly {
    pub fn new(size: usize, coeffs: Vec<MatrixR>) -> Result<Self> {
        if size == 0 {
            return Err(Error::Structure("block size must be positive".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| c.n_rows() != size || c.n_cols() != size) {
            return Err(Error::SizeMismatch(format!(
                "{}x{} coefficient in a polynomial of block size {size}",
                c.n_rows(),
                c.n_cols()
            )));
        }
        let mut p = MatPoly { size, coeffs };
        p.trim();
        Ok(p)
    }

    /// Builds from coefficients that are known to be `size x size`.
    pub(crate) fn from_coeffs_unchecked(size: usize, coeffs: Vec<MatrixR>) -> Self {
        let mut p = MatPoly { size, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(MatrixR::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn zero(size: usize) -> Self {
        MatPoly { size, coeffs: Vec::new() }
    }

    pub fn identity(size: usize) -> Self {
        Self::constant(MatrixR::identity(size))
    }

    pub fn constant(c: MatrixR) -> Self {
        Self::monomial(c, 0)
    }

    /// `c x^degree`.
    pub fn monomial(c: MatrixR, degree: usize) -> Self {
        let size = c.n_rows();
        let mut coeffs = vec![MatrixR::zeros(size, size); degree];
        coeffs.push(c);
        Self::from_coeffs_unchecked(size, coeffs)
    }

    /// `x I`.
    pub fn x(size: usize) -> Self {
        Self::monomial(MatrixR::identity(size), 1)
    }

    /// Scalar polynomial (coefficients low to high) times the matrix `m`.
    pub fn scalar_times(coeffs: &[Rational], m: &MatrixR) -> Self {
        Self::from_coeffs_unchecked(m.n_rows(), coeffs.iter().map(|c| m.scale(c)).collect())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[MatrixR] {
        &self.coeffs
    }

    /// Coefficient of `x^d`, zero beyond the degree.
    pub fn coeff(&self, d: usize) -> MatrixR {
        self.coeffs
            .get(d)
            .cloned()
            .unwrap_or_else(|| MatrixR::zeros(self.size, self.size))
    }

    pub fn leading(&self) -> Option<&MatrixR> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(MatrixR::is_identity)
    }

    fn check_size(&self, other: &Self, op: &str) -> Result<()> {
        if self.size != other.size {
            return Err(Error::SizeMismatch(format!(
                "{op} of block sizes {} and {}",
                self.size, other.size
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_size(other, "sum")?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|d| match (self.coeffs.get(d), other.coeffs.get(d)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Ok(Self::from_coeffs_unchecked(self.size, coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MatPoly {
            size: self.size,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Noncommutative product: `(sum p_i x^i)(sum q_j x^j) = sum p_i q_j x^(i+j)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_size(other, "product")?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.size));
        }
        let mut coeffs =
            vec![MatrixR::zeros(self.size, self.size); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (j, q) in other.coeffs.iter().enumerate() {
                if !q.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(p * q);
                }
            }
        }
        Ok(Self::from_coeffs_unchecked(self.size, coeffs))
    }

    /// `m * self`, the constant acting from the left.
    pub fn left_mul(&self, m: &MatrixR) -> Self {
        Self::from_coeffs_unchecked(self.size, self.coeffs.iter().map(|c| m * c).collect())
    }

    /// `self * m`.
    pub fn right_mul(&self, m: &MatrixR) -> Self {
        Self::from_coeffs_unchecked(self.size, self.coeffs.iter().map(|c| c * m).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs_unchecked(self.size, self.coeffs.iter().map(|m| m.scale(c)).collect())
    }

    /// `x^k * self`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![MatrixR::zeros(self.size, self.size); k];
        coeffs.extend(self.coeffs.iter().cloned());
        MatPoly { size: self.size, coeffs }
    }

    /// `order`-th derivative in `x`.
    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(order)
            .map(|(d, c)| {
                // d (d-1) ... (d-order+1)
                let falling: i64 = ((d - order + 1)..=d).map(|k| k as i64).product();
                c.scale(&int(falling))
            })
            .collect();
        Self::from_coeffs_unchecked(self.size, coeffs)
    }

    pub fn eval(&self, x: &Rational) -> MatrixR {
        let mut acc = MatrixR::zeros(self.size, self.size);
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(x) + c;
        }
        acc
    }

    /// First nonzero entry as `(degree, row, col, value)`, scanning degrees upward.
    pub fn first_nonzero(&self) -> Option<(usize, usize, usize, Rational)> {
        self.coeffs.iter().enumerate().find_map(|(d, c)| {
            c.first_nonzero().map(|(i, j, v)| (d, i, j, v.clone()))
        })
    }
}

pub fn matpoly_mul(p: &MatPoly, q: &MatPoly) -> Result<MatPoly> {
    p.mul(q)
}

pub fn matpoly_derivative(p: &MatPoly, order: usize) -> MatPoly {
    p.derivative(order)
}

impl fmt::Debug for MatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| match d {
                0 => format!("{c:?}"),
                1 => format!("{c:?} x"),
                _ => format!("{c:?} x^{d}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Serialized as an array of coefficient matrices indexed by degree. The
/// zero polynomial is written as a single zero matrix so the block size
/// survives a round trip.
impl Serialize for MatPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_zero() {
            vec![MatrixR::zeros(self.size, self.size)].serialize(s)
        } else {
            self.coeffs.serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for MatPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs: Vec<MatrixR> = Vec::deserialize(d)?;
        let size = coeffs
            .first()
            .map(MatrixR::n_rows)
            .ok_or_else(|| serde::de::Error::custom("matrix polynomial needs at least one coefficient"))?;
        MatPoly::new(size, coeffs).map_err(serde::de::Error::custom)
    }
}
