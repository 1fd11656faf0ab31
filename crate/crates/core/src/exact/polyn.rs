//! Scalar polynomials in the integer index `n`, used for symbolic eigenvalues.

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{int, Rational, RationalStr};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyN {
    coeffs: Vec<Rational>,
}

impl PolyN {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        PolyN { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        PolyN { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `n + a`.
    pub fn linear(a: i64) -> Self {
        Self::from_ints(&[a, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, n: i64) -> Rational {
        let x = int(n);
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * &x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Self::new(
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    /// Product of several factors.
    pub fn product<'a>(factors: impl IntoIterator<Item = &'a PolyN>) -> Self {
        factors
            .into_iter()
            .fold(Self::constant(int(1)), |acc, f| acc.mul(f))
    }
}

impl Serialize for PolyN {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<RationalStr> = self.coeffs.iter().cloned().map(RationalStr).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyN {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<RationalStr> = Vec::deserialize(d)?;
        Ok(PolyN::new(v.into_iter().map(|r| r.0).collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    #[test]
    fn eval_and_arith() {
        // (n + 2)(5n^3 + 20n^2 + 3n - 44) / 5 at n = 0 is -88/5
        let p = PolyN::linear(2)
            .mul(&PolyN::from_ints(&[-44, 3, 20, 5]))
            .scale(&rat(1, 5));
        assert_eq!(p.eval(0), rat(-88, 5));
        assert_eq!(p.degree(), Some(4));
        assert_eq!(PolyN::from_ints(&[1, 0, 0]).degree(), Some(0));
        assert!(PolyN::from_ints(&[0]).is_zero());
        let sum = p.add(&p.scale(&int(-1)));
        assert!(sum.is_zero());
        let q = PolyN::product([&PolyN::linear(-3), &PolyN::linear(6)]);
        assert_eq!(q, PolyN::from_ints(&[-18, 3, 1]));
    }
}
