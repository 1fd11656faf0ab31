//! Dense rational matrices and exact Gaussian elimination.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, int, Rational, RationalStr};
use crate::error::{Error, Result};

/// Row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixR {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl MatrixR {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Structure("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Structure(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(MatrixR { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixR {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, int(1))
    }

    /// `c` times the `n x n` identity.
    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Structure("ragged matrix rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from integer rows. Panics on ragged input.
    pub fn from_ints<const C: usize>(rows: &[[i64; C]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().map(|&v| int(v))).collect();
        Self::new(rows.len(), C, data).expect("well-formed integer matrix")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatrixR { rows, cols, data }
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MatrixR {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// First nonzero entry in row-major order.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &Rational)> {
        self.data
            .iter()
            .position(|v| !v.is_zero())
            .map(|k| (k / self.cols, k % self.cols, &self.data[k]))
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::SizeMismatch(format!(
                "{op} of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sum")?;
        Ok(MatrixR {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "difference")?;
        Ok(MatrixR {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::SizeMismatch(format!(
                "inverse of non-square {}x{}",
                self.rows, self.cols
            )));
        }
        self.solve(&Self::identity(self.rows))
    }

    /// Solves `self * x = b` exactly. Only invertibility is assumed.
    pub fn solve(&self, b: &Self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::SizeMismatch(format!(
                "solve with non-square {}x{}",
                self.rows, self.cols
            )));
        }
        if b.rows != self.rows {
            return Err(Error::SizeMismatch(format!(
                "right-hand side has {} rows, system has {}",
                b.rows, self.rows
            )));
        }
        let n = self.rows;
        let m = b.cols;
        let mut a: Vec<Vec<Rational>> = self.to_rows();
        let mut x: Vec<Vec<Rational>> = b.to_rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap(col, piv);
            x.swap(col, piv);
            let inv = a[col][col].recip();
            for v in a[col].iter_mut().skip(col) {
                *v *= &inv;
            }
            for v in x[col].iter_mut() {
                *v *= &inv;
            }
            let (pivot_a, pivot_x) = (a[col].clone(), x[col].clone());
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in col..n {
                    if !pivot_a[c].is_zero() {
                        a[r][c] -= &f * &pivot_a[c];
                    }
                }
                for c in 0..m {
                    if !pivot_x[c].is_zero() {
                        x[r][c] -= &f * &pivot_x[c];
                    }
                }
            }
        }
        Self::from_rows(x)
    }

    pub fn rank(&self) -> usize {
        rref(&mut self.to_rows()).len()
    }

    /// Basis of the right null space `{v : self * v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        nullspace_rows(&self.to_rows(), self.cols)
    }
}

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows,
/// and returns the pivot column of each remaining row. Pivots are chosen as
/// the first nonzero entry in the column.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut().skip(col) {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for c in col..ncols {
                if !pivot_row[c].is_zero() {
                    row[c] -= &f * &pivot_row[c];
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Null space of the matrix given by `rows` (each of length `ncols`).
pub fn nullspace_rows(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut a = rows.to_vec();
    let pivots = rref(&mut a);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (row, &p) in a.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

impl<'a> Add<&'a MatrixR> for &'a MatrixR {
    type Output = MatrixR;
    fn add(self, rhs: &MatrixR) -> MatrixR {
        self.try_add(rhs).expect("matrix sum shape")
    }
}

impl<'a> Sub<&'a MatrixR> for &'a MatrixR {
    type Output = MatrixR;
    fn sub(self, rhs: &MatrixR) -> MatrixR {
        self.try_sub(rhs).expect("matrix difference shape")
    }
}

impl<'a> Mul<&'a MatrixR> for &'a MatrixR {
    type Output = MatrixR;
    fn mul(self, rhs: &MatrixR) -> MatrixR {
        self.try_mul(rhs).expect("matrix product shape")
    }
}

impl Neg for &MatrixR {
    type Output = MatrixR;
    fn neg(self) -> MatrixR {
        MatrixR {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }
}

impl fmt::Debug for MatrixR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for MatrixR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for MatrixR {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<RationalStr>> = (0..self.rows)
            .map(|i| self.row(i).iter().cloned().map(RationalStr).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixR {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<RationalStr>> = Vec::deserialize(d)?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.0).collect())
            .collect();
        MatrixR::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;
    use proptest::prelude::*;

    fn s() -> MatrixR {
        MatrixR::from_ints(&[[0, 1], [1, 0]])
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(MatrixR::identity(2).inverse().unwrap(), MatrixR::identity(2));
        let m = MatrixR::from_ints(&[[5, 2], [3, 1]]);
        assert_eq!(m.inverse().unwrap(), MatrixR::from_ints(&[[-1, 2], [3, -5]]));
        let ones = MatrixR::from_ints(&[[1, 1], [1, 1]]);
        assert_eq!(ones.inverse(), Err(Error::SingularMatrix));
        assert!(matches!(
            MatrixR::zeros(2, 3).inverse(),
            Err(Error::SizeMismatch(_))
        ));
    }

    #[test]
    fn solve_examples() {
        let b = MatrixR::from_ints(&[[1, 2], [3, 4]]);
        assert_eq!(MatrixR::identity(2).solve(&b).unwrap(), b);
        let a = s().scale(&rat(4, 15));
        let rhs = MatrixR::scalar(2, rat(4, 15));
        assert_eq!(a.solve(&rhs).unwrap(), s());
        let ones = MatrixR::from_ints(&[[1, 1], [1, 1]]);
        assert_eq!(ones.solve(&b), Err(Error::SingularMatrix));
    }

    #[test]
    fn nullspace_examples() {
        assert_eq!(MatrixR::zeros(2, 2).nullspace().len(), 2);
        assert!(MatrixR::identity(3).nullspace().is_empty());
        let ns = MatrixR::from_ints(&[[1, 1], [1, 1]]).nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(&ns[0][0] + &ns[0][1], Rational::zero());
        assert!(!ns[0][0].is_zero());
    }

    #[test]
    fn serde_rows() {
        let m = MatrixR::from_rows(vec![vec![rat(-88, 5), int(-8)], vec![rat(-32, 5), int(0)]]).unwrap();
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"[["-88/5","-8"],["-32/5","0"]]"#);
        let back: MatrixR = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
        let from_ints: MatrixR = serde_json::from_str("[[1, 2], [3, \"4/6\"]]").unwrap();
        assert_eq!(from_ints.get(1, 1), &rat(2, 3));
        assert!(serde_json::from_str::<MatrixR>("[[1, 2], [3]]").is_err());
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=6).prop_map(|(p, q)| rat(p, q))
    }

    fn square(n: usize) -> impl Strategy<Value = MatrixR> {
        proptest::collection::vec(small_rational(), n * n)
            .prop_map(move |d| MatrixR::new(n, n, d).unwrap())
    }

    fn any_matrix() -> impl Strategy<Value = MatrixR> {
        (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(small_rational(), r * c)
                .prop_map(move |d| MatrixR::new(r, c, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
            if !a.is_zero() {
                prop_assert_eq!(&a * a.recip(), Rational::one());
            }
        }

        #[test]
        fn inverse_roundtrip(m in (1usize..=4).prop_flat_map(square)) {
            if let Ok(inv) = m.inverse() {
                prop_assert!((&inv * &m).is_identity());
                prop_assert!((&m * &inv).is_identity());
            } else {
                prop_assert!(m.rank() < m.n_rows());
            }
        }

        #[test]
        fn nullspace_rank_nullity(m in any_matrix()) {
            let ns = m.nullspace();
            prop_assert_eq!(ns.len() + m.rank(), m.n_cols());
            for v in &ns {
                let col = MatrixR::new(v.len(), 1, v.clone()).unwrap();
                prop_assert!((&m * &col).is_zero());
            }
        }
    }
}
