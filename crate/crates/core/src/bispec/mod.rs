//! Right-acting matrix differential operators and the bispectral equation
//! `P_n D = Lambda_n P_n`.
//!
//! An operator `D = sum_i d^i F_i(x)` acts on a matrix polynomial from the
//! right, `P D = sum_i (d^i P)(x) F_i(x)`, while the eigenvalue `Lambda_n`
//! multiplies from the left.

mod search;

pub use search::{
    algebra_search, eigen_coordinates, operator_coordinates, span_coefficients, AlgebraSearch, SearchConfig, Shrink,
};

use serde::{Deserialize, Serialize};

use crate::blockop::BlockTridiag;
use crate::error::{Error, Result};
use crate::exact::rational::factorial;
use crate::exact::{MatPoly, MatrixR, PolyN, Rational};
use crate::mop::{polys_from_recurrence, MopFamily};

/// `D = sum_{i=0}^{s} d^i F_i(x)` with `deg F_i <= i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RightDiffOpRepr", into = "RightDiffOpRepr")]
pub struct RightDiffOp {
    block_size: usize,
    coeffs: Vec<MatPoly>,
}

#[derive(Serialize, Deserialize)]
struct RightDiffOpRepr {
    block_size: usize,
    coeffs: Vec<MatPoly>,
}

impl TryFrom<RightDiffOpRepr> for RightDiffOp {
    type Error = Error;
    fn try_from(r: RightDiffOpRepr) -> Result<Self> {
        RightDiffOp::new(r.block_size, r.coeffs)
    }
}

impl From<RightDiffOp> for RightDiffOpRepr {
    fn from(d: RightDiffOp) -> Self {
        let coeffs = if d.coeffs.is_empty() {
            vec![MatPoly::zero(d.block_size)]
        } else {
            d.coeffs
        };
        RightDiffOpRepr {
            block_size: d.block_size,
            coeffs,
        }
    }
}

impl RightDiffOp {
    /// `coeffs[i]` is `F_i`.
    pub fn new(block_size: usize, mut coeffs: Vec<MatPoly>) -> Result<Self> {
        for (i, f) in coeffs.iter().enumerate() {
            if f.size() != block_size {
                return Err(Error::SizeMismatch(format!(
                    "F_{i} has block size {}, operator has {block_size}",
                    f.size()
                )));
            }
            if f.degree().is_some_and(|d| d > i) {
                return Err(Error::Structure(format!(
                    "F_{i} has degree {} > {i}; P_n D would exceed degree n",
                    f.degree().unwrap_or(0)
                )));
            }
        }
        while coeffs.last().is_some_and(MatPoly::is_zero) {
            coeffs.pop();
        }
        Ok(RightDiffOp { block_size, coeffs })
    }

    pub fn zero(block_size: usize) -> Self {
        RightDiffOp {
            block_size,
            coeffs: Vec::new(),
        }
    }

    pub fn identity(block_size: usize) -> Self {
        Self::constant(MatrixR::identity(block_size))
    }

    /// The order-zero operator `F_0 = c`.
    pub fn constant(c: MatrixR) -> Self {
        let n = c.n_rows();
        let f0 = MatPoly::constant(c);
        RightDiffOp::new(n, vec![f0]).expect("constant operator")
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    /// Largest `i` with `F_i != 0`; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[MatPoly] {
        &self.coeffs
    }

    /// `F_i`, zero beyond the order.
    pub fn coeff(&self, i: usize) -> MatPoly {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| MatPoly::zero(self.block_size))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.block_size != other.block_size {
            return Err(Error::SizeMismatch("operators of different block sizes".into()));
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| self.coeff(i).add(&other.coeff(i)))
            .collect::<Result<Vec<_>>>()?;
        RightDiffOp::new(self.block_size, coeffs)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let coeffs = self.coeffs.iter().map(|f| f.scale(c)).collect();
        RightDiffOp::new(self.block_size, coeffs).expect("scaling keeps degrees")
    }
}

/// Eigenvalue sequence `Lambda_n`, either listed or as a grid of polynomials
/// in `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EigenSeq {
    Explicit(Vec<MatrixR>),
    PolyInN(Vec<Vec<PolyN>>),
}

#[derive(Serialize, Deserialize)]
struct EigenSeqRepr {
    #[serde(skip_serializing_if = "Option::is_none")]
    explicit: Option<Vec<MatrixR>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    poly_in_n: Option<Vec<Vec<PolyN>>>,
}

impl Serialize for EigenSeq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            EigenSeq::Explicit(v) => EigenSeqRepr {
                explicit: Some(v.clone()),
                poly_in_n: None,
            },
            EigenSeq::PolyInN(g) => EigenSeqRepr {
                explicit: None,
                poly_in_n: Some(g.clone()),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EigenSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = EigenSeqRepr::deserialize(d)?;
        match (repr.explicit, repr.poly_in_n) {
            (Some(v), None) => EigenSeq::explicit(v).map_err(D::Error::custom),
            (None, Some(g)) => EigenSeq::poly_in_n(g).map_err(D::Error::custom),
            _ => Err(D::Error::custom("eigen sequence needs exactly one of \"explicit\" or \"poly_in_n\"")),
        }
    }
}

impl EigenSeq {
    pub fn explicit(values: Vec<MatrixR>) -> Result<Self> {
        let n = values.first().map(MatrixR::n_rows).unwrap_or(0);
        if values.iter().any(|m| m.n_rows() != n || m.n_cols() != n) {
            return Err(Error::SizeMismatch("eigenvalue blocks must be square and of equal size".into()));
        }
        Ok(EigenSeq::Explicit(values))
    }

    pub fn poly_in_n(grid: Vec<Vec<PolyN>>) -> Result<Self> {
        let n = grid.len();
        if n == 0 || grid.iter().any(|r| r.len() != n) {
            return Err(Error::Structure("symbolic eigenvalue grid must be square".into()));
        }
        Ok(EigenSeq::PolyInN(grid))
    }

    pub fn block_size(&self) -> usize {
        match self {
            EigenSeq::Explicit(v) => v.first().map_or(0, MatrixR::n_rows),
            EigenSeq::PolyInN(g) => g.len(),
        }
    }

    /// Number of available terms; `None` when symbolic.
    pub fn len(&self) -> Option<usize> {
        match self {
            EigenSeq::Explicit(v) => Some(v.len()),
            EigenSeq::PolyInN(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn at(&self, n: usize) -> Result<MatrixR> {
        match self {
            EigenSeq::Explicit(v) => v.get(n).cloned().ok_or(Error::InsufficientLevels {
                needed: n + 1,
                available: v.len(),
            }),
            EigenSeq::PolyInN(g) => {
                let size = g.len();
                Ok(MatrixR::from_fn(size, size, |i, j| g[i][j].eval(n as i64)))
            }
        }
    }

    /// `Lambda_0..Lambda_{count-1}`.
    pub fn values(&self, count: usize) -> Result<Vec<MatrixR>> {
        (0..count).map(|n| self.at(n)).collect()
    }
}

/// `p D = sum_i (d^i p) F_i`.
pub fn apply_right_op(p: &MatPoly, d: &RightDiffOp) -> Result<MatPoly> {
    if p.size() != d.block_size {
        return Err(Error::SizeMismatch(format!(
            "polynomial of block size {} and operator of block size {}",
            p.size(),
            d.block_size
        )));
    }
    let mut acc = MatPoly::zero(p.size());
    for (i, f) in d.coeffs.iter().enumerate() {
        if f.is_zero() {
            continue;
        }
        let dp = p.derivative(i);
        if dp.is_zero() {
            break;
        }
        acc = acc.add(&dp.mul(f)?)?;
    }
    Ok(acc)
}

/// Coefficients `C_0..C_n` of `q = sum_k C_k P_k` for `q` of degree at most
/// `n`, peeling off the leading coefficient against the monic `P_k`.
pub(crate) fn expand_in_basis(q: &MatPoly, fam: &MopFamily, n: usize) -> Vec<MatrixR> {
    let size = q.size();
    let mut rest: Vec<MatrixR> = (0..=n).map(|d| q.coeff(d)).collect();
    let mut out = vec![MatrixR::zeros(size, size); n + 1];
    for k in (0..=n).rev() {
        let c = rest[k].clone();
        if c.is_zero() {
            continue;
        }
        for (d, pc) in fam.get(k).coeffs().iter().enumerate().take(k) {
            if !pc.is_zero() {
                rest[d] = &rest[d] - &(&c * pc);
            }
        }
        out[k] = c;
    }
    out
}

/// Residual of `P_n D = Lambda_n P_n` for `Lambda_n` the degree-`n`
/// coefficient of `P_n D`: the components of `P_n D` along `P_0..P_{n-1}`
/// followed by any coefficients above degree `n`.
pub(crate) fn bispectral_defect(pd: &MatPoly, fam: &MopFamily, n: usize) -> (MatrixR, Vec<MatrixR>) {
    let mut comps = expand_in_basis(pd, fam, n);
    let lambda = comps.pop().expect("n + 1 components");
    if let Some(deg) = pd.degree() {
        for d in (n + 1)..=deg {
            comps.push(pd.coeff(d));
        }
    }
    (lambda, comps)
}

/// Reads off `Lambda_n` from `P_n D` for `n < count`, failing if some
/// `P_n D` is not a left multiple of `P_n`.
pub fn eigen_from_op(l: &BlockTridiag, d: &RightDiffOp, count: usize) -> Result<EigenSeq> {
    let fam = polys_from_recurrence(l, count)?;
    let mut values = Vec::with_capacity(count);
    for n in 0..count {
        let pd = apply_right_op(fam.get(n), d)?;
        let (lambda, _) = bispectral_defect(&pd, &fam, n);
        let residual = pd.sub(&fam.get(n).left_mul(&lambda))?;
        if let Some((degree, row, col, v)) = residual.first_nonzero() {
            return Err(Error::NotBispectral {
                n,
                degree,
                row,
                col,
                residual: v.to_string(),
            });
        }
        values.push(lambda);
    }
    EigenSeq::explicit(values)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualEntry {
    pub n: usize,
    pub degree: usize,
    pub row: usize,
    pub col: usize,
    /// Coefficient of `P_n D - Lambda_n P_n` at this position.
    pub residual: Rational,
    /// The same coefficient of `P_n D`.
    pub lhs: Rational,
    /// The same coefficient of `Lambda_n P_n`.
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BispectralReport {
    pub pass: bool,
    pub checked: usize,
    pub failures: Vec<ResidualEntry>,
}

/// Checks `P_n D = Lambda_n P_n` exactly for `n < count`.
pub fn verify_bispectral(l: &BlockTridiag, d: &RightDiffOp, lam: &EigenSeq, count: usize) -> Result<BispectralReport> {
    if lam.block_size() != l.block_size() {
        return Err(Error::SizeMismatch("eigenvalues and operator have different block sizes".into()));
    }
    let fam = polys_from_recurrence(l, count)?;
    let mut failures = Vec::new();
    for n in 0..count {
        let p = fam.get(n);
        let lhs = apply_right_op(p, d)?;
        let rhs = p.left_mul(&lam.at(n)?);
        let residual = lhs.sub(&rhs)?;
        if let Some((degree, row, col, v)) = residual.first_nonzero() {
            failures.push(ResidualEntry {
                n,
                degree,
                row,
                col,
                residual: v,
                lhs: lhs.coeff(degree).get(row, col).clone(),
                rhs: rhs.coeff(degree).get(row, col).clone(),
            });
        }
    }
    Ok(BispectralReport {
        pass: failures.is_empty(),
        checked: count,
        failures,
    })
}

/// Builds `D = sum_{r=0}^{m} d^r S_{m-r} / r!` with
/// `S_k = ((L - x I)^{m-k} Lambda P)_0`, the block entry 0 of the vector
/// obtained by applying `L - x I` to `(Lambda_n P_n)_n` `m - k` times.
pub fn construct_operator(l: &BlockTridiag, lam: &EigenSeq, m: usize) -> Result<RightDiffOp> {
    if l.levels() < m + 2 {
        return Err(Error::WindowExhausted {
            levels: l.levels(),
            needed: m + 2,
        });
    }
    if lam.block_size() != l.block_size() {
        return Err(Error::SizeMismatch("eigenvalues and operator have different block sizes".into()));
    }
    let n = l.block_size();
    let fam = polys_from_recurrence(l, m + 1)?;
    let mut v: Vec<MatPoly> = (0..=m)
        .map(|k| Ok(fam.get(k).left_mul(&lam.at(k)?)))
        .collect::<Result<_>>()?;
    // s[j] = ((L - x)^j Lambda P)_0, so S_k = s[m - k].
    let mut s = vec![v[0].clone()];
    for _ in 0..m {
        let len = v.len() - 1;
        let mut next = Vec::with_capacity(len);
        for k in 0..len {
            let mut w = v[k].left_mul(l.b(k)).add(&v[k + 1])?.sub(&v[k].shift(1))?;
            if k >= 1 {
                w = w.add(&v[k - 1].left_mul(l.a(k)))?;
            }
            next.push(w);
        }
        v = next;
        s.push(v[0].clone());
    }
    let coeffs = (0..=m)
        .map(|r| s[r].scale(&factorial(r as u32).recip()))
        .collect();
    RightDiffOp::new(n, coeffs)
}
