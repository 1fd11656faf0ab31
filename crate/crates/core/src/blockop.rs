//! Truncated semi-infinite block tridiagonal operators and the block Darboux
//! process.
//!
//! An operator
//!
//! ```text
//!     | B0  I          |
//! L = | A1  B1  I      |
//!     |     A2  B2  I  |
//!     |         .. ..  |
//! ```
//!
//! is stored through its first `K` diagonal blocks. Factoring `L0 = alpha beta`
//! with `alpha` upper bidiagonal (`alpha_n` on the diagonal, identity above)
//! and `beta` lower bidiagonal (identity on the diagonal, `beta_n` below) and
//! reversing the factors gives the Darboux transform `L = beta alpha`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{MatrixR, Rational};

/// First `K` levels of a block tridiagonal operator with identity
/// superdiagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BlockTridiagRepr", into = "BlockTridiagRepr")]
pub struct BlockTridiag {
    block_size: usize,
    diag: Vec<MatrixR>,
    sub: Vec<MatrixR>,
}

#[derive(Serialize, Deserialize)]
struct BlockTridiagRepr {
    block_size: usize,
    diag: Vec<MatrixR>,
    sub: Vec<MatrixR>,
}

impl TryFrom<BlockTridiagRepr> for BlockTridiag {
    type Error = Error;
    fn try_from(r: BlockTridiagRepr) -> Result<Self> {
        BlockTridiag::new(r.block_size, r.diag, r.sub)
    }
}

impl From<BlockTridiag> for BlockTridiagRepr {
    fn from(b: BlockTridiag) -> Self {
        BlockTridiagRepr {
            block_size: b.block_size,
            diag: b.diag,
            sub: b.sub,
        }
    }
}

fn check_block(m: &MatrixR, n: usize, what: &str) -> Result<()> {
    if m.n_rows() != n || m.n_cols() != n {
        return Err(Error::SizeMismatch(format!(
            "{what} is {}x{}, block size is {n}",
            m.n_rows(),
            m.n_cols()
        )));
    }
    Ok(())
}

impl BlockTridiag {
    /// `diag` holds `B_0..B_{K-1}`, `sub` holds `A_1..A_{K-1}`.
    pub fn new(block_size: usize, diag: Vec<MatrixR>, sub: Vec<MatrixR>) -> Result<Self> {
        if block_size == 0 {
            return Err(Error::Structure("block size must be positive".into()));
        }
        if diag.is_empty() {
            return Err(Error::Structure("operator needs at least one level".into()));
        }
        if sub.len() + 1 != diag.len() {
            return Err(Error::Structure(format!(
                "{} diagonal blocks need {} subdiagonal blocks, got {}",
                diag.len(),
                diag.len() - 1,
                sub.len()
            )));
        }
        for (i, b) in diag.iter().enumerate() {
            check_block(b, block_size, &format!("B_{i}"))?;
        }
        for (i, a) in sub.iter().enumerate() {
            check_block(a, block_size, &format!("A_{}", i + 1))?;
        }
        Ok(BlockTridiag { block_size, diag, sub })
    }

    /// Materializes levels `0..levels` from closed-form block generators.
    pub fn from_fn(
        block_size: usize,
        levels: usize,
        mut b: impl FnMut(usize) -> MatrixR,
        mut a: impl FnMut(usize) -> MatrixR,
    ) -> Result<Self> {
        let diag = (0..levels).map(&mut b).collect();
        let sub = (1..levels).map(&mut a).collect();
        Self::new(block_size, diag, sub)
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn levels(&self) -> usize {
        self.diag.len()
    }

    /// `B_n`.
    pub fn b(&self, n: usize) -> &MatrixR {
        &self.diag[n]
    }

    /// `A_n` for `n >= 1`.
    pub fn a(&self, n: usize) -> &MatrixR {
        assert!(n >= 1, "A_0 does not exist");
        &self.sub[n - 1]
    }

    pub fn diag(&self) -> &[MatrixR] {
        &self.diag
    }

    pub fn sub(&self) -> &[MatrixR] {
        &self.sub
    }

    /// The first `levels` levels.
    pub fn truncate(&self, levels: usize) -> Result<Self> {
        if levels == 0 || levels > self.levels() {
            return Err(Error::InsufficientLevels {
                needed: levels,
                available: self.levels(),
            });
        }
        Ok(BlockTridiag {
            block_size: self.block_size,
            diag: self.diag[..levels].to_vec(),
            sub: self.sub[..levels - 1].to_vec(),
        })
    }

    /// The operator as a banded block matrix, exact on all its levels.
    pub fn to_banded(&self) -> BandedBlock {
        let n = self.block_size;
        let k = self.levels();
        let mut m = BandedBlock::zeros(n, k, 1, 1, k);
        for i in 0..k {
            m.set(i, i, self.diag[i].clone());
            if i + 1 < k {
                m.set(i, i + 1, MatrixR::identity(n));
                m.set(i + 1, i, self.sub[i].clone());
            }
        }
        m
    }
}

/// The bidiagonal factors of a Darboux factorization `L0 = alpha beta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidiagPair {
    pub alphas: Vec<MatrixR>,
    /// `betas[0]` is the zero block.
    pub betas: Vec<MatrixR>,
}

impl BidiagPair {
    pub fn levels(&self) -> usize {
        self.alphas.len()
    }

    pub fn block_size(&self) -> usize {
        self.alphas.first().map_or(0, MatrixR::n_rows)
    }

    fn validate(&self) -> Result<()> {
        let n = self.block_size();
        if self.alphas.is_empty() || self.alphas.len() != self.betas.len() {
            return Err(Error::Structure(format!(
                "{} alphas and {} betas",
                self.alphas.len(),
                self.betas.len()
            )));
        }
        for (i, m) in self.alphas.iter().enumerate() {
            check_block(m, n, &format!("alpha_{i}"))?;
        }
        for (i, m) in self.betas.iter().enumerate() {
            check_block(m, n, &format!("beta_{i}"))?;
        }
        if !self.betas[0].is_zero() {
            return Err(Error::Structure("beta_0 must be the zero block".into()));
        }
        Ok(())
    }

    /// Upper bidiagonal factor: `alpha_n` on the diagonal, identity above.
    pub fn alpha_matrix(&self) -> BandedBlock {
        let n = self.block_size();
        let k = self.levels();
        let mut m = BandedBlock::zeros(n, k, 0, 1, k);
        for i in 0..k {
            m.set(i, i, self.alphas[i].clone());
            if i + 1 < k {
                m.set(i, i + 1, MatrixR::identity(n));
            }
        }
        m
    }

    /// Lower bidiagonal factor: identity on the diagonal, `beta_n` below.
    pub fn beta_matrix(&self) -> BandedBlock {
        let n = self.block_size();
        let k = self.levels();
        let mut m = BandedBlock::zeros(n, k, 1, 0, k);
        for i in 0..k {
            m.set(i, i, MatrixR::identity(n));
            if i >= 1 {
                m.set(i, i - 1, self.betas[i].clone());
            }
        }
        m
    }
}

/// Factors `L0 = alpha beta` given the free parameter `alpha0`.
///
/// With `beta_0 = 0`, the factors follow from `beta_n = B_{n-1} - alpha_{n-1}`
/// and `alpha_n = A_n beta_n^{-1}` for `n >= 1`.
pub fn darboux_factorize(l0: &BlockTridiag, alpha0: &MatrixR) -> Result<BidiagPair> {
    let n = l0.block_size();
    check_block(alpha0, n, "alpha0")?;
    let k = l0.levels();
    let mut alphas = Vec::with_capacity(k);
    let mut betas = Vec::with_capacity(k);
    alphas.push(alpha0.clone());
    betas.push(MatrixR::zeros(n, n));
    for level in 1..k {
        let beta = l0.b(level - 1) - &alphas[level - 1];
        let inv = beta.inverse().map_err(|_| Error::SingularPivot(level))?;
        alphas.push(l0.a(level) * &inv);
        betas.push(beta);
    }
    Ok(BidiagPair { alphas, betas })
}

/// Reverses the factors: `L = beta alpha`, so `B~_n = alpha_n + beta_n` and
/// `A~_n = beta_n alpha_{n-1}`.
pub fn darboux_transform(f: &BidiagPair) -> Result<BlockTridiag> {
    f.validate()?;
    let diag = f.alphas.iter().zip(&f.betas).map(|(a, b)| a + b).collect();
    let sub = (1..f.levels()).map(|i| &f.betas[i] * &f.alphas[i - 1]).collect();
    BlockTridiag::new(f.block_size(), diag, sub)
}

/// Block matrix with a fixed band, truncated to `levels x levels` blocks.
///
/// Entries with row and column below `exact_window` agree with the
/// untruncated semi-infinite computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "BandedRepr", into = "BandedRepr")]
pub struct BandedBlock {
    block_size: usize,
    levels: usize,
    lower: usize,
    upper: usize,
    exact_window: usize,
    /// `rows[i][t]` is block `(i, i + t - lower)`.
    rows: Vec<Vec<MatrixR>>,
}

#[derive(Serialize, Deserialize)]
struct BandedRepr {
    block_size: usize,
    levels: usize,
    lower: usize,
    upper: usize,
    exact_window: usize,
    rows: Vec<Vec<MatrixR>>,
}

impl TryFrom<BandedRepr> for BandedBlock {
    type Error = Error;
    fn try_from(r: BandedRepr) -> Result<Self> {
        if r.rows.len() != r.levels {
            return Err(Error::Structure(format!(
                "{} block rows for {} levels",
                r.rows.len(),
                r.levels
            )));
        }
        if r.exact_window > r.levels {
            return Err(Error::Structure("exact window exceeds levels".into()));
        }
        let width = r.lower + r.upper + 1;
        let mut m = BandedBlock::zeros(r.block_size, r.levels, r.lower, r.upper, r.exact_window);
        for (i, row) in r.rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::Structure(format!("block row {i} has {} entries, band width {width}", row.len())));
            }
            for (t, block) in row.into_iter().enumerate() {
                check_block(&block, r.block_size, &format!("block ({i}, offset {t})"))?;
                let j = i as isize + t as isize - r.lower as isize;
                if j < 0 || j >= r.levels as isize {
                    if !block.is_zero() {
                        return Err(Error::Structure(format!("nonzero block outside the matrix in row {i}")));
                    }
                    continue;
                }
                m.rows[i][t] = block;
            }
        }
        Ok(m)
    }
}

impl From<BandedBlock> for BandedRepr {
    fn from(b: BandedBlock) -> Self {
        BandedRepr {
            block_size: b.block_size,
            levels: b.levels,
            lower: b.lower,
            upper: b.upper,
            exact_window: b.exact_window,
            rows: b.rows,
        }
    }
}

impl BandedBlock {
    pub fn zeros(block_size: usize, levels: usize, lower: usize, upper: usize, exact_window: usize) -> Self {
        let zero = MatrixR::zeros(block_size, block_size);
        BandedBlock {
            block_size,
            levels,
            lower,
            upper,
            exact_window: exact_window.min(levels),
            rows: vec![vec![zero; lower + upper + 1]; levels],
        }
    }

    pub fn identity(block_size: usize, levels: usize) -> Self {
        Self::block_diagonal(&vec![MatrixR::identity(block_size); levels])
    }

    pub fn block_diagonal(blocks: &[MatrixR]) -> Self {
        let n = blocks.first().map_or(1, MatrixR::n_rows);
        let mut m = Self::zeros(n, blocks.len(), 0, 0, blocks.len());
        for (i, b) in blocks.iter().enumerate() {
            m.set(i, i, b.clone());
        }
        m
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn exact_window(&self) -> usize {
        self.exact_window
    }

    fn offset(&self, i: usize, j: usize) -> Option<usize> {
        let t = j as isize - i as isize + self.lower as isize;
        (0..=(self.lower + self.upper) as isize)
            .contains(&t)
            .then_some(t as usize)
    }

    /// Block `(i, j)`; `None` outside the band.
    pub fn get(&self, i: usize, j: usize) -> Option<&MatrixR> {
        if i >= self.levels || j >= self.levels {
            return None;
        }
        self.offset(i, j).map(|t| &self.rows[i][t])
    }

    /// Panics if `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, m: MatrixR) {
        let t = self.offset(i, j).expect("block outside band");
        self.rows[i][t] = m;
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.block_size != other.block_size || self.levels != other.levels {
            return Err(Error::SizeMismatch(format!(
                "banded {}x{} levels of block size {} vs {} levels of block size {}",
                self.levels, self.levels, self.block_size, other.levels, other.block_size
            )));
        }
        Ok(())
    }

    /// Product of truncations; the exact window shrinks by one level.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let window = self.exact_window.min(other.exact_window).saturating_sub(1);
        let mut out = Self::zeros(
            self.block_size,
            self.levels,
            self.lower + other.lower,
            self.upper + other.upper,
            window,
        );
        for i in 0..self.levels {
            let lo = i.saturating_sub(out.lower);
            let hi = (i + out.upper).min(self.levels - 1);
            for j in lo..=hi {
                let mut acc = MatrixR::zeros(self.block_size, self.block_size);
                let k_lo = i.saturating_sub(self.lower).max(j.saturating_sub(other.upper));
                let k_hi = (i + self.upper).min(j + other.lower).min(self.levels - 1);
                for k in k_lo..=k_hi {
                    if let (Some(x), Some(y)) = (self.get(i, k), other.get(k, j)) {
                        if !x.is_zero() && !y.is_zero() {
                            acc = &acc + &(x * y);
                        }
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let lower = self.lower.max(other.lower);
        let upper = self.upper.max(other.upper);
        let window = self.exact_window.min(other.exact_window);
        let mut out = Self::zeros(self.block_size, self.levels, lower, upper, window);
        let zero = MatrixR::zeros(self.block_size, self.block_size);
        for i in 0..self.levels {
            for j in i.saturating_sub(lower)..=(i + upper).min(self.levels - 1) {
                let a = self.get(i, j).unwrap_or(&zero);
                let b = other.get(i, j).unwrap_or(&zero);
                out.set(i, j, a - b);
            }
        }
        Ok(out)
    }

    /// First nonzero scalar entry inside the exact window, scanning block rows
    /// then block columns.
    pub fn first_nonzero_in_window(&self) -> Option<EntryLocation> {
        for i in 0..self.exact_window {
            for j in i.saturating_sub(self.lower)..=(i + self.upper).min(self.exact_window.saturating_sub(1)) {
                if let Some((r, c, v)) = self.get(i, j).and_then(MatrixR::first_nonzero) {
                    return Some(EntryLocation {
                        block_row: i,
                        block_col: j,
                        row: r,
                        col: c,
                        value: v.clone(),
                    });
                }
            }
        }
        None
    }

    pub fn is_zero_in_window(&self) -> bool {
        self.first_nonzero_in_window().is_none()
    }
}

/// A scalar entry of a block matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryLocation {
    pub block_row: usize,
    pub block_col: usize,
    pub row: usize,
    pub col: usize,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwineReport {
    pub pass: bool,
    /// Levels on which `U L0 - L U` was compared.
    pub window: usize,
    pub first_offending: Option<EntryLocation>,
}

/// Checks the intertwining relation `U L0 = L U` on the exact window.
pub fn intertwine_check(u: &BandedBlock, l0: &BlockTridiag, l: &BlockTridiag) -> Result<IntertwineReport> {
    if l0.block_size() != l.block_size() || l0.levels() != l.levels() {
        return Err(Error::SizeMismatch(format!(
            "L0 has {} levels of size {}, L has {} levels of size {}",
            l0.levels(),
            l0.block_size(),
            l.levels(),
            l.block_size()
        )));
    }
    let lhs = u.mul(&l0.to_banded())?;
    let rhs = l.to_banded().mul(u)?;
    let diff = lhs.sub(&rhs)?;
    let first_offending = diff.first_nonzero_in_window();
    Ok(IntertwineReport {
        pass: first_offending.is_none(),
        window: diff.exact_window(),
        first_offending,
    })
}

/// `(ad L)^power (Lambda)` with `ad L (X) = L X - X L` and `Lambda` the block
/// diagonal of `lambda_diag`. The result is exact on the first
/// `K - power` levels.
pub fn ad_bracket_power(l: &BlockTridiag, lambda_diag: &[MatrixR], power: usize) -> Result<BandedBlock> {
    let k = l.levels();
    if lambda_diag.len() != k {
        return Err(Error::SizeMismatch(format!(
            "{} eigenvalue blocks for {k} levels",
            lambda_diag.len()
        )));
    }
    if let Some(m) = lambda_diag.iter().find(|m| m.n_rows() != l.block_size() || m.n_cols() != l.block_size()) {
        return Err(Error::SizeMismatch(format!(
            "{}x{} eigenvalue block for block size {}",
            m.n_rows(),
            m.n_cols(),
            l.block_size()
        )));
    }
    if power == 0 || k <= power {
        return Err(Error::WindowExhausted { levels: k, needed: power + 1 });
    }
    let lb = l.to_banded();
    let mut x = BandedBlock::block_diagonal(lambda_diag);
    for _ in 0..power {
        x = lb.mul(&x)?.sub(&x.mul(&lb)?)?;
    }
    debug_assert_eq!(x.exact_window(), k - power);
    Ok(x)
}
