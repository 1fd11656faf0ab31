//! Search for the right-acting operators of bounded order that have the
//! family `P_n` of a recurrence as eigenfunctions.
//!
//! Unknowns are the entries of `F_{ij}` in `F_i = sum_{j<=i} x^j F_{ij}`,
//! laid out with the highest order first. Keeping the solution space as
//! reduced row echelon rows then makes `d(s)` the number of rows whose pivot
//! falls in an order `<= s` block.

use num_traits::Zero;
use serde::Serialize;

use super::{expand_in_basis, RightDiffOp};
use crate::blockop::BlockTridiag;
use crate::error::{Error, Result};
use crate::exact::{nullspace_rows, rref, MatPoly, MatrixR, Rational};
use crate::mop::{polys_from_recurrence, MopFamily};

use super::EigenSeq;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_order: usize,
    pub n_train: usize,
    pub n_verify: usize,
}

impl SearchConfig {
    /// Defaults `n_train = 2 s + 6`, `n_verify = 5`.
    pub fn new(max_order: usize) -> Self {
        SearchConfig {
            max_order,
            n_train: 2 * max_order + 6,
            n_verify: 5,
        }
    }

    /// Levels of the recurrence needed to run this search.
    pub fn levels_needed(&self) -> usize {
        self.n_train + self.n_verify
    }
}

/// A verification step at which the trained space lost dimensions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shrink {
    pub n: usize,
    pub before: Vec<usize>,
    pub after: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraSearch {
    pub max_order: usize,
    pub n_train: usize,
    pub n_verify: usize,
    /// `d(s)` for `s = 0..=max_order` after verification.
    pub dims: Vec<usize>,
    /// `new(s) = d(s) - d(s-1)`, with `new(0) = d(0)`.
    pub new: Vec<usize>,
    /// `d(s)` using only the conditions at `n < n_train`.
    pub dims_trained: Vec<usize>,
    /// `d(s)` using the conditions at `n < n_train + 3`, when available.
    pub dims_stabilization: Option<Vec<usize>>,
    pub verify_shrinks: Vec<Shrink>,
    /// Basis of the final space, in echelon form, highest order first.
    pub basis: Vec<RightDiffOp>,
    /// Least `s >= 1` with `d(s) > d(0)`.
    pub minimal_nontrivial_order: Option<usize>,
}

impl AlgebraSearch {
    /// Whether `d(s)` agreed at `n_train` and `n_train + 3`.
    pub fn stabilized(&self) -> Option<bool> {
        self.dims_stabilization.as_ref().map(|d| *d == self.dims_trained)
    }

    pub fn d(&self, s: usize) -> usize {
        self.dims[s.min(self.max_order)]
    }

    pub fn new_at(&self, s: usize) -> usize {
        self.new.get(s).copied().unwrap_or(0)
    }

    /// Basis operators of exact order `s`.
    pub fn operators_of_order(&self, s: usize) -> Vec<&RightDiffOp> {
        self.basis.iter().filter(|d| d.order() == Some(s)).collect()
    }
}

#[derive(Debug, Clone, Copy)]
struct Layout {
    max_order: usize,
    size: usize,
}

impl Layout {
    fn block_len(&self, i: usize) -> usize {
        (i + 1) * self.size * self.size
    }

    /// First index of the order-`i` block.
    fn offset(&self, i: usize) -> usize {
        (i + 1..=self.max_order).map(|k| self.block_len(k)).sum()
    }

    fn len(&self) -> usize {
        self.offset(0) + self.block_len(0)
    }

    fn index(&self, i: usize, j: usize, r: usize, c: usize) -> usize {
        self.offset(i) + (j * self.size + r) * self.size + c
    }

    fn dims(&self, pivots: &[usize]) -> Vec<usize> {
        (0..=self.max_order)
            .map(|s| {
                let start = self.offset(s);
                pivots.iter().filter(|&&p| p >= start).count()
            })
            .collect()
    }

    fn coefficient(&self, v: &[Rational], i: usize) -> MatPoly {
        let n = self.size;
        let coeffs = (0..=i)
            .map(|j| MatrixR::from_fn(n, n, |r, c| v[self.index(i, j, r, c)].clone()))
            .collect();
        MatPoly::new(n, coeffs).expect("coefficient blocks are square")
    }

    fn operator(&self, v: &[Rational]) -> RightDiffOp {
        let coeffs = (0..=self.max_order).map(|i| self.coefficient(v, i)).collect();
        RightDiffOp::new(self.size, coeffs).expect("layout respects the degree ansatz")
    }

    fn coordinates(&self, d: &RightDiffOp) -> Result<Vec<Rational>> {
        if d.block_size() != self.size {
            return Err(Error::SizeMismatch("operator block size".into()));
        }
        if d.order().is_some_and(|o| o > self.max_order) {
            return Err(Error::Structure(format!(
                "operator of order {} exceeds {}",
                d.order().unwrap_or(0),
                self.max_order
            )));
        }
        let mut v = vec![Rational::zero(); self.len()];
        for (i, f) in d.coeffs().iter().enumerate() {
            for (j, m) in f.coeffs().iter().enumerate() {
                for r in 0..self.size {
                    for c in 0..self.size {
                        v[self.index(i, j, r, c)] = m.get(r, c).clone();
                    }
                }
            }
        }
        Ok(v)
    }
}

/// Coordinates of `d` in the search layout for operators up to `max_order`.
pub fn operator_coordinates(d: &RightDiffOp, max_order: usize) -> Result<Vec<Rational>> {
    Layout {
        max_order,
        size: d.block_size(),
    }
    .coordinates(d)
}

/// `Lambda_0..Lambda_{count-1}` flattened entrywise.
pub fn eigen_coordinates(lam: &EigenSeq, count: usize) -> Result<Vec<Rational>> {
    Ok(lam
        .values(count)?
        .iter()
        .flat_map(|m| m.entries().to_vec())
        .collect())
}

/// Coefficients `c` with `sum_k c_k basis[k] = target`, if any.
pub fn span_coefficients(target: &[Rational], basis: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    if basis.iter().any(|b| b.len() != target.len()) {
        return None;
    }
    let k = basis.len();
    let mut rows: Vec<Vec<Rational>> = (0..target.len())
        .map(|t| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[t].clone()).collect();
            row.push(target[t].clone());
            row
        })
        .collect();
    if rows.is_empty() {
        return Some(vec![Rational::zero(); k]);
    }
    let pivots = rref(&mut rows);
    if pivots.contains(&k) {
        return None;
    }
    let mut out = vec![Rational::zero(); k];
    for (row, &p) in rows.iter().zip(&pivots) {
        out[p] = row[k].clone();
    }
    Some(out)
}

/// Imposes the conditions coming from `P_n` on the echelon rows `basis`.
fn impose(layout: &Layout, basis: &mut Vec<Vec<Rational>>, fam: &MopFamily, n: usize) -> Result<Vec<usize>> {
    let p = fam.get(n);
    let derivs: Vec<MatPoly> = (0..=layout.max_order.min(n)).map(|i| p.derivative(i)).collect();
    let mut conditions: Vec<Vec<Rational>> = Vec::with_capacity(basis.len());
    for v in basis.iter() {
        let mut pd = MatPoly::zero(layout.size);
        for (i, dp) in derivs.iter().enumerate() {
            let f = layout.coefficient(v, i);
            if !f.is_zero() {
                pd = pd.add(&dp.mul(&f)?)?;
            }
        }
        let comps = expand_in_basis(&pd, fam, n);
        conditions.push(comps[..n].iter().flat_map(|m| m.entries().to_vec()).collect());
    }
    let n_cond = conditions.first().map_or(0, Vec::len);
    if conditions.iter().all(|c| c.iter().all(Zero::is_zero)) {
        return Ok(echelon(basis));
    }
    let system: Vec<Vec<Rational>> = (0..n_cond)
        .map(|t| conditions.iter().map(|c| c[t].clone()).collect())
        .collect();
    let combos = nullspace_rows(&system, basis.len());
    let width = layout.len();
    let mut next: Vec<Vec<Rational>> = combos
        .iter()
        .map(|w| {
            let mut row = vec![Rational::zero(); width];
            for (coef, b) in w.iter().zip(basis.iter()) {
                if coef.is_zero() {
                    continue;
                }
                for (acc, x) in row.iter_mut().zip(b) {
                    if !x.is_zero() {
                        *acc += coef * x;
                    }
                }
            }
            row
        })
        .collect();
    let pivots = echelon(&mut next);
    *basis = next;
    Ok(pivots)
}

fn echelon(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    if rows.is_empty() {
        return Vec::new();
    }
    rref(rows)
}

/// Solution space of `P_n D in MatrixR P_n` for `n < n_train` over operators
/// of order at most `max_order` with `deg F_i <= i`, re-checked on the next
/// `n_verify` polynomials.
pub fn algebra_search(l: &BlockTridiag, config: SearchConfig) -> Result<AlgebraSearch> {
    let needed = config.levels_needed();
    if l.levels() < needed {
        return Err(Error::InsufficientLevels {
            needed,
            available: l.levels(),
        });
    }
    let layout = Layout {
        max_order: config.max_order,
        size: l.block_size(),
    };
    let fam = polys_from_recurrence(l, needed)?;
    let width = layout.len();
    let mut basis: Vec<Vec<Rational>> = (0..width)
        .map(|k| {
            let mut row = vec![Rational::zero(); width];
            row[k] = Rational::from_integer(1.into());
            row
        })
        .collect();
    let mut pivots: Vec<usize> = (0..width).collect();
    for n in 0..config.n_train {
        pivots = impose(&layout, &mut basis, &fam, n)?;
    }
    let dims_trained = layout.dims(&pivots);
    let mut dims_stabilization = None;
    let mut verify_shrinks = Vec::new();
    let mut current = dims_trained.clone();
    for (step, n) in (config.n_train..needed).enumerate() {
        pivots = impose(&layout, &mut basis, &fam, n)?;
        let after = layout.dims(&pivots);
        if after != current {
            verify_shrinks.push(Shrink {
                n,
                before: current.clone(),
                after: after.clone(),
            });
        }
        current = after;
        if step == 2 {
            dims_stabilization = Some(current.clone());
        }
    }
    let new = (0..=config.max_order)
        .map(|s| if s == 0 { current[0] } else { current[s] - current[s - 1] })
        .collect();
    let minimal_nontrivial_order = (1..=config.max_order).find(|&s| current[s] > current[0]);
    let mut ops: Vec<RightDiffOp> = basis.iter().map(|v| layout.operator(v)).collect();
    ops.retain(|d| !d.is_zero());
    Ok(AlgebraSearch {
        max_order: config.max_order,
        n_train: config.n_train,
        n_verify: config.n_verify,
        dims: current,
        new,
        dims_trained,
        dims_stabilization,
        verify_shrinks,
        basis: ops,
        minimal_nontrivial_order,
    })
}
