//! Monic matrix-valued orthogonal polynomials.
//!
//! The polynomials satisfy `A_n P_{n-1} + B_n P_n + P_{n+1} = x P_n` with
//! `P_0 = I`, the recurrence coefficients acting from the left. The form
//! `<P, Q> = int P W Q^T` only has to have invertible Gram blocks, so
//! quasi-definite weights are handled the same way as positive ones.

use serde::{Deserialize, Serialize};

use crate::blockop::BlockTridiag;
use crate::error::{Error, Result};
use crate::exact::{MatPoly, MatrixR};
use crate::weights::MomentSeq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MopSource {
    Recurrence,
    Moments,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MopFamily {
    pub block_size: usize,
    pub polys: Vec<MatPoly>,
    #[serde(default = "default_source", skip_serializing)]
    pub source: MopSource,
}

fn default_source() -> MopSource {
    MopSource::Recurrence
}

impl MopFamily {
    pub fn get(&self, n: usize) -> &MatPoly {
        &self.polys[n]
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }
}

/// `P_0..P_{count-1}` from `P_{n+1} = x P_n - B_n P_n - A_n P_{n-1}`.
pub fn polys_from_recurrence(l: &BlockTridiag, count: usize) -> Result<MopFamily> {
    if count > l.levels() {
        return Err(Error::InsufficientLevels {
            needed: count,
            available: l.levels(),
        });
    }
    let n = l.block_size();
    let mut polys: Vec<MatPoly> = Vec::with_capacity(count);
    for k in 0..count {
        let next = match k {
            0 => MatPoly::identity(n),
            _ => {
                let p = &polys[k - 1];
                let mut q = p.shift(1).sub(&p.left_mul(l.b(k - 1)))?;
                if k >= 2 {
                    q = q.sub(&polys[k - 2].left_mul(l.a(k - 1)))?;
                }
                q
            }
        };
        polys.push(next);
    }
    Ok(MopFamily {
        block_size: n,
        polys,
        source: MopSource::Recurrence,
    })
}

/// `<p, q> = sum_{j,k} p_j mu_{j+k} q_k^T`.
pub fn inner_product(p: &MatPoly, q: &MatPoly, mu: &MomentSeq) -> Result<MatrixR> {
    let n = mu.block_size;
    if p.size() != n || q.size() != n {
        return Err(Error::SizeMismatch(format!(
            "polynomials of block sizes {} and {} against moments of size {n}",
            p.size(),
            q.size()
        )));
    }
    let (Some(dp), Some(dq)) = (p.degree(), q.degree()) else {
        return Ok(MatrixR::zeros(n, n));
    };
    if dp + dq >= mu.len() {
        return Err(Error::InsufficientMoments {
            needed: dp + dq + 1,
            available: mu.len(),
        });
    }
    let mut acc = MatrixR::zeros(n, n);
    for (j, pj) in p.coeffs().iter().enumerate() {
        if pj.is_zero() {
            continue;
        }
        for (k, qk) in q.coeffs().iter().enumerate() {
            if !qk.is_zero() {
                acc = &acc + &(&(pj * &mu.mus[j + k]) * &qk.transpose());
            }
        }
    }
    Ok(acc)
}

/// Monic `P_n = x^n I + sum_{j<n} c_j x^j` from the block Hankel system
/// `sum_{j<=n} c_j mu_{j+k} = 0`, `k < n`.
pub fn polys_from_moments(mu: &MomentSeq, count: usize) -> Result<MopFamily> {
    if count == 0 {
        return Ok(MopFamily {
            block_size: mu.block_size,
            polys: Vec::new(),
            source: MopSource::Moments,
        });
    }
    if 2 * count - 1 > mu.len() {
        return Err(Error::InsufficientMoments {
            needed: 2 * count - 1,
            available: mu.len(),
        });
    }
    let polys = (0..count)
        .map(|n| monic_orthogonal(mu, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(MopFamily {
        block_size: mu.block_size,
        polys,
        source: MopSource::Moments,
    })
}

fn monic_orthogonal(mu: &MomentSeq, degree: usize) -> Result<MatPoly> {
    let n = mu.block_size;
    if degree == 0 {
        return Ok(MatPoly::identity(n));
    }
    // Row form C H = -R with C = [c_0 .. c_{d-1}], H_{jk} = mu_{j+k},
    // R = [mu_d .. mu_{2d-1}]; solved through the transpose H^T C^T = -R^T.
    let dim = degree * n;
    let ht = MatrixR::from_fn(dim, dim, |r, c| {
        // (H^T)_{r,c} = H_{c,r}
        let (bj, ij) = (c / n, c % n);
        let (bk, ik) = (r / n, r % n);
        mu.mus[bj + bk].get(ij, ik).clone()
    });
    let rt = MatrixR::from_fn(dim, n, |r, c| {
        let (bk, ik) = (r / n, r % n);
        -mu.mus[degree + bk].get(c, ik).clone()
    });
    let ct = ht.solve(&rt).map_err(|_| Error::DegenerateMoments(degree))?;
    let mut coeffs: Vec<MatrixR> = (0..degree)
        .map(|j| MatrixR::from_fn(n, n, |a, b| ct.get(j * n + b, a).clone()))
        .collect();
    coeffs.push(MatrixR::identity(n));
    MatPoly::new(n, coeffs)
}

/// Recurrence coefficients `B_n = <x P_n, P_n> <P_n, P_n>^{-1}` and
/// `A_n = <x P_n, P_{n-1}> <P_{n-1}, P_{n-1}>^{-1}` for `n < levels`.
pub fn recurrence_from_moments(mu: &MomentSeq, levels: usize) -> Result<BlockTridiag> {
    if levels == 0 {
        return Err(Error::Structure("at least one level is required".into()));
    }
    if 2 * levels + 1 > mu.len() {
        return Err(Error::InsufficientMoments {
            needed: 2 * levels + 1,
            available: mu.len(),
        });
    }
    let fam = polys_from_moments(mu, levels)?;
    let grams = fam
        .polys
        .iter()
        .map(|p| inner_product(p, p, mu))
        .collect::<Result<Vec<_>>>()?;
    let mut diag = Vec::with_capacity(levels);
    let mut sub = Vec::with_capacity(levels.saturating_sub(1));
    for n in 0..levels {
        let xp = fam.polys[n].shift(1);
        let ginv = grams[n].inverse().map_err(|_| Error::DegenerateMoments(n))?;
        diag.push(&inner_product(&xp, &fam.polys[n], mu)? * &ginv);
        if n >= 1 {
            let ginv = grams[n - 1].inverse().map_err(|_| Error::DegenerateMoments(n - 1))?;
            let a = &inner_product(&xp, &fam.polys[n - 1], mu)? * &ginv;
            if a.inverse().is_err() {
                return Err(Error::DegenerateMoments(n));
            }
            sub.push(a);
        }
    }
    BlockTridiag::new(mu.block_size, diag, sub)
}
