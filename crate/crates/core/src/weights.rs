//! Exact matrix moments of the weight families.
//!
//! * `Gegenbauer02(lambda)`: `((2-x)x)^(lambda-3/2) [[1, x-1], [x-1, 1]]` on `[0, 2]`.
//! * `Jacobi(alpha, beta)`: `(1-x)^alpha (1+x)^beta [[1, x], [x, 1]]` on `[-1, 1]`.
//! * `DarbouxGegenbauer02(lambda, alpha0, sign)`: the weight of the polynomials
//!   produced by one Darboux step from the `Gegenbauer02` recurrence,
//!   `(2-x)^(lambda-3/2) x^(lambda-5/2) [[1, x-1], [x-1, 1]]` plus a point mass
//!   at the origin that depends on `alpha0`.
//!
//! With block size 1 the first two families reduce to their scalar densities.
//! Every family may carry extra point masses `M delta_p`, contributing
//! `p^k M` to the `k`-th moment.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::blockop::BlockTridiag;
use crate::error::{Error, Result};
use crate::exact::rational::{as_integer, beta_int, int, pow2, rat, RationalStr};
use crate::exact::{MatrixR, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightKind {
    Gegenbauer02 { lambda: Rational },
    Jacobi { alpha: Rational, beta: Rational },
    DarbouxGegenbauer02 { lambda: Rational, alpha0: MatrixR, delta_sign: i8 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Delta {
    #[serde(with = "crate::exact::rational::serde_str")]
    pub point: Rational,
    pub mass: MatrixR,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WeightRepr", into = "WeightRepr")]
pub struct Weight {
    kind: WeightKind,
    block_size: usize,
    deltas: Vec<Delta>,
}

/// Sign applied to the origin mass of the Darboux-transformed weight when
/// none is given. This is the reading under which the moments reproduce the
/// transformed recurrence.
pub const DEFAULT_DELTA_SIGN: i8 = -1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// True integrals.
    Absolute,
    /// Divided by the positive scalar `int w_11`, the zeroth moment of the
    /// scalar density.
    Relative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentSeq {
    pub block_size: usize,
    pub normalization: Normalization,
    pub mus: Vec<MatrixR>,
}

impl MomentSeq {
    pub fn len(&self) -> usize {
        self.mus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mus.is_empty()
    }
}

fn half() -> Rational {
    rat(1, 2)
}

impl Weight {
    pub fn gegenbauer02(lambda: Rational, block_size: usize) -> Result<Self> {
        if lambda <= half() {
            return Err(Error::InvalidParameter(format!(
                "lambda = {lambda} must exceed 1/2 for an integrable density"
            )));
        }
        check_block_size(block_size, &[1, 2])?;
        Ok(Weight {
            kind: WeightKind::Gegenbauer02 { lambda },
            block_size,
            deltas: Vec::new(),
        })
    }

    pub fn jacobi(alpha: Rational, beta: Rational, block_size: usize) -> Result<Self> {
        if alpha <= int(-1) || beta <= int(-1) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {alpha}, beta = {beta} must exceed -1"
            )));
        }
        check_block_size(block_size, &[1, 2])?;
        Ok(Weight {
            kind: WeightKind::Jacobi { alpha, beta },
            block_size,
            deltas: Vec::new(),
        })
    }

    /// Adds the point mass `mass * delta_point`.
    pub fn with_delta(mut self, point: Rational, mass: MatrixR) -> Result<Self> {
        if mass.n_rows() != self.block_size || mass.n_cols() != self.block_size {
            return Err(Error::SizeMismatch(format!(
                "{}x{} mass for block size {}",
                mass.n_rows(),
                mass.n_cols(),
                self.block_size
            )));
        }
        if !mass.is_symmetric() {
            return Err(Error::InvalidParameter(format!("mass {mass} is not symmetric")));
        }
        let (lo, hi) = self.support();
        if point < lo || point > hi {
            return Err(Error::InvalidParameter(format!(
                "point {point} outside the support [{lo}, {hi}]"
            )));
        }
        self.deltas.push(Delta { point, mass });
        Ok(self)
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn deltas(&self) -> &[Delta] {
        &self.deltas
    }

    /// Closed support interval of the density.
    pub fn support(&self) -> (Rational, Rational) {
        match self.kind {
            WeightKind::Jacobi { .. } => (int(-1), int(1)),
            _ => (int(0), int(2)),
        }
    }
}

fn check_block_size(n: usize, allowed: &[usize]) -> Result<()> {
    if allowed.contains(&n) {
        Ok(())
    } else {
        Err(Error::UnsupportedKind(format!("block size {n}; supported: {allowed:?}")))
    }
}

/// `lambda - 1/2` as an integer, when it is one.
fn half_shift(lambda: &Rational) -> Option<i64> {
    as_integer(&(lambda - half()))
}

/// The Darboux-transformed weight for the `Gegenbauer02(lambda)` recurrence
/// with free parameter `alpha0`.
///
/// The origin mass is
/// `sign * 2^(2 lambda) B(lambda - 1/2, lambda - 1/2) / (4 (2 lambda - 3))
///  * ([[2 lambda - 2, -1], [-1, 2 lambda - 2]] - (2 lambda - 3) alpha0^{-1})`.
pub fn wtilde_weight(lambda: Rational, alpha0: &MatrixR, delta_sign: i8) -> Result<Weight> {
    if alpha0.n_rows() != 2 || alpha0.n_cols() != 2 {
        return Err(Error::SizeMismatch("alpha0 must be 2x2".into()));
    }
    if !alpha0.is_symmetric() {
        return Err(Error::AsymmetricAlpha0);
    }
    let inv = alpha0.inverse().map_err(|_| Error::SingularAlpha0)?;
    if delta_sign != 1 && delta_sign != -1 {
        return Err(Error::InvalidParameter(format!("delta_sign {delta_sign} must be +1 or -1")));
    }
    let m = half_shift(&lambda)
        .filter(|&m| m >= 2)
        .ok_or_else(|| Error::InexactParameters(format!("2 lambda = {} must be an odd integer >= 5", &lambda * int(2))))?;
    let two_lambda = int(2 * m + 1);
    let coeff = pow2(2 * m + 1) * beta_int(m as u32, m as u32) / (int(4) * (&two_lambda - int(3)));
    let d = &two_lambda - int(2);
    let base = MatrixR::from_rows(vec![vec![d.clone(), int(-1)], vec![int(-1), d]])?;
    let mass = (&base - &inv.scale(&(&two_lambda - int(3)))).scale(&(coeff * int(delta_sign as i64)));
    Ok(Weight {
        kind: WeightKind::DarbouxGegenbauer02 {
            lambda,
            alpha0: alpha0.clone(),
            delta_sign,
        },
        block_size: 2,
        deltas: vec![Delta { point: int(0), mass }],
    })
}

/// The first `count` moments `mu_k = int x^k W(x) dx`.
///
/// Absolute moments need rational closed forms: `2 lambda` odd for
/// `Gegenbauer02`, integer `alpha, beta >= 0` for `Jacobi`. Relative moments
/// work for any rational parameters but refuse point masses.
pub fn moments(w: &Weight, count: usize, normalization: Normalization) -> Result<MomentSeq> {
    if normalization == Normalization::Relative && !w.deltas.is_empty() {
        return Err(Error::InexactParameters(
            "relative normalization is not defined for weights with point masses".into(),
        ));
    }
    let n = w.block_size;
    let mut mus: Vec<MatrixR> = match &w.kind {
        WeightKind::Gegenbauer02 { lambda } => {
            let core = gegenbauer_core(lambda, count + 1, normalization)?;
            two_by_two_shifted(&core, count, n)
        }
        WeightKind::Jacobi { alpha, beta } => {
            let core = jacobi_core(alpha, beta, count + 1, normalization)?;
            (0..count)
                .map(|k| match n {
                    1 => MatrixR::scalar(1, core[k].clone()),
                    _ => MatrixR::from_rows(vec![
                        vec![core[k].clone(), core[k + 1].clone()],
                        vec![core[k + 1].clone(), core[k].clone()],
                    ])
                    .expect("2x2"),
                })
                .collect()
        }
        WeightKind::DarbouxGegenbauer02 { lambda, .. } => {
            if normalization == Normalization::Relative {
                return Err(Error::InexactParameters(
                    "the Darboux-transformed weight carries a point mass; use absolute moments".into(),
                ));
            }
            let m = half_shift(lambda)
                .filter(|&m| m >= 2)
                .ok_or_else(|| Error::InexactParameters(format!("lambda = {lambda}")))?;
            // int_0^2 x^k (2-x)^(m-1) x^(m-2) dx = 2^(k+2m-2) B(k+m-1, m)
            let core: Vec<Rational> = (0..=count)
                .map(|k| pow2(k as i64 + 2 * m - 2) * beta_int((k as i64 + m - 1) as u32, m as u32))
                .collect();
            if n != 2 {
                return Err(Error::UnsupportedKind("the Darboux-transformed weight is 2x2".into()));
            }
            two_by_two_shifted(&core, count, 2)
        }
    };
    for delta in &w.deltas {
        let mut pk = Rational::one();
        for mu in mus.iter_mut() {
            if !pk.is_zero() {
                *mu = &*mu + &delta.mass.scale(&pk);
            }
            pk *= &delta.point;
        }
    }
    Ok(MomentSeq {
        block_size: n,
        normalization,
        mus,
    })
}

/// `[[c_k, c_{k+1} - c_k], [c_{k+1} - c_k, c_k]]`, the moments of
/// `c(x) [[1, x-1], [x-1, 1]]`.
fn two_by_two_shifted(core: &[Rational], count: usize, n: usize) -> Vec<MatrixR> {
    (0..count)
        .map(|k| {
            if n == 1 {
                return MatrixR::scalar(1, core[k].clone());
            }
            let off = &core[k + 1] - &core[k];
            MatrixR::from_rows(vec![vec![core[k].clone(), off.clone()], vec![off, core[k].clone()]])
                .expect("2x2")
        })
        .collect()
}

/// `I_k = int_0^2 x^k ((2-x)x)^(lambda-3/2) dx` for `k < len`, via
/// `I_{k+1} = I_k 2 (k + lambda - 1/2) / (k + 2 lambda - 1)`.
fn gegenbauer_core(lambda: &Rational, len: usize, normalization: Normalization) -> Result<Vec<Rational>> {
    let first = match normalization {
        Normalization::Relative => Rational::one(),
        Normalization::Absolute => {
            let m = half_shift(lambda).filter(|&m| m >= 1).ok_or_else(|| {
                Error::InexactParameters(format!(
                    "absolute moments need 2 lambda odd and >= 3, got lambda = {lambda}"
                ))
            })?;
            // 2^(2 lambda - 2) B(lambda - 1/2, lambda - 1/2)
            pow2(2 * m - 1) * beta_int(m as u32, m as u32)
        }
    };
    let mut out = Vec::with_capacity(len);
    let mut cur = first;
    for k in 0..len {
        out.push(cur.clone());
        let k = int(k as i64);
        cur = cur * int(2) * (&k + lambda - half()) / (&k + lambda * int(2) - int(1));
    }
    Ok(out)
}

/// `m_k = int_{-1}^1 x^k (1-x)^alpha (1+x)^beta dx` for `k < len`, assembled
/// from `n_j = int (1-x)^alpha (1+x)^(beta+j) dx` with
/// `n_{j+1} / n_j = 2 (beta + j + 1) / (alpha + beta + j + 2)` and
/// `x^k = sum_j C(k, j) (-1)^(k-j) (1+x)^j`.
fn jacobi_core(alpha: &Rational, beta: &Rational, len: usize, normalization: Normalization) -> Result<Vec<Rational>> {
    let first = match normalization {
        Normalization::Relative => Rational::one(),
        Normalization::Absolute => {
            let (a, b) = match (as_integer(alpha), as_integer(beta)) {
                (Some(a), Some(b)) if a >= 0 && b >= 0 => (a, b),
                _ => {
                    return Err(Error::InexactParameters(format!(
                        "absolute Jacobi moments need integer alpha, beta >= 0, got {alpha}, {beta}"
                    )))
                }
            };
            pow2(a + b + 1) * beta_int((a + 1) as u32, (b + 1) as u32)
        }
    };
    let mut ns = Vec::with_capacity(len);
    let mut cur = first;
    for j in 0..len {
        ns.push(cur.clone());
        let j = int(j as i64);
        cur = cur * int(2) * (beta + &j + int(1)) / (alpha + beta + &j + int(2));
    }
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = Rational::zero();
        let mut binom = Rational::one();
        for (j, nj) in ns.iter().enumerate().take(k + 1) {
            let term = &binom * nj;
            if (k - j) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
            binom = binom * int((k - j) as i64) / int(j as i64 + 1);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Closed-form recurrence of the monic polynomials for `Gegenbauer02(lambda)`:
/// `B_n = (lambda - 1) / (2 (n + lambda)(n + lambda - 1)) S + I` and
/// `A_n = n (n + 2 lambda - 2) / (4 (n + lambda - 1)^2) I`, `S = [[0, 1], [1, 0]]`.
pub fn gegenbauer02_operator(lambda: &Rational, levels: usize) -> Result<BlockTridiag> {
    if *lambda <= half() {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must exceed 1/2")));
    }
    let s = MatrixR::from_ints(&[[0, 1], [1, 0]]);
    BlockTridiag::from_fn(
        2,
        levels,
        |n| {
            let n = int(n as i64);
            let c = (lambda - int(1)) / (int(2) * (&n + lambda) * (&n + lambda - int(1)));
            &s.scale(&c) + &MatrixR::identity(2)
        },
        |n| {
            let n = int(n as i64);
            let d = &n + lambda - int(1);
            MatrixR::scalar(2, &n * (&n + lambda * int(2) - int(2)) / (int(4) * &d * &d))
        },
    )
}

#[derive(Serialize, Deserialize)]
struct WeightRepr {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<RationalStr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<RationalStr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<RationalStr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha0: Option<MatrixR>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_sign: Option<i8>,
    #[serde(default)]
    deltas: Vec<Delta>,
    #[serde(default = "default_block_size")]
    block_size: usize,
}

fn default_block_size() -> usize {
    2
}

impl TryFrom<WeightRepr> for Weight {
    type Error = Error;

    fn try_from(r: WeightRepr) -> Result<Self> {
        let need = |v: Option<RationalStr>, name: &str| {
            v.map(|v| v.0)
                .ok_or_else(|| Error::Structure(format!("weight kind {:?} needs {name:?}", r.kind)))
        };
        let mut w = match r.kind.as_str() {
            "gegenbauer02" => Weight::gegenbauer02(need(r.lambda.clone(), "lambda")?, r.block_size)?,
            "jacobi" => Weight::jacobi(need(r.alpha.clone(), "alpha")?, need(r.beta.clone(), "beta")?, r.block_size)?,
            "darboux_gegenbauer02" => {
                if r.block_size != 2 {
                    return Err(Error::UnsupportedKind("the Darboux-transformed weight is 2x2".into()));
                }
                let alpha0 = r
                    .alpha0
                    .clone()
                    .ok_or_else(|| Error::Structure("darboux_gegenbauer02 needs \"alpha0\"".into()))?;
                wtilde_weight(
                    need(r.lambda.clone(), "lambda")?,
                    &alpha0,
                    r.delta_sign.unwrap_or(DEFAULT_DELTA_SIGN),
                )?
            }
            other => return Err(Error::UnsupportedKind(format!("weight kind {other:?}"))),
        };
        // The derived origin mass of the transformed weight is written out on
        // serialization; skip it when reading back.
        let derived = w.deltas.clone();
        for d in r.deltas {
            if derived.contains(&d) {
                continue;
            }
            w = w.with_delta(d.point, d.mass)?;
        }
        Ok(w)
    }
}

impl From<Weight> for WeightRepr {
    fn from(w: Weight) -> Self {
        let mut r = WeightRepr {
            kind: String::new(),
            lambda: None,
            alpha: None,
            beta: None,
            alpha0: None,
            delta_sign: None,
            deltas: w.deltas,
            block_size: w.block_size,
        };
        match w.kind {
            WeightKind::Gegenbauer02 { lambda } => {
                r.kind = "gegenbauer02".into();
                r.lambda = Some(RationalStr(lambda));
            }
            WeightKind::Jacobi { alpha, beta } => {
                r.kind = "jacobi".into();
                r.alpha = Some(RationalStr(alpha));
                r.beta = Some(RationalStr(beta));
            }
            WeightKind::DarbouxGegenbauer02 { lambda, alpha0, delta_sign } => {
                r.kind = "darboux_gegenbauer02".into();
                r.lambda = Some(RationalStr(lambda));
                r.alpha0 = Some(alpha0);
                r.delta_sign = Some(delta_sign);
            }
        }
        r
    }
}
