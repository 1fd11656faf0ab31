#![allow(dead_code)]

use mvop_core::blockop::{darboux_factorize, darboux_transform, BlockTridiag};
use mvop_core::bispec::{EigenSeq, RightDiffOp};
use mvop_core::exact::{int, rat, MatPoly, MatrixR, PolyN, Rational};
use mvop_core::mop::recurrence_from_moments;
use mvop_core::weights::{gegenbauer02_operator, moments, Normalization, Weight};

pub fn e() -> MatrixR {
    MatrixR::from_ints(&[[1, -1], [-1, 1]])
}

pub fn swap() -> MatrixR {
    MatrixR::from_ints(&[[0, 1], [1, 0]])
}

/// `[c_0, c_1, ...] / den`.
pub fn coeffs(c: &[i64], den: i64) -> Vec<Rational> {
    c.iter().map(|&k| rat(k, den)).collect()
}

pub fn m2(rows: [[Rational; 2]; 2]) -> MatrixR {
    MatrixR::from_rows(rows.into_iter().map(Vec::from).collect()).unwrap()
}

pub fn polyn(c: &[i64], den: i64) -> PolyN {
    PolyN::new(coeffs(c, den))
}

pub fn grid(g: [[PolyN; 2]; 2]) -> EigenSeq {
    EigenSeq::poly_in_n(g.into_iter().map(Vec::from).collect()).unwrap()
}

/// Darboux transform of the `Gegenbauer02(lambda)` recurrence.
pub fn darboux_l(lambda: Rational, alpha0: &MatrixR, levels: usize) -> BlockTridiag {
    let l0 = gegenbauer02_operator(&lambda, levels).unwrap();
    darboux_transform(&darboux_factorize(&l0, alpha0).unwrap()).unwrap()
}

pub fn example1_alpha0() -> MatrixR {
    MatrixR::from_ints(&[[5, 2], [3, 1]])
}

pub fn example2_alpha0() -> MatrixR {
    MatrixR::from_ints(&[[3, -1], [5, 7]])
}

pub fn example3_alpha0() -> MatrixR {
    MatrixR::from_ints(&[[1, 0], [0, 0]])
}

pub fn example1_l(levels: usize) -> BlockTridiag {
    darboux_l(rat(5, 2), &example1_alpha0(), levels)
}

pub fn example2_l(levels: usize) -> BlockTridiag {
    darboux_l(rat(7, 2), &example2_alpha0(), levels)
}

pub fn example3_l(levels: usize) -> BlockTridiag {
    darboux_l(rat(9, 2), &example3_alpha0(), levels)
}

pub fn example1_operator() -> RightDiffOp {
    let f4 = MatPoly::scalar_times(&coeffs(&[0, 0, 4, -4, 1], 1), &e());
    let f3 = MatPoly::scalar_times(&coeffs(&[0, 16, -32, 12], 1), &e());
    let f2 = MatPoly::scalar_times(&coeffs(&[0, -216, 168], 5), &e());
    let f1 = MatPoly::new(
        2,
        vec![
            m2([[rat(48, 5), int(0)], [rat(-48, 5), int(0)]]),
            m2([[int(8), rat(-64, 5)], [int(-16), rat(104, 5)]]),
        ],
    )
    .unwrap();
    let f0 = MatPoly::constant(m2([[rat(-88, 5), int(-8)], [rat(-32, 5), int(0)]]));
    RightDiffOp::new(2, vec![f0, f1, f2, f3, f4]).unwrap()
}

pub fn example1_lambda() -> EigenSeq {
    grid([
        [
            PolyN::linear(2).mul(&polyn(&[-44, 3, 20, 5], 5)),
            polyn(&[-40, 14, -43, -30, -5], 5),
        ],
        [
            polyn(&[-32, -2, -43, -30, -5], 5),
            polyn(&[0, 26, 43, 30, 5], 5),
        ],
    ])
}

/// Example 2's operator with the second-order coefficient over `den`.
fn example2_operator_with(den: i64) -> RightDiffOp {
    let f6 = MatPoly::scalar_times(&coeffs(&[0, 0, 0, -8, 12, -6, 1], 15), &e());
    let f5 = MatPoly::scalar_times(&coeffs(&[0, 0, -32, 72, -48, 10], 5), &e());
    let f4 = MatPoly::scalar_times(&coeffs(&[0, -16, 72, -72, 20], 1), &e());
    let f3 = MatPoly::scalar_times(&coeffs(&[0, 96, -192, 80], 1), &e());
    let f2 = MatPoly::scalar_times(&coeffs(&[0, -16 * 148, 16 * 131], den), &e());
    let f1 = MatPoly::new(
        2,
        vec![
            m2([[rat(32 * 28, 19), rat(-32 * 18, 19)], [rat(-32 * 28, 19), rat(32 * 18, 19)]]),
            m2([[rat(-32 * 8, 19), rat(32 * 3, 19)], [rat(32 * 9, 19), rat(-32 * 4, 19)]]),
        ],
    )
    .unwrap();
    let f0 = MatPoly::constant(m2([[rat(-416, 19), rat(-192, 19)], [rat(352, 19), int(0)]]));
    RightDiffOp::new(2, vec![f0, f1, f2, f3, f4, f5, f6]).unwrap()
}

/// As printed, `F_2 = 16 t (131 t - 148) / 39 E`.
pub fn example2_operator_printed() -> RightDiffOp {
    example2_operator_with(39)
}

/// `F_2` over 19 instead of 39; every other coefficient as printed.
pub fn example2_operator_recovered() -> RightDiffOp {
    example2_operator_with(19)
}

pub fn example2_lambda() -> EigenSeq {
    let c = [0, 0, 2446, 4275, 1615, 285, 19];
    let neg: Vec<i64> = c.iter().map(|k| -k).collect();
    let plus = |extra: &[i64], base: &[i64]| {
        let mut v = base.to_vec();
        for (i, x) in extra.iter().enumerate() {
            v[i] += x;
        }
        polyn(&v, 285)
    };
    grid([
        [plus(&[-6240, -12480], &c), plus(&[-2880, 10080], &neg)],
        [plus(&[5280, 12960], &neg), plus(&[0, -10560], &c)],
    ])
}

pub fn example3_lambda() -> EigenSeq {
    example3_lambda_with(8)
}

/// The `(0, 1)` entry with `n + 9` in place of the printed `n + 8`.
pub fn example3_lambda_recovered() -> EigenSeq {
    example3_lambda_with(9)
}

fn example3_lambda_with(shift: i64) -> EigenSeq {
    let lin = PolyN::linear;
    let a = PolyN::from_ints(&[840, 170, 59, 10, 1]);
    let b = PolyN::from_ints(&[1080, 322, 95, 14, 1]);
    let g = PolyN::from_ints(&[-20160, 840, 1198, 651, 169, 21, 1]);
    let d = PolyN::from_ints(&[1512, 558, 143, 18, 1]);
    let minus = PolyN::constant(int(-1));
    grid([
        [
            PolyN::product([&lin(-3), &lin(6), &lin(7), &lin(8), &a]),
            PolyN::product([&minus, &lin(-2), &lin(0), &lin(7), &lin(shift), &b]),
        ],
        [
            PolyN::product([&minus, &lin(1), &lin(6), &g]),
            PolyN::product([&lin(-1), &lin(0), &lin(1), &lin(10), &d]),
        ],
    ])
}

/// Recurrence of `(1-x)^alpha (1+x)^beta [[1, x], [x, 1]]` (or its scalar
/// density when `block_size` is 1) plus `W delta_1 + V delta_{-1}`.
pub fn jacobi_l(
    alpha: i64,
    beta: i64,
    block_size: usize,
    v: Option<&MatrixR>,
    w: Option<&MatrixR>,
    levels: usize,
) -> BlockTridiag {
    let mut wt = Weight::jacobi(int(alpha), int(beta), block_size).unwrap();
    if let Some(w) = w {
        wt = wt.with_delta(int(1), w.clone()).unwrap();
    }
    if let Some(v) = v {
        wt = wt.with_delta(int(-1), v.clone()).unwrap();
    }
    let mu = moments(&wt, 2 * levels + 1, Normalization::Absolute).unwrap();
    recurrence_from_moments(&mu, levels).unwrap()
}

/// Second-order operator `F_2 = (1 - x^2) E`, `F_1 = (c - x (alpha + beta + 3)) E`.
pub fn jacobi_second_order(first_order_const: i64, alpha: i64, beta: i64) -> RightDiffOp {
    let f2 = MatPoly::scalar_times(&coeffs(&[1, 0, -1], 1), &e());
    let f1 = MatPoly::scalar_times(&coeffs(&[first_order_const, -(alpha + beta + 3)], 1), &e());
    RightDiffOp::new(2, vec![MatPoly::zero(2), f1, f2]).unwrap()
}

/// `Lambda_n = -n (n + s + 2) E`.
pub fn jacobi_eigen(s: i64) -> EigenSeq {
    let diag = PolyN::from_ints(&[0, -(s + 2), -1]);
    let off = diag.scale(&int(-1));
    grid([[diag.clone(), off.clone()], [off, diag]])
}

/// `int_a^b f` by double exponential quadrature.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    quadrature::double_exponential::integrate(f, a, b, 1e-14).integral
}

pub fn rel_err(approx: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        approx.abs()
    } else {
        ((approx - exact) / exact).abs()
    }
}
