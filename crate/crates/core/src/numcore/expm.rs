//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants of degree 3, 5, 7, 9 or 13 (Higham 2005 thresholds).

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::{Error, Result};

/// Largest accepted 1-norm. Beyond this the number of squarings exceeds ~40
/// and the result is dominated by rounding.
pub const MAX_NORM: f64 = 1e12;

const THETA: [(usize, f64); 4] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_230e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
];
const THETA_13: f64 = 5.371_920_351_148_152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17_297_280.0,
    8_648_640.0,
    1_995_840.0,
    277_200.0,
    25_200.0,
    1_512.0,
    56.0,
    1.0,
];
const B9: [f64; 10] = [
    17_643_225_600.0,
    8_821_612_800.0,
    2_075_673_600.0,
    302_702_400.0,
    30_270_240.0,
    2_162_160.0,
    110_880.0,
    3_960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

type M = DMatrix<Complex64>;

pub fn matrix_exp(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.ensure_finite()?;
    let norm = m.norm_one();
    if norm > MAX_NORM {
        return Err(Error::Overflow { norm, bound: MAX_NORM });
    }
    let n = m.dim();
    let a = m.inner();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }

    for &(degree, theta) in &THETA {
        if norm <= theta {
            let (u, v) = match degree {
                3 => pade_low(a, &B3),
                5 => pade_low(a, &B5),
                7 => pade_low(a, &B7),
                _ => pade_low(a, &B9),
            };
            return finish(u, v, 0, norm);
        }
    }

    let squarings = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    let scaled = a * Complex64::new(2f64.powi(-squarings), 0.0);
    let (u, v) = pade13(&scaled);
    finish(u, v, squarings, norm)
}

/// Odd/even split `p(A) = V + U` for degrees up to 9.
fn pade_low(a: &M, b: &[f64]) -> (M, M) {
    let n = a.nrows();
    let id = M::identity(n, n);
    let a2 = a * a;
    let mut power = id.clone();
    let mut odd = &id * c(b[1]);
    let mut even = &id * c(b[0]);
    for k in 1..b.len() / 2 {
        power = &power * &a2;
        odd += &power * c(b[2 * k + 1]);
        even += &power * c(b[2 * k]);
    }
    (a * odd, even)
}

fn pade13(a: &M) -> (M, M) {
    let b = &B13;
    let n = a.nrows();
    let id = M::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * c(b[13]) + &a4 * c(b[11]) + &a2 * c(b[9]))
        + &a6 * c(b[7])
        + &a4 * c(b[5])
        + &a2 * c(b[3])
        + &id * c(b[1]);
    let u = a * inner_u;
    let v = &a6 * (&a6 * c(b[12]) + &a4 * c(b[10]) + &a2 * c(b[8]))
        + &a6 * c(b[6])
        + &a4 * c(b[4])
        + &a2 * c(b[2])
        + &id * c(b[0]);
    (u, v)
}

/// Solves `(V - U) X = V + U`, then squares `squarings` times.
fn finish(u: M, v: M, squarings: i32, norm: f64) -> Result<ComplexMatrix> {
    let p = &v + &u;
    let q = &v - &u;
    let mut x = q.lu().solve(&p).ok_or(Error::Overflow { norm, bound: MAX_NORM })?;
    for _ in 0..squarings {
        x = &x * &x;
    }
    let out = ComplexMatrix::from_inner(x);
    if !out.is_finite() {
        return Err(Error::Overflow { norm, bound: MAX_NORM });
    }
    Ok(out)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
