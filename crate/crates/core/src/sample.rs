//! Random test objects: Hermitian matrices, unitaries, density matrices and
//! valid generators.

use num_complex::Complex64;
use rand::Rng;

use crate::gksl::{DensityMatrix, GkslGenerator};
use crate::numcore::matrix::ComplexMatrix;
use crate::numcore::matrix_exp;

fn gaussian_entry<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| gaussian_entry(rng))
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    complex_matrix(rng, dim).hermitian_part()
}

/// `exp(iH)` for a random Hermitian `H`.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let h = hermitian(rng, dim).scale(Complex64::new(0.0, 2.0));
    matrix_exp(&h).expect("bounded norm")
}

/// `G G† / tr(G G†)`; full rank with probability one.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = complex_matrix(rng, dim);
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    DensityMatrix::new(p.scale_real(1.0 / tr)).expect("valid by construction")
}

/// Kossakowski matrix `B B† · scale`, PSD by construction.
pub fn psd<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> ComplexMatrix {
    let b = complex_matrix(rng, dim);
    (&b * &b.adjoint()).scale_real(scale).hermitian_part()
}

/// Random valid generator with `m` Lindblad operators.
pub fn generator<R: Rng + ?Sized>(rng: &mut R, dim: usize, m: usize) -> GkslGenerator {
    let h = hermitian(rng, dim);
    let ops = (0..m).map(|_| complex_matrix(rng, dim)).collect();
    let a = if m == 0 {
        ComplexMatrix::zeros(0)
    } else {
        psd(rng, m, 0.5)
    };
    GkslGenerator::new(h, ops, a).expect("valid by construction")
}
