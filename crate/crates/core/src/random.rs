//! Seeded random inputs: Ginibre density matrices, indefinite trace-one
//! Hermitian matrices and Haar-distributed unitaries.
//!
//! All generators draw from a caller-supplied RNG; [`seeded_rng`] gives the
//! ChaCha8 stream used throughout the suites.

use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, CMatrix};
use crate::symspace::{QuditOperator, SymBasis, SymOperator};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex normal with `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    Array2::from_shape_simple_fn((rows, cols), || complex_normal(rng))
}

/// `G G† / Tr(G G†)` for a square Ginibre `G`: positive semidefinite, trace 1.
pub fn ginibre_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = ginibre(rng, n, n);
    let rho = g.dot(&linalg::adjoint(&g));
    let tr = linalg::trace(&rho).re;
    rho.mapv(|z| z / tr)
}

/// Random Hermitian matrix shifted along the identity to unit trace. For
/// `n ≥ 2` it is typically indefinite.
pub fn hermitian_trace_one<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let a = ginibre(rng, n, n);
    let mut h = (&a + &linalg::adjoint(&a)).mapv(|z| z * 0.5);
    let shift = (linalg::trace(&h).re - 1.0) / n as f64;
    for i in 0..n {
        h[[i, i]] = Complex64::new(h[[i, i]].re - shift, 0.0);
    }
    h
}

/// Haar-random unitary from a Gram–Schmidt QR of a Ginibre matrix, with the
/// phases of `R`'s diagonal absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> QuditOperator {
    let g = ginibre(rng, d, d);
    let mut q = Array2::<Complex64>::zeros((d, d));
    for j in 0..d {
        let mut v = g.column(j).to_owned();
        for i in 0..j {
            let qi = q.column(i);
            let proj: Complex64 = qi.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            v.zip_mut_with(&qi, |x, y| *x -= proj * y);
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // v/norm has positive R_jj, which is the Haar-correct phase choice
        q.column_mut(j).assign(&v.mapv(|z| z / norm));
    }
    QuditOperator::new(q).expect("square d >= 2")
}

pub fn psd_input<R: Rng + ?Sized>(rng: &mut R, basis: &Arc<SymBasis>) -> SymOperator {
    let x = ginibre_density(rng, basis.len());
    SymOperator::new(Arc::clone(basis), x).expect("shape matches basis")
}

pub fn hermitian_input<R: Rng + ?Sized>(rng: &mut R, basis: &Arc<SymBasis>) -> SymOperator {
    let x = hermitian_trace_one(rng, basis.len());
    SymOperator::new(Arc::clone(basis), x).expect("shape matches basis")
}
