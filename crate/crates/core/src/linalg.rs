//! Small dense complex-matrix helpers shared by the other modules.

use ndarray::Array2;
use num_complex::Complex64;

pub type CMatrix = Array2<Complex64>;

pub fn adjoint(m: &CMatrix) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

pub fn identity(n: usize) -> CMatrix {
    Array2::from_diag_elem(n, Complex64::new(1.0, 0.0))
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diag().iter().sum()
}

/// Largest entrywise modulus of `a - b`. Panics on shape mismatch.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &adjoint(m))
}

/// Positive-semidefiniteness test for a Hermitian matrix: succeeds iff a
/// Cholesky factorization of `m + tol·I` exists, i.e. iff the smallest
/// eigenvalue exceeds `-tol`.
pub fn is_psd(m: &CMatrix, tol: f64) -> bool {
    let n = m.nrows();
    let mut l = Array2::<Complex64>::zeros((n, n));
    for j in 0..n {
        let mut diag = m[[j, j]].re + tol;
        for k in 0..j {
            diag -= l[[j, k]].norm_sqr();
        }
        if diag <= 0.0 {
            return false;
        }
        let pivot = diag.sqrt();
        l[[j, j]] = Complex64::new(pivot, 0.0);
        for i in j + 1..n {
            let mut s = m[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]].conj();
            }
            l[[i, j]] = s / pivot;
        }
    }
    true
}
