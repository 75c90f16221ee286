//! Closed-form shrinking factor and fidelity of the optimal cloner, the
//! generalized Bloch decomposition, and residuals against the scaling law
//! `ρ_out = η ρ_in + (1 - η)/d · 1`.
//!
//! Generator order (frozen): all symmetric pairs `(j < k)` row-major, then
//! all antisymmetric pairs `(j < k)` row-major, then the diagonal
//! generators by increasing rank. For `d = 2` this is `(σx, σy, σz)`.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::exact::{self, Rational};
use crate::symspace::QuditOperator;

/// Tolerance on Hermiticity when extracting a Bloch vector.
pub const BLOCH_HERMITIAN_TOL: f64 = 1e-9;

fn check_grid(d: usize, small: usize, large: usize) -> Result<()> {
    if d < 2 {
        return Err(invalid(format!("d must be at least 2, got {d}")));
    }
    if small == 0 {
        return Err(invalid("the number of input copies must be at least 1"));
    }
    if large < small {
        return Err(invalid(format!(
            "output copies {large} fewer than input copies {small}"
        )));
    }
    Ok(())
}

/// Optimal shrinking factor `M (L + d) / (L (M + d))`.
pub fn shrink(d: usize, m: usize, l: usize) -> Result<Rational> {
    check_grid(d, m, l)?;
    let (d, m, l) = (d as i64, m as i64, l as i64);
    Ok(exact::from_int(m * (l + d)) / exact::from_int(l * (m + d)))
}

/// Optimal single-copy fidelity `(N (M + d) + M - N) / (M (N + d))`.
pub fn fidelity(d: usize, n: usize, m: usize) -> Result<Rational> {
    check_grid(d, n, m)?;
    let (d, n, m) = (d as i64, n as i64, m as i64);
    Ok(exact::from_int(n * (m + d) + m - n) / exact::from_int(m * (n + d)))
}

/// Generalized Gell-Mann matrices, normalized to `Tr(τ_i τ_j) = 2 δ_ij`.
pub fn generators(d: usize) -> Result<Vec<QuditOperator>> {
    if d < 2 {
        return Err(invalid(format!("d must be at least 2, got {d}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut m = Array2::zeros((d, d));
            m[[j, k]] = one;
            m[[k, j]] = one;
            out.push(QuditOperator::new(m)?);
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut m = Array2::zeros((d, d));
            m[[j, k]] = -i;
            m[[k, j]] = i;
            out.push(QuditOperator::new(m)?);
        }
    }
    for rank in 1..d {
        let norm = (2.0 / (rank * (rank + 1)) as f64).sqrt();
        let mut m = Array2::zeros((d, d));
        for j in 0..rank {
            m[[j, j]] = one * norm;
        }
        m[[rank, rank]] = one * (-(rank as f64) * norm);
        out.push(QuditOperator::new(m)?);
    }
    Ok(out)
}

/// Coefficients `s_i` in `ρ = 1/d + ½ Σ s_i τ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochVector {
    d: usize,
    s: Vec<f64>,
}

impl BlochVector {
    pub fn new(d: usize, s: Vec<f64>) -> Result<Self> {
        if d < 2 {
            return Err(invalid(format!("d must be at least 2, got {d}")));
        }
        if s.len() != d * d - 1 {
            return Err(Error::DimensionMismatch {
                expected: d * d - 1,
                found: s.len(),
            });
        }
        Ok(BlochVector { d, s })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn components(&self) -> &[f64] {
        &self.s
    }

    pub fn norm(&self) -> f64 {
        self.s.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// `s_i = Tr(ρ τ_i)`.
pub fn bloch_vector(rho: &QuditOperator) -> Result<BlochVector> {
    if !rho.is_hermitian(BLOCH_HERMITIAN_TOL) {
        return Err(Error::Validation(
            "Bloch vectors are only defined for Hermitian operators".into(),
        ));
    }
    let d = rho.d();
    let s = generators(d)?
        .iter()
        .map(|tau| hs_product(rho, tau).re)
        .collect();
    BlochVector::new(d, s)
}

pub fn rho_from_bloch(b: &BlochVector) -> Result<QuditOperator> {
    let d = b.d;
    let mut m = QuditOperator::identity(d).scaled(1.0 / d as f64).entries().clone();
    for (s, tau) in b.s.iter().zip(generators(d)?) {
        m.scaled_add(Complex64::new(0.5 * s, 0.0), tau.entries());
    }
    QuditOperator::new(m)
}

/// `Tr(a b)`.
fn hs_product(a: &QuditOperator, b: &QuditOperator) -> Complex64 {
    let (a, b) = (a.entries(), b.entries());
    let n = a.nrows();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += a[[i, j]] * b[[j, i]];
        }
    }
    s
}

/// Deviation of an output reduction from the scaling law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingResidual {
    /// Max entrywise `|ρ_out - (η ρ_in + (1-η)/d · 1)|`.
    pub matrix: f64,
    /// Max `|s_out,i - η s_in,i|`.
    pub bloch: f64,
}

impl ScalingResidual {
    pub fn max(&self) -> f64 {
        self.matrix.max(self.bloch)
    }
}

pub fn scaling_residual(
    rho_in_red: &QuditOperator,
    rho_out_red: &QuditOperator,
    d: usize,
    m: usize,
    l: usize,
) -> Result<ScalingResidual> {
    let eta = exact::to_f64(&shrink(d, m, l)?);
    scaling_residual_with_eta(rho_in_red, rho_out_red, eta)
}

/// Same as [`scaling_residual`] against an explicit `η`.
pub fn scaling_residual_with_eta(
    rho_in_red: &QuditOperator,
    rho_out_red: &QuditOperator,
    eta: f64,
) -> Result<ScalingResidual> {
    let d = rho_in_red.d();
    if rho_out_red.d() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho_out_red.d(),
        });
    }
    let mut predicted = rho_in_red.scaled(eta).entries().clone();
    for i in 0..d {
        predicted[[i, i]] += (1.0 - eta) / d as f64;
    }
    let matrix = crate::linalg::max_abs_diff(rho_out_red.entries(), &predicted);
    let s_in = bloch_vector(rho_in_red)?;
    let s_out = bloch_vector(rho_out_red)?;
    let bloch = s_in
        .s
        .iter()
        .zip(&s_out.s)
        .map(|(a, b)| (b - eta * a).abs())
        .fold(0.0, f64::max);
    Ok(ScalingResidual { matrix, bloch })
}
