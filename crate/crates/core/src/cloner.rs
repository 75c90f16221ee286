//! Cloning amplitudes and the cloning channel on the symmetric subspace.
//!
//! The cloner maps an input basis state `|j⟩` of weight `M` to
//! `Σ_k α(j, k) |j + k⟩ ⊗ |R_k⟩`, where `k` runs over the compositions of
//! `L - M` (the added particles) and `R_k` is an orthonormal ancilla basis.
//! Tracing out the ancilla gives the channel
//! `Y[j + k, j' + k] += X[j, j'] · α(j, k) · α(j', k)`, which is what
//! [`clone_channel`] evaluates without ever building the ancilla.

use std::sync::Arc;

use ndarray::Array2;
use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::One;

use crate::error::{invalid, Error, Result};
use crate::exact::{self, Rational};
use crate::linalg::CMatrix;
use crate::symspace::{enumerate_basis, Composition, SymBasis, SymOperator};

/// `α(j, k)²` for qubits, with `j` and `k` the number of particles in
/// level 1 of the input and of the added block:
///
/// `(L-M)! (M+1)! (L-j-k)! (j+k)! / ((L+1)! (L-M-k)! (M-j)! j! k!)`
pub fn alpha_qubit_squared(j: usize, k: usize, m: usize, l: usize) -> Result<Rational> {
    if l < m {
        return Err(invalid(format!("L = {l} must be at least M = {m}")));
    }
    if j > m {
        return Err(invalid(format!("j = {j} out of range 0..={m}")));
    }
    if k > l - m {
        return Err(invalid(format!("k = {k} out of range 0..={}", l - m)));
    }
    let f = exact::factorial;
    let num = f(l - m) * f(m + 1) * f(l - j - k) * f(j + k);
    let den = f(l + 1) * f(l - m - k) * f(m - j) * f(j) * f(k);
    Ok(exact::ratio(num, den))
}

pub fn alpha_qubit(j: usize, k: usize, m: usize, l: usize) -> Result<f64> {
    Ok(exact::to_f64(&alpha_qubit_squared(j, k, m, l)?).sqrt())
}

/// `α(j, k)²` for `d` levels:
///
/// `(L-M)! (M+d-1)! / (L+d-1)! · Π_i (j_i + k_i)! / (j_i! k_i!)`
pub fn alpha_d_squared(j: &Composition, k: &Composition, m: usize, l: usize) -> Result<Rational> {
    if j.d() != k.d() {
        return Err(Error::DimensionMismatch {
            expected: j.d(),
            found: k.d(),
        });
    }
    if l < m {
        return Err(invalid(format!("L = {l} must be at least M = {m}")));
    }
    if j.weight() != m {
        return Err(invalid(format!("input {j} does not have weight M = {m}")));
    }
    if k.weight() != l - m {
        return Err(invalid(format!("added {k} does not have weight L - M = {}", l - m)));
    }
    let d = j.d();
    let f = exact::factorial;
    let prefactor = exact::ratio(f(l - m) * f(m + d - 1), f(l + d - 1));
    let product = j
        .counts()
        .iter()
        .zip(k.counts())
        .fold(BigUint::one(), |acc, (&ji, &ki)| acc * exact::binomial(ji + ki, ki));
    Ok(prefactor * exact::ratio(product, BigUint::one()))
}

pub fn alpha_d(j: &Composition, k: &Composition, m: usize, l: usize) -> Result<f64> {
    Ok(exact::to_f64(&alpha_d_squared(j, k, m, l)?).sqrt())
}

/// Number of ancilla states, `C(L - M + d - 1, d - 1)`.
pub fn ancilla_dim(d: usize, m: usize, l: usize) -> Result<BigUint> {
    if d < 2 {
        return Err(invalid(format!("d must be at least 2, got {d}")));
    }
    if l < m {
        return Err(invalid(format!("L = {l} must be at least M = {m}")));
    }
    Ok(exact::binomial(l - m + d - 1, d - 1))
}

/// One entry of an amplitude table.
#[derive(Clone, Debug)]
pub struct AmplitudeRow<'a> {
    pub input: &'a Composition,
    pub added: &'a Composition,
    pub squared: &'a Rational,
    pub alpha: f64,
}

/// The table `α(j, k)` for fixed `(d, M, L)`, plus the output index of
/// every `j + k`.
#[derive(Clone, Debug)]
pub struct CloneAmplitudes {
    input: Arc<SymBasis>,
    added: Arc<SymBasis>,
    output: Arc<SymBasis>,
    squared: Vec<Vec<Rational>>,
    alpha: Vec<Vec<f64>>,
    target: Vec<Vec<usize>>,
}

impl CloneAmplitudes {
    pub fn new(d: usize, m: usize, l: usize) -> Result<Self> {
        if l < m {
            return Err(invalid(format!("L = {l} must be at least M = {m}")));
        }
        Self::with_input_basis(Arc::new(enumerate_basis(d, m)?), l)
    }

    fn with_input_basis(input: Arc<SymBasis>, l: usize) -> Result<Self> {
        let (d, m) = (input.d(), input.m());
        if l < m {
            return Err(invalid(format!("L = {l} must be at least M = {m}")));
        }
        let added = Arc::new(enumerate_basis(d, l - m)?);
        let output = Arc::new(enumerate_basis(d, l)?);
        let mut squared = Vec::with_capacity(input.len());
        let mut alpha = Vec::with_capacity(input.len());
        let mut target = Vec::with_capacity(input.len());
        for j in input.compositions() {
            let mut sq_row = Vec::with_capacity(added.len());
            let mut a_row = Vec::with_capacity(added.len());
            let mut t_row = Vec::with_capacity(added.len());
            for k in added.compositions() {
                let sq = alpha_d_squared(j, k, m, l)?;
                a_row.push(exact::to_f64(&sq).sqrt());
                sq_row.push(sq);
                let jk = j.plus(k)?;
                t_row.push(output.index_of(&jk).expect("j + k has weight L"));
            }
            squared.push(sq_row);
            alpha.push(a_row);
            target.push(t_row);
        }
        Ok(CloneAmplitudes {
            input,
            added,
            output,
            squared,
            alpha,
            target,
        })
    }

    pub fn d(&self) -> usize {
        self.input.d()
    }

    pub fn m(&self) -> usize {
        self.input.m()
    }

    pub fn l(&self) -> usize {
        self.output.m()
    }

    pub fn input_basis(&self) -> &Arc<SymBasis> {
        &self.input
    }

    pub fn added_basis(&self) -> &Arc<SymBasis> {
        &self.added
    }

    pub fn output_basis(&self) -> &Arc<SymBasis> {
        &self.output
    }

    /// Exact `α(j, k)²` by basis indices.
    pub fn squared(&self, j: usize, k: usize) -> &Rational {
        &self.squared[j][k]
    }

    pub fn alpha(&self, j: usize, k: usize) -> f64 {
        self.alpha[j][k]
    }

    /// Output basis index of `j + k`.
    pub fn target(&self, j: usize, k: usize) -> usize {
        self.target[j][k]
    }

    /// `Σ_k α(j, k)²` for every input composition, exactly.
    pub fn normalization_sums(&self) -> Vec<Rational> {
        self.squared
            .iter()
            .map(|row| row.iter().fold(exact::from_int(0), |acc, x| acc + x))
            .collect()
    }

    /// Rows in canonical `(j, k)` order.
    pub fn rows(&self) -> impl Iterator<Item = AmplitudeRow<'_>> {
        self.input.compositions().iter().enumerate().flat_map(move |(ij, j)| {
            self.added
                .compositions()
                .iter()
                .enumerate()
                .map(move |(ik, k)| AmplitudeRow {
                    input: j,
                    added: k,
                    squared: &self.squared[ij][ik],
                    alpha: self.alpha[ij][ik],
                })
        })
    }

    /// Applies the traced-out cloning channel to `x`.
    pub fn apply(&self, x: &SymOperator) -> Result<SymOperator> {
        if x.d() != self.d() || x.m() != self.m() {
            return Err(invalid(format!(
                "operator lives on (d = {}, m = {}), table expects (d = {}, m = {})",
                x.d(),
                x.m(),
                self.d(),
                self.m()
            )));
        }
        let n_in = self.input.len();
        let n_out = self.output.len();
        let xe = x.entries();
        let mut y = Array2::<Complex64>::zeros((n_out, n_out));
        for a in 0..n_in {
            for b in 0..n_in {
                let xab = xe[[a, b]];
                if xab == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..self.added.len() {
                    let w = self.alpha[a][k] * self.alpha[b][k];
                    y[[self.target[a][k], self.target[b][k]]] += xab * w;
                }
            }
        }
        SymOperator::new(Arc::clone(&self.output), y)
    }

    /// `⟨V e_a, V e_b⟩` over the input basis.
    pub fn gram(&self) -> CMatrix {
        let n = self.input.len();
        let mut g = Array2::<Complex64>::zeros((n, n));
        for a in 0..n {
            for b in 0..n {
                let mut s = 0.0;
                for k in 0..self.added.len() {
                    if self.target[a][k] == self.target[b][k] {
                        s += self.alpha[a][k] * self.alpha[b][k];
                    }
                }
                g[[a, b]] = Complex64::new(s, 0.0);
            }
        }
        g
    }
}

/// Clones a symmetric operator of weight `M` into `L` copies, ancilla
/// traced out.
pub fn clone_channel(input: &SymOperator, l: usize) -> Result<SymOperator> {
    if l < input.m() {
        return Err(invalid(format!("L = {l} must be at least M = {}", input.m())));
    }
    CloneAmplitudes::with_input_basis(Arc::clone(input.basis()), l)?.apply(input)
}

pub fn isometry_gram(d: usize, m: usize, l: usize) -> Result<CMatrix> {
    Ok(CloneAmplitudes::new(d, m, l)?.gram())
}

/// Output of the `N → M` cloner fed with `N` copies of level 0.
pub fn uqcm_pure_output(d: usize, n: usize, m: usize) -> Result<SymOperator> {
    if n == 0 {
        return Err(invalid("N must be at least 1"));
    }
    if m < n {
        return Err(invalid(format!("M = {m} must be at least N = {n}")));
    }
    let basis = Arc::new(enumerate_basis(d, n)?);
    let pure = SymOperator::pure(basis, &Composition::concentrated(d, n, 0)?)?;
    clone_channel(&pure, m)
}

/// `(N → M → L cascade, direct N → L)` outputs.
pub fn concatenate(d: usize, n: usize, m: usize, l: usize) -> Result<(SymOperator, SymOperator)> {
    if !(n <= m && m <= l) {
        return Err(invalid(format!("need N <= M <= L, got {n}, {m}, {l}")));
    }
    let cascade = clone_channel(&uqcm_pure_output(d, n, m)?, l)?;
    let direct = uqcm_pure_output(d, n, l)?;
    Ok((cascade, direct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::symspace::reduce_one;
    use proptest::prelude::*;

    fn comp(c: &[usize]) -> Composition {
        Composition::new(c.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        exact::from_int(n) / exact::from_int(d)
    }

    #[test]
    fn qubit_amplitudes() {
        assert_eq!(alpha_qubit_squared(0, 0, 1, 2).unwrap(), q(2, 3));
        assert_eq!(alpha_qubit_squared(0, 1, 1, 2).unwrap(), q(1, 3));
        assert!((alpha_qubit(0, 0, 1, 2).unwrap() - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        for m in 0..5 {
            for j in 0..=m {
                assert_eq!(alpha_qubit(j, 0, m, m).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn qubit_amplitude_ranges() {
        assert!(alpha_qubit(2, 0, 1, 2).is_err());
        assert!(alpha_qubit(0, 2, 1, 2).is_err());
        assert!(alpha_qubit(0, 0, 3, 2).is_err());
    }

    #[test]
    fn qudit_amplitudes() {
        assert_eq!(
            alpha_d_squared(&comp(&[1, 0]), &comp(&[1, 0]), 1, 2).unwrap(),
            alpha_qubit_squared(0, 0, 1, 2).unwrap()
        );
        assert_eq!(
            alpha_d_squared(&comp(&[1, 0, 0]), &comp(&[1, 1, 0]), 1, 3).unwrap(),
            q(1, 5)
        );
        assert_eq!(alpha_d(&comp(&[1, 2, 0, 1]), &comp(&[0, 0, 0, 0]), 4, 4).unwrap(), 1.0);
    }

    #[test]
    fn qudit_amplitude_errors() {
        assert!(alpha_d(&comp(&[1, 0]), &comp(&[1, 0, 0]), 1, 2).is_err());
        assert!(alpha_d(&comp(&[2, 0]), &comp(&[1, 0]), 1, 2).is_err());
        assert!(alpha_d(&comp(&[1, 0]), &comp(&[2, 0]), 1, 2).is_err());
    }

    #[test]
    fn qubit_and_qudit_formulas_agree() {
        for m in 0..=5 {
            for l in m..=8 {
                for j in 0..=m {
                    for k in 0..=l - m {
                        let via_d = alpha_d_squared(&comp(&[m - j, j]), &comp(&[l - m - k, k]), m, l).unwrap();
                        assert_eq!(via_d, alpha_qubit_squared(j, k, m, l).unwrap(), "j={j} k={k} M={m} L={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn ancilla_dims() {
        assert_eq!(ancilla_dim(2, 1, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(ancilla_dim(3, 1, 3).unwrap(), BigUint::from(6u32));
        for d in 2..6 {
            assert_eq!(ancilla_dim(d, 3, 3).unwrap(), BigUint::from(1u32));
        }
        assert!(ancilla_dim(2, 3, 2).is_err());
    }

    #[test]
    fn identity_channel_when_no_copies_added() {
        let basis = Arc::new(enumerate_basis(3, 2).unwrap());
        let x = Array2::from_shape_fn((6, 6), |(i, j)| Complex64::new(i as f64 - j as f64, (i * j) as f64));
        let op = SymOperator::new(basis, x).unwrap();
        let out = clone_channel(&op, 2).unwrap();
        assert_eq!(out.max_abs_diff(&op).unwrap(), 0.0);
    }

    #[test]
    fn one_to_two_qubit_output() {
        let out = uqcm_pure_output(2, 1, 2).unwrap();
        let e = out.entries();
        assert!((e[[0, 0]].re - 2.0 / 3.0).abs() < 1e-15);
        assert!((e[[1, 1]].re - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(e[[2, 2]].norm(), 0.0);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(e[[i, j]].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn one_to_three_qubit_output() {
        let out = uqcm_pure_output(2, 1, 3).unwrap();
        let diag: Vec<f64> = out.entries().diag().iter().map(|z| z.re).collect();
        let expected = [0.5, 1.0 / 3.0, 1.0 / 6.0, 0.0];
        for (a, b) in diag.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((diag.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_output_without_new_copies_is_the_input() {
        for d in 2..=4 {
            let out = uqcm_pure_output(d, 3, 3).unwrap();
            let expected = SymOperator::pure(out.basis().clone(), &Composition::concentrated(d, 3, 0).unwrap()).unwrap();
            assert_eq!(out.max_abs_diff(&expected).unwrap(), 0.0);
        }
        assert!(uqcm_pure_output(2, 3, 2).is_err());
        assert!(uqcm_pure_output(2, 0, 2).is_err());
    }

    #[test]
    fn maximally_mixed_qubit_stays_mixed() {
        let basis = Arc::new(enumerate_basis(2, 1).unwrap());
        let x = linalg::identity(2).mapv(|z| z * 0.5);
        let out = clone_channel(&SymOperator::new(basis, x).unwrap(), 2).unwrap();
        let red = reduce_one(&out).unwrap();
        assert!(red.max_abs_diff(&QuditOperator::identity(2).scaled(0.5)).unwrap() < 1e-15);
    }

    use crate::symspace::QuditOperator;

    #[test]
    fn gram_is_identity() {
        for (d, m, l) in [(2, 1, 2), (3, 3, 3), (3, 2, 4), (4, 2, 5)] {
            let g = isometry_gram(d, m, l).unwrap();
            assert!(linalg::max_abs_diff(&g, &linalg::identity(g.nrows())) < 1e-12);
        }
        assert_eq!(isometry_gram(3, 2, 4).unwrap().nrows(), 6);
    }

    #[test]
    fn concatenation_examples() {
        let (a, b) = concatenate(2, 1, 2, 3).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-15);
        assert!((a.entries()[[0, 0]].re - 0.5).abs() < 1e-15);
        let (a, b) = concatenate(3, 1, 2, 3).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
        let (a, b) = concatenate(3, 2, 2, 5).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
        assert!(concatenate(2, 2, 1, 3).is_err());
        assert!(concatenate(2, 1, 4, 3).is_err());
    }

    #[test]
    fn channel_rejects_shrinking() {
        let basis = Arc::new(enumerate_basis(2, 3).unwrap());
        let op = SymOperator::zeros(basis);
        assert!(clone_channel(&op, 2).is_err());
    }

    #[test]
    fn exact_normalization_small_grid() {
        for d in 2..=4 {
            for m in 0..=4 {
                for l in m..=8 {
                    let table = CloneAmplitudes::new(d, m, l).unwrap();
                    for s in table.normalization_sums() {
                        assert_eq!(s, exact::from_int(1), "d={d} M={m} L={l}");
                    }
                    assert_eq!(
                        BigUint::from(table.added_basis().len()),
                        ancilla_dim(d, m, l).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn table_rows_are_canonical() {
        let table = CloneAmplitudes::new(2, 1, 2).unwrap();
        let sq: Vec<String> = table.rows().map(|r| exact::format_rational(r.squared)).collect();
        assert_eq!(sq, ["2/3", "1/3", "1/3", "2/3"]);
    }

    fn arb_input() -> impl Strategy<Value = (SymOperator, usize)> {
        (2usize..=3, 1usize..=3, 0usize..=3).prop_flat_map(|(d, m, extra)| {
            let basis = Arc::new(enumerate_basis(d, m).unwrap());
            let n = basis.len();
            prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
                let x = Array2::from_shape_vec((n, n), v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
                    .unwrap();
                (SymOperator::new(basis.clone(), x).unwrap(), m + extra)
            })
        })
    }

    proptest! {
        #[test]
        fn channel_preserves_trace((x, l) in arb_input()) {
            let y = clone_channel(&x, l).unwrap();
            prop_assert!((y.trace() - x.trace()).norm() < 1e-12);
        }

        #[test]
        fn channel_commutes_with_adjoint((x, l) in arb_input()) {
            let lhs = clone_channel(&x.adjoint(), l).unwrap();
            let rhs = clone_channel(&x, l).unwrap().adjoint();
            prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-14);
        }
    }
}
