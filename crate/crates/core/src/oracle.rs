//! Brute-force ground truth in the full `d^L` tensor-product space.
//!
//! Nothing here goes through the symmetric-subspace recursion used by
//! [`crate::cloner`] or the one-hop rule of [`crate::symspace::reduce_one`]:
//! symmetric states are built by enumerating words, the isometry is
//! materialized with an explicit ancilla register, and reductions are plain
//! partial traces. Amplitudes are re-derived in floating point from their
//! factorial formula.
//!
//! Product-basis index layout: site 0 is the most significant digit. The
//! isometry's row index is `full_index * ancilla_dim + k`.

use std::sync::Arc;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, CMatrix};
use crate::symspace::{enumerate_basis, Composition, QuditOperator, SymBasis, SymOperator};

/// Maximum number of complex amplitudes in any vector the oracle builds.
pub const MEMORY_GUARD: usize = 1 << 20;

/// Maximum number of entries in a full-space operator.
pub const OPERATOR_GUARD: usize = 1 << 22;

/// A state vector over `n_sites` qudits.
#[derive(Clone, Debug, PartialEq)]
pub struct FullVector {
    d: usize,
    n_sites: usize,
    amplitudes: Array1<Complex64>,
}

impl FullVector {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn inner(&self, other: &FullVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Applies `u` to one site.
    pub fn apply_site(&self, u: &QuditOperator, site: usize) -> FullVector {
        let d = self.d;
        let stride = d.pow((self.n_sites - 1 - site) as u32);
        let mut out = Array1::<Complex64>::zeros(self.amplitudes.len());
        for (idx, &amp) in self.amplitudes.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            let digit = (idx / stride) % d;
            let base = idx - digit * stride;
            for row in 0..d {
                out[base + row * stride] += u.get(row, digit) * amp;
            }
        }
        FullVector {
            d,
            n_sites: self.n_sites,
            amplitudes: out,
        }
    }
}

fn full_len(d: usize, n_sites: usize) -> Result<usize> {
    d.checked_pow(n_sites as u32)
        .filter(|&n| n <= MEMORY_GUARD)
        .ok_or_else(|| {
            Error::Resource(format!(
                "{d}^{n_sites} amplitudes exceed the oracle limit of {MEMORY_GUARD}"
            ))
        })
}

fn digit_counts(mut idx: usize, d: usize, n_sites: usize) -> Vec<usize> {
    let mut counts = vec![0; d];
    for _ in 0..n_sites {
        counts[idx % d] += 1;
        idx /= d;
    }
    counts
}

/// Normalized equal-weight superposition of every word with occupation
/// numbers `c`.
pub fn sym_vector(c: &Composition) -> Result<FullVector> {
    let d = c.d();
    let n_sites = c.weight();
    if n_sites == 0 {
        return Err(invalid("symmetric vectors need at least one site"));
    }
    let len = full_len(d, n_sites)?;
    let mut amplitudes = Array1::<Complex64>::zeros(len);
    let mut hits = 0usize;
    for idx in 0..len {
        if digit_counts(idx, d, n_sites) == c.counts() {
            amplitudes[idx] = Complex64::new(1.0, 0.0);
            hits += 1;
        }
    }
    let norm = 1.0 / (hits as f64).sqrt();
    amplitudes.mapv_inplace(|z| z * norm);
    Ok(FullVector {
        d,
        n_sites,
        amplitudes,
    })
}

/// Gram matrix of the symmetric vectors of `(d, M)`.
pub fn sym_gram(d: usize, m: usize) -> Result<CMatrix> {
    let basis = enumerate_basis(d, m)?;
    let vecs = basis
        .compositions()
        .iter()
        .map(sym_vector)
        .collect::<Result<Vec<_>>>()?;
    Ok(Array2::from_shape_fn((vecs.len(), vecs.len()), |(a, b)| {
        vecs[a].inner(&vecs[b])
    }))
}

fn factorial_f64(n: usize) -> f64 {
    (2..=n).map(|i| i as f64).product()
}

/// Floating-point amplitude straight from the factorial formula.
fn amplitude(j: &Composition, k: &Composition, m: usize, l: usize) -> f64 {
    let d = j.d();
    let mut sq = factorial_f64(l - m) * factorial_f64(m + d - 1) / factorial_f64(l + d - 1);
    for (&ji, &ki) in j.counts().iter().zip(k.counts()) {
        sq *= factorial_f64(ji + ki) / (factorial_f64(ji) * factorial_f64(ki));
    }
    sq.sqrt()
}

/// The cloning isometry from the symmetric input space into
/// `(L sites) ⊗ ancilla`, as an explicit dense matrix.
#[derive(Clone, Debug)]
pub struct ExplicitIsometry {
    d: usize,
    l: usize,
    input: Arc<SymBasis>,
    ancilla: SymBasis,
    matrix: CMatrix,
}

impl ExplicitIsometry {
    pub fn new(input: Arc<SymBasis>, l: usize) -> Result<Self> {
        let (d, m) = (input.d(), input.m());
        if l < m {
            return Err(invalid(format!("L = {l} must be at least M = {m}")));
        }
        if l == 0 {
            return Err(invalid("L must be at least 1"));
        }
        let ancilla = enumerate_basis(d, l - m)?;
        let site_len = full_len(d, l)?;
        let rows = site_len
            .checked_mul(ancilla.len())
            .filter(|&r| r <= MEMORY_GUARD)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "isometry columns of length {site_len} x {} exceed {MEMORY_GUARD}",
                    ancilla.len()
                ))
            })?;
        let n_anc = ancilla.len();
        let mut matrix = Array2::<Complex64>::zeros((rows, input.len()));
        for (col, j) in input.compositions().iter().enumerate() {
            for (ik, k) in ancilla.compositions().iter().enumerate() {
                let alpha = amplitude(j, k, m, l);
                let v = sym_vector(&j.plus(k)?)?;
                for (idx, &amp) in v.amplitudes().iter().enumerate() {
                    if amp != Complex64::new(0.0, 0.0) {
                        matrix[[idx * n_anc + ik, col]] += amp * alpha;
                    }
                }
            }
        }
        Ok(ExplicitIsometry {
            d,
            l,
            input,
            ancilla,
            matrix,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn ancilla_dim(&self) -> usize {
        self.ancilla.len()
    }

    /// `V† V`, which should be the identity on the input space.
    pub fn gram(&self) -> CMatrix {
        linalg::adjoint(&self.matrix).dot(&self.matrix)
    }

    /// `Tr_ancilla(V X V†)` on the `L`-site space.
    pub fn apply(&self, x: &SymOperator) -> Result<CMatrix> {
        if x.d() != self.input.d() || x.m() != self.input.m() {
            return Err(invalid("operator does not live on the isometry's input space"));
        }
        let n_anc = self.ancilla.len();
        let site_len = self.matrix.nrows() / n_anc;
        if site_len.saturating_mul(site_len) > OPERATOR_GUARD {
            return Err(Error::Resource(format!(
                "a {site_len} x {site_len} output operator exceeds {OPERATOR_GUARD} entries"
            )));
        }
        let mut out = Array2::<Complex64>::zeros((site_len, site_len));
        for k in 0..n_anc {
            let block = Array2::from_shape_fn((site_len, self.input.len()), |(r, c)| {
                self.matrix[[r * n_anc + k, c]]
            });
            out += &block.dot(x.entries()).dot(&linalg::adjoint(&block));
        }
        Ok(out)
    }
}

/// Partial trace of a full `n_sites` operator down to `site`.
pub fn reduce_to_site(full: &CMatrix, d: usize, n_sites: usize, site: usize) -> Result<QuditOperator> {
    let len = d.pow(n_sites as u32);
    if full.nrows() != len || full.ncols() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: full.nrows(),
        });
    }
    if site >= n_sites {
        return Err(invalid(format!("site {site} out of range for {n_sites} sites")));
    }
    let stride = d.pow((n_sites - 1 - site) as u32);
    let mut out = Array2::<Complex64>::zeros((d, d));
    for row in 0..len {
        let digit = (row / stride) % d;
        let base = row - digit * stride;
        for col_digit in 0..d {
            out[[digit, col_digit]] += full[[row, base + col_digit * stride]];
        }
    }
    QuditOperator::new(out)
}

/// Result of [`oracle_clone`].
#[derive(Clone, Debug)]
pub struct OracleOutput {
    pub d: usize,
    pub n_sites: usize,
    /// The `L`-site output, ancilla traced out.
    pub full: CMatrix,
    /// Reduction to site 0.
    pub reduced: QuditOperator,
}

impl OracleOutput {
    pub fn reduced_at(&self, site: usize) -> Result<QuditOperator> {
        reduce_to_site(&self.full, self.d, self.n_sites, site)
    }

    /// Largest deviation between the site-0 reduction and the reduction at
    /// any other site.
    pub fn site_spread(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for site in 1..self.n_sites {
            worst = worst.max(self.reduced_at(site)?.max_abs_diff(&self.reduced)?);
        }
        Ok(worst)
    }
}

pub fn oracle_clone(input: &SymOperator, l: usize) -> Result<OracleOutput> {
    let iso = ExplicitIsometry::new(Arc::clone(input.basis()), l)?;
    let full = iso.apply(input)?;
    let reduced = reduce_to_site(&full, iso.d, iso.l, 0)?;
    Ok(OracleOutput {
        d: iso.d,
        n_sites: iso.l,
        full,
        reduced,
    })
}

/// `⟨s(a)| u^{⊗M} |s(b)⟩` over the symmetric basis.
pub fn sym_unitary(u: &QuditOperator, basis: &SymBasis) -> Result<CMatrix> {
    if u.d() != basis.d() {
        return Err(Error::DimensionMismatch {
            expected: basis.d(),
            found: u.d(),
        });
    }
    let vecs = basis
        .compositions()
        .iter()
        .map(sym_vector)
        .collect::<Result<Vec<_>>>()?;
    let rotated: Vec<FullVector> = vecs
        .iter()
        .map(|v| (0..basis.m()).fold(v.clone(), |acc, site| acc.apply_site(u, site)))
        .collect();
    Ok(Array2::from_shape_fn((vecs.len(), vecs.len()), |(a, b)| {
        vecs[a].inner(&rotated[b])
    }))
}

/// Max deviation between `reduce(clone(U ρ U†))` and `u reduce(clone(ρ)) u†`,
/// with `U = u^{⊗M}` on the symmetric subspace.
pub fn covariance_check(u: &QuditOperator, input: &SymOperator, l: usize) -> Result<f64> {
    if !u.is_unitary(1e-10) {
        return Err(Error::Validation("covariance check needs a unitary".into()));
    }
    let us = sym_unitary(u, input.basis())?;
    let rotated_in = us.dot(input.entries()).dot(&linalg::adjoint(&us));
    let rotated_in = SymOperator::new(Arc::clone(input.basis()), rotated_in)?;
    let lhs = oracle_clone(&rotated_in, l)?.reduced;
    let rhs = oracle_clone(input, l)?.reduced.conjugated_by(u)?;
    lhs.max_abs_diff(&rhs)
}
