//! The symmetric subspace of `M` identical `d`-level systems.
//!
//! A basis state of the symmetric subspace is labelled by a [`Composition`]:
//! the occupation numbers `(j_0, …, j_{d-1})` of each level, summing to `M`.
//! Level 0 plays the role of the reference state and levels `1..d` its
//! orthogonal complements.
//!
//! Compositions are ordered lexicographically *decreasing*, so for qubits
//! the basis index equals the number of particles in level 1:
//! `(M,0), (M-1,1), …, (0,M)`. This order is part of the file format.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use ndarray::Array2;
use num_bigint::BigUint;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::exact;
use crate::linalg::{self, CMatrix};

/// Basis tag written into every serialized [`SymOperator`].
pub const BASIS_TAG: &str = "lex_decreasing";

/// Absolute tolerance used when validating user-supplied density operators.
pub const VALIDATION_TOL: f64 = 1e-9;

/// Occupation numbers of the `d` levels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<usize>);

impl Composition {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(invalid(format!(
                "a composition needs at least 2 levels, got {}",
                counts.len()
            )));
        }
        Ok(Composition(counts))
    }

    pub fn zero(d: usize) -> Result<Self> {
        Self::new(vec![0; d])
    }

    /// All `n` particles in `level`.
    pub fn concentrated(d: usize, n: usize, level: usize) -> Result<Self> {
        if level >= d {
            return Err(invalid(format!("level {level} out of range for d = {d}")));
        }
        let mut counts = vec![0; d];
        counts[level] = n;
        Self::new(counts)
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn multinomial(&self) -> BigUint {
        exact::multinomial(&self.0)
    }

    /// Level-wise sum of two compositions over the same `d`.
    pub fn plus(&self, other: &Composition) -> Result<Composition> {
        if self.d() != other.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                found: other.d(),
            });
        }
        Ok(Composition(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Moves one particle from level `from` to level `to`; `None` if `from`
    /// is empty.
    pub fn hop(&self, from: usize, to: usize) -> Option<Composition> {
        if self.0[from] == 0 {
            return None;
        }
        let mut counts = self.0.clone();
        counts[from] -= 1;
        counts[to] += 1;
        Some(Composition(counts))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `C(M + d - 1, d - 1)`, computed exactly.
pub fn dim_exact(d: usize, m: usize) -> Result<BigUint> {
    if d < 2 {
        return Err(invalid(format!("d must be at least 2, got {d}")));
    }
    Ok(exact::binomial(m + d - 1, d - 1))
}

/// Dimension of the symmetric subspace as a machine integer.
pub fn dim(d: usize, m: usize) -> Result<usize> {
    let n = dim_exact(d, m)?;
    exact::to_usize(&n).ok_or_else(|| Error::Resource(format!("dim({d}, {m}) = {n} overflows")))
}

/// Canonically ordered basis of the symmetric subspace for `(d, M)`.
#[derive(Clone, Debug)]
pub struct SymBasis {
    d: usize,
    m: usize,
    order: Vec<Composition>,
    index: HashMap<Composition, usize>,
}

impl PartialEq for SymBasis {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.m == other.m
    }
}

impl SymBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn compositions(&self) -> &[Composition] {
        &self.order
    }

    pub fn get(&self, i: usize) -> &Composition {
        &self.order[i]
    }

    pub fn index_of(&self, c: &Composition) -> Option<usize> {
        self.index.get(c).copied()
    }
}

/// Enumerates every composition of `m` into `d` parts, lexicographically
/// decreasing.
pub fn enumerate_basis(d: usize, m: usize) -> Result<SymBasis> {
    let expected = dim(d, m)?;
    let mut order = Vec::with_capacity(expected);
    let mut prefix = Vec::with_capacity(d);
    fill(d, m, &mut prefix, &mut order);
    debug_assert_eq!(order.len(), expected);
    let index = order
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i))
        .collect();
    Ok(SymBasis { d, m, order, index })
}

fn fill(d: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
    if prefix.len() == d - 1 {
        let mut counts = prefix.clone();
        counts.push(remaining);
        out.push(Composition(counts));
        return;
    }
    for c in (0..=remaining).rev() {
        prefix.push(c);
        fill(d, remaining - c, prefix, out);
        prefix.pop();
    }
}

/// How [`SymOperator::validate_density`] treats negative eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PsdPolicy {
    #[default]
    Skip,
    Warn,
    Reject,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub hermiticity_defect: f64,
    pub trace: Complex64,
    /// `None` when the PSD check was skipped.
    pub psd: Option<bool>,
    pub warnings: Vec<String>,
}

/// A dense operator on the symmetric subspace of `(d, M)`.
#[derive(Clone, Debug)]
pub struct SymOperator {
    basis: Arc<SymBasis>,
    entries: CMatrix,
}

impl SymOperator {
    pub fn new(basis: Arc<SymBasis>, entries: CMatrix) -> Result<Self> {
        let n = basis.len();
        if entries.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: entries.nrows(),
            });
        }
        if entries.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: entries.ncols(),
            });
        }
        Ok(SymOperator { basis, entries })
    }

    pub fn zeros(basis: Arc<SymBasis>) -> Self {
        let n = basis.len();
        SymOperator {
            basis,
            entries: Array2::zeros((n, n)),
        }
    }

    /// The dyad `|a⟩⟨b|`.
    pub fn dyad(basis: Arc<SymBasis>, a: &Composition, b: &Composition) -> Result<Self> {
        let ia = lookup(&basis, a)?;
        let ib = lookup(&basis, b)?;
        let mut op = Self::zeros(basis);
        op.entries[[ia, ib]] = Complex64::new(1.0, 0.0);
        Ok(op)
    }

    pub fn pure(basis: Arc<SymBasis>, c: &Composition) -> Result<Self> {
        Self::dyad(basis, c, c)
    }

    pub fn basis(&self) -> &Arc<SymBasis> {
        &self.basis
    }

    pub fn d(&self) -> usize {
        self.basis.d
    }

    pub fn m(&self) -> usize {
        self.basis.m
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.entries)
    }

    pub fn adjoint(&self) -> SymOperator {
        SymOperator {
            basis: Arc::clone(&self.basis),
            entries: linalg::adjoint(&self.entries),
        }
    }

    pub fn max_abs_diff(&self, other: &SymOperator) -> Result<f64> {
        self.check_same_space(other)?;
        Ok(linalg::max_abs_diff(&self.entries, &other.entries))
    }

    fn check_same_space(&self, other: &SymOperator) -> Result<()> {
        if self.d() != other.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                found: other.d(),
            });
        }
        if self.m() != other.m() {
            return Err(Error::DimensionMismatch {
                expected: self.m(),
                found: other.m(),
            });
        }
        Ok(())
    }

    /// Checks Hermiticity and unit trace to [`VALIDATION_TOL`]. Positivity
    /// is only examined when `psd` asks for it.
    pub fn validate_density(&self, psd: PsdPolicy) -> Result<DensityReport> {
        let defect = linalg::hermiticity_defect(&self.entries);
        if defect > VALIDATION_TOL {
            return Err(Error::Validation(format!(
                "operator is not Hermitian (max deviation {defect:e})"
            )));
        }
        let trace = self.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > VALIDATION_TOL {
            return Err(Error::Validation(format!(
                "trace is {} + {}i, expected 1",
                trace.re, trace.im
            )));
        }
        let mut report = DensityReport {
            hermiticity_defect: defect,
            trace,
            psd: None,
            warnings: Vec::new(),
        };
        if psd != PsdPolicy::Skip {
            let ok = linalg::is_psd(&self.entries, VALIDATION_TOL);
            report.psd = Some(ok);
            if !ok {
                let msg = "operator has an eigenvalue below -1e-9".to_string();
                if psd == PsdPolicy::Reject {
                    return Err(Error::Validation(msg));
                }
                report.warnings.push(msg);
            }
        }
        Ok(report)
    }

    pub fn to_doc(&self) -> SymOperatorDoc {
        SymOperatorDoc {
            d: self.d(),
            m: self.m(),
            basis: BASIS_TAG.to_string(),
            entries: self.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn from_doc(doc: &SymOperatorDoc) -> Result<Self> {
        if doc.basis != BASIS_TAG {
            return Err(Error::Format(format!(
                "unsupported basis tag {:?}, expected {BASIS_TAG:?}",
                doc.basis
            )));
        }
        let basis = Arc::new(enumerate_basis(doc.d, doc.m)?);
        let n = basis.len();
        if doc.entries.len() != n * n {
            return Err(Error::Format(format!(
                "expected {} entries for d = {}, m = {}, found {}",
                n * n,
                doc.d,
                doc.m,
                doc.entries.len()
            )));
        }
        let entries = Array2::from_shape_vec(
            (n, n),
            doc.entries.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        )
        .map_err(|e| Error::Format(e.to_string()))?;
        Self::new(basis, entries)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("SymOperatorDoc serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: SymOperatorDoc =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

fn lookup(basis: &SymBasis, c: &Composition) -> Result<usize> {
    basis.index_of(c).ok_or_else(|| {
        invalid(format!(
            "composition {c} is not in the basis for d = {}, m = {}",
            basis.d, basis.m
        ))
    })
}

/// Serialized form of a [`SymOperator`]: row-major dense `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymOperatorDoc {
    pub d: usize,
    pub m: usize,
    pub basis: String,
    pub entries: Vec<[f64; 2]>,
}

/// A `d × d` operator on a single qudit.
#[derive(Clone, Debug, PartialEq)]
pub struct QuditOperator {
    entries: CMatrix,
}

impl QuditOperator {
    pub fn new(entries: CMatrix) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        if entries.nrows() < 2 {
            return Err(invalid("a qudit operator needs d >= 2"));
        }
        Ok(QuditOperator { entries })
    }

    pub fn zeros(d: usize) -> Self {
        QuditOperator {
            entries: Array2::zeros((d, d)),
        }
    }

    pub fn identity(d: usize) -> Self {
        QuditOperator {
            entries: linalg::identity(d),
        }
    }

    /// `|i⟩⟨i|`.
    pub fn projector(d: usize, i: usize) -> Self {
        let mut op = Self::zeros(d);
        op.entries[[i, i]] = Complex64::new(1.0, 0.0);
        op
    }

    pub fn d(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[[row, col]]
    }

    pub fn trace(&self) -> Complex64 {
        linalg::trace(&self.entries)
    }

    pub fn adjoint(&self) -> QuditOperator {
        QuditOperator {
            entries: linalg::adjoint(&self.entries),
        }
    }

    pub fn scaled(&self, s: f64) -> QuditOperator {
        QuditOperator {
            entries: self.entries.mapv(|z| z * s),
        }
    }

    pub fn max_abs_diff(&self, other: &QuditOperator) -> Result<f64> {
        if self.d() != other.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                found: other.d(),
            });
        }
        Ok(linalg::max_abs_diff(&self.entries, &other.entries))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::hermiticity_defect(&self.entries) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.entries.dot(&linalg::adjoint(&self.entries));
        linalg::max_abs_diff(&prod, &linalg::identity(self.d())) <= tol
    }

    /// `u · self · u†`.
    pub fn conjugated_by(&self, u: &QuditOperator) -> Result<QuditOperator> {
        if u.d() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                found: u.d(),
            });
        }
        Ok(QuditOperator {
            entries: u.entries.dot(&self.entries).dot(&linalg::adjoint(&u.entries)),
        })
    }
}

/// Single-site reduced operator of a symmetric operator of weight `M ≥ 1`.
///
/// A diagonal dyad `|a⟩⟨a|` contributes `Σ_i (a_i / M) |i⟩⟨i|`; a dyad
/// `|a⟩⟨b|` with `b = a - e_p + e_q` contributes `√(a_p (a_q + 1)) / M`
/// at `|p⟩⟨q|`. Every other dyad traces to zero.
pub fn reduce_one(op: &SymOperator) -> Result<QuditOperator> {
    let basis = op.basis();
    let m = basis.m();
    let d = basis.d();
    if m == 0 {
        return Err(invalid("cannot reduce a zero-particle operator"));
    }
    let inv_m = 1.0 / m as f64;
    let x = op.entries();
    let mut out = Array2::<Complex64>::zeros((d, d));
    for (ia, a) in basis.compositions().iter().enumerate() {
        let counts = a.counts();
        let diag = x[[ia, ia]];
        for (i, &ai) in counts.iter().enumerate() {
            out[[i, i]] += diag * (ai as f64 * inv_m);
        }
        for p in 0..d {
            if counts[p] == 0 {
                continue;
            }
            for q in 0..d {
                if q == p {
                    continue;
                }
                let b = a.hop(p, q).expect("level p is occupied");
                let ib = basis.index_of(&b).expect("hop stays in the basis");
                let coeff = ((counts[p] * (counts[q] + 1)) as f64).sqrt() * inv_m;
                out[[p, q]] += x[[ia, ib]] * coeff;
            }
        }
    }
    Ok(QuditOperator { entries: out })
}
