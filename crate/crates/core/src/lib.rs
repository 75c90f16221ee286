//! Generalized universal quantum cloning on the symmetric subspace.
//!
//! Inputs are arbitrary operators on the symmetric subspace of `M` qudits
//! of dimension `d` (mixed, entangled, or not even positive); the cloner
//! produces `L ≥ M` copies whose single-site reductions shrink the input's
//! generalized Bloch vector by the optimal factor `M (L + d) / (L (M + d))`.
//!
//! * [`symspace`]: compositions, the canonical basis, symmetric operators
//!   and the single-site reduction.
//! * [`cloner`]: exact amplitudes, the cloning channel, pure-input outputs
//!   and concatenation of cloners.
//! * [`closed_forms`]: shrinking factor, fidelity, Gell-Mann generators
//!   and scaling-law residuals.
//! * [`oracle`]: independent brute-force construction in the full
//!   tensor-product space.
//! * [`random`]: seeded random inputs and unitaries.

pub mod cloner;
pub mod closed_forms;
mod error;
pub mod exact;
pub mod linalg;
pub mod oracle;
pub mod random;
pub mod symspace;

pub use cloner::{
    alpha_d, alpha_qubit, ancilla_dim, clone_channel, concatenate, isometry_gram,
    uqcm_pure_output, CloneAmplitudes,
};
pub use closed_forms::{
    bloch_vector, fidelity, generators, rho_from_bloch, scaling_residual, shrink, BlochVector,
    ScalingResidual,
};
pub use error::{Error, Result};
pub use oracle::{covariance_check, oracle_clone, sym_vector, FullVector, OracleOutput};
pub use symspace::{
    dim, enumerate_basis, reduce_one, Composition, PsdPolicy, QuditOperator, SymBasis,
    SymOperator,
};
