//! Verification suites behind `uqcm verify`.
//!
//! Every suite walks a fixed parameter grid in canonical (sorted) order.
//! Random cells draw from a ChaCha stream seeded by mixing the run seed
//! with the cell parameters, so a cell's inputs do not depend on which
//! other cells ran before it.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use uqcm::closed_forms::scaling_residual_with_eta;
use uqcm::random::{self, seeded_rng};
use uqcm::{
    ancilla_dim, clone_channel, concatenate, covariance_check, enumerate_basis, exact, linalg,
    oracle_clone, reduce_one, shrink, CloneAmplitudes, Result,
};

use crate::report::{CaseParams, CaseResult, RunReport};

/// Tolerance for the oracle, scaling and covariance suites.
pub const NUMERIC_TOL: f64 = 1e-10;
/// Tolerance for the algebraic identities (isometry, concatenation).
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// Random inputs drawn per (cell, kind) in the scaling and oracle suites.
pub const SAMPLES_PER_KIND: usize = 20;
/// Random unitaries per cell in the covariance suite.
pub const COVARIANCE_SAMPLES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Scaling,
    Isometry,
    Concat,
    Oracle,
    Covariance,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 5] = [
        Suite::Scaling,
        Suite::Isometry,
        Suite::Concat,
        Suite::Oracle,
        Suite::Covariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Scaling => "scaling",
            Suite::Isometry => "isometry",
            Suite::Concat => "concat",
            Suite::Oracle => "oracle",
            Suite::Covariance => "covariance",
            Suite::All => "all",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Isometry | Suite::Concat => ALGEBRAIC_TOL,
            _ => NUMERIC_TOL,
        }
    }

    fn id(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "scaling" => Ok(Suite::Scaling),
            "isometry" => Ok(Suite::Isometry),
            "concat" => Ok(Suite::Concat),
            "oracle" => Ok(Suite::Oracle),
            "covariance" => Ok(Suite::Covariance),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite {other:?}; expected one of scaling, isometry, concat, oracle, covariance, all"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides every suite's default tolerance.
    pub tolerance: Option<f64>,
    /// Multiplies the shrinking factor in the scaling suite. Anything other
    /// than 1 is a negative control and should fail.
    pub eta_scale: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 42,
            tolerance: None,
            eta_scale: 1.0,
        }
    }
}

impl VerifyConfig {
    fn tol(&self, suite: Suite) -> f64 {
        self.tolerance.unwrap_or_else(|| suite.default_tolerance())
    }
}

/// `max` that keeps NaN.
fn worse(acc: f64, x: f64) -> f64 {
    if x.is_nan() || x > acc {
        x
    } else {
        acc
    }
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn cell_seed(seed: u64, suite: Suite, parts: &[usize]) -> u64 {
    parts
        .iter()
        .fold(mix(seed ^ mix(suite.id())), |acc, &p| mix(acc ^ p as u64))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum InputKind {
    Psd,
    Hermitian,
}

impl InputKind {
    const BOTH: [InputKind; 2] = [InputKind::Psd, InputKind::Hermitian];

    fn name(self) -> &'static str {
        match self {
            InputKind::Psd => "psd",
            InputKind::Hermitian => "hermitian",
        }
    }
}

fn draw(
    kind: InputKind,
    rng: &mut random::SeededRng,
    basis: &Arc<uqcm::SymBasis>,
) -> uqcm::SymOperator {
    match kind {
        InputKind::Psd => random::psd_input(rng, basis),
        InputKind::Hermitian => random::hermitian_input(rng, basis),
    }
}

/// `(d, M, L)` cells where the full-space oracle is run.
pub fn oracle_grid() -> Vec<(usize, usize, usize)> {
    let qubits = (1..=3).flat_map(|m| (m..=4).map(move |l| (2, m, l)));
    let qutrits = (1..=2).flat_map(|m| (m..=3).map(move |l| (3, m, l)));
    qubits.chain(qutrits).collect()
}

pub fn scaling_grid() -> Vec<(usize, usize, usize)> {
    (2..=4)
        .flat_map(|d| (1..=4).flat_map(move |m| (m..=6).map(move |l| (d, m, l))))
        .collect()
}

pub fn run(suite: Suite, config: &VerifyConfig) -> Result<RunReport> {
    let (grid, cases) = match suite {
        Suite::Scaling => scaling(config)?,
        Suite::Isometry => isometry(config)?,
        Suite::Concat => concat(config)?,
        Suite::Oracle => oracle(config)?,
        Suite::Covariance => covariance(config)?,
        Suite::All => {
            let mut grid = Vec::new();
            let mut cases = Vec::new();
            for s in Suite::INDIVIDUAL {
                let report = run(s, config)?;
                grid.extend(report.parameter_grid.into_iter().map(|g| format!("{s}: {g}")));
                cases.extend(report.cases);
            }
            (grid, cases)
        }
    };
    Ok(RunReport::new(suite.name(), config.seed, grid, cases))
}

type SuiteOutput = (Vec<String>, Vec<CaseResult>);

fn scaling(config: &VerifyConfig) -> Result<SuiteOutput> {
    let tol = config.tol(Suite::Scaling);
    let mut cases = Vec::new();
    for (d, m, l) in scaling_grid() {
        let basis = Arc::new(enumerate_basis(d, m)?);
        let table = CloneAmplitudes::new(d, m, l)?;
        let eta = exact::to_f64(&shrink(d, m, l)?) * config.eta_scale;
        for (ik, kind) in InputKind::BOTH.into_iter().enumerate() {
            let mut rng = seeded_rng(cell_seed(config.seed, Suite::Scaling, &[d, m, l, ik]));
            let mut worst = 0.0f64;
            for _ in 0..SAMPLES_PER_KIND {
                let x = draw(kind, &mut rng, &basis);
                let rin = reduce_one(&x)?;
                let rout = reduce_one(&table.apply(&x)?)?;
                let r = scaling_residual_with_eta(&rin, &rout, eta)?;
                worst = worse(worst, r.max());
            }
            cases.push(CaseResult::new(
                Suite::Scaling.name(),
                CaseParams {
                    d,
                    m,
                    l: Some(l),
                    kind: Some(kind.name().into()),
                    samples: Some(SAMPLES_PER_KIND),
                    ..Default::default()
                },
                worst,
                tol,
            ));
        }
    }
    let grid = vec![format!(
        "d in 2..=4, M in 1..=4, L in M..=6, {SAMPLES_PER_KIND} psd + {SAMPLES_PER_KIND} hermitian inputs per cell"
    )];
    Ok((grid, cases))
}

fn isometry(config: &VerifyConfig) -> Result<SuiteOutput> {
    let tol = config.tol(Suite::Isometry);
    let mut cases = Vec::new();
    for d in 2..=4 {
        for m in 0..=4 {
            for l in m..=8 {
                let table = CloneAmplitudes::new(d, m, l)?;
                let g = table.gram();
                let mut residual = linalg::max_abs_diff(&g, &linalg::identity(g.nrows()));
                let one = exact::from_int(1);
                for s in table.normalization_sums() {
                    let diff = &s - &one;
                    residual = worse(residual, exact::to_f64(&diff).abs());
                }
                let count = ancilla_dim(d, m, l)?;
                if exact::to_usize(&count) != Some(table.added_basis().len()) {
                    residual = f64::INFINITY;
                }
                cases.push(CaseResult::new(
                    Suite::Isometry.name(),
                    CaseParams {
                        d,
                        m,
                        l: Some(l),
                        ..Default::default()
                    },
                    residual,
                    tol,
                ));
            }
        }
    }
    let grid = vec!["d in 2..=4, M in 0..=4, L in M..=8; Gram defect, exact normalization, ancilla count".into()];
    Ok((grid, cases))
}

fn concat(config: &VerifyConfig) -> Result<SuiteOutput> {
    let tol = config.tol(Suite::Concat);
    let mut cases = Vec::new();
    for d in 2..=3 {
        for n in 1..=6 {
            for m in n..=6 {
                for l in m..=6 {
                    let (cascade, direct) = concatenate(d, n, m, l)?;
                    cases.push(CaseResult::new(
                        Suite::Concat.name(),
                        CaseParams {
                            d,
                            n: Some(n),
                            m,
                            l: Some(l),
                            ..Default::default()
                        },
                        cascade.max_abs_diff(&direct)?,
                        tol,
                    ));
                }
            }
        }
    }
    let grid = vec!["d in 2..=3, 1 <= N <= M <= L <= 6".into()];
    Ok((grid, cases))
}

fn oracle(config: &VerifyConfig) -> Result<SuiteOutput> {
    let tol = config.tol(Suite::Oracle);
    let mut cases = Vec::new();
    for (d, m, l) in oracle_grid() {
        let basis = Arc::new(enumerate_basis(d, m)?);
        for (ik, kind) in InputKind::BOTH.into_iter().enumerate() {
            let mut rng = seeded_rng(cell_seed(config.seed, Suite::Oracle, &[d, m, l, ik]));
            let mut worst = 0.0f64;
            for _ in 0..SAMPLES_PER_KIND {
                let x = draw(kind, &mut rng, &basis);
                let fast = reduce_one(&clone_channel(&x, l)?)?;
                let slow = oracle_clone(&x, l)?;
                worst = worse(worst, fast.max_abs_diff(&slow.reduced)?);
                worst = worse(worst, slow.site_spread()?);
            }
            cases.push(CaseResult::new(
                Suite::Oracle.name(),
                CaseParams {
                    d,
                    m,
                    l: Some(l),
                    kind: Some(kind.name().into()),
                    samples: Some(SAMPLES_PER_KIND),
                    ..Default::default()
                },
                worst,
                tol,
            ));
        }
    }
    let grid = vec![format!(
        "d = 2: M in 1..=3, L in M..=4; d = 3: M in 1..=2, L in M..=3; {SAMPLES_PER_KIND} psd + {SAMPLES_PER_KIND} hermitian inputs per cell"
    )];
    Ok((grid, cases))
}

fn covariance(config: &VerifyConfig) -> Result<SuiteOutput> {
    let tol = config.tol(Suite::Covariance);
    let mut cases = Vec::new();
    for (d, m, l) in oracle_grid() {
        let basis = Arc::new(enumerate_basis(d, m)?);
        let mut rng = seeded_rng(cell_seed(config.seed, Suite::Covariance, &[d, m, l]));
        let mut worst = 0.0f64;
        for _ in 0..COVARIANCE_SAMPLES {
            let x = random::psd_input(&mut rng, &basis);
            let u = random::haar_unitary(&mut rng, d);
            worst = worse(worst, covariance_check(&u, &x, l)?);
        }
        cases.push(CaseResult::new(
            Suite::Covariance.name(),
            CaseParams {
                d,
                m,
                l: Some(l),
                samples: Some(COVARIANCE_SAMPLES),
                ..Default::default()
            },
            worst,
            tol,
        ));
    }
    let grid = vec![format!(
        "oracle grid, {COVARIANCE_SAMPLES} Haar unitaries with psd inputs per cell"
    )];
    Ok((grid, cases))
}
