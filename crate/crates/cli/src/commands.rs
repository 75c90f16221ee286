use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use uqcm::symspace::SymOperatorDoc;
use uqcm::{
    clone_channel, exact, fidelity, oracle_clone, reduce_one, shrink, CloneAmplitudes, PsdPolicy,
    QuditOperator, SymOperator,
};

use crate::error::CliError;

/// Scientific notation with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Inclusive integer range parsed from `"3"`, `"2..5"` or `"2..=5"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub lo: usize,
    pub hi: usize,
}

impl IntRange {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("cannot parse range {s:?}; use N, A..B or A..=B"));
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let range = match s.split_once("..") {
            Some((a, b)) => IntRange {
                lo: parse(a)?,
                hi: parse(b.strip_prefix('=').unwrap_or(b))?,
            },
            None => {
                let v = parse(s)?;
                IntRange { lo: v, hi: v }
            }
        };
        if range.lo > range.hi {
            return Err(CliError::Usage(format!("range {s:?} is empty")));
        }
        Ok(range)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

pub fn write_output(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

/// CSV of the amplitude table for `(d, M, L)`.
pub fn coeffs_csv(d: usize, m: usize, l: usize) -> Result<String, CliError> {
    let table = CloneAmplitudes::new(d, m, l)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "j",
        "k",
        "alpha_squared_numerator",
        "alpha_squared_denominator",
        "alpha_float",
    ])?;
    for row in table.rows() {
        w.write_record([
            row.input.to_string(),
            row.added.to_string(),
            row.squared.numer().to_string(),
            row.squared.denom().to_string(),
            format_float(row.alpha),
        ])?;
    }
    finish_csv(w)
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// Fidelity and shrinking-factor grid over `d`, `N` and `M`, keeping rows
/// with `1 <= N <= M`.
pub fn tables_csv(ds: IntRange, ns: IntRange, ms: IntRange) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["d", "n", "m", "fidelity", "fidelity_float", "shrink", "shrink_float"])?;
    let mut rows = 0usize;
    for d in ds.iter() {
        for n in ns.iter().filter(|&n| n >= 1) {
            for m in ms.iter().filter(|&m| m >= n) {
                let f = fidelity(d, n, m)?;
                let eta = shrink(d, n, m)?;
                w.write_record([
                    d.to_string(),
                    n.to_string(),
                    m.to_string(),
                    exact::format_rational(&f),
                    format_float(exact::to_f64(&f)),
                    exact::format_rational(&eta),
                    format_float(exact::to_f64(&eta)),
                ])?;
                rows += 1;
            }
        }
    }
    if rows == 0 {
        return Err(CliError::Usage("no (d, N, M) with 1 <= N <= M in the given ranges".into()));
    }
    finish_csv(w)
}

#[derive(Clone, Debug, Serialize)]
pub struct ReducedDoc {
    pub d: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&QuditOperator> for ReducedDoc {
    fn from(op: &QuditOperator) -> Self {
        ReducedDoc {
            d: op.d(),
            entries: op.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// Output of `uqcm clone`: a readable SymOperator document with optional
/// extra fields.
#[derive(Clone, Debug, Serialize)]
pub struct CloneDoc {
    #[serde(flatten)]
    pub output: SymOperatorDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<ReducedDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_residual: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CloneOptions {
    pub reduced: bool,
    pub oracle: bool,
    /// Skip the Hermitian / unit-trace validation of the input.
    pub skip_validation: bool,
    pub psd: PsdPolicy,
}

pub fn clone_document(input: &str, l: usize, opts: CloneOptions) -> Result<CloneDoc, CliError> {
    let x = SymOperator::from_json(input)?;
    let mut warnings = Vec::new();
    if !opts.skip_validation {
        warnings = x.validate_density(opts.psd)?.warnings;
    }
    let y = clone_channel(&x, l)?;
    let reduced = if opts.reduced || opts.oracle {
        Some(reduce_one(&y)?)
    } else {
        None
    };
    let oracle_residual = if opts.oracle {
        let slow = oracle_clone(&x, l)?;
        let fast = reduced.as_ref().expect("computed above");
        Some(fast.max_abs_diff(&slow.reduced)?)
    } else {
        None
    };
    Ok(CloneDoc {
        output: y.to_doc(),
        reduced: if opts.reduced { reduced.as_ref().map(ReducedDoc::from) } else { None },
        oracle_residual,
        warnings,
    })
}
