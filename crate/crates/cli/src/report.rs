use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Parameters of one verification case. Unused fields are omitted from the
/// JSON.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CaseParams {
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub suite: String,
    pub params: CaseParams,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CaseResult {
    pub fn new(suite: &str, params: CaseParams, residual: f64, tolerance: f64) -> Self {
        CaseResult {
            suite: suite.to_string(),
            params,
            residual,
            tolerance,
            // NaN residuals fail
            pass: residual <= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub parameter_grid: Vec<String>,
    pub cases: Vec<CaseResult>,
    pub overall: Status,
}

impl RunReport {
    pub fn new(suite: &str, seed: u64, parameter_grid: Vec<String>, cases: Vec<CaseResult>) -> Self {
        let overall = if cases.iter().all(|c| c.pass) {
            Status::Pass
        } else {
            Status::Fail
        };
        RunReport {
            suite: suite.to_string(),
            seed,
            parameter_grid,
            cases,
            overall,
        }
    }

    pub fn passed(&self) -> bool {
        self.overall == Status::Pass
    }

    pub fn max_residual(&self) -> f64 {
        self.cases.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_requires_every_case() {
        let p = CaseParams { d: 2, m: 1, ..Default::default() };
        let ok = CaseResult::new("x", p.clone(), 1e-13, 1e-12);
        let bad = CaseResult::new("x", p.clone(), 1e-11, 1e-12);
        let nan = CaseResult::new("x", p, f64::NAN, 1e-12);
        assert!(RunReport::new("x", 1, vec![], vec![ok.clone()]).passed());
        assert!(!RunReport::new("x", 1, vec![], vec![ok.clone(), bad]).passed());
        assert!(!RunReport::new("x", 1, vec![], vec![ok, nan]).passed());
        assert!(RunReport::new("x", 1, vec![], vec![]).passed());
    }

    #[test]
    fn optional_params_are_omitted() {
        let p = CaseParams { d: 3, m: 2, l: Some(4), ..Default::default() };
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"d":3,"m":2,"l":4}"#);
    }
}
