//! The unit of verification output: one named check with its deviation.

use serde::{Deserialize, Serialize};

use crate::lattice::LatticeGrid;
use crate::qcore::QContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridParams {
    pub lo: i64,
    pub hi: i64,
    pub margin: usize,
}

impl From<&LatticeGrid> for GridParams {
    fn from(g: &LatticeGrid) -> Self {
        GridParams {
            lo: g.n_lo(),
            hi: g.n_hi(),
            margin: g.margin(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub q: f64,
    pub alpha: f64,
    pub n_max: usize,
    pub grid: Option<GridParams>,
    pub seed: Option<u64>,
}

impl ReportParams {
    pub fn new(ctx: &QContext, n_max: usize) -> Self {
        ReportParams {
            q: ctx.q(),
            alpha: ctx.alpha(),
            n_max,
            grid: None,
            seed: None,
        }
    }

    pub fn with_grid(mut self, grid: &LatticeGrid) -> Self {
        self.grid = Some(grid.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: ReportParams,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub details: Option<serde_json::Value>,
}

impl VerificationReport {
    /// Passes iff `max_deviation < tolerance` (NaN fails).
    pub fn new(
        check: impl Into<String>,
        params: ReportParams,
        max_deviation: f64,
        tolerance: f64,
    ) -> Self {
        VerificationReport {
            check: check.into(),
            params,
            max_deviation,
            tolerance,
            pass: max_deviation < tolerance,
            details: None,
        }
    }

    pub fn with_details(mut self, details: serde_json::Value) -> Self {
        self.details = Some(details);
        self
    }

    /// Forces failure regardless of the deviation (e.g. a monotonicity
    /// requirement that the single number cannot express).
    pub fn require(mut self, cond: bool) -> Self {
        self.pass = self.pass && cond;
        self
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_schema_fields() {
        let ctx = QContext::new(0.5, 0.3).unwrap();
        let grid = LatticeGrid::default_for(ctx);
        let r = VerificationReport::new(
            "x",
            ReportParams::new(&ctx, 12).with_grid(&grid).with_seed(7),
            1e-9,
            1e-8,
        );
        assert!(r.pass);
        let v: serde_json::Value = serde_json::from_str(&r.to_json_line()).unwrap();
        for key in ["check", "params", "max_deviation", "tolerance", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["params"]["grid"]["lo"], -40);
        assert_eq!(v["params"]["seed"], 7);
        assert!(v.get("details").is_none());
        let back: VerificationReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn nan_fails() {
        let ctx = QContext::new(0.5, 0.3).unwrap();
        assert!(!VerificationReport::new("x", ReportParams::new(&ctx, 1), f64::NAN, 1.0).pass);
        assert!(
            !VerificationReport::new("x", ReportParams::new(&ctx, 1), 0.0, 1.0)
                .require(false)
                .pass
        );
    }
}
