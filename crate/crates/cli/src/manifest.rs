use serde::{Deserialize, Serialize};
use spinqcorr::measures::{REFINE_WIDTH, TDD_REFINE_WIDTH};
use spinqcorr::quadrature::QuadratureSpec;
use spinqcorr::sweep::{DetectionConfig, SweepConfig, ZERO_TOL};
use spinqcorr::xxz::correlator_quadrature;

use crate::output::SIGNIFICANT_DIGITS;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub quadrature: QuadratureSpec,
    pub minimizer_width: f64,
    pub tdd_minimizer_width: f64,
    pub zero_tol: f64,
    pub significant_digits: usize,
}

impl Tolerances {
    pub fn current() -> Self {
        Self {
            quadrature: correlator_quadrature(),
            minimizer_width: REFINE_WIDTH,
            tdd_minimizer_width: TDD_REFINE_WIDTH,
            zero_tol: ZERO_TOL,
            significant_digits: SIGNIFICANT_DIGITS,
        }
    }
}

/// Everything needed to rerun a sweep, written next to its CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: SweepConfig,
    pub detection: DetectionConfig,
    pub tool_version: String,
    pub timestamp: String,
    pub tolerances: Tolerances,
}

impl RunManifest {
    pub fn new(config: SweepConfig, detection: DetectionConfig) -> Self {
        Self {
            command: "sweep".into(),
            config,
            detection,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            tolerances: Tolerances::current(),
        }
    }
}
