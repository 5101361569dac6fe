//! Oracle-equivalence suites: closed forms against definitional measures,
//! integrals against exact diagonalisation, LMG closed forms against the
//! generic pipeline, and a state-validity fuzz.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::eigh;
use crate::lmg::{lmg_validate, LMG_AGREEMENT};
use crate::measures::{closed_xxz, deficit_branch_audit, measures, MeasureSet};
use crate::states::{lmg_pair_state, xxz_state, XState};
use crate::sweep::Measure;
use crate::xxz::{correlators, ed::ed_extrapolated};

pub const CLOSED_FORM_GRID: [f64; 8] = [-0.9, -0.5, -0.1, 0.3, 0.7, 1.0, 1.5, 2.5];
pub const CLOSED_FORM_TOL: f64 = 1e-7;
pub const ED_GRID: [f64; 8] = [-0.9, -0.5, 0.0, 0.5, 0.9, 1.5, 2.0, 3.0];
pub const ED_TOL_NEAREST: f64 = 5e-3;
pub const ED_TOL_NEXT_NEAREST: f64 = 1e-2;
pub const LMG_PAIRED_GRID: [f64; 10] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
pub const LMG_POLARIZED_GRID: [f64; 3] = [1.0, 1.5, 2.0];
pub const LMG_ZERO_TOL: f64 = 1e-10;
pub const STATE_TOL: f64 = 1e-10;
pub const STATE_FUZZ_POINTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    ClosedForms,
    Ed,
    Lmg,
    States,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::ClosedForms, Suite::Ed, Suite::Lmg, Suite::States];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ClosedForms => "closed-forms",
            Suite::Ed => "ed",
            Suite::Lmg => "lmg",
            Suite::States => "states",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationOptions {
    pub ed_sizes: Vec<usize>,
    pub state_points: usize,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            ed_sizes: crate::xxz::ed::EXTRAPOLATION_SIZES.to_vec(),
            state_points: STATE_FUZZ_POINTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub label: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ResidualRow {
    fn new(label: String, residual: f64, tolerance: f64) -> Self {
        Self {
            label,
            residual,
            tolerance,
            passed: residual <= tolerance,
            error: None,
        }
    }

    fn failed(label: String, tolerance: f64, e: &Error) -> Self {
        Self {
            label,
            residual: f64::NAN,
            tolerance,
            passed: false,
            error: Some(e.to_string()),
        }
    }
}

/// A discrepancy that is reported but does not fail the suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub label: String,
    pub definitional: f64,
    pub published: f64,
    pub mismatch: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub rows: Vec<ResidualRow>,
    pub findings: Vec<Finding>,
}

impl SuiteReport {
    fn new(suite: Suite, rows: Vec<ResidualRow>, findings: Vec<Finding>) -> Self {
        Self {
            suite,
            passed: rows.iter().all(|r| r.passed),
            rows,
            findings,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

pub fn run_suite(suite: Suite, opts: &ValidationOptions) -> Result<SuiteReport> {
    Ok(match suite {
        Suite::ClosedForms => closed_forms(),
        Suite::Ed => ed(&opts.ed_sizes)?,
        Suite::Lmg => lmg(),
        Suite::States => states(opts.state_points),
    })
}

fn closed_forms_at(delta: f64, r: u32) -> Result<(MeasureSet, MeasureSet)> {
    let c = correlators(delta, r)?;
    let closed = closed_xxz(&c)?;
    let definitional = measures(&xxz_state(&c)?.to_operator())?;
    Ok((closed, definitional))
}

/// Closed-form versus definitional measures on the 16-point `(Δ, r)` grid.
pub fn closed_forms() -> SuiteReport {
    let cases: Vec<(f64, u32)> = CLOSED_FORM_GRID
        .iter()
        .flat_map(|&d| [(d, 1), (d, 2)])
        .collect();
    let rows: Vec<Vec<ResidualRow>> = cases
        .par_iter()
        .map(|&(delta, r)| match closed_forms_at(delta, r) {
            Ok((closed, def)) => {
                let mut rows: Vec<ResidualRow> = Measure::ALL
                    .iter()
                    .map(|m| {
                        ResidualRow::new(
                            format!("{m} Δ={delta} r={r}"),
                            (m.get(&closed) - m.get(&def)).abs(),
                            CLOSED_FORM_TOL,
                        )
                    })
                    .collect();
                if let Ok(audit) = correlators(delta, r).and_then(|c| deficit_branch_audit(&c)) {
                    rows.push(ResidualRow::new(
                        format!("I-branch Δ={delta} r={r}"),
                        audit.disagreement(),
                        crate::measures::BRANCH_AUDIT_TOL,
                    ));
                }
                rows
            }
            Err(e) => vec![ResidualRow::failed(format!("Δ={delta} r={r}"), CLOSED_FORM_TOL, &e)],
        })
        .collect();
    SuiteReport::new(Suite::ClosedForms, rows.into_iter().flatten().collect(), Vec::new())
}

/// Integral correlators against the extrapolated finite-ring values.
pub fn ed(sizes: &[usize]) -> Result<SuiteReport> {
    for &n in sizes {
        if n % 2 != 0 || !(crate::xxz::ed::MIN_SITES..=crate::xxz::ed::MAX_SITES).contains(&n) {
            return Err(Error::Domain(format!("invalid ring size {n}")));
        }
    }
    let mut rows = Vec::new();
    for &delta in &ED_GRID {
        for r in [1u32, 2] {
            let tol = if r == 1 { ED_TOL_NEAREST } else { ED_TOL_NEXT_NEAREST };
            let label = format!("Δ={delta} r={r}");
            match correlators(delta, r).and_then(|c| Ok((c, ed_extrapolated(delta, r, sizes)?))) {
                Ok((exact, ring)) => {
                    rows.push(ResidualRow::new(format!("zz {label}"), (exact.zz - ring.zz).abs(), tol));
                    rows.push(ResidualRow::new(format!("xx {label}"), (exact.xx - ring.xx).abs(), tol));
                }
                Err(e) => rows.push(ResidualRow::failed(label, tol, &e)),
            }
        }
    }
    Ok(SuiteReport::new(Suite::Ed, rows, Vec::new()))
}

/// LMG closed forms against the pipeline; LQU disagreements become findings.
pub fn lmg() -> SuiteReport {
    let mut rows = Vec::new();
    let mut findings = Vec::new();
    for &lambda in LMG_PAIRED_GRID.iter().chain(&LMG_POLARIZED_GRID) {
        let polarized = lambda >= 1.0;
        let tol = if polarized { LMG_ZERO_TOL } else { LMG_AGREEMENT };
        match lmg_validate(lambda) {
            Ok(p) => {
                let residual = if polarized {
                    p.definitional
                        .as_array()
                        .iter()
                        .chain(p.closed.as_array().iter())
                        .fold(0.0f64, |a, v| a.max(v.abs()))
                } else {
                    p.residual()
                };
                rows.push(ResidualRow::new(format!("N,I,D λ={lambda}"), residual, tol));
                if p.lqu.is_mismatch() {
                    findings.push(Finding {
                        label: format!("U λ={lambda}"),
                        definitional: p.lqu.lqu_definitional,
                        published: p.lqu.lqu_published,
                        mismatch: p.lqu.mismatch,
                    });
                }
            }
            Err(e) => rows.push(ResidualRow::failed(format!("λ={lambda}"), tol, &e)),
        }
    }
    SuiteReport::new(Suite::Lmg, rows, findings)
}

/// Trace, Hermiticity and positivity defects of a constructed state.
pub fn state_defect(s: &XState) -> f64 {
    let m = s.matrix();
    let trace = (m.trace().re - 1.0).abs().max(m.trace().im.abs());
    let herm = m.max_asymmetry();
    let psd = (-eigh(&s.to_operator()).eigenvalues[0]).max(0.0);
    trace.max(herm).max(psd)
}

/// Parameter points spread over both models: XXZ `Δ ∈ [-1.5, 3]` at both
/// separations and LMG `λ ∈ [0, 2]` in both mode pairings.
pub fn state_fuzz_points(total: usize) -> Vec<(&'static str, f64, u32)> {
    let quarter = total.div_ceil(4);
    let mut out = Vec::with_capacity(4 * quarter);
    for k in 0..quarter {
        let t = (k as f64 + 0.5) / quarter as f64;
        out.push(("xxz", -1.5 + 4.5 * t, 1));
        out.push(("xxz", -1.5 + 4.5 * t, 2));
        out.push(("lmg-paired", 2.0 * t, 0));
        out.push(("lmg-unpaired", 2.0 * t, 0));
    }
    out.truncate(total);
    out
}

fn state_at(kind: &str, p: f64, r: u32) -> Result<XState> {
    match kind {
        "xxz" => xxz_state(&correlators(p, r)?),
        "lmg-paired" => lmg_pair_state(p, true),
        _ => lmg_pair_state(p, false),
    }
}

pub fn states(points: usize) -> SuiteReport {
    let results: Vec<(String, Result<f64>)> = state_fuzz_points(points)
        .par_iter()
        .map(|&(kind, p, r)| {
            (
                format!("{kind} p={p} r={r}"),
                state_at(kind, p, r).map(|s| state_defect(&s)),
            )
        })
        .collect();
    let mut worst = ResidualRow::new(format!("{} states", results.len()), 0.0, STATE_TOL);
    let mut rows = Vec::new();
    for (label, res) in results {
        match res {
            Ok(d) if d > STATE_TOL => rows.push(ResidualRow::new(label, d, STATE_TOL)),
            Ok(d) => worst.residual = worst.residual.max(d),
            Err(e) => rows.push(ResidualRow::failed(label, STATE_TOL, &e)),
        }
    }
    rows.insert(0, worst);
    SuiteReport::new(Suite::States, rows, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn lmg_suite_passes_with_findings() {
        let r = lmg();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.findings.len(), 9);
        assert!(r.findings.iter().all(|f| f.mismatch > 1e-3));
    }

    #[test]
    fn fuzz_points_cover_both_models() {
        let pts = state_fuzz_points(100);
        assert_eq!(pts.len(), 100);
        assert!(pts.iter().any(|p| p.0 == "xxz" && p.2 == 2));
        assert!(pts.iter().any(|p| p.0 == "lmg-unpaired"));
    }

    #[test]
    fn small_state_suite_passes() {
        let r = states(200);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn ed_rejects_bad_sizes() {
        assert!(ed(&[12, 13]).is_err());
    }
}
