//! Parameter sweeps, finite-difference derivatives and detection of
//! transition signatures.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lmg::lmg_closed_measures;
use crate::measures::{closed_xxz, negativity_margin, MeasureSet};
use crate::xxz::{correlators, CorrelatorCache, Regime};

/// Grid points closer than `step * BOUNDARY_GUARD` to a phase boundary
/// trigger the half-step offset.
const BOUNDARY_GUARD: f64 = 1e-9;
/// Bisection stops at this bracket width.
pub const CROSSING_WIDTH: f64 = 1e-6;
/// Values at or below this count as zero for positivity tests.
pub const ZERO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Xxz,
    Lmg,
}

impl Model {
    /// Parameter values where the ground state changes character.
    pub fn boundaries(self) -> &'static [f64] {
        match self {
            Model::Xxz => &[-1.0, 1.0],
            Model::Lmg => &[1.0],
        }
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xxz" => Ok(Model::Xxz),
            "lmg" => Ok(Model::Lmg),
            _ => Err(Error::Domain(format!("unknown model '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Measure {
    N,
    I,
    D,
    U,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::N, Measure::I, Measure::D, Measure::U];

    pub fn label(self) -> &'static str {
        match self {
            Measure::N => "N",
            Measure::I => "I",
            Measure::D => "D",
            Measure::U => "U",
        }
    }

    pub fn get(self, m: &MeasureSet) -> f64 {
        match self {
            Measure::N => m.negativity,
            Measure::I => m.deficit,
            Measure::D => m.tdd,
            Measure::U => m.lqu,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "N" | "n" => Ok(Measure::N),
            "I" | "i" => Ok(Measure::I),
            "D" | "d" => Ok(Measure::D),
            "U" | "u" => Ok(Measure::U),
            other => Err(Error::Domain(format!("unknown measure '{other}'"))),
        }
    }
}

/// Phase label of a sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Ferro,
    Critical,
    Isotropic,
    Gapped,
    /// LMG, `λ < 1`.
    Paired,
    /// LMG, `λ ≥ 1`.
    Polarized,
}

impl Phase {
    pub fn of(model: Model, param: f64) -> Self {
        match model {
            Model::Xxz => match Regime::of(param) {
                Regime::Ferro => Phase::Ferro,
                Regime::Critical => Phase::Critical,
                Regime::Isotropic => Phase::Isotropic,
                Regime::Gapped => Phase::Gapped,
            },
            Model::Lmg => {
                if param < 1.0 {
                    Phase::Paired
                } else {
                    Phase::Polarized
                }
            }
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Phase::Ferro => "ferro",
            Phase::Critical => "critical",
            Phase::Isotropic => "isotropic",
            Phase::Gapped => "gapped",
            Phase::Paired => "paired",
            Phase::Polarized => "polarized",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub model: Model,
    /// Site separation; ignored for LMG.
    pub r: u32,
    pub param_min: f64,
    pub param_max: f64,
    pub step: f64,
    /// Finite-difference step; `None` means `step`.
    pub derivative_step: Option<f64>,
    pub measures: Vec<Measure>,
    /// Keep grid points that land on a phase boundary instead of offsetting.
    #[serde(default)]
    pub include_boundaries: bool,
}

impl SweepConfig {
    pub fn new(model: Model, r: u32, param_min: f64, param_max: f64, step: f64) -> Self {
        Self {
            model,
            r,
            param_min,
            param_max,
            step,
            derivative_step: None,
            measures: Measure::ALL.to_vec(),
            include_boundaries: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.param_min, self.param_max, self.step]
            .iter()
            .all(|v| v.is_finite());
        if !finite || !(self.param_min < self.param_max) {
            return Err(Error::Domain(format!(
                "sweep range must satisfy min < max, got [{}, {}]",
                self.param_min, self.param_max
            )));
        }
        if !(self.step > 0.0) {
            return Err(Error::Domain(format!("step must be positive, got {}", self.step)));
        }
        if let Some(h) = self.derivative_step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::Domain(format!("derivative step must be positive, got {h}")));
            }
        }
        if (self.param_max - self.param_min) / self.step > 1e7 {
            return Err(Error::Domain("sweep has more than 10^7 points".into()));
        }
        if self.model == Model::Xxz && !(self.r == 1 || self.r == 2) {
            return Err(Error::Domain(format!("separation must be 1 or 2, got {}", self.r)));
        }
        if self.model == Model::Lmg && self.param_min < 0.0 {
            return Err(Error::Domain("LMG coupling must be non-negative".into()));
        }
        if self.measures.is_empty() {
            return Err(Error::Domain("no measures requested".into()));
        }
        Ok(())
    }

    pub fn derivative_step(&self) -> f64 {
        self.derivative_step.unwrap_or(self.step)
    }

    fn points(&self, offset: f64) -> Vec<f64> {
        let span = self.param_max - self.param_min;
        let count = ((span / self.step - offset) * (1.0 + 1e-12) + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.param_min + (k as f64 + offset) * self.step)
            .collect()
    }

    /// Sample points; shifted by half a step if any would sit on a boundary.
    pub fn grid(&self) -> Vec<f64> {
        let plain = self.points(0.0);
        if self.include_boundaries {
            return plain;
        }
        let guard = self.step * BOUNDARY_GUARD;
        let hits = plain.iter().any(|p| {
            self.model
                .boundaries()
                .iter()
                .any(|b| (p - b).abs() <= guard)
        });
        if hits {
            self.points(0.5)
        } else {
            plain
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub param: f64,
    pub phase: Phase,
    pub values: MeasureSet,
    /// `NaN` where no stencil fits inside the phase.
    pub derivatives: MeasureSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SweepPoint {
    Ok(SweepRecord),
    Failed { param: f64, phase: Phase, error: String },
}

impl SweepPoint {
    pub fn param(&self) -> f64 {
        match self {
            SweepPoint::Ok(r) => r.param,
            SweepPoint::Failed { param, .. } => *param,
        }
    }

    pub fn record(&self) -> Option<&SweepRecord> {
        match self {
            SweepPoint::Ok(r) => Some(r),
            SweepPoint::Failed { .. } => None,
        }
    }
}

/// Closed-form measures of one model at one parameter value.
pub struct Evaluator {
    model: Model,
    r: u32,
    cache: CorrelatorCache,
}

impl Evaluator {
    pub fn new(model: Model, r: u32) -> Self {
        Self {
            model,
            r,
            cache: CorrelatorCache::new(),
        }
    }

    pub fn measures(&self, param: f64) -> Result<MeasureSet> {
        match self.model {
            Model::Xxz => closed_xxz(&self.cache.get(param, self.r)?),
            Model::Lmg => Ok(lmg_closed_measures(param)?.measures),
        }
    }

    fn derivatives(&self, param: f64, h: f64, value: &MeasureSet) -> MeasureSet {
        let phase = Phase::of(self.model, param);
        let at = |k: f64| -> Option<[f64; 4]> {
            let x = param + k * h;
            if Phase::of(self.model, x) != phase {
                return None;
            }
            self.measures(x).ok().map(|m| m.as_array())
        };
        let f0 = value.as_array();
        let mut out = [f64::NAN; 4];
        let (fm, fp) = (at(-1.0), at(1.0));
        if let (Some(a), Some(b)) = (fm, fp) {
            for k in 0..4 {
                out[k] = (b[k] - a[k]) / (2.0 * h);
            }
        } else if let Some(b) = fp {
            match at(2.0) {
                Some(c) => (0..4).for_each(|k| out[k] = (-3.0 * f0[k] + 4.0 * b[k] - c[k]) / (2.0 * h)),
                None => (0..4).for_each(|k| out[k] = (b[k] - f0[k]) / h),
            }
        } else if let Some(a) = fm {
            match at(-2.0) {
                Some(c) => (0..4).for_each(|k| out[k] = (3.0 * f0[k] - 4.0 * a[k] + c[k]) / (2.0 * h)),
                None => (0..4).for_each(|k| out[k] = (f0[k] - a[k]) / h),
            }
        }
        MeasureSet::from_array(out)
    }

    pub fn point(&self, param: f64, h: f64) -> SweepPoint {
        let phase = Phase::of(self.model, param);
        match self.measures(param) {
            Ok(values) => SweepPoint::Ok(SweepRecord {
                param,
                phase,
                values,
                derivatives: self.derivatives(param, h, &values),
            }),
            Err(e) => SweepPoint::Failed {
                param,
                phase,
                error: e.to_string(),
            },
        }
    }
}

/// One entry per grid point, in grid order.  Points are evaluated in
/// parallel on the current rayon pool; failures are kept in place.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepPoint>> {
    cfg.validate()?;
    let eval = Evaluator::new(cfg.model, cfg.r);
    let h = cfg.derivative_step();
    Ok(cfg.grid().par_iter().map(|&p| eval.point(p, h)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CriticalKind {
    Kink,
    DerivativeJump,
    SuddenBirth,
}

impl CriticalKind {
    pub fn label(self) -> &'static str {
        match self {
            CriticalKind::Kink => "kink",
            CriticalKind::DerivativeJump => "derivative-jump",
            CriticalKind::SuddenBirth => "sudden-birth",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalReport {
    pub location: f64,
    pub kind: CriticalKind,
    pub measure: Measure,
    pub magnitude: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// Multiple of the local median a statistic must exceed.
    pub ratio: f64,
    /// Half-width, in intervals, of the window for the local median.
    pub window: usize,
    /// Smallest value counted as positive for sudden birth.
    pub birth_floor: f64,
    /// Absolute floor for slope and slope-change statistics.
    pub slope_floor: f64,
    /// Reports of one measure closer than this many steps are merged.
    pub merge_steps: f64,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            ratio: 10.0,
            window: 10,
            birth_floor: 1e-6,
            slope_floor: 1e-6,
            merge_steps: 3.0,
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Flags `stat[i]` exceeding `ratio` times the median of its neighbours.
fn spikes(stat: &[f64], det: &DetectionConfig) -> Vec<(usize, f64, f64)> {
    let mut out = Vec::new();
    for i in 0..stat.len() {
        let lo = i.saturating_sub(det.window);
        let hi = (i + det.window + 1).min(stat.len());
        let neighbours: Vec<f64> = (lo..hi).filter(|&j| j != i).map(|j| stat[j]).collect();
        let threshold = (det.ratio * median(neighbours)).max(det.slope_floor);
        if stat[i] > threshold {
            out.push((i, stat[i], threshold));
        }
    }
    out
}

fn detect_measure(records: &[&SweepRecord], m: Measure, det: &DetectionConfig) -> Vec<CriticalReport> {
    let p: Vec<f64> = records.iter().map(|r| r.param).collect();
    let v: Vec<f64> = records.iter().map(|r| m.get(&r.values)).collect();
    let mut found = Vec::new();
    let report = |location, kind, magnitude, threshold| CriticalReport {
        location,
        kind,
        measure: m,
        magnitude,
        threshold,
    };

    for i in 0..v.len() - 1 {
        let (a, b) = (v[i].abs(), v[i + 1].abs());
        let birth = (a <= ZERO_TOL && b > det.birth_floor) || (b <= ZERO_TOL && a > det.birth_floor);
        if birth {
            found.push(report(
                0.5 * (p[i] + p[i + 1]),
                CriticalKind::SuddenBirth,
                a.max(b),
                det.birth_floor,
            ));
        }
    }

    let slopes: Vec<f64> = (0..v.len() - 1)
        .map(|i| (v[i + 1] - v[i]) / (p[i + 1] - p[i]))
        .collect();
    let abs_slopes: Vec<f64> = slopes.iter().map(|s| s.abs()).collect();
    for (i, mag, thr) in spikes(&abs_slopes, det) {
        found.push(report(0.5 * (p[i] + p[i + 1]), CriticalKind::DerivativeJump, mag, thr));
    }

    let changes: Vec<f64> = slopes.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    for (i, mag, thr) in spikes(&changes, det) {
        found.push(report(p[i + 1], CriticalKind::Kink, mag, thr));
    }

    merge(found, det.merge_steps * typical_step(&p))
}

fn typical_step(p: &[f64]) -> f64 {
    median(p.windows(2).map(|w| w[1] - w[0]).collect())
}

/// Clusters reports by location and keeps the strongest of each cluster.
fn merge(mut found: Vec<CriticalReport>, radius: f64) -> Vec<CriticalReport> {
    found.sort_by(|a, b| a.location.total_cmp(&b.location));
    let mut out: Vec<CriticalReport> = Vec::new();
    let mut cluster_end = f64::NEG_INFINITY;
    for r in found {
        let stronger = |a: &CriticalReport, b: &CriticalReport| {
            (a.kind, a.magnitude / a.threshold) > (b.kind, b.magnitude / b.threshold)
        };
        match out.last_mut() {
            Some(last) if r.location - cluster_end <= radius => {
                if stronger(&r, last) {
                    *last = r;
                }
            }
            _ => out.push(r),
        }
        cluster_end = r.location;
    }
    out
}

/// Transition signatures of each requested measure along a sweep.
/// Failed points are skipped; fewer than five good records give no reports.
pub fn detect_critical_points(
    points: &[SweepPoint],
    measures: &[Measure],
    det: &DetectionConfig,
) -> Vec<CriticalReport> {
    let records: Vec<&SweepRecord> = points.iter().filter_map(SweepPoint::record).collect();
    if records.len() < 5 {
        return Vec::new();
    }
    let mut out: Vec<CriticalReport> = measures
        .iter()
        .flat_map(|&m| detect_measure(&records, m, det))
        .collect();
    out.sort_by(|a, b| {
        a.measure
            .index()
            .cmp(&b.measure.index())
            .then(a.location.total_cmp(&b.location))
    });
    out
}

/// Bisects a sign change of `f` on `[lo, hi]` down to `width`.
pub fn bisect_sign_change(f: impl Fn(f64) -> Result<f64>, lo: f64, hi: f64, width: f64) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::Domain(format!("bracket must satisfy lo < hi, got ({lo}, {hi})")));
    }
    let (mut a, mut b) = (lo, hi);
    let fa = f(a)?;
    let fb = f(b)?;
    if (fa > 0.0) == (fb > 0.0) {
        return Err(Error::Bracket { lo, hi });
    }
    let a_positive = fa > 0.0;
    while b - a > width {
        let mid = 0.5 * (a + b);
        if (f(mid)? > 0.0) == a_positive {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Edge of the region where an XXZ measure is positive, inside `(lo, hi)`.
///
/// Negativity uses its signed entanglement margin; the other measures use
/// `value - ZERO_TOL`.
pub fn locate_zero_crossing(measure: Measure, r: u32, lo: f64, hi: f64) -> Result<f64> {
    let indicator = |delta: f64| -> Result<f64> {
        let c = correlators(delta, r)?;
        Ok(match measure {
            Measure::N => negativity_margin(&c),
            other => other.get(&closed_xxz(&c)?) - ZERO_TOL,
        })
    };
    bisect_sign_change(indicator, lo, hi, CROSSING_WIDTH)
}
