//! Adaptive Gauss–Kronrod quadrature for the correlator integrals.
//!
//! The integrands come in two shapes: even functions on the real line with a
//! removable singularity at the origin, and complex functions on the line
//! `Im x = 1/2`.  Both decay exponentially, so a finite cutoff `T` is used.
//!
//! The core routine is a global adaptive scheme: a 15-point Kronrod rule with
//! its embedded 7-point Gauss rule on every interval, always bisecting the
//! interval with the largest error estimate.  Ties are broken by position, so
//! the sequence of subdivisions is fully deterministic.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on integrand evaluations per integral.
pub const EVALUATION_BUDGET: usize = 1_000_000;
/// Largest tolerated imaginary part of a shifted-contour integral.
pub const CONTOUR_IMAG_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub tail_cutoff: f64,
    pub singularity_window: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            tail_cutoff: 40.0,
            singularity_window: 1e-4,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Domain(format!(
                "quadrature tolerances must be positive (abs {}, rel {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if !(self.tail_cutoff > 1.0) {
            return Err(Error::Domain(format!(
                "tail cutoff must exceed 1, got {}",
                self.tail_cutoff
            )));
        }
        if !(self.singularity_window > 0.0 && self.singularity_window < 0.1) {
            return Err(Error::Domain(format!(
                "singularity window must lie in (0, 0.1), got {}",
                self.singularity_window
            )));
        }
        Ok(())
    }

    pub fn with_tail_cutoff(mut self, tail_cutoff: f64) -> Self {
        self.tail_cutoff = tail_cutoff;
        self
    }
}

/// An integrand evaluation, kept for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrandPoint {
    Real(f64),
    Complex(Complex64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandSample {
    pub point: IntegrandPoint,
    pub value: Complex64,
}

impl IntegrandSample {
    pub fn is_finite(&self) -> bool {
        self.value.re.is_finite() && self.value.im.is_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEstimate {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

// Kronrod abscissae and weights (15 points) with the embedded 7-point Gauss
// weights; abscissae are listed from the outside in, the centre last.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    abs_integral: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod15<F>(f: &F, a: f64, b: f64) -> Result<Segment>
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<Complex64> {
        let v = f(x);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Convergence {
                estimate: f64::NAN,
                error_bound: f64::INFINITY,
                evaluations: 0,
            })
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_k = fc.norm() * WGK[7];
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 7];
    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        kronrod += (f1 + f2) * WGK[j];
        abs_k += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
        *slot = (f1, f2);
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).norm() * WGK[7];
    for (j, (f1, f2)) in values.iter().enumerate() {
        asc += ((f1 - mean).norm() + (f2 - mean).norm()) * WGK[j];
    }

    let abs_half = half.abs();
    let value = kronrod * half;
    let abs_integral = abs_k * abs_half;
    let res_asc = asc * abs_half;
    let mut error = ((kronrod - gauss) * half).norm();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    Ok(Segment {
        a,
        b,
        value,
        error,
        abs_integral,
    })
}

/// Globally adaptive integration of a complex-valued integrand over `[a, b]`,
/// with optional interior breakpoints.
///
/// Converges once the summed error estimate falls below
/// `max(abs_tol, rel_tol |I|, 50 ε ∫|f|)`; the last term is the round-off
/// floor for integrands whose pieces cancel strongly.
pub fn integrate_interval<F>(
    f: F,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<ComplexEstimate>
where
    F: Fn(f64) -> Complex64,
{
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain(format!(
            "integration breakpoints must be strictly increasing: {breakpoints:?}"
        )));
    }
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0usize;
    for w in breakpoints.windows(2) {
        heap.push(kronrod15(&f, w[0], w[1]).map_err(|e| with_count(e, evaluations))?);
        evaluations += 15;
    }

    loop {
        let (value, error, abs_integral) = heap.iter().fold(
            (Complex64::new(0.0, 0.0), 0.0, 0.0),
            |(v, e, s), seg| (v + seg.value, e + seg.error, s + seg.abs_integral),
        );
        let roundoff = 50.0 * f64::EPSILON * abs_integral;
        let tol = abs_tol.max(rel_tol * value.norm()).max(roundoff);
        if error <= tol {
            return Ok(ComplexEstimate {
                value,
                error,
                evaluations,
            });
        }
        if evaluations + 30 > EVALUATION_BUDGET {
            return Err(Error::Convergence {
                estimate: value.re,
                error_bound: error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // interval exhausted at machine resolution
            return Err(Error::Convergence {
                estimate: value.re,
                error_bound: error,
                evaluations,
            });
        }
        let left = kronrod15(&f, worst.a, mid).map_err(|e| with_count(e, evaluations))?;
        let right = kronrod15(&f, mid, worst.b).map_err(|e| with_count(e, evaluations))?;
        evaluations += 30;
        heap.push(left);
        heap.push(right);
    }
}

fn with_count(e: Error, evaluations: usize) -> Error {
    match e {
        Error::Convergence {
            estimate,
            error_bound,
            ..
        } => Error::Convergence {
            estimate,
            error_bound,
            evaluations,
        },
        other => other,
    }
}

/// `∫_{-∞}^{∞} f` for an even real integrand, computed as `2 ∫_0^T f`.
///
/// On `[0, ε)` the integrand is replaced by the straight line between the
/// caller-supplied limit `f(0⁺)` and `f(ε)`, so `f` is never evaluated at
/// the removable singularity itself.
pub fn integrate_even_realline<F>(f: F, limit0: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    let eps = spec.singularity_window;
    let f_eps = f(eps);
    if !f_eps.is_finite() || !limit0.is_finite() {
        return Err(Error::Domain(format!(
            "integrand not finite near the origin (f(0+) = {limit0}, f({eps}) = {f_eps})"
        )));
    }
    let head = 0.5 * eps * (limit0 + f_eps);
    let body = integrate_interval(
        |x| Complex64::new(f(x), 0.0),
        &[eps, spec.tail_cutoff],
        0.5 * spec.abs_tol,
        spec.rel_tol,
    )?;
    Ok(Estimate {
        value: 2.0 * (head + body.value.re),
        error: 2.0 * body.error,
        evaluations: body.evaluations + 1,
    })
}

/// `Re ∫ g(x) dx` along `x = t + i/2`, `t ∈ [-T, T]`.
///
/// The integrands on this contour are real by symmetry; an imaginary part
/// above [`CONTOUR_IMAG_TOL`] means the integrand was mis-transcribed and is
/// reported as an error instead of being dropped.
pub fn integrate_shifted_contour<G>(g: G, spec: &QuadratureSpec) -> Result<Estimate>
where
    G: Fn(Complex64) -> Complex64,
{
    spec.validate()?;
    let t_max = spec.tail_cutoff;
    let est = integrate_interval(
        |t| g(Complex64::new(t, 0.5)),
        &[-t_max, 0.0, t_max],
        spec.abs_tol,
        spec.rel_tol,
    )?;
    if est.value.im.abs() > CONTOUR_IMAG_TOL {
        return Err(Error::ContourIntegrity {
            real: est.value.re,
            imaginary: est.value.im,
        });
    }
    Ok(Estimate {
        value: est.value.re,
        error: est.error,
        evaluations: est.evaluations,
    })
}
