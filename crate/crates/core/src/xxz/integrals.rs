//! Bethe-ansatz integral representations of the correlators.
//!
//! Critical regime (`Φ = arccos(Δ)/π ∈ (0, 1)`), written in terms of
//!
//! ```text
//!   A_k = ∫ dx x^k cosh x / (sinh x cosh²(Φx))        (k = 1, 3)
//!   B_k = ∫ dx x^k sinh((1-Φ)x) / (sinh x cosh(Φx))   (k = 0, 2)
//! ```
//!
//! over the whole real line.  Gapped regime (`ν = arccosh Δ`): integrals of
//! meromorphic functions along `x = t + i/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_even_realline, integrate_shifted_contour, QuadratureSpec};

/// `|Φ - 1/2|` below which the next-nearest formulas are evaluated at
/// `Φ = 1/2 ± PHI_OFFSET` and averaged: `1/sin 2πΦ`, `cot 2πΦ` and `tan πΦ`
/// are singular there although the combination is not.
pub(crate) const PHI_SINGULAR_WINDOW: f64 = 1e-6;
pub(crate) const PHI_OFFSET: f64 = 1e-5;
/// Allowed gap between the two one-sided values; first-order in the offset.
pub(crate) const PHI_OFFSET_AGREEMENT: f64 = 1e-4;

/// `sech²(y)` without overflow for large `y ≥ 0`.
fn sech2(y: f64) -> f64 {
    let e = (-2.0 * y).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

/// `x coth(x) sech²(Φx)`, the `A_1` integrand; tends to 1 at the origin.
fn a_integrand(phi: f64, x: f64) -> f64 {
    x / x.tanh() * sech2(phi * x)
}

/// `sinh((1-Φ)x) / (sinh x cosh(Φx))`, the `B_0` integrand; tends to `1 - Φ`.
fn b_integrand(phi: f64, x: f64) -> f64 {
    let ratio = (-phi * x).exp() * (-(-2.0 * (1.0 - phi) * x).exp_m1()) / (-(-2.0 * x).exp_m1());
    ratio * 2.0 * (-phi * x).exp() / (1.0 + (-2.0 * phi * x).exp())
}

/// Cutoff so that the slowest tail, `~ e^{-2Φx}`, has decayed by `e^{-2T}`.
fn critical_spec(phi: f64, spec: &QuadratureSpec) -> QuadratureSpec {
    spec.with_tail_cutoff(spec.tail_cutoff / phi.min(1.0))
}

struct CriticalIntegrals {
    a1: f64,
    a3: f64,
    b0: f64,
    b2: f64,
}

fn critical_integrals(phi: f64, spec: &QuadratureSpec, cubic: bool) -> Result<CriticalIntegrals> {
    let spec = critical_spec(phi, spec);
    let a1 = integrate_even_realline(|x| a_integrand(phi, x), 1.0, &spec)?.value;
    let b0 = integrate_even_realline(|x| b_integrand(phi, x), 1.0 - phi, &spec)?.value;
    let (a3, b2) = if cubic {
        (
            integrate_even_realline(|x| x * x * a_integrand(phi, x), 0.0, &spec)?.value,
            integrate_even_realline(|x| x * x * b_integrand(phi, x), 0.0, &spec)?.value,
        )
    } else {
        (0.0, 0.0)
    };
    Ok(CriticalIntegrals { a1, a3, b0, b2 })
}

/// Nearest neighbours, `-1 < Δ < 1`.
pub(crate) fn critical_nearest(phi: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let v = critical_integrals(phi, spec, false)?;
    let pphi = PI * phi;
    let zz = 1.0 - 2.0 / (PI * PI) * v.a1 + 2.0 / (pphi.tan() * PI) * v.b0;
    let xx = pphi.cos() / (PI * PI) * v.a1 - v.b0 / (PI * pphi.sin());
    Ok((zz, xx))
}

fn critical_next_nearest_raw(phi: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let v = critical_integrals(phi, spec, true)?;
    let (pphi, two) = (PI * phi, 2.0 * PI * phi);
    let pi3 = PI * PI * PI;
    let pi4 = pi3 * PI;
    let sin2 = pphi.sin().powi(2);

    let xx = -(2.0 / (PI * two.sin()) * v.b0 + 3.0 * two.cos() * pphi.tan() / pi3 * v.b2)
        + two.cos() / (PI * PI) * v.a1
        + sin2 / pi4 * v.a3;
    let zz = 1.0 + 4.0 * (1.0 / (two.tan() * PI) * v.b0 + 3.0 * pphi.tan() / (2.0 * pi3) * v.b2)
        - 4.0 * (v.a1 / (2.0 * PI * PI) + sin2 / (2.0 * pi4) * v.a3);
    Ok((zz, xx))
}

/// Next-nearest neighbours, `-1 < Δ < 1`.
pub(crate) fn critical_next_nearest(phi: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    if (phi - 0.5).abs() >= PHI_SINGULAR_WINDOW {
        return critical_next_nearest_raw(phi, spec);
    }
    let lo = critical_next_nearest_raw(0.5 - PHI_OFFSET, spec)?;
    let hi = critical_next_nearest_raw(0.5 + PHI_OFFSET, spec)?;
    let gap = (lo.0 - hi.0).abs().max((lo.1 - hi.1).abs());
    if gap > PHI_OFFSET_AGREEMENT {
        return Err(Error::InvalidCorrelator {
            delta: (PI * phi).cos(),
            r: 2,
            reason: format!("one-sided values around Φ = 1/2 differ by {gap:.3e}"),
        });
    }
    Ok((0.5 * (lo.0 + hi.0), 0.5 * (lo.1 + hi.1)))
}

fn cot(z: Complex64) -> Complex64 {
    z.cos() / z.sin()
}

/// Nearest neighbours, `Δ > 1`.
pub(crate) fn gapped_nearest(nu: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let (coth_nu, cosh_nu, sinh_nu) = (1.0 / nu.tanh(), nu.cosh(), nu.sinh());
    let zz = 1.0
        + 2.0
            * integrate_shifted_contour(
                |x| {
                    let s = (nu * x).sin();
                    ((cot(nu * x) * coth_nu) - x / (s * s)) / (PI * x).sinh()
                },
                spec,
            )?
            .value;
    let xx = integrate_shifted_contour(
        |x| {
            let s = (nu * x).sin();
            (x / (s * s) * cosh_nu - cot(nu * x) / sinh_nu) / (PI * x).sinh()
        },
        spec,
    )?
    .value;
    Ok((zz, xx))
}

/// Next-nearest neighbours, `Δ > 1`.
pub(crate) fn gapped_next_nearest(nu: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let sinh2 = nu.sinh().powi(2);
    let cosh2nu = (2.0 * nu).cosh();
    let tanh_nu = nu.tanh();
    let sinh2nu = (2.0 * nu).sinh();
    let coth2nu = 1.0 / (2.0 * nu).tanh();

    let xx = integrate_shifted_contour(
        |x| {
            let s2 = (nu * x).sin().powi(2);
            let bracket = -x / s2 * (3.0 * sinh2 / s2 + 1.0 - 3.0 * cosh2nu)
                + cot(nu * x) * (3.0 * cosh2nu * tanh_nu / s2 - 4.0 / sinh2nu);
            0.5 * bracket / (PI * x).sinh()
        },
        spec,
    )?
    .value;
    let zz = 1.0
        + integrate_shifted_contour(
            |x| {
                let s2 = (nu * x).sin().powi(2);
                let bracket = x / s2 * (3.0 * sinh2 / s2 - 1.0 - cosh2nu)
                    - cot(nu * x) * (3.0 * tanh_nu / s2 - 4.0 * coth2nu);
                bracket / (PI * x).sinh()
            },
            spec,
        )?
        .value;
    Ok((zz, xx))
}
