//! Two-site spin correlators of the infinite XXZ chain at zero temperature.
//!
//! `H = Σ_j [S^x_j S^x_{j+1} + S^y_j S^y_{j+1} + Δ S^z_j S^z_{j+1}]`.
//!
//! Values of `⟨σ^z_i σ^z_{i+r}⟩` and `⟨σ^x_i σ^x_{i+r}⟩` for `r ∈ {1, 2}`
//! come from Bethe-ansatz integral representations: real-line integrals in
//! the critical regime `|Δ| < 1` and integrals along `Im x = 1/2` in the
//! gapped regime `Δ > 1`.  The isotropic point and the ferromagnetic side
//! use closed values.  [`ed`] holds a finite-ring exact-diagonalisation
//! oracle for cross-checks.

pub mod ed;
mod integrals;

use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureSpec;

/// `(1 - 4 ln 2) / 3`, the nearest-neighbour correlator of the isotropic chain.
pub fn isotropic_nearest() -> f64 {
    (1.0 - 4.0 * std::f64::consts::LN_2) / 3.0
}

/// Next-nearest-neighbour correlator of the isotropic chain.
pub const ISOTROPIC_NEXT_NEAREST: f64 = 0.242719;

/// Window around `Δ = 1` treated as the isotropic point.
pub const ISOTROPIC_WINDOW: f64 = 1e-12;

/// Correlators outside `[-1, 1]` by more than this are rejected.
const RANGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `Δ ≤ -1`
    Ferro,
    /// `-1 < Δ < 1`
    Critical,
    /// `Δ = 1`
    Isotropic,
    /// `Δ > 1`
    Gapped,
}

impl Regime {
    pub fn of(delta: f64) -> Self {
        if (delta - 1.0).abs() <= ISOTROPIC_WINDOW {
            Regime::Isotropic
        } else if delta <= -1.0 {
            Regime::Ferro
        } else if delta < 1.0 {
            Regime::Critical
        } else {
            Regime::Gapped
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Regime::Ferro => "ferro",
            Regime::Critical => "critical",
            Regime::Isotropic => "isotropic",
            Regime::Gapped => "gapped",
        }
    }
}

/// `ν = arccosh Δ` (gapped side) or `Φ = arccos(Δ)/π` (critical side).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AuxiliaryParams {
    Gapped { nu: f64 },
    Critical { phi: f64 },
    None,
}

impl AuxiliaryParams {
    pub fn for_delta(delta: f64) -> Self {
        match Regime::of(delta) {
            Regime::Gapped => AuxiliaryParams::Gapped { nu: delta.acosh() },
            Regime::Critical => AuxiliaryParams::Critical {
                phi: delta.acos() / std::f64::consts::PI,
            },
            _ => AuxiliaryParams::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlators {
    pub zz: f64,
    pub xx: f64,
    pub r: u32,
    pub delta: f64,
    pub regime: Regime,
}

impl Correlators {
    pub fn new(delta: f64, r: u32, zz: f64, xx: f64) -> Result<Self> {
        let c = Self {
            zz,
            xx,
            r,
            delta,
            regime: Regime::of(delta),
        };
        c.check()?;
        Ok(c)
    }

    pub fn check(&self) -> Result<()> {
        let bad = |reason: String| Error::InvalidCorrelator {
            delta: self.delta,
            r: self.r,
            reason,
        };
        if !(self.zz.is_finite() && self.xx.is_finite()) {
            return Err(bad(format!("non-finite zz = {}, xx = {}", self.zz, self.xx)));
        }
        if self.zz.abs() > 1.0 + RANGE_TOL || self.xx.abs() > 1.0 + RANGE_TOL {
            return Err(bad(format!(
                "correlators outside [-1, 1]: zz = {}, xx = {}",
                self.zz, self.xx
            )));
        }
        Ok(())
    }
}

fn check_r(delta: f64, r: u32) -> Result<()> {
    if r == 1 || r == 2 {
        Ok(())
    } else {
        Err(Error::InvalidCorrelator {
            delta,
            r,
            reason: "separation must be 1 or 2".into(),
        })
    }
}

/// Quadrature settings used for all correlator integrals.
pub fn correlator_quadrature() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-12,
        rel_tol: 1e-12,
        ..QuadratureSpec::default()
    }
}

/// `⟨σ^z_i σ^z_{i+r}⟩` and `⟨σ^x_i σ^x_{i+r}⟩` in the thermodynamic limit.
pub fn correlators(delta: f64, r: u32) -> Result<Correlators> {
    correlators_with(delta, r, &correlator_quadrature())
}

pub fn correlators_with(delta: f64, r: u32, spec: &QuadratureSpec) -> Result<Correlators> {
    check_r(delta, r)?;
    if !delta.is_finite() {
        return Err(Error::Domain(format!("anisotropy must be finite, got {delta}")));
    }
    let (zz, xx) = match Regime::of(delta) {
        Regime::Ferro => (1.0, 0.0),
        Regime::Isotropic => {
            let v = if r == 1 {
                isotropic_nearest()
            } else {
                ISOTROPIC_NEXT_NEAREST
            };
            (v, v)
        }
        Regime::Critical => {
            let phi = delta.acos() / std::f64::consts::PI;
            if r == 1 {
                integrals::critical_nearest(phi, spec)?
            } else {
                integrals::critical_next_nearest(phi, spec)?
            }
        }
        Regime::Gapped => {
            let nu = delta.acosh();
            if r == 1 {
                integrals::gapped_nearest(nu, spec)?
            } else {
                integrals::gapped_next_nearest(nu, spec)?
            }
        }
    };
    Correlators::new(delta, r, zz, xx).map_err(|e| match e {
        Error::InvalidCorrelator { reason, .. } => Error::InvalidCorrelator { delta, r, reason },
        other => other,
    })
}

/// Memo table for correlators keyed by `(round(Δ·10¹²), r)`.
///
/// Safe to share between sweep workers; concurrent misses on the same key
/// may both compute, and the results are identical.
#[derive(Debug, Default)]
pub struct CorrelatorCache {
    table: RwLock<HashMap<(u64, u32), Correlators>>,
}

impl CorrelatorCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Exact bits, so a hit never depends on which nearby value came first.
    fn key(delta: f64, r: u32) -> (u64, u32) {
        (delta.to_bits(), r)
    }

    pub fn get(&self, delta: f64, r: u32) -> Result<Correlators> {
        let key = Self::key(delta, r);
        if let Some(c) = self.table.read().expect("cache lock poisoned").get(&key) {
            return Ok(*c);
        }
        let c = correlators(delta, r)?;
        self.table
            .write()
            .expect("cache lock poisoned")
            .insert(key, c);
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.table.read().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NEAR: f64 = 1e-4;

    #[test]
    fn regime_dispatch() {
        assert_eq!(Regime::of(-2.0), Regime::Ferro);
        assert_eq!(Regime::of(-1.0), Regime::Ferro);
        assert_eq!(Regime::of(-0.999), Regime::Critical);
        assert_eq!(Regime::of(1.0 - 1e-13), Regime::Isotropic);
        assert_eq!(Regime::of(1.0 + 1e-13), Regime::Isotropic);
        assert_eq!(Regime::of(1.0 - 1e-11), Regime::Critical);
        assert_eq!(Regime::of(1.5), Regime::Gapped);
    }

    #[test]
    fn auxiliary_parameters() {
        match AuxiliaryParams::for_delta(0.0) {
            AuxiliaryParams::Critical { phi } => assert!((phi - 0.5).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        match AuxiliaryParams::for_delta(2.0) {
            AuxiliaryParams::Gapped { nu } => assert!((nu.cosh() - 2.0).abs() < 1e-14 && nu > 0.0),
            other => panic!("{other:?}"),
        }
        assert_eq!(AuxiliaryParams::for_delta(-3.0), AuxiliaryParams::None);
    }

    #[test]
    fn closed_values() {
        let c = correlators(1.0, 1).unwrap();
        assert_eq!(c.zz, isotropic_nearest());
        assert_eq!(c.xx, isotropic_nearest());
        assert!((c.zz + 0.590_862_907_4).abs() < 1e-10);
        let c = correlators(1.0, 2).unwrap();
        assert_eq!((c.zz, c.xx), (0.242719, 0.242719));
        for r in [1, 2] {
            let c = correlators(-2.0, r).unwrap();
            assert_eq!((c.zz, c.xx, c.regime), (1.0, 0.0, Regime::Ferro));
        }
    }

    #[test]
    fn rejects_bad_separation() {
        assert!(matches!(
            correlators(0.3, 3),
            Err(Error::InvalidCorrelator { r: 3, .. })
        ));
        assert!(correlators(f64::NAN, 1).is_err());
    }

    #[test]
    fn exactly_solvable_points() {
        // Free-fermion point and the Δ = 1/2 combinatorial point.
        let c = correlators(0.0, 1).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((c.zz + 4.0 / pi2).abs() < 1e-10, "{}", c.zz);
        assert!((c.xx + 2.0 / std::f64::consts::PI).abs() < 1e-10, "{}", c.xx);
        let c = correlators(0.5, 1).unwrap();
        assert!((c.zz + 0.5).abs() < 1e-10 && (c.xx + 0.625).abs() < 1e-10);
        let c = correlators(0.5, 2).unwrap();
        assert!((c.zz - 7.0 / 64.0).abs() < 1e-10 && (c.xx - 41.0 / 128.0).abs() < 1e-10);
        let c = correlators(0.0, 2).unwrap();
        assert!(c.zz.abs() < 1e-9 && (c.xx - 4.0 / pi2).abs() < 1e-9, "{c:?}");
    }

    #[test]
    fn continuity_across_isotropic_point() {
        let iso = [isotropic_nearest(), ISOTROPIC_NEXT_NEAREST];
        for r in [1u32, 2] {
            for delta in [1.0 - NEAR, 1.0 + NEAR] {
                let c = correlators(delta, r).unwrap();
                let v = iso[r as usize - 1];
                assert!((c.zz - v).abs() < 5e-3, "r={r} Δ={delta} zz={}", c.zz);
                assert!((c.xx - v).abs() < 5e-3, "r={r} Δ={delta} xx={}", c.xx);
            }
        }
    }

    #[test]
    fn gapped_values_agree_with_energy_derivative() {
        // Hellmann–Feynman from the Bethe-ansatz energy per site for Δ > 1:
        //   e(Δ) = Δ/4 - sinh ν [1/2 + 2 Σ_n 1/(e^{2nν} + 1)]
        //   zz = 4 de/dΔ,  xx = 2 (e - Δ zz / 4)
        fn energy(delta: f64) -> f64 {
            let nu = delta.acosh();
            let tail: f64 = (1..400).map(|n| 1.0 / ((2.0 * n as f64 * nu).exp() + 1.0)).sum();
            delta / 4.0 - nu.sinh() * (0.5 + 2.0 * tail)
        }
        for delta in [1.5, 2.0, 3.0] {
            let h = 1e-5;
            let zz = 4.0 * (energy(delta + h) - energy(delta - h)) / (2.0 * h);
            let xx = 2.0 * (energy(delta) - delta * zz / 4.0);
            let c = correlators(delta, 1).unwrap();
            assert!((c.zz - zz).abs() < 1e-8, "Δ={delta}: {} vs {zz}", c.zz);
            assert!((c.xx - xx).abs() < 1e-8, "Δ={delta}: {} vs {xx}", c.xx);
        }
    }

    #[test]
    fn nearest_neighbour_sign_structure() {
        for k in 1..=50 {
            let delta = -1.0 + 2.0 * k as f64 / 51.0;
            let c = correlators(delta, 1).unwrap();
            assert!(c.xx < 0.0, "Δ={delta}: xx={}", c.xx);
            assert!(c.zz > -1.0 && c.zz < 1.0);
            if delta > 0.0 {
                assert!(c.zz < 0.0);
            }
        }
    }

    #[test]
    fn neel_asymptote() {
        assert!(correlators(50.0, 1).unwrap().zz < -0.99);
    }

    #[test]
    fn free_fermion_point_r2_uses_offset_average() {
        let c0 = correlators(0.0, 2).unwrap();
        let c1 = correlators(1e-3, 2).unwrap();
        assert!((c0.xx - c1.xx).abs() < 1e-3);
    }

    #[test]
    fn cache_returns_identical_values() {
        let cache = CorrelatorCache::new();
        let a = cache.get(0.3, 1).unwrap();
        assert_eq!(cache.get(0.3, 1).unwrap(), a);
        assert_eq!(a, correlators(0.3, 1).unwrap());
        assert_eq!(cache.len(), 1);
        let b = cache.get(0.3 + 1e-15, 1).unwrap();
        assert_eq!(b, correlators(0.3 + 1e-15, 1).unwrap());
        assert_eq!(cache.len(), 2);
    }
}
