//! Negativity, information deficit, trace-distance discord and local
//! quantum uncertainty of two-qubit states.
//!
//! Every measure has a definitional implementation working on an arbitrary
//! density matrix, and the XXZ pair states additionally have closed forms
//! in terms of their two correlators.  Entropies are in bits.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    eigh, eigh_checked, matrix_sqrt, partial_transpose_a, pauli, trace_norm, von_neumann_entropy,
    ComplexMatrix, HermitianOperator, HERMITICITY_TOL,
};
use crate::states::{project_measure_a, MeasurementBasis};
use crate::xxz::{Correlators, Regime};

pub const GRID_THETA: usize = 64;
pub const GRID_PHI: usize = 64;
/// Width at which the golden-section refinement stops.
pub const REFINE_WIDTH: f64 = 1e-8;
/// Refinement width for the trace-distance objective, which has a kink at its minimum.
pub const TDD_REFINE_WIDTH: f64 = 1e-12;
/// A grid point replaces the incumbent only if it is lower by more than this.
const GRID_MARGIN: f64 = 1e-14;
const MAX_REFINE_CYCLES: usize = 8;
/// Radicands and log arguments down to this are treated as zero.
const CLOSED_FORM_SLACK: f64 = 1e-12;
/// Closed-form and minimised deficits must agree this well.
pub const BRANCH_AUDIT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureSet {
    pub negativity: f64,
    pub deficit: f64,
    pub tdd: f64,
    pub lqu: f64,
}

impl MeasureSet {
    pub const ZERO: Self = Self {
        negativity: 0.0,
        deficit: 0.0,
        tdd: 0.0,
        lqu: 0.0,
    };

    pub fn as_array(&self) -> [f64; 4] {
        [self.negativity, self.deficit, self.tdd, self.lqu]
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self {
            negativity: v[0],
            deficit: v[1],
            tdd: v[2],
            lqu: v[3],
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinimizerReport {
    pub best_value: f64,
    pub best_basis: MeasurementBasis,
    pub evaluations: usize,
    pub grid_stage_value: f64,
}

/// `Σ |μ|` over the negative eigenvalues `μ` of the partial transpose.
pub fn negativity(rho: &HermitianOperator) -> Result<f64> {
    let pt = partial_transpose_a(rho)?;
    Ok(eigh(&pt)
        .eigenvalues
        .iter()
        .filter(|l| **l < 0.0)
        .map(|l| -l)
        .sum())
}

/// Negativity of the XXZ pair state: `max(0, |xx|/2 - (1+zz)/4)`.
pub fn negativity_closed_xxz(c: &Correlators) -> f64 {
    negativity_margin(c).max(0.0)
}

/// Signed version of [`negativity_closed_xxz`]; positive exactly when entangled.
pub fn negativity_margin(c: &Correlators) -> f64 {
    0.5 * c.xx.abs() - 0.25 * (1.0 + c.zz)
}

struct Minimizer<'a, F> {
    objective: &'a F,
    evaluations: usize,
}

impl<F: Fn(&MeasurementBasis) -> Result<f64>> Minimizer<'_, F> {
    fn eval(&mut self, theta: f64, phi: f64) -> Result<f64> {
        let phi = phi.rem_euclid(2.0 * PI);
        let basis = MeasurementBasis {
            theta: theta.clamp(0.0, PI),
            phi: if phi >= 2.0 * PI { 0.0 } else { phi },
        };
        self.evaluations += 1;
        let v = (self.objective)(&basis)?;
        if !v.is_finite() {
            return Err(Error::Minimizer {
                theta: basis.theta,
                phi: basis.phi,
                value: v,
            });
        }
        Ok(v)
    }

    /// Golden-section search of `g` on `[lo, hi]`, returning the best point seen.
    fn golden(
        &mut self,
        lo: f64,
        hi: f64,
        width: f64,
        g: impl Fn(&mut Self, f64) -> Result<f64>,
    ) -> Result<(f64, f64)> {
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo, hi);
        let mut x1 = b - ratio * (b - a);
        let mut x2 = a + ratio * (b - a);
        let mut f1 = g(self, x1)?;
        let mut f2 = g(self, x2)?;
        while b - a > width {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - ratio * (b - a);
                f1 = g(self, x1)?;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + ratio * (b - a);
                f2 = g(self, x2)?;
            }
        }
        Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
    }
}

/// Minimum of `objective` over measurement bases.
///
/// A uniform 64x64 grid on `θ ∈ [0, π]`, `φ ∈ [0, 2π)` picks the start;
/// coordinate-wise golden-section searches within one grid cell of the
/// incumbent then refine it to [`REFINE_WIDTH`].  Ties on the grid go to the
/// first point in `(θ, φ)` order.
pub fn minimize_over_bases<F>(objective: F) -> Result<MinimizerReport>
where
    F: Fn(&MeasurementBasis) -> Result<f64>,
{
    minimize_over_bases_with(objective, REFINE_WIDTH)
}

pub fn minimize_over_bases_with<F>(objective: F, width: f64) -> Result<MinimizerReport>
where
    F: Fn(&MeasurementBasis) -> Result<f64>,
{
    let mut m = Minimizer {
        objective: &objective,
        evaluations: 0,
    };
    let d_theta = PI / (GRID_THETA - 1) as f64;
    let d_phi = 2.0 * PI / GRID_PHI as f64;
    let (mut theta, mut phi, mut best) = (0.0, 0.0, f64::INFINITY);
    for i in 0..GRID_THETA {
        for j in 0..GRID_PHI {
            let (t, p) = (i as f64 * d_theta, j as f64 * d_phi);
            let v = m.eval(t, p)?;
            if v < best - GRID_MARGIN || best == f64::INFINITY {
                (theta, phi, best) = (t, p, v);
            }
        }
    }
    let grid_stage_value = best;

    for _ in 0..MAX_REFINE_CYCLES {
        let before = best;
        let p0 = phi;
        let (t, v) = m.golden(
            (theta - d_theta).max(0.0),
            (theta + d_theta).min(PI),
            width,
            |m, t| m.eval(t, p0),
        )?;
        if v < best {
            (theta, best) = (t, v);
        }
        let t0 = theta;
        let (p, v) = m.golden(phi - d_phi, phi + d_phi, width, |m, p| m.eval(t0, p))?;
        if v < best {
            (phi, best) = (p.rem_euclid(2.0 * PI), v);
        }
        if !(best < before) {
            break;
        }
    }
    let phi = if phi >= 2.0 * PI { 0.0 } else { phi };
    Ok(MinimizerReport {
        best_value: best,
        best_basis: MeasurementBasis { theta, phi },
        evaluations: m.evaluations,
        grid_stage_value,
    })
}

/// Minimal entropy increase under a projective measurement of qubit A.
pub fn information_deficit(rho: &HermitianOperator) -> Result<f64> {
    Ok(information_deficit_report(rho)?.best_value.max(0.0))
}

pub fn information_deficit_report(rho: &HermitianOperator) -> Result<MinimizerReport> {
    let s = von_neumann_entropy(rho)?;
    minimize_over_bases(|b| Ok(von_neumann_entropy(&project_measure_a(rho, b)?)? - s))
}

/// Half the minimal trace distance between `ρ` and its measured version.
pub fn trace_distance_discord(rho: &HermitianOperator) -> Result<f64> {
    Ok(trace_distance_discord_report(rho)?.best_value.max(0.0))
}

pub fn trace_distance_discord_report(rho: &HermitianOperator) -> Result<MinimizerReport> {
    // The objective is not smooth at its minimum; refine further so that the
    // linear growth away from it stays below 1e-9.
    minimize_over_bases_with(
        |b| {
            let out = project_measure_a(rho, b)?;
            let diff = HermitianOperator::new(rho.matrix() - out.matrix())?;
            Ok(0.5 * trace_norm(&diff))
        },
        TDD_REFINE_WIDTH,
    )
}

/// The 3x3 matrix `W_uv = Tr[√ρ (σ_u ⊗ I) √ρ (σ_v ⊗ I)]`.
pub fn lqu_matrix(rho: &HermitianOperator) -> Result<[[f64; 3]; 3]> {
    let root = matrix_sqrt(rho)?;
    let id = ComplexMatrix::identity(2);
    let sigmas: Vec<ComplexMatrix> = pauli().iter().map(|s| s.kron(&id)).collect();
    let halves: Vec<ComplexMatrix> = sigmas.iter().map(|s| root.matrix() * s).collect();
    let mut w = [[0.0; 3]; 3];
    for u in 0..3 {
        for v in 0..3 {
            w[u][v] = (&halves[u] * &halves[v]).trace().re;
        }
    }
    Ok(w)
}

/// `1 - λ_max(W)`.
pub fn lqu(rho: &HermitianOperator) -> Result<f64> {
    let w = lqu_matrix(rho)?;
    let rows: Vec<&[f64]> = w.iter().map(|r| r.as_slice()).collect();
    let m = ComplexMatrix::from_real_rows(&rows)?;
    let top = eigh_checked(&m, 1e3 * HERMITICITY_TOL)?
        .eigenvalues
        .last()
        .copied()
        .expect("3x3 spectrum");
    Ok((1.0 - top).clamp(0.0, 1.0))
}

/// All four measures, definitional route.
pub fn measures(rho: &HermitianOperator) -> Result<MeasureSet> {
    Ok(MeasureSet {
        negativity: negativity(rho)?,
        deficit: information_deficit(rho)?,
        tdd: trace_distance_discord(rho)?,
        lqu: lqu(rho)?,
    })
}

/// Which optimal measurement the closed forms assume.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `θ = π/4`, `φ = 0`.
    Diagonal,
    /// `θ = 0`, `φ = 0`.
    Computational,
}

impl Branch {
    pub fn of(regime: Regime) -> Self {
        match regime {
            Regime::Critical | Regime::Isotropic => Branch::Diagonal,
            Regime::Ferro | Regime::Gapped => Branch::Computational,
        }
    }
}

fn invalid(c: &Correlators, reason: String) -> Error {
    Error::InvalidCorrelator {
        delta: c.delta,
        r: c.r,
        reason,
    }
}

/// `t log2 t` with `0 log 0 = 0`.
fn xlog2(c: &Correlators, t: f64) -> Result<f64> {
    if t < -CLOSED_FORM_SLACK {
        return Err(invalid(c, format!("logarithm of negative argument {t:.3e}")));
    }
    Ok(if t <= CLOSED_FORM_SLACK { 0.0 } else { t * t.log2() })
}

fn root(c: &Correlators, t: f64) -> Result<f64> {
    if t < -CLOSED_FORM_SLACK {
        return Err(invalid(c, format!("negative radicand {t:.3e}")));
    }
    Ok(t.max(0.0).sqrt())
}

pub fn deficit_closed_branch(c: &Correlators, branch: Branch) -> Result<f64> {
    let (zz, xx) = (c.zz, c.xx);
    let plus = xlog2(c, 1.0 - zz + 2.0 * xx)?;
    let minus = xlog2(c, 1.0 - zz - 2.0 * xx)?;
    let v = match branch {
        Branch::Diagonal => {
            0.25 * (2.0 * xlog2(c, 1.0 + zz)? - 2.0 * xlog2(c, 1.0 + xx)? - 2.0 * xlog2(c, 1.0 - xx)?
                + plus
                + minus)
        }
        Branch::Computational => 0.25 * (plus + minus - 2.0 * xlog2(c, 1.0 - zz)?),
    };
    Ok(v.max(0.0))
}

/// Information deficit of the XXZ pair state, branch chosen by regime.
pub fn deficit_closed_xxz(c: &Correlators) -> Result<f64> {
    deficit_closed_branch(c, Branch::of(c.regime))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchAudit {
    pub branch: Branch,
    pub closed: f64,
    pub minimized: f64,
    pub report: MinimizerReport,
}

impl BranchAudit {
    pub fn disagreement(&self) -> f64 {
        (self.closed - self.minimized).abs()
    }

    pub fn agrees(&self) -> bool {
        self.disagreement() <= BRANCH_AUDIT_TOL
    }
}

/// Re-minimises the deficit to check the regime-selected branch.
pub fn deficit_branch_audit(c: &Correlators) -> Result<BranchAudit> {
    let rho = crate::states::xxz_state(c)?.to_operator();
    let report = information_deficit_report(&rho)?;
    Ok(BranchAudit {
        branch: Branch::of(c.regime),
        closed: deficit_closed_xxz(c)?,
        minimized: report.best_value.max(0.0),
        report,
    })
}

/// `|xx| / 2`.
pub fn tdd_closed_x(c: &Correlators) -> f64 {
    0.5 * c.xx.abs()
}

pub fn lqu_closed_branch(c: &Correlators, branch: Branch) -> Result<f64> {
    let (zz, xx) = (c.zz, c.xx);
    let top = match branch {
        Branch::Diagonal => {
            0.5 * root(c, 1.0 + zz)? * (root(c, 1.0 - zz + 2.0 * xx)? + root(c, 1.0 - zz - 2.0 * xx)?)
        }
        Branch::Computational => 0.5 * (1.0 + zz + root(c, (1.0 - zz).powi(2) - 4.0 * xx * xx)?),
    };
    Ok((1.0 - top).clamp(0.0, 1.0))
}

/// Local quantum uncertainty of the XXZ pair state, branch chosen by regime.
pub fn lqu_closed_xxz(c: &Correlators) -> Result<f64> {
    lqu_closed_branch(c, Branch::of(c.regime))
}

pub fn closed_xxz(c: &Correlators) -> Result<MeasureSet> {
    Ok(MeasureSet {
        negativity: negativity_closed_xxz(c),
        deficit: deficit_closed_xxz(c)?,
        tdd: tdd_closed_x(c),
        lqu: lqu_closed_xxz(c)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{xxz_state, XState};
    use crate::xxz::{correlators, isotropic_nearest};
    use num_complex::Complex64;

    fn bell() -> HermitianOperator {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        HermitianOperator::projector(&[Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)]).unwrap()
    }

    fn mixed() -> HermitianOperator {
        HermitianOperator::from_real_diagonal(&[0.25; 4]).unwrap()
    }

    fn corr(delta: f64, r: u32, zz: f64, xx: f64) -> Correlators {
        Correlators::new(delta, r, zz, xx).unwrap()
    }

    #[test]
    fn bell_state_values() {
        let rho = bell();
        assert!((negativity(&rho).unwrap() - 0.5).abs() < 1e-12);
        assert!((information_deficit(&rho).unwrap() - 1.0).abs() < 1e-10);
        assert!((trace_distance_discord(&rho).unwrap() - 0.5).abs() < 1e-10);
        assert!((lqu(&rho).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn negativity_matches_trace_norm_form() {
        let v = isotropic_nearest();
        let rho = xxz_state(&corr(1.0, 1, v, v)).unwrap().to_operator();
        let n = negativity(&rho).unwrap();
        let via_norm = 0.5 * (trace_norm(&partial_transpose_a(&rho).unwrap()) - 1.0);
        assert!((n - via_norm).abs() < 1e-10);
        assert!((n - (std::f64::consts::LN_2 - 0.5)).abs() < 1e-12);
        assert!((n + 0.25 * (1.0 + 3.0 * v)).abs() < 1e-12);
    }

    #[test]
    fn ferromagnetic_state_is_classical() {
        let c = corr(-2.0, 1, 1.0, 0.0);
        let rho = xxz_state(&c).unwrap().to_operator();
        assert_eq!(negativity(&rho).unwrap(), 0.0);
        assert!(lqu(&rho).unwrap().abs() < 1e-12);
        assert!(trace_distance_discord(&rho).unwrap() < 1e-12);
        assert!(information_deficit(&rho).unwrap() < 1e-12);
        assert_eq!(closed_xxz(&c).unwrap(), MeasureSet::ZERO);
    }

    #[test]
    fn maximally_mixed_has_nothing() {
        let rho = mixed();
        let m = measures(&rho).unwrap();
        assert!(m.as_array().iter().all(|v| v.abs() < 1e-12), "{m:?}");
        let c = corr(0.3, 1, 0.0, 0.0);
        assert!(lqu_closed_xxz(&c).unwrap().abs() < 1e-15);
        assert!(lqu_closed_branch(&c, Branch::Computational).unwrap().abs() < 1e-15);
    }

    #[test]
    fn classical_diagonal_state_has_zero_tdd() {
        let rho = XState::diagonal(0.1, 0.2, 0.3, 0.4).unwrap().to_operator();
        assert!(trace_distance_discord(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn minimizer_constant_objective() {
        let r = minimize_over_bases(|_| Ok(0.3)).unwrap();
        assert_eq!(r.best_value, 0.3);
        assert_eq!(r.best_basis, MeasurementBasis::COMPUTATIONAL);
        assert!(r.evaluations >= GRID_THETA * GRID_PHI);
    }

    #[test]
    fn minimizer_rejects_non_finite_objective() {
        let r = minimize_over_bases(|b| Ok(if b.theta > 1.0 { f64::NAN } else { 0.0 }));
        match r {
            Err(Error::Minimizer { theta, .. }) => assert!(theta > 1.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn minimizer_never_worse_than_grid() {
        let r = minimize_over_bases(|b| Ok((b.theta - 1.234).powi(2) + (b.phi - 4.321).cos() * -0.1)).unwrap();
        assert!(r.best_value <= r.grid_stage_value + 1e-12);
        assert!((r.best_basis.theta - 1.234).abs() < 1e-6);
        assert!((r.best_basis.phi - 4.321).abs() < 1e-6);
    }

    #[test]
    fn critical_deficit_optimum_is_diagonal_basis() {
        let c = correlators(0.5, 1).unwrap();
        let rho = xxz_state(&c).unwrap().to_operator();
        let r = information_deficit_report(&rho).unwrap();
        assert!((r.best_basis.theta - PI / 4.0).abs() < 1e-6, "{:?}", r.best_basis);
        assert!((r.best_value - deficit_closed_xxz(&c).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn deficit_at_isotropic_point() {
        let v = isotropic_nearest();
        let c = corr(1.0, 1, v, v);
        let a = deficit_closed_branch(&c, Branch::Diagonal).unwrap();
        let b = deficit_closed_branch(&c, Branch::Computational).unwrap();
        assert!((a - b).abs() < 1e-8);
        let rho = xxz_state(&c).unwrap().to_operator();
        assert!((information_deficit(&rho).unwrap() - a).abs() < 1e-8);
    }

    #[test]
    fn gapped_closed_forms_match_definitions() {
        let c = correlators(2.0, 1).unwrap();
        let audit = deficit_branch_audit(&c).unwrap();
        assert_eq!(audit.branch, Branch::Computational);
        assert!(audit.agrees(), "{audit:?}");
        let rho = xxz_state(&c).unwrap().to_operator();
        assert!((negativity(&rho).unwrap() - negativity_closed_xxz(&c)).abs() < 1e-10);
        assert!((lqu(&rho).unwrap() - lqu_closed_xxz(&c).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn r2_negativity_window() {
        assert_eq!(negativity_closed_xxz(&correlators(-0.2, 2).unwrap()), 0.0);
        let c = correlators(-0.7, 2).unwrap();
        let n = negativity_closed_xxz(&c);
        assert!(n > 0.0);
        let rho = xxz_state(&c).unwrap().to_operator();
        assert!((negativity(&rho).unwrap() - n).abs() < 1e-10);
        let c = correlators(3.0, 1).unwrap();
        let rho = xxz_state(&c).unwrap().to_operator();
        assert!((negativity(&rho).unwrap() - negativity_closed_xxz(&c)).abs() < 1e-10);
    }

    #[test]
    fn tdd_examples() {
        let c = correlators(0.5, 1).unwrap();
        let rho = xxz_state(&c).unwrap().to_operator();
        assert!((trace_distance_discord(&rho).unwrap() - c.xx.abs() / 2.0).abs() < 1e-7);
        assert_eq!(tdd_closed_x(&correlators(-2.0, 1).unwrap()), 0.0);
        assert!((tdd_closed_x(&correlators(1.0, 1).unwrap()) - 0.295431).abs() < 1e-6);
        assert!((tdd_closed_x(&correlators(1.0, 2).unwrap()) - 0.1213595).abs() < 1e-9);
    }

    #[test]
    fn closed_forms_reject_unphysical_correlators() {
        let c = corr(0.3, 1, -0.5, 0.9);
        assert!(matches!(deficit_closed_xxz(&c), Err(Error::InvalidCorrelator { .. })));
        assert!(matches!(lqu_closed_xxz(&c), Err(Error::InvalidCorrelator { .. })));
    }

    #[test]
    fn lqu_of_classical_diagonal_pair() {
        let rho = XState::diagonal(0.5, 0.0, 0.0, 0.5).unwrap().to_operator();
        assert!(lqu(&rho).unwrap().abs() < 1e-12);
    }
}
