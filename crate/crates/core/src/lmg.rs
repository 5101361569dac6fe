//! Correlation measures of the Lipkin–Meshkov–Glick Hartree–Fock pair state.
//!
//! For `λ < 1` the paired-mode state is the pure state
//! `cos α |01⟩ + sin α |10⟩` with `cos 2α = λ`; for `λ ≥ 1` it is the
//! polarised product state and every measure vanishes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{measures, MeasureSet};
use crate::states::{lmg_angle, lmg_pair_state};

/// Agreement required between closed and definitional 𝒩, ℐ, 𝒟.
pub const LMG_AGREEMENT: f64 = 1e-8;
/// LQU values further apart than this are reported as a finding.
pub const LQU_FINDING_TOL: f64 = 1e-8;

/// Binary entropy in bits, `H(0) = H(1) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    crate::linalg::shannon_bits(&[p, 1.0 - p])
}

/// Closed-form values, plus the published LQU expression `1 - λ`.
///
/// `measures.lqu` is `1 - λ²`, the value of the defining formula on the pure
/// pair state; `lqu_published` is kept alongside for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmgClosed {
    pub measures: MeasureSet,
    pub lqu_published: f64,
}

pub fn lmg_closed_measures(lambda: f64) -> Result<LmgClosed> {
    lmg_angle(lambda)?;
    if lambda >= 1.0 {
        return Ok(LmgClosed {
            measures: MeasureSet::ZERO,
            lqu_published: 0.0,
        });
    }
    let half_concurrence = 0.5 * (1.0 - lambda * lambda).sqrt();
    Ok(LmgClosed {
        measures: MeasureSet {
            negativity: half_concurrence,
            deficit: binary_entropy(0.5 * (1.0 + lambda)),
            tdd: half_concurrence,
            lqu: 1.0 - lambda * lambda,
        },
        lqu_published: 1.0 - lambda,
    })
}

/// Published LQU versus the defining formula at one `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LquFinding {
    pub lqu_definitional: f64,
    pub lqu_published: f64,
    pub mismatch: f64,
}

impl LquFinding {
    pub fn is_mismatch(&self) -> bool {
        self.mismatch > LQU_FINDING_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmgPoint {
    pub lambda: f64,
    pub alpha: f64,
    pub closed: MeasureSet,
    pub definitional: MeasureSet,
    pub lqu: LquFinding,
}

impl LmgPoint {
    /// Largest closed-vs-definitional gap over 𝒩, ℐ, 𝒟.
    pub fn residual(&self) -> f64 {
        let (c, d) = (self.closed, self.definitional);
        (c.negativity - d.negativity)
            .abs()
            .max((c.deficit - d.deficit).abs())
            .max((c.tdd - d.tdd).abs())
    }
}

/// Runs the paired-mode state through the definitional pipeline and checks
/// it against the closed forms.  The LQU pair is recorded, not asserted.
pub fn lmg_validate(lambda: f64) -> Result<LmgPoint> {
    let alpha = lmg_angle(lambda)?;
    let closed = lmg_closed_measures(lambda)?;
    let definitional = measures(&lmg_pair_state(lambda, true)?.to_operator())?;
    let point = LmgPoint {
        lambda,
        alpha,
        closed: closed.measures,
        definitional,
        lqu: LquFinding {
            lqu_definitional: definitional.lqu,
            lqu_published: closed.lqu_published,
            mismatch: (definitional.lqu - closed.lqu_published).abs(),
        },
    };
    if point.residual() > LMG_AGREEMENT {
        let (c, d) = (point.closed, point.definitional);
        return Err(Error::Validation(format!(
            "LMG λ = {lambda}: residuals N {:.3e}, I {:.3e}, D {:.3e}",
            (c.negativity - d.negativity).abs(),
            (c.deficit - d.deficit).abs(),
            (c.tdd - d.tdd).abs()
        )));
    }
    Ok(point)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Deficit written with `atanh`, before simplification.
    fn deficit_log_form(l: f64) -> f64 {
        let ln2 = std::f64::consts::LN_2;
        1.0 - ((1.0 - l * l).ln() + 2.0 * l * l.atanh()) / (2.0 * ln2)
    }

    #[test]
    fn closed_examples() {
        let m = lmg_closed_measures(0.0).unwrap().measures;
        assert_eq!((m.negativity, m.tdd, m.deficit, m.lqu), (0.5, 0.5, 1.0, 1.0));
        for l in [1.0, 1.5, 2.0] {
            let c = lmg_closed_measures(l).unwrap();
            assert_eq!(c.measures, MeasureSet::ZERO);
            assert_eq!(c.lqu_published, 0.0);
        }
        let c = lmg_closed_measures(0.6).unwrap();
        assert!((c.measures.negativity - 0.4).abs() < 1e-15);
        assert!((c.measures.tdd - 0.4).abs() < 1e-15);
        assert!((c.measures.deficit - 0.721928094887).abs() < 1e-11);
        assert!((c.measures.lqu - 0.64).abs() < 1e-15);
        assert!((c.lqu_published - 0.4).abs() < 1e-15);
        assert!(lmg_closed_measures(-0.5).is_err());
    }

    #[test]
    fn deficit_forms_agree() {
        for k in 0..100 {
            let l = k as f64 / 100.0;
            let a = lmg_closed_measures(l).unwrap().measures.deficit;
            assert!((a - binary_entropy(0.5 * (1.0 + l))).abs() < 1e-12);
            assert!((a - deficit_log_form(l)).abs() < 1e-12, "λ={l}");
        }
        assert!(lmg_closed_measures(1.0 - 1e-12).unwrap().measures.deficit < 1e-9);
    }

    #[test]
    fn closed_measures_are_non_increasing() {
        let mut prev = lmg_closed_measures(0.0).unwrap().measures.as_array();
        for k in 1..=100 {
            let cur = lmg_closed_measures(k as f64 / 100.0).unwrap().measures.as_array();
            for (p, c) in prev.iter().zip(&cur) {
                assert!(c <= p);
            }
            prev = cur;
        }
    }

    #[test]
    fn validation_examples() {
        let p = lmg_validate(0.3).unwrap();
        assert!((p.definitional.negativity - 0.91f64.sqrt() / 2.0).abs() < 1e-8);
        let p = lmg_validate(2.0).unwrap();
        assert!(p.definitional.as_array().iter().all(|v| v.abs() < 1e-10));
        assert!(!p.lqu.is_mismatch());
        let p = lmg_validate(0.6).unwrap();
        assert!((p.lqu.lqu_definitional - 0.64).abs() < 1e-8);
        assert!((p.lqu.lqu_published - 0.4).abs() < 1e-15);
        assert!(p.lqu.is_mismatch());
        assert!((p.alpha.mul_add(2.0, 0.0).cos() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn unpaired_modes_carry_no_correlations() {
        for k in 0..=20 {
            let l = k as f64 / 10.0;
            let m = measures(&lmg_pair_state(l, false).unwrap().to_operator()).unwrap();
            assert!(m.as_array().iter().all(|v| v.abs() < 1e-10), "λ={l}: {m:?}");
        }
    }
}
