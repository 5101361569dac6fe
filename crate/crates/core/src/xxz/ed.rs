//! Exact diagonalisation of the XXZ ring, used as an independent check of
//! the integral representations.
//!
//! The ground state is found by Lanczos iteration in the `S^z_total = 0`
//! sector and compared with the fully polarised states, which win for
//! `Δ < -1`.  Correlators are averaged over all bonds of the ring.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::Correlators;
use crate::error::{Error, Result};

pub const MIN_SITES: usize = 8;
pub const MAX_SITES: usize = 16;

/// Ring sizes used for the thermodynamic-limit fit.
pub const EXTRAPOLATION_SIZES: [usize; 3] = [12, 14, 16];

/// Energies closer than this are treated as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

const LANCZOS_MAX_ITER: usize = 400;
const LANCZOS_RESIDUAL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// `S_{j+N} = S_j`.
    Periodic,
    /// Transverse couplings across the closing bond change sign.
    Antiperiodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    ZeroMagnetization,
    Polarized,
}

/// Ground state of a ring of `n` sites.
#[derive(Debug, Clone)]
pub struct RingGroundState {
    pub n: usize,
    pub delta: f64,
    pub boundary: Boundary,
    pub zero_sector_energy: f64,
    pub polarized_energy: f64,
    pub chosen: Sector,
    /// Zero-magnetisation and polarised energies within [`DEGENERACY_GAP`].
    pub degenerate: bool,
    basis: Vec<u32>,
    amplitudes: Vec<f64>,
}

/// Per-sector values reported when both sectors are relevant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorValues {
    pub zero_sector: (f64, f64),
    pub polarized: (f64, f64),
}

fn check_size(n: usize) -> Result<()> {
    if n % 2 != 0 || !(MIN_SITES..=MAX_SITES).contains(&n) {
        return Err(Error::Domain(format!(
            "ring size must be even and in [{MIN_SITES}, {MAX_SITES}], got {n}"
        )));
    }
    Ok(())
}

fn zero_sector_basis(n: usize) -> Vec<u32> {
    (0u32..(1 << n))
        .filter(|s| s.count_ones() as usize == n / 2)
        .collect()
}

struct SparseHamiltonian {
    diagonal: Vec<f64>,
    /// `(row, col, value)` of the off-diagonal entries.
    hops: Vec<(u32, u32, f64)>,
}

impl SparseHamiltonian {
    fn build(n: usize, delta: f64, boundary: Boundary, basis: &[u32]) -> Self {
        let mut index = vec![u32::MAX; 1 << n];
        for (k, &s) in basis.iter().enumerate() {
            index[s as usize] = k as u32;
        }
        let mut diagonal = vec![0.0; basis.len()];
        let mut hops = Vec::with_capacity(basis.len() * n / 2);
        for (k, &s) in basis.iter().enumerate() {
            for i in 0..n {
                let j = (i + 1) % n;
                let (bi, bj) = ((s >> i) & 1, (s >> j) & 1);
                if bi == bj {
                    diagonal[k] += 0.25 * delta;
                } else {
                    diagonal[k] -= 0.25 * delta;
                    let sign = if j == 0 && boundary == Boundary::Antiperiodic {
                        -1.0
                    } else {
                        1.0
                    };
                    let t = s ^ ((1 << i) | (1 << j));
                    hops.push((k as u32, index[t as usize], 0.5 * sign));
                }
            }
        }
        Self { diagonal, hops }
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        for (o, (d, x)) in out.iter_mut().zip(self.diagonal.iter().zip(v)) {
            *o = d * x;
        }
        for &(row, col, h) in &self.hops {
            out[row as usize] += h * v[col as usize];
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    norm
}

fn lowest_ritz(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let k = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .expect("non-empty tridiagonal");
    (eig.eigenvalues[k], eig.eigenvectors.column(k).iter().copied().collect())
}

/// Lowest eigenpair by Lanczos with full reorthogonalisation.
fn lanczos(h: &SparseHamiltonian) -> Result<(f64, Vec<f64>)> {
    let dim = h.diagonal.len();
    let mut seed = 0x5EED_u64 ^ dim as u64;
    let mut v: Vec<f64> = (0..dim)
        .map(|_| (splitmix64(&mut seed) >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
        .collect();
    normalize(&mut v);

    let mut basis: Vec<Vec<f64>> = vec![v];
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut w = vec![0.0; dim];
    let mut last = (f64::NAN, Vec::new());

    for it in 0..LANCZOS_MAX_ITER.min(dim) {
        h.apply(&basis[it], &mut w);
        let a = dot(&basis[it], &w);
        alpha.push(a);
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                w.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let b = dot(&w, &w).sqrt();

        let (theta, y) = lowest_ritz(&alpha, &beta);
        let residual = b * y.last().copied().unwrap_or(0.0).abs();
        last = (theta, y);
        if residual < LANCZOS_RESIDUAL || b < 1e-14 || it + 1 == dim {
            return Ok((last.0, ritz_vector(&basis, &last.1)));
        }
        beta.push(b);
        let mut next = w.clone();
        next.iter_mut().for_each(|x| *x /= b);
        basis.push(next);
    }
    Err(Error::Convergence {
        estimate: last.0,
        error_bound: f64::NAN,
        evaluations: LANCZOS_MAX_ITER,
    })
}

fn ritz_vector(basis: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let mut psi = vec![0.0; basis[0].len()];
    for (q, c) in basis.iter().zip(y) {
        psi.iter_mut().zip(q).for_each(|(p, x)| *p += c * x);
    }
    normalize(&mut psi);
    psi
}

impl RingGroundState {
    pub fn compute(n: usize, delta: f64, boundary: Boundary) -> Result<Self> {
        check_size(n)?;
        if !delta.is_finite() {
            return Err(Error::Domain(format!("anisotropy must be finite, got {delta}")));
        }
        let basis = zero_sector_basis(n);
        let h = SparseHamiltonian::build(n, delta, boundary, &basis);
        let (energy, amplitudes) = lanczos(&h)?;
        let polarized_energy = 0.25 * delta * n as f64;
        let degenerate = (energy - polarized_energy).abs() < DEGENERACY_GAP;
        let chosen = if degenerate || polarized_energy < energy {
            Sector::Polarized
        } else {
            Sector::ZeroMagnetization
        };
        Ok(Self {
            n,
            delta,
            boundary,
            zero_sector_energy: energy,
            polarized_energy,
            chosen,
            degenerate,
            basis,
            amplitudes,
        })
    }

    pub fn energy(&self) -> f64 {
        self.zero_sector_energy.min(self.polarized_energy)
    }

    /// Bond-averaged `(zz, xx)` at separation `r` in the zero-magnetisation state.
    fn zero_sector_values(&self, r: usize) -> (f64, f64) {
        let n = self.n;
        let index = |s: u32| self.basis.binary_search(&s).ok();
        let (mut zz, mut xx) = (0.0, 0.0);
        for i in 0..n {
            let j = (i + r) % n;
            let gauge = if i + r >= n && self.boundary == Boundary::Antiperiodic {
                -1.0
            } else {
                1.0
            };
            for (k, &s) in self.basis.iter().enumerate() {
                let p = self.amplitudes[k] * self.amplitudes[k];
                let (bi, bj) = ((s >> i) & 1, (s >> j) & 1);
                if bi == bj {
                    zz += p;
                } else {
                    zz -= p;
                    let t = s ^ ((1 << i) | (1 << j));
                    if let Some(m) = index(t) {
                        xx += gauge * self.amplitudes[k] * self.amplitudes[m];
                    }
                }
            }
        }
        (zz / n as f64, xx / n as f64)
    }

    pub fn sector_values(&self, r: u32) -> Result<SectorValues> {
        super::check_r(self.delta, r)?;
        Ok(SectorValues {
            zero_sector: self.zero_sector_values(r as usize),
            polarized: (1.0, 0.0),
        })
    }

    pub fn correlators(&self, r: u32) -> Result<Correlators> {
        let v = self.sector_values(r)?;
        let (zz, xx) = match self.chosen {
            Sector::Polarized => v.polarized,
            Sector::ZeroMagnetization => v.zero_sector,
        };
        Correlators::new(self.delta, r, zz, xx)
    }
}

/// Ground-state correlators of the periodic ring of `n` sites.
pub fn ed_correlators(n: usize, delta: f64, r: u32) -> Result<Correlators> {
    RingGroundState::compute(n, delta, Boundary::Periodic)?.correlators(r)
}

pub fn ed_correlators_with(n: usize, delta: f64, r: u32, boundary: Boundary) -> Result<Correlators> {
    RingGroundState::compute(n, delta, boundary)?.correlators(r)
}

/// Intercept of the least-squares line through `(1/N², value)`.
fn fit_intercept(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    (sy - slope * sx) / m
}

/// Thermodynamic-limit estimate from antiperiodic rings, fitted linearly in `1/N²`.
pub fn ed_extrapolated(delta: f64, r: u32, sizes: &[usize]) -> Result<Correlators> {
    if sizes.len() < 2 {
        return Err(Error::Domain("extrapolation needs at least two ring sizes".into()));
    }
    let mut zz = Vec::with_capacity(sizes.len());
    let mut xx = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let c = ed_correlators_with(n, delta, r, Boundary::Antiperiodic)?;
        let x = 1.0 / (n * n) as f64;
        zz.push((x, c.zz));
        xx.push((x, c.xx));
    }
    Correlators::new(delta, r, fit_intercept(&zz), fit_intercept(&xx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rejects_bad_sizes() {
        assert!(ed_correlators(9, 0.0, 1).is_err());
        assert!(ed_correlators(6, 0.0, 1).is_err());
        assert!(ed_correlators(18, 0.0, 1).is_err());
        assert!(ed_correlators(8, 0.0, 3).is_err());
    }

    #[test]
    fn hamiltonian_is_symmetric() {
        let basis = zero_sector_basis(8);
        let h = SparseHamiltonian::build(8, 0.7, Boundary::Antiperiodic, &basis);
        let mut entries = std::collections::HashMap::new();
        for &(r, c, v) in &h.hops {
            *entries.entry((r, c)).or_insert(0.0) += v;
        }
        for (&(r, c), &v) in &entries {
            assert_eq!(entries.get(&(c, r)).copied(), Some(v));
        }
    }

    #[test]
    fn two_site_energy_matches_exact_small_ring() {
        // N=8 Heisenberg ring ground-state energy.
        let g = RingGroundState::compute(8, 1.0, Boundary::Periodic).unwrap();
        assert!((g.energy() - (-3.651093408937)).abs() < 1e-9, "{}", g.energy());
    }

    #[test]
    fn isotropic_nearest_approaches_limit_monotonically() {
        let target = super::super::isotropic_nearest();
        let mut prev = f64::NEG_INFINITY;
        for n in [8, 10, 12, 14] {
            let c = ed_correlators(n, 1.0, 1).unwrap();
            assert!(c.zz > prev && c.zz < target, "N={n}: {}", c.zz);
            assert!((c.zz - c.xx).abs() < 1e-9);
            prev = c.zz;
        }
        assert!((prev - target).abs() < 0.01);
    }

    /// Free-fermion ring at half filling: the even fermion number makes the
    /// fermion boundary condition antiperiodic, `k = π(2m+1)/N`.
    fn free_fermion_nearest(n: usize) -> (f64, f64) {
        let g: f64 = (0..n)
            .map(|m| PI * (2 * m + 1) as f64 / n as f64)
            .filter(|k| k.cos() < 0.0)
            .map(|k| k.cos())
            .sum::<f64>()
            / n as f64;
        (-4.0 * g * g, 2.0 * g)
    }

    #[test]
    fn xx_ring_matches_free_fermions() {
        let (zz, xx) = free_fermion_nearest(12);
        let c = ed_correlators(12, 0.0, 1).unwrap();
        assert!((c.zz - zz).abs() < 1e-10, "{} {}", c.zz, zz);
        assert!((c.xx - xx).abs() < 1e-10, "{} {}", c.xx, xx);
    }

    #[test]
    fn ferromagnetic_side_is_polarized() {
        let g = RingGroundState::compute(10, -1.5, Boundary::Periodic).unwrap();
        assert_eq!(g.chosen, Sector::Polarized);
        assert!(!g.degenerate);
        let c = g.correlators(1).unwrap();
        assert_eq!((c.zz, c.xx), (1.0, 0.0));
    }

    #[test]
    fn isotropic_ferromagnet_flags_degeneracy() {
        let g = RingGroundState::compute(8, -1.0, Boundary::Periodic).unwrap();
        assert!(g.degenerate);
        assert_eq!(g.chosen, Sector::Polarized);
        let v = g.sector_values(1).unwrap();
        assert_eq!(v.polarized, (1.0, 0.0));
        assert!(v.zero_sector.0 < 1.0);
    }

    #[test]
    fn intercept_of_exact_line() {
        let pts: Vec<_> = [12.0f64, 14.0, 16.0]
            .iter()
            .map(|n| (1.0 / (n * n), 0.3 - 2.0 / (n * n)))
            .collect();
        assert!((fit_intercept(&pts) - 0.3).abs() < 1e-14);
    }
}
