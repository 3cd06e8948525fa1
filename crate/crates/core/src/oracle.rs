//! Numeric cross-check of perfect state transfer.
//!
//! Builds `A = sum_r w_r A_r` entry by entry from the subset distances (no
//! eigenvalue formulas), diagonalizes it as a real symmetric matrix, and
//! evaluates `U(t) = V exp(-i t L) V^T` spectrally.

use std::f64::consts::PI;

use faer::{Mat, Side};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scheme::subsets::{self, SubsetMask};
use crate::scheme::subset_distance;

pub const DEFAULT_ORACLE_CAP: usize = 5000;

/// Eigendecomposition residual above this is a numeric failure.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

/// Fidelity threshold for calling a numeric PST.
pub const PST_TOLERANCE: f64 = 1e-6;

/// Fidelity target reported alongside [`PST_TOLERANCE`].
pub const SHARP_TOLERANCE: f64 = 1e-9;

/// Unitarity defect above which a report is marked invalid.
pub const UNITARITY_LIMIT: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkReport {
    pub n: usize,
    pub k: usize,
    pub tau_over_pi: f64,
    /// `|U(tau)_{u, complement(u)}|` for `u = {1..k}`.
    pub fidelity: f64,
    /// `max |(U^dagger U - I)_{ij}|`.
    pub unitarity_defect: f64,
    /// `max |A V - V L|`.
    pub eigen_residual: f64,
    pub pair: (Vec<usize>, Vec<usize>),
    pub valid: bool,
    pub pst: bool,
}

/// A diagonalized weighted graph on the k-subsets of `{1..2k}`.
#[derive(Debug, Clone)]
pub struct WalkSystem {
    n: usize,
    k: usize,
    eigenvalues: Vec<f64>,
    eigenvectors: Mat<f64>,
    residual: f64,
    source: usize,
    target: usize,
    pair: (SubsetMask, SubsetMask),
}

impl WalkSystem {
    /// `weights[r]` multiplies `A_r`; missing classes weigh 0.
    pub fn new(n: usize, k: usize, weights: &[f64], cap: usize) -> Result<Self> {
        if k == 0 || n != 2 * k {
            return Err(Error::invalid(format!(
                "the antipodal pair exists only for n = 2k >= 2, got n = {n}, k = {k}"
            )));
        }
        if weights.len() > k + 1 {
            return Err(Error::invalid(format!("at most {} weights for k = {k}", k + 1)));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::invalid("weights must be finite"));
        }
        let size = subsets::count(n, k);
        if size > cap as u128 {
            return Err(Error::capacity(format!("C({n},{k}) vertices"), size, cap as u128));
        }
        let verts = subsets::all(n, k)?;
        let dim = verts.len();
        let a = Mat::from_fn(dim, dim, |i, j| {
            weights.get(subset_distance(verts[i], verts[j])).copied().unwrap_or(0.0)
        });
        let eig = a
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Numeric(format!("eigendecomposition failed: {e:?}")))?;
        let eigenvectors = eig.U().to_owned();
        let diag = eig.S().column_vector();
        let eigenvalues: Vec<f64> = (0..dim).map(|i| diag[i]).collect();
        let av = &a * &eigenvectors;
        let residual = max_abs(dim, |i, j| av[(i, j)] - eigenvectors[(i, j)] * eigenvalues[j]);
        if residual.is_nan() || residual > RESIDUAL_LIMIT {
            return Err(Error::Numeric(format!(
                "eigendecomposition residual {residual:e} exceeds {RESIDUAL_LIMIT:e}"
            )));
        }
        let source_mask = verts[0];
        let target_mask = subsets::complement(n, source_mask);
        let target = subsets::rank(target_mask) as usize;
        Ok(WalkSystem {
            n,
            k,
            eigenvalues,
            eigenvectors,
            residual,
            source: 0,
            target,
            pair: (source_mask, target_mask),
        })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues in ascending order.
    pub fn sorted_eigenvalues(&self) -> Vec<f64> {
        let mut v = self.eigenvalues.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    /// `U(t)_{u,v} = sum_i V_{u,i} V_{v,i} exp(-i t l_i)` as `(re, im)`.
    pub fn amplitude(&self, t: f64, u: usize, v: usize) -> (f64, f64) {
        let (mut re, mut im) = (0.0, 0.0);
        for i in 0..self.dim() {
            let p = self.eigenvectors[(u, i)] * self.eigenvectors[(v, i)];
            let phase = -t * self.eigenvalues[i];
            re += p * phase.cos();
            im += p * phase.sin();
        }
        (re, im)
    }

    /// `|U(t)|` between `{1..k}` and its complement.
    pub fn fidelity(&self, t: f64) -> f64 {
        let (re, im) = self.amplitude(t, self.source, self.target);
        re.hypot(im)
    }

    /// `max |(U^dagger U - I)_{ij}|` with `U = C - i S`, `C = V cos(tL) V^T`,
    /// `S = V sin(tL) V^T`.
    pub fn unitarity_defect(&self, t: f64) -> f64 {
        let v = &self.eigenvectors;
        let n = self.dim();
        let scaled = |g: fn(f64) -> f64| Mat::from_fn(n, n, |i, j| v[(i, j)] * g(t * self.eigenvalues[j]));
        let c = scaled(f64::cos) * v.transpose();
        let s = scaled(f64::sin) * v.transpose();
        // U^dagger U = (C^T + i S^T)(C - i S) = C^T C + S^T S + i (S^T C - C^T S)
        let real = c.transpose() * &c + s.transpose() * &s;
        let imag = s.transpose() * &c - c.transpose() * &s;
        let id = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
        max_abs(n, |i, j| real[(i, j)] - id(i, j)).max(max_abs(n, |i, j| imag[(i, j)]))
    }

    pub fn report(&self, tau_over_pi: f64) -> WalkReport {
        let t = tau_over_pi * PI;
        let fidelity = self.fidelity(t);
        let unitarity_defect = self.unitarity_defect(t);
        let valid = unitarity_defect < UNITARITY_LIMIT;
        WalkReport {
            n: self.n,
            k: self.k,
            tau_over_pi,
            fidelity,
            unitarity_defect,
            eigen_residual: self.residual,
            pair: (subsets::elements(self.pair.0), subsets::elements(self.pair.1)),
            valid,
            pst: valid && fidelity >= 1.0 - PST_TOLERANCE,
        }
    }
}

fn max_abs(n: usize, f: impl Fn(usize, usize) -> f64) -> f64 {
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).fold(0.0, |m, (i, j)| m.max(f(i, j).abs()))
}

/// Fidelity between `{1..k}` and its complement at `tau = tau_over_pi * pi`.
pub fn walk_fidelity(n: usize, k: usize, weights: &[f64], tau_over_pi: f64, cap: usize) -> Result<WalkReport> {
    Ok(WalkSystem::new(n, k, weights, cap)?.report(tau_over_pi))
}

/// `(t/pi, fidelity)` over a grid of `t/pi` values.
pub fn fidelity_curve(n: usize, k: usize, weights: &[f64], grid_over_pi: &[f64], cap: usize) -> Result<Vec<(f64, f64)>> {
    let sys = WalkSystem::new(n, k, weights, cap)?;
    Ok(grid_over_pi.iter().map(|&g| (g, sys.fidelity(g * PI))).collect())
}

/// Selector `r in classes` as a weight list `w_0..w_k`.
pub fn selector_weights(k: usize, classes: &[usize]) -> Vec<f64> {
    (0..=k).map(|r| if classes.contains(&r) && r > 0 { 1.0 } else { 0.0 }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_constructed_weights_transfer_at_pi() {
        let rep = walk_fidelity(4, 2, &[0.0, 2.0 / 3.0, 1.0 / 6.0], 1.0, DEFAULT_ORACLE_CAP).unwrap();
        assert!(rep.fidelity >= 1.0 - SHARP_TOLERANCE, "{rep:?}");
        assert!(rep.valid && rep.pst);
        assert_eq!(rep.pair, (vec![1, 2], vec![3, 4]));
    }

    #[test]
    fn k3_first_two_classes_at_half_pi() {
        let w = selector_weights(3, &[1, 2]);
        let rep = walk_fidelity(6, 3, &w, 0.5, DEFAULT_ORACLE_CAP).unwrap();
        assert!(rep.fidelity >= 1.0 - SHARP_TOLERANCE, "{rep:?}");
    }

    #[test]
    fn octahedron_stays_away_from_one() {
        let sys = WalkSystem::new(4, 2, &selector_weights(2, &[1]), DEFAULT_ORACLE_CAP).unwrap();
        assert!(sys.report(0.5).fidelity < 0.99);
        // eigenvalues 4, 0, -2: the phase pattern repeats with period pi
        for i in 1..=400 {
            let t = i as f64 * PI / 200.0;
            assert!(sys.fidelity(t) < 0.99, "t = {t}");
        }
    }

    #[test]
    fn curve_properties() {
        let w = [0.0, 2.0 / 3.0, 1.0 / 6.0];
        let grid: Vec<f64> = (0..=200).map(|i| i as f64 / 100.0).collect();
        let curve = fidelity_curve(4, 2, &w, &grid, DEFAULT_ORACLE_CAP).unwrap();
        assert!(curve[0].1.abs() < 1e-12);
        assert!(curve.iter().all(|&(_, f)| (0.0..=1.0 + 1e-12).contains(&f)));
        let best = curve.iter().copied().fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
        assert!((best.0 - 1.0).abs() < 1e-9, "peak at {}", best.0);
    }

    #[test]
    fn degenerate_spectrum_diagonalizes() {
        let sys = WalkSystem::new(8, 4, &selector_weights(4, &[1, 3, 4]), DEFAULT_ORACLE_CAP).unwrap();
        assert!(sys.residual <= 1e-12);
    }

    #[test]
    fn unitarity_holds() {
        let sys = WalkSystem::new(8, 4, &[0.3, 1.0, -0.5, 2.0, 0.25], DEFAULT_ORACLE_CAP).unwrap();
        for t in [0.0, 0.7, 3.0, 11.5] {
            assert!(sys.unitarity_defect(t) < UNITARITY_LIMIT);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(WalkSystem::new(7, 3, &[0.0, 1.0], DEFAULT_ORACLE_CAP).is_err());
        assert!(WalkSystem::new(4, 2, &[0.0, 1.0, 1.0, 1.0], DEFAULT_ORACLE_CAP).is_err());
        assert!(WalkSystem::new(4, 2, &[f64::NAN], DEFAULT_ORACLE_CAP).is_err());
        assert!(matches!(
            WalkSystem::new(12, 6, &[0.0, 1.0], 100),
            Err(Error::Capacity { .. })
        ));
    }
}
