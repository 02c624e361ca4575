//! Residual checks tying the closed forms back to the radial equation.
//!
//! At zero energy the radial equation reads
//! `psi'' + (tau/rho) psi' - 2 V psi = 0`. The residual is reported relative
//! to the largest of its three terms, because `psi` ranges over many orders of
//! magnitude on a log grid.

use alloc::vec::Vec;

use crate::closed_forms::{potential, wavefunction, QesClass, QesParams};
pub use crate::closed_forms::Convention;
use crate::diffkit::eval_jet2;
use crate::error::{Error, Result};
use crate::grid::logspace;
use crate::pct::algebra_side_potential;

/// Pass threshold for the relative radial residual.
pub const RESIDUAL_THRESHOLD: f64 = 1e-8;
/// The losing convention must be worse than the winner by this factor.
pub const CALIBRATION_SEPARATION: f64 = 1e3;
/// Above this, a convention is considered to fail outright.
pub const CALIBRATION_FAILURE: f64 = 1e-4;
/// Pass threshold for closed-form vs algebra-side potentials.
pub const POTENTIAL_AGREEMENT: f64 = 1e-8;

/// 60 log-spaced points on `[0.05, 20]`.
pub fn standard_grid() -> Vec<f64> {
    logspace(0.05, 20.0, 60)
}

/// The parameter sets `(class, k, tau, b)` the verification suite runs on.
pub fn acceptance_grid() -> Vec<QesParams> {
    const SETS: [(QesClass, f64, f64, f64); 9] = [
        (QesClass::I, 3.0, 4.0, 1.0),
        (QesClass::I, 5.0, 8.0, 1.0),
        (QesClass::I, 4.0, 5.0, 2.0),
        (QesClass::II, 3.0, 4.0, 1.0),
        (QesClass::II, 4.0, 4.0, 2.0),
        (QesClass::II, 5.0, 6.0, 1.0),
        (QesClass::III, 2.0, 5.0, 2.0),
        (QesClass::III, 3.0, 5.0, 2.0),
        (QesClass::III, 4.0, 6.0, 3.0),
    ];
    SETS.iter()
        .map(|&(c, k, tau, b)| QesParams::new(c, k, b, tau).expect("acceptance grid is valid"))
        .collect()
}

/// Relative residual of the zero-energy radial equation at `rho`.
pub fn radial_residual(p: &QesParams, conv: Convention, rho: f64) -> Result<f64> {
    radial_residual_perturbed(p, conv, rho, 0.0)
}

/// As [`radial_residual`], with `shift / rho^2` added to the potential.
/// A non-zero shift is the sensitivity control for the checker itself.
pub fn radial_residual_perturbed(p: &QesParams, conv: Convention, rho: f64, shift: f64) -> Result<f64> {
    let psi = eval_jet2(|r| wavefunction(p, r), rho)?;
    let v = potential(p, rho, conv)? + shift / (rho * rho);
    let t1 = psi.d2;
    let t2 = p.tau / rho * psi.d1;
    let t3 = 2.0 * v * psi.value;
    let scale = t1.abs().max(t2.abs()).max(t3.abs());
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((t1 + t2 - t3).abs() / scale)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ResidualReport {
    pub params: QesParams,
    pub convention: Convention,
    pub grid: Vec<f64>,
    pub max_abs_relative_residual: f64,
    pub argmax_rho: f64,
    pub threshold: f64,
    pub passed: bool,
}

/// Scan the radial residual over `grid`.
pub fn residual_scan(p: &QesParams, conv: Convention, grid: &[f64], shift: f64) -> Result<ResidualReport> {
    let mut worst = 0.0;
    let mut at = grid.first().copied().unwrap_or(f64::NAN);
    for &rho in grid {
        let r = radial_residual_perturbed(p, conv, rho, shift)?;
        if r > worst || r.is_nan() {
            worst = r;
            at = rho;
        }
    }
    Ok(ResidualReport {
        params: *p,
        convention: conv,
        grid: grid.to_vec(),
        max_abs_relative_residual: worst,
        argmax_rho: at,
        threshold: RESIDUAL_THRESHOLD,
        passed: worst <= RESIDUAL_THRESHOLD,
    })
}

/// Outcome of comparing both C conventions on one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Calibration {
    pub best: Convention,
    /// The winner did not beat the loser by [`CALIBRATION_SEPARATION`].
    pub ambiguous: bool,
    pub casimir_residual: f64,
    pub chain_residual: f64,
}

impl Calibration {
    pub fn residual(&self, conv: Convention) -> f64 {
        match conv {
            Convention::Casimir => self.casimir_residual,
            Convention::Chain => self.chain_residual,
        }
    }
}

pub fn convention_calibrate(p: &QesParams, grid: &[f64]) -> Result<Calibration> {
    convention_calibrate_perturbed(p, grid, 0.0)
}

/// As [`convention_calibrate`], with `shift / rho^2` added to both candidate
/// potentials.
pub fn convention_calibrate_perturbed(p: &QesParams, grid: &[f64], shift: f64) -> Result<Calibration> {
    if grid.len() < 20 {
        return Err(Error::InvalidParameter { name: "grid", reason: "need at least 20 points" });
    }
    let casimir = residual_scan(p, Convention::Casimir, grid, shift)?.max_abs_relative_residual;
    let chain = residual_scan(p, Convention::Chain, grid, shift)?.max_abs_relative_residual;
    if casimir > CALIBRATION_FAILURE && chain > CALIBRATION_FAILURE {
        return Err(Error::CalibrationFailure { casimir, chain });
    }
    let (best, win, lose) = if chain <= casimir {
        (Convention::Chain, chain, casimir)
    } else {
        (Convention::Casimir, casimir, chain)
    };
    Ok(Calibration {
        best,
        ambiguous: lose < CALIBRATION_SEPARATION * win,
        casimir_residual: casimir,
        chain_residual: chain,
    })
}

/// Max over `grid` of `|V_closed - V_algebra| / (1 + |V_closed|)` and where
/// it occurs.
pub fn closed_vs_algebra_diff(p: &QesParams, conv: Convention, grid: &[f64]) -> Result<(f64, f64)> {
    let mut worst = 0.0;
    let mut at = grid.first().copied().unwrap_or(f64::NAN);
    for &rho in grid {
        let closed = potential(p, rho, conv)?;
        let alg = algebra_side_potential(p, rho)?;
        let d = (closed - alg).abs() / (1.0 + closed.abs());
        if d > worst {
            worst = d;
            at = rho;
        }
    }
    Ok((worst, at))
}
