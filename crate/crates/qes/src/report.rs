//! Verification records as emitted by `qes verify`.

use qes_core::closed_forms::admissibility;
use qes_core::verify::{
    closed_vs_algebra_diff, convention_calibrate_perturbed, residual_scan, standard_grid,
    POTENTIAL_AGREEMENT,
};
use qes_core::{Convention, Error, QesClass, QesParams};
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub class: QesClass,
    pub k: f64,
    pub b: f64,
    pub tau: f64,
    pub convention: Convention,
    pub max_residual: f64,
    pub argmax_rho: f64,
    pub passed: bool,
    pub tool_version: String,
}

/// Side information that does not belong in the record itself.
#[derive(Debug, Clone, Default)]
pub struct Notes {
    pub lines: Vec<String>,
}

/// Calibrate, scan the radial residual under the winner, and cross-check
/// the potential against its algebra-side reconstruction.
///
/// `shift` adds `shift / rho^2` to the potential; any non-zero value should
/// make the record fail.
pub fn verify_one(p: &QesParams, shift: f64, notes: &mut Notes) -> Result<VerificationRecord, Error> {
    let grid = standard_grid();
    let adm = admissibility(p);
    if !adm.class_regular {
        let names: Vec<&str> = adm.violated_constraints.iter().map(|c| c.name()).collect();
        notes.lines.push(format!(
            "class {} k={} tau={} b={}: outside the class constraints ({}); residual checked anyway",
            p.class,
            p.k,
            p.tau,
            p.b,
            names.join(", ")
        ));
    }
    if !adm.l2_normalizable {
        notes.lines.push(format!(
            "class {} k={} tau={} b={}: psi is not square-integrable on (0, inf)",
            p.class, p.k, p.tau, p.b
        ));
    }
    let (convention, calibrated) = match convention_calibrate_perturbed(p, &grid, shift) {
        Ok(cal) => {
            if cal.ambiguous {
                notes.lines.push(format!(
                    "class {} k={} tau={} b={}: calibration ambiguous (casimir {:e}, chain {:e})",
                    p.class, p.k, p.tau, p.b, cal.casimir_residual, cal.chain_residual
                ));
            }
            (cal.best, !cal.ambiguous)
        }
        Err(Error::CalibrationFailure { casimir, chain }) => {
            notes.lines.push(format!(
                "class {} k={} tau={} b={}: calibration failed (casimir {:e}, chain {:e})",
                p.class, p.k, p.tau, p.b, casimir, chain
            ));
            (Convention::default(), false)
        }
        Err(e) => return Err(e),
    };
    let scan = residual_scan(p, convention, &grid, shift)?;
    let (diff, at) = closed_vs_algebra_diff(p, convention, &grid)?;
    let chain_ok = diff < POTENTIAL_AGREEMENT;
    if !chain_ok {
        notes.lines.push(format!(
            "class {} k={} tau={} b={}: closed form and algebra side differ by {:e} at rho={}",
            p.class, p.k, p.tau, p.b, diff, at
        ));
    }
    Ok(VerificationRecord {
        class: p.class,
        k: p.k,
        b: p.b,
        tau: p.tau,
        convention,
        max_residual: scan.max_abs_relative_residual,
        argmax_rho: scan.argmax_rho,
        passed: scan.passed && calibrated && chain_ok,
        tool_version: TOOL_VERSION.to_string(),
    })
}
