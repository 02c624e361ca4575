//! Truncated Calogero-Sutherland parameters and pointwise interaction terms.
//!
//! Only the radial reduction matters downstream: the many-body parameters
//! enter through the single coefficient `tau`.

use crate::closed_forms::{admissibility, AdmissibilityReport, QesClass, QesParams};
use crate::error::{Error, Result};

/// Physical parameters of the extended TCS model.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TcsParams {
    /// Particle count, at least 2.
    pub n: u32,
    /// Two-body coupling, non-zero.
    pub lambda: f64,
    /// Interaction range in neighbour indices, `1 <= range <= n - 1`.
    pub range: u32,
    /// Degree of the Laplace polynomial.
    pub s: u32,
    /// Trap frequency.
    pub omega: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Interaction {
    Attractive,
    Repulsive,
    /// `lambda < 0`; the two-body term is repulsive here as well but this
    /// range is not discussed for the model.
    NegativeCoupling,
}

impl TcsParams {
    pub fn new(n: u32, lambda: f64, range: u32, s: u32, omega: f64) -> Result<Self> {
        validate(n, lambda, range)?;
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter { name: "omega", reason: "must be positive" });
        }
        Ok(Self { n, lambda, range, s, omega })
    }

    pub fn tau(&self) -> f64 {
        tau_unchecked(self.n, self.s, self.lambda, self.range)
    }

    pub fn interaction(&self) -> Interaction {
        if self.lambda >= 1.0 {
            Interaction::Repulsive
        } else if self.lambda > 0.0 {
            Interaction::Attractive
        } else {
            Interaction::NegativeCoupling
        }
    }
}

fn validate(n: u32, lambda: f64, range: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter { name: "N", reason: "need at least two particles" });
    }
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidParameter { name: "lambda", reason: "must be finite and non-zero" });
    }
    if range < 1 || range > n - 1 {
        return Err(Error::InvalidParameter { name: "r", reason: "range must lie in [1, N-1]" });
    }
    Ok(())
}

fn tau_unchecked(n: u32, s: u32, lambda: f64, range: u32) -> f64 {
    let (n, s, r) = (n as f64, s as f64, range as f64);
    n + 2.0 * s - 1.0 + lambda * r * (2.0 * n - r - 1.0)
}

/// `tau = N + 2s - 1 + lambda r (2N - r - 1)`.
pub fn tau_of(n: u32, s: u32, lambda: f64, range: u32) -> Result<f64> {
    validate(n, lambda, range)?;
    Ok(tau_unchecked(n, s, lambda, range))
}

/// Truncated two- and three-body interaction for particles at `x`.
///
/// Pairs `i < j` with `j - i <= range` contribute `lambda(lambda-1)/(x_i-x_j)^2`;
/// triples `i < j < k` with `j - i <= range` and `k - j <= range` contribute
/// `lambda^2 (x_i-x_j)(x_j-x_k) / ((x_j-x_i)^2 (x_j-x_k)^2)`.
pub fn v_int(x: &[f64], lambda: f64, range: u32) -> Result<f64> {
    let n = x.len();
    validate(n as u32, lambda, range)?;
    let r = range as usize;
    let mut two = 0.0;
    for i in 0..n {
        for j in (i + 1)..n.min(i + r + 1) {
            let d = x[i] - x[j];
            if d == 0.0 {
                return Err(Error::Singularity { what: "coincident particles", at: x[i] });
            }
            two += lambda * (lambda - 1.0) / (d * d);
        }
    }
    let mut three = 0.0;
    for i in 0..n {
        for j in (i + 1)..n.min(i + r + 1) {
            for k in (j + 1)..n.min(j + r + 1) {
                let dij = x[i] - x[j];
                let djk = x[j] - x[k];
                three += lambda * lambda * dij * djk / (dij * dij * djk * djk);
            }
        }
    }
    Ok(two + three)
}

/// Coefficients of the rational extension term.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VNewParams {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

/// `(alpha1 + alpha2 w^2 rho^2) / (beta1 + beta2 w^2 rho^2)^2`.
pub fn v_new(rho: f64, p: &VNewParams, omega: f64) -> Result<f64> {
    let w = omega * omega * rho * rho;
    let den = p.beta1 + p.beta2 * w;
    if den == 0.0 {
        return Err(Error::Singularity { what: "V_new denominator", at: rho });
    }
    Ok((p.alpha1 + p.alpha2 * w) / (den * den))
}

/// Admissibility of all three classes at `tau = tau(t)`.
pub fn classify(t: &TcsParams, k: f64, b: f64) -> Result<[AdmissibilityReport; 3]> {
    let tau = t.tau();
    let report = |c| QesParams::new(c, k, b, tau).map(|p| admissibility(&p));
    Ok([report(QesClass::I)?, report(QesClass::II)?, report(QesClass::III)?])
}
