//! Closed-form QES potentials, their zero-energy wavefunctions, tail
//! exponents and the per-class admissibility rules.
//!
//! Everything here is written out in the radial variable `rho > 0`; the
//! algebra-side reconstruction lives in [`crate::pct`] and the two routes are
//! compared in [`crate::verify`].

use alloc::vec::Vec;
use core::fmt;

use crate::diffkit::Real;
use crate::error::{Error, Result};
use crate::so21::{bound_energy, AlgebraClass};

/// The three QES classes. Class II is the `F = +1` branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum QesClass {
    I,
    II,
    III,
}

impl QesClass {
    pub const ALL: [QesClass; 3] = [QesClass::I, QesClass::II, QesClass::III];

    pub fn algebra(self) -> AlgebraClass {
        match self {
            QesClass::I => AlgebraClass::I,
            QesClass::II => AlgebraClass::IIPlus,
            QesClass::III => AlgebraClass::III,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            QesClass::I => "I",
            QesClass::II => "II",
            QesClass::III => "III",
        }
    }
}

impl TryFrom<AlgebraClass> for QesClass {
    type Error = Error;

    fn try_from(c: AlgebraClass) -> Result<Self> {
        match c {
            AlgebraClass::I => Ok(QesClass::I),
            AlgebraClass::IIPlus => Ok(QesClass::II),
            AlgebraClass::III => Ok(QesClass::III),
            AlgebraClass::IIMinus => Err(Error::UnsupportedClass),
        }
    }
}

impl fmt::Display for QesClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl core::str::FromStr for QesClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(QesClass::I),
            "II" | "2" | "II_PLUS" => Ok(QesClass::II),
            "III" | "3" => Ok(QesClass::III),
            "II_MINUS" => Err(Error::UnsupportedClass),
            _ => Err(Error::InvalidParameter {
                name: "class",
                reason: "expected one of I, II, III",
            }),
        }
    }
}

/// Parameter bundle for one potential/wavefunction pair.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QesParams {
    pub class: QesClass,
    pub k: f64,
    pub b: f64,
    pub tau: f64,
    pub m: f64,
}

impl QesParams {
    /// Ground-state parameters (`m = k`).
    pub fn new(class: QesClass, k: f64, b: f64, tau: f64) -> Result<Self> {
        Self::with_m(class, k, b, tau, k)
    }

    pub fn with_m(class: QesClass, k: f64, b: f64, tau: f64, m: f64) -> Result<Self> {
        bound_energy(k)?;
        for (name, v) in [("b", b), ("tau", tau), ("m", m)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter { name, reason: "must be finite" });
            }
        }
        Ok(Self { class, k, b, tau, m })
    }

    pub fn energy(&self) -> f64 {
        -(self.k - 0.5) * (self.k - 0.5)
    }

    /// `k - 1/2` is integral, so `G^(k - 1/2)` is real for either sign of `b`.
    pub fn has_integral_power(&self) -> bool {
        let p = self.k - 0.5;
        libm::trunc(p) == p
    }

    /// Preconditions shared by every wavefunction evaluator.
    pub fn require_wavefunction(&self) -> Result<()> {
        if self.m != self.k {
            return Err(Error::WavefunctionNeedsMEqualsK { m: self.m, k: self.k });
        }
        if self.b < 0.0 && !self.has_integral_power() {
            return Err(Error::InvalidParameter {
                name: "b",
                reason: "b >= 0 is required when k - 1/2 is not an integer",
            });
        }
        Ok(())
    }
}

/// Which value of the `C / (rho^2 (rho+1)^2)` coefficient is in force.
///
/// Two values are in circulation: the Casimir eigenvalue `k(k-1)`, and
/// `-(E + 1/4)/2 = k(k-1)/2` obtained by chaining through the bound-state
/// energy `E = -(k - 1/2)^2`. Only one of them solves the radial equation;
/// [`crate::verify::convention_calibrate`] decides which.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Convention {
    /// `C = k(k-1)`.
    Casimir,
    /// `C = -(E + 1/4)/2 = k(k-1)/2`.
    #[default]
    Chain,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::Casimir, Convention::Chain];

    pub fn c_value(self, k: f64) -> f64 {
        match self {
            Convention::Casimir => k * (k - 1.0),
            Convention::Chain => 0.5 * k * (k - 1.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Convention::Casimir => "C=k(k-1)",
            Convention::Chain => "C=k(k-1)/2",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Class-I coefficients with both candidate values of `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoeffsI {
    pub a: f64,
    pub b: f64,
    pub c_casimir: f64,
    pub c_chain: f64,
}

pub fn coeffs_class_i(k: f64, b: f64, m: f64) -> CoeffsI {
    let e = -(k - 0.5) * (k - 0.5);
    CoeffsI {
        a: 0.5 * (4.0 * (m * m - b * b) - 1.0),
        b: 2.0 * m * b,
        c_casimir: k * (k - 1.0),
        c_chain: -0.5 * (e + 0.25),
    }
}

fn require_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { primitive: "rho", arg: rho })
    }
}

/// The `-(tau/4)(tau/2 - 1)/rho^2` term shared by all three classes.
pub fn centrifugal_term(tau: f64, rho: f64) -> f64 {
    -0.25 * tau * (0.5 * tau - 1.0) / (rho * rho)
}

/// Closed-form potential `V(rho)` under convention `conv`.
pub fn potential(p: &QesParams, rho: f64, conv: Convention) -> Result<f64> {
    require_rho(rho)?;
    let (k, b, m) = (p.k, p.b, p.m);
    let r1 = rho + 1.0;
    let c = conv.c_value(k);
    let tail = c / (rho * rho * r1 * r1) + centrifugal_term(p.tau, rho);
    let v = match p.class {
        QesClass::I => {
            let co = coeffs_class_i(k, b, m);
            let q = 2.0 * rho * rho + 2.0 * rho + 1.0;
            -co.a / (q * q) - co.b * (2.0 * rho + 1.0) / (rho * r1 * q * q)
        }
        QesClass::II => b * b / (2.0 * r1 * r1 * r1 * r1) - m * b / (rho * r1 * r1 * r1),
        QesClass::III => {
            let s = 2.0 * rho + 1.0;
            (4.0 * (m + b) * (m + b) - 1.0) / (2.0 * s * s) - 2.0 * m * b / (rho * r1)
        }
    };
    Ok(v + tail)
}

/// Explicit zero-energy wavefunction, unnormalized. Jet-capable in `rho`.
pub fn wavefunction<T: Real>(p: &QesParams, rho: T) -> Result<T> {
    require_rho(rho.value())?;
    p.require_wavefunction()?;
    let (k, b, tau) = (p.k, p.b, p.tau);
    let power = k - 0.5;
    let one = T::cst(1.0);
    let r1 = rho + 1.0;
    let rr = rho * r1;
    let common = rr.sqrt()? * rho.powf(-0.5 * tau)?;
    let psi = match p.class {
        QesClass::I => {
            let inner = (rr * b / (rr * 2.0 + 1.0)).powf(power)?;
            let phase = ((rho * 2.0 + 1.0) / (rr * 2.0)).atan() * b;
            common * inner * phase.exp() * libm::pow(2.0, power)
        }
        QesClass::II => {
            let ratio = rho / r1;
            common * (-(ratio * b)).exp() * (ratio * b).powf(power)?
        }
        QesClass::III => {
            let s = rho * 2.0 + 1.0;
            let inner = (rr * b / s).powf(power)?;
            common * (one / s).powf(b)? * inner * libm::pow(2.0, power)
        }
    };
    Ok(psi)
}

/// `ln |psi(rho)|`, evaluated as a sum of logarithms so it stays finite far
/// into both tails.
pub fn ln_abs_wavefunction(p: &QesParams, rho: f64) -> Result<f64> {
    require_rho(rho)?;
    p.require_wavefunction()?;
    let (k, b, tau) = (p.k, p.b, p.tau);
    let power = k - 0.5;
    let ln = libm::log;
    let ln_abs = |x: f64| libm::log(x.abs());
    let common = 0.5 * (ln(rho) + libm::log1p(rho)) - 0.5 * tau * ln(rho);
    let v = match p.class {
        QesClass::I => {
            // rr / (2 rr + 1) written so that rr = inf still gives 1/2
            let inv_rr = 1.0 / (rho * (rho + 1.0));
            power * core::f64::consts::LN_2
                + common
                + power * (ln_abs(b) - ln(2.0 + inv_rr))
                + b * libm::atan(0.5 / rho + 0.5 / (rho + 1.0))
        }
        QesClass::II => {
            let ratio = rho / (rho + 1.0);
            common - b * ratio + power * (ln_abs(b) + ln(rho) - libm::log1p(rho))
        }
        QesClass::III => {
            let s = 2.0 * rho + 1.0;
            power * core::f64::consts::LN_2
                + common
                - b * ln(s)
                + power * (ln_abs(b) + ln(rho) + libm::log1p(rho) - ln(s))
        }
    };
    Ok(v)
}

/// Probability density `psi^2`. Falls back to the log form where the direct
/// product overflows or underflows, so the tails stay usable.
pub fn density(p: &QesParams, rho: f64) -> Result<f64> {
    if let Ok(psi) = wavefunction::<f64>(p, rho) {
        let d = psi * psi;
        if d.is_finite() && d >= f64::MIN_POSITIVE {
            return Ok(d);
        }
    }
    Ok(libm::exp(2.0 * ln_abs_wavefunction(p, rho)?))
}

/// Large-`rho` behaviour of `psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum TailBehavior {
    /// `psi ~ rho^exponent`.
    Power { exponent: f64 },
    /// `psi ~ rho^exponent` times a factor tending to the constant
    /// `prefactor` (class II: `e^{-b} b^(k - 1/2)`).
    SaturatingPower { exponent: f64, prefactor: Option<f64> },
}

impl TailBehavior {
    pub fn exponent(&self) -> f64 {
        match *self {
            TailBehavior::Power { exponent } | TailBehavior::SaturatingPower { exponent, .. } => {
                exponent
            }
        }
    }

    /// Exponent of `|psi|^2` at infinity.
    pub fn density_exponent(&self) -> f64 {
        2.0 * self.exponent()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Asymptotics {
    /// `psi ~ rho^at_zero` as `rho -> 0+`.
    pub at_zero: f64,
    pub at_inf: TailBehavior,
}

pub fn asymptotic_exponents(p: &QesParams) -> Asymptotics {
    let (k, b, tau) = (p.k, p.b, p.tau);
    let at_inf = match p.class {
        QesClass::I => TailBehavior::Power { exponent: 1.0 - 0.5 * tau },
        QesClass::II => {
            let base = libm::pow(b, k - 0.5);
            TailBehavior::SaturatingPower {
                exponent: 1.0 - 0.5 * tau,
                prefactor: base.is_finite().then(|| libm::exp(-b) * base),
            }
        }
        QesClass::III => TailBehavior::Power { exponent: k - b - 0.5 * tau + 0.5 },
    };
    Asymptotics { at_zero: k - 0.5 * tau, at_inf }
}

/// A named admissibility condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Constraint {
    #[cfg_attr(feature = "serde", serde(rename = "2k > tau"))]
    TwoKAboveTau,
    #[cfg_attr(feature = "serde", serde(rename = "tau > 2"))]
    TauAboveTwo,
    #[cfg_attr(feature = "serde", serde(rename = "tau >= 4"))]
    TauAtLeastFour,
    #[cfg_attr(feature = "serde", serde(rename = "b > 0"))]
    BPositive,
    /// `b > k - tau/2 + 1`, the class-III limit-comparison criterion.
    #[cfg_attr(feature = "serde", serde(rename = "normalization-convergence"))]
    NormalizationConvergence,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Constraint::TwoKAboveTau => "2k > tau",
            Constraint::TauAboveTwo => "tau > 2",
            Constraint::TauAtLeastFour => "tau >= 4",
            Constraint::BPositive => "b > 0",
            Constraint::NormalizationConvergence => "normalization-convergence",
        }
    }

    pub fn holds(self, p: &QesParams) -> bool {
        let (k, b, tau) = (p.k, p.b, p.tau);
        match self {
            Constraint::TwoKAboveTau => 2.0 * k > tau,
            Constraint::TauAboveTwo => tau > 2.0,
            Constraint::TauAtLeastFour => tau >= 4.0,
            Constraint::BPositive => b > 0.0,
            Constraint::NormalizationConvergence => b > k - 0.5 * tau + 1.0,
        }
    }

    /// The admissibility conditions for each class.
    pub fn for_class(class: QesClass) -> &'static [Constraint] {
        match class {
            QesClass::I => &[Constraint::TwoKAboveTau, Constraint::TauAboveTwo],
            QesClass::II => &[
                Constraint::TwoKAboveTau,
                Constraint::TauAtLeastFour,
                Constraint::BPositive,
            ],
            QesClass::III => &[Constraint::TwoKAboveTau, Constraint::NormalizationConvergence],
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-constraint verdicts for one parameter set.
///
/// `class_regular` is the conjunction of the class conditions in
/// [`Constraint::for_class`].
/// `l2_normalizable` is decided independently from the tail exponents of
/// `|psi|^2` under the flat measure `d rho`; `weighted_l2_normalizable` uses
/// the radial measure `rho^tau d rho` and is diagnostic only.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdmissibilityReport {
    pub class: QesClass,
    pub k: f64,
    pub b: f64,
    pub tau: f64,
    pub class_regular: bool,
    pub l2_normalizable: bool,
    pub weighted_l2_normalizable: bool,
    pub violated_constraints: Vec<Constraint>,
    pub exponent_at_zero: f64,
    pub behavior_at_inf: TailBehavior,
}

pub fn admissibility(p: &QesParams) -> AdmissibilityReport {
    let asym = asymptotic_exponents(p);
    let violated: Vec<Constraint> = Constraint::for_class(p.class)
        .iter()
        .copied()
        .filter(|c| !c.holds(p))
        .collect();
    let zero = 2.0 * asym.at_zero;
    let inf = asym.at_inf.density_exponent();
    AdmissibilityReport {
        class: p.class,
        k: p.k,
        b: p.b,
        tau: p.tau,
        class_regular: violated.is_empty(),
        l2_normalizable: zero > -1.0 && inf < -1.0,
        weighted_l2_normalizable: zero + p.tau > -1.0 && inf + p.tau < -1.0,
        violated_constraints: violated,
        exponent_at_zero: asym.at_zero,
        behavior_at_inf: asym.at_inf,
    }
}
