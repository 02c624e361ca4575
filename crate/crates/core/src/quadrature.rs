//! Adaptive integration on `(0, inf)` and the normalization integral.
//!
//! The half-line is compactified onto `t in (0, 1)` and integrated with a
//! global adaptive 21-point Gauss-Kronrod rule: the panel with the largest
//! error estimate is bisected until the summed estimate meets the tolerance.
//! Nodes are interior, so neither endpoint is ever evaluated. Panel
//! selection breaks ties by position, which makes results bitwise
//! reproducible for fixed tolerances.

// node and weight tables keep their full tabulated digits
#![allow(clippy::excessive_precision)]

use alloc::vec::Vec;

use crate::closed_forms::{asymptotic_exponents, density, QesParams};
use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    // QUADPACK error rescaling
    if res_asc != 0.0 && error != 0.0 {
        let scale = libm::pow(200.0 * error / res_asc, 1.5);
        error = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, error }
}

/// Tolerances and panel budget for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-10, max_subdivisions: 2000 }
    }
}

impl Tolerances {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tolerance",
                reason: "abs_tol and rel_tol must be positive",
            });
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParameter {
                name: "max_subdivisions",
                reason: "must be at least 1",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntegralResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

/// Change of variables used to compactify `(0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Substitution {
    /// `rho = t / (1 - t)`.
    #[default]
    Rational,
    /// `rho = e^u - 1` with `u = t / (1 - t)`. Compresses slowly decaying
    /// power tails; only meant for integrands known to decay, since the map
    /// is cut off where `e^u` overflows.
    Exponential,
}

impl Substitution {
    /// `(rho, d rho / d t)` at `t in (0, 1)`.
    fn map(self, t: f64) -> (f64, f64) {
        let s = 1.0 - t;
        let u = t / s;
        let du = 1.0 / (s * s);
        match self {
            Substitution::Rational => (u, du),
            Substitution::Exponential => (libm::expm1(u), libm::exp(u) * du),
        }
    }
}

/// Integrate `f` over `(0, inf)` with the default rational substitution.
pub fn integrate_halfline<F: Fn(f64) -> f64>(f: F, tol: Tolerances) -> Result<IntegralResult> {
    integrate_halfline_with(f, tol, Substitution::Rational)
}

pub fn integrate_halfline_with<F: Fn(f64) -> f64>(
    f: F,
    tol: Tolerances,
    subst: Substitution,
) -> Result<IntegralResult> {
    tol.validate()?;
    let g = |t: f64| {
        let (rho, jac) = subst.map(t);
        if !rho.is_finite() {
            return 0.0;
        }
        let v = f(rho);
        if v == 0.0 {
            0.0
        } else {
            v * jac
        }
    };
    adaptive(&g, 0.0, 1.0, tol)
}

/// Global adaptive Gauss-Kronrod on a finite interval.
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: Tolerances,
) -> Result<IntegralResult> {
    tol.validate()?;
    adaptive(&f, a, b, tol)
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: Tolerances) -> Result<IntegralResult> {
    let mut panels: Vec<Panel> = alloc::vec![gauss_kronrod_21(f, a, b)];
    let mut subdivisions = 0usize;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let fail = |subdivisions| Error::DivergenceSuspected {
            partial: value,
            abs_error: error,
            subdivisions,
        };
        if !value.is_finite() || !error.is_finite() {
            return Err(fail(subdivisions));
        }
        if error <= tol.abs_tol.max(tol.rel_tol * value.abs()) {
            return Ok(IntegralResult {
                value,
                abs_error_estimate: error,
                subdivisions,
                converged: true,
            });
        }
        if subdivisions >= tol.max_subdivisions {
            return Err(fail(subdivisions));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0usize, f64::NEG_INFINITY), |(bi, be), (i, p)| {
                if p.error > be {
                    (i, p.error)
                } else {
                    (bi, be)
                }
            });
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) || (p.b - p.a) <= 4.0 * f64::EPSILON * p.a.abs().max(p.b.abs())
        {
            // cannot resolve further in double precision
            return Err(fail(subdivisions));
        }
        panels[worst] = gauss_kronrod_21(f, p.a, mid);
        panels.push(gauss_kronrod_21(f, mid, p.b));
        subdivisions += 1;
    }
}

/// Integration measure for the normalization integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Measure {
    /// `d rho`.
    #[default]
    Flat,
    /// `rho^tau d rho`; diagnostic only.
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Verdict {
    Converges,
    Diverges,
}

/// Limit-comparison result for the tail at infinity: the density behaves as
/// `rho^(-alpha)`, and the integral converges iff `alpha > 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LimitComparison {
    pub alpha: f64,
    pub verdict: Verdict,
}

pub fn limit_comparison_alpha(p: &QesParams) -> LimitComparison {
    limit_comparison_alpha_for(p, Measure::Flat)
}

pub fn limit_comparison_alpha_for(p: &QesParams, measure: Measure) -> LimitComparison {
    let tail = asymptotic_exponents(p).at_inf.density_exponent();
    let alpha = match measure {
        Measure::Flat => -tail,
        Measure::Weighted => -(tail + p.tau),
    };
    let verdict = if alpha > 1.0 { Verdict::Converges } else { Verdict::Diverges };
    LimitComparison { alpha, verdict }
}

/// Exponent of the integrand at the origin under `measure`.
pub fn origin_exponent(p: &QesParams, measure: Measure) -> f64 {
    let zero = 2.0 * asymptotic_exponents(p).at_zero;
    match measure {
        Measure::Flat => zero,
        Measure::Weighted => zero + p.tau,
    }
}

/// Where a divergent normalization integral blows up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DivergentEnd {
    Origin,
    Infinity,
}

/// Upper edge of the band `1 < alpha <= NEAR_THRESHOLD_ALPHA` where the tail
/// is integrated with the exponential map and a relaxed tolerance.
pub const NEAR_THRESHOLD_ALPHA: f64 = 1.1;
/// Relative tolerance floor inside the near-threshold band.
pub const NEAR_THRESHOLD_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "verdict", rename_all = "snake_case"))]
pub enum Normalization {
    Finite {
        result: IntegralResult,
        alpha: f64,
        substitution: Substitution,
        /// Set when the requested `rel_tol` was relaxed near the threshold.
        downgraded_rel_tol: Option<f64>,
    },
    Diverges {
        alpha: f64,
        origin_exponent: f64,
        end: DivergentEnd,
    },
}

impl Normalization {
    pub fn value(&self) -> Option<f64> {
        match self {
            Normalization::Finite { result, .. } => Some(result.value),
            Normalization::Diverges { .. } => None,
        }
    }
}

/// `int_0^inf |psi|^2 d rho` (flat measure).
pub fn normalization(p: &QesParams, tol: Tolerances) -> Result<Normalization> {
    normalization_with(p, tol, Measure::Flat)
}

/// Normalization integral with a choice of measure. The classifier runs
/// first; a divergent verdict is returned without integrating.
pub fn normalization_with(p: &QesParams, tol: Tolerances, measure: Measure) -> Result<Normalization> {
    p.require_wavefunction()?;
    let lc = limit_comparison_alpha_for(p, measure);
    let zero = origin_exponent(p, measure);
    if lc.verdict == Verdict::Diverges {
        return Ok(Normalization::Diverges {
            alpha: lc.alpha,
            origin_exponent: zero,
            end: DivergentEnd::Infinity,
        });
    }
    if zero <= -1.0 {
        return Ok(Normalization::Diverges {
            alpha: lc.alpha,
            origin_exponent: zero,
            end: DivergentEnd::Origin,
        });
    }
    let tau = p.tau;
    let integrand = |rho: f64| {
        let d = density(p, rho).unwrap_or(f64::NAN);
        match measure {
            Measure::Flat => d,
            Measure::Weighted => d * libm::pow(rho, tau),
        }
    };
    // Power tails become (1 - t)^(alpha - 2) under the rational map, which
    // cannot be resolved below alpha = 2 in double precision. The exponential
    // map turns them into exp(-(alpha - 1) / (1 - t)) instead.
    let subst = Substitution::Exponential;
    let (tol, downgraded) = if lc.alpha <= NEAR_THRESHOLD_ALPHA {
        let rel = tol.rel_tol.max(NEAR_THRESHOLD_REL_TOL);
        let relaxed = Tolerances {
            rel_tol: rel,
            max_subdivisions: tol.max_subdivisions.saturating_mul(10),
            ..tol
        };
        (relaxed, (rel > tol.rel_tol).then_some(rel))
    } else {
        (tol, None)
    };
    match integrate_halfline_with(integrand, tol, subst) {
        Ok(result) => Ok(Normalization::Finite {
            result,
            alpha: lc.alpha,
            substitution: subst,
            downgraded_rel_tol: downgraded,
        }),
        Err(Error::DivergenceSuspected { partial, .. }) => {
            Err(Error::Inconsistent { alpha: lc.alpha, partial })
        }
        Err(e) => Err(e),
    }
}
