//! The (F, G) realizations of so(2,1) as a potential algebra.
//!
//! Each class is a solution of `F' = 1 - F^2`, `G' = -F G`. Inserting it into
//! `V_m = (1/4 - m^2) F' + 2 m G' + G^2` gives a family of potentials that all
//! share the bound-state energy `-(k - 1/2)^2`, with ground state
//! `chi_0 = G^(k - 1/2) h`.

use core::fmt;

use crate::diffkit::{eval_jet2, Jet2, Real};
use crate::error::{Error, Result};

/// Solution class of the defining equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum AlgebraClass {
    /// `F = tanh x`, `G = b sech x`.
    I,
    /// `F = +1`, `G = b e^{-x}`.
    IIPlus,
    /// `F = -1`, `G = b e^{x}`.
    IIMinus,
    /// `F = coth x`, `G = b csch x`; only `x > 0` is used.
    III,
}

impl AlgebraClass {
    pub const ALL: [AlgebraClass; 4] = [Self::I, Self::IIPlus, Self::IIMinus, Self::III];

    pub fn label(self) -> &'static str {
        match self {
            Self::I => "I",
            Self::IIPlus => "II_PLUS",
            Self::IIMinus => "II_MINUS",
            Self::III => "III",
        }
    }

    /// Default sampling grid: `[-5, 5]`, or `[1e-2, 10]` for class III.
    pub fn default_grid(self, points: usize) -> alloc::vec::Vec<f64> {
        let (lo, hi) = match self {
            Self::III => (1e-2, 10.0),
            _ => (-5.0, 5.0),
        };
        crate::grid::linspace(lo, hi, points)
    }
}

impl fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Representation and coupling data for one member of the family.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AlgebraParams {
    pub class: AlgebraClass,
    pub b: f64,
    pub k: f64,
    pub m: f64,
}

impl AlgebraParams {
    /// Ground-state member (`m = k`).
    pub fn new(class: AlgebraClass, b: f64, k: f64) -> Result<Self> {
        Self::with_m(class, b, k, k)
    }

    pub fn with_m(class: AlgebraClass, b: f64, k: f64, m: f64) -> Result<Self> {
        bound_energy(k)?;
        if !b.is_finite() || !m.is_finite() {
            return Err(Error::InvalidParameter { name: "b/m", reason: "must be finite" });
        }
        Ok(Self { class, b, k, m })
    }

    pub fn energy(&self) -> f64 {
        -(self.k - 0.5) * (self.k - 0.5)
    }

    pub fn casimir(&self) -> f64 {
        casimir(self.k)
    }
}

/// `F(x)` for the class.
pub fn f_eval<T: Real>(class: AlgebraClass, x: T) -> Result<T> {
    match class {
        AlgebraClass::I => Ok(x.tanh()),
        AlgebraClass::IIPlus => Ok(T::cst(1.0)),
        AlgebraClass::IIMinus => Ok(T::cst(-1.0)),
        AlgebraClass::III => x.coth(),
    }
}

/// `G(x)` for the class with coupling `b`.
pub fn g_eval<T: Real>(class: AlgebraClass, b: f64, x: T) -> Result<T> {
    match class {
        AlgebraClass::I => Ok(x.sech() * b),
        AlgebraClass::IIPlus => Ok((-x).exp() * b),
        AlgebraClass::IIMinus => Ok(x.exp() * b),
        AlgebraClass::III => Ok(x.csch()? * b),
    }
}

/// Max over `grid` of `|F' - (1 - F^2)|` and `|G' + F G|`, derivatives by jets.
pub fn check_defining_odes(class: AlgebraClass, b: f64, grid: &[f64]) -> Result<(f64, f64)> {
    let mut dev_f: f64 = 0.0;
    let mut dev_g: f64 = 0.0;
    for &x in grid {
        let f = eval_jet2(|t| f_eval(class, t), x)?;
        let g = eval_jet2(|t| g_eval(class, b, t), x)?;
        dev_f = dev_f.max((f.d1 - (1.0 - f.value * f.value)).abs());
        dev_g = dev_g.max((g.d1 + f.value * g.value).abs());
    }
    Ok((dev_f, dev_g))
}

/// `V_m(x) = (1/4 - m^2) F'(x) + 2 m G'(x) + G(x)^2`.
///
/// `F'` and `G'` are taken from jets rather than from the defining
/// equations, so this is an independent route to the algebra-side form
/// `(1/4 - m^2)(1 - F^2) - 2 m F G + G^2`.
pub fn potential_vm(class: AlgebraClass, b: f64, m: f64, x: f64) -> Result<f64> {
    let f = eval_jet2(|t| f_eval(class, t), x)?;
    let g = eval_jet2(|t| g_eval(class, b, t), x)?;
    Ok((0.25 - m * m) * f.d1 + 2.0 * m * g.d1 + g.value * g.value)
}

/// `V_m` written through the defining equations, jet-capable.
pub fn potential_vm_algebraic<T: Real>(class: AlgebraClass, b: f64, m: f64, x: T) -> Result<T> {
    let f = f_eval(class, x)?;
    let g = g_eval(class, b, x)?;
    Ok((T::cst(1.0) - f * f) * (0.25 - m * m) - f * g * (2.0 * m) + g * g)
}

/// Unnormalized ground state `chi_0 = G^(k - 1/2) h`.
///
/// `h_I = exp(b atan(sinh g))`, `h_II = exp(-b e^{-g})`,
/// `h_III = tanh(g/2)^b`. Class II_MINUS is the mirror image
/// `chi_0(II_PLUS, -b, k, -g)`, normalizable for `b < 0`.
///
/// At `b = 0` the overall factor `b^(k - 1/2)` is dropped and the limiting
/// shape `(G/b)^(k - 1/2)` is returned (`sech^(k - 1/2)` for class I).
pub fn ground_state_chi0<T: Real>(class: AlgebraClass, b: f64, k: f64, g: T) -> Result<T> {
    bound_energy(k)?;
    let power = k - 0.5;
    let coupling = if b == 0.0 { 1.0 } else { b };
    let base = g_eval(class, coupling, g);
    match class {
        AlgebraClass::I => {
            let h = (g.sinh().atan() * b).exp();
            Ok(base?.powf(power)? * h)
        }
        AlgebraClass::IIPlus => {
            let h = ((-g).exp() * (-b)).exp();
            Ok(base?.powf(power)? * h)
        }
        AlgebraClass::IIMinus => ground_state_chi0(AlgebraClass::IIPlus, -b, k, -g),
        AlgebraClass::III => {
            let h = (g * 0.5).tanh().powf(b)?;
            Ok(base?.powf(power)? * h)
        }
    }
}

/// Relative residual of `-chi_0'' + V_k chi_0 = E chi_0` at `x`.
pub fn eigen_relation_residual(class: AlgebraClass, b: f64, k: f64, x: f64) -> Result<f64> {
    let e = bound_energy(k)?;
    let chi: Jet2 = eval_jet2(|t| ground_state_chi0(class, b, k, t), x)?;
    let v = potential_vm(class, b, k, x)?;
    let lhs = -chi.d2 + v * chi.value;
    let rhs = e * chi.value;
    let scale = chi.d2.abs().max((v * chi.value).abs()).max(rhs.abs());
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok((lhs - rhs).abs() / scale)
}

/// `E = -(k - 1/2)^2` for the `D_k^+` representation.
pub fn bound_energy(k: f64) -> Result<f64> {
    if k.is_finite() && k > 0.5 {
        Ok(-(k - 0.5) * (k - 0.5))
    } else {
        Err(Error::Representation { k })
    }
}

/// Casimir eigenvalue `k(k - 1)`.
pub fn casimir(k: f64) -> f64 {
    k * (k - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::linspace;
    use AlgebraClass::*;

    #[test]
    fn f_values() {
        assert_eq!(f_eval(I, 0.0).unwrap(), 0.0);
        assert_eq!(f_eval(IIPlus, 17.3).unwrap(), 1.0);
        assert_eq!(f_eval(IIMinus, 17.3).unwrap(), -1.0);
        // coth(ln 2) = (2 + 1/2) / (2 - 1/2)
        assert!((f_eval(III, core::f64::consts::LN_2).unwrap() - 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn g_values() {
        assert_eq!(g_eval(I, 1.0, 0.0).unwrap(), 1.0);
        assert_eq!(g_eval(IIPlus, 2.0, 0.0).unwrap(), 2.0);
        assert!((g_eval(III, 1.0, core::f64::consts::LN_2).unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn class_iii_is_singular_at_origin() {
        assert!(matches!(f_eval(III, 0.0), Err(Error::Singularity { .. })));
        assert!(matches!(g_eval(III, 1.0, 0.0), Err(Error::Singularity { .. })));
        assert!(matches!(potential_vm(III, 1.0, 1.0, 0.0), Err(Error::Singularity { .. })));
        let err = check_defining_odes(III, 1.0, &[0.5, 0.0, 1.0]).unwrap_err();
        assert_eq!(err, Error::Singularity { what: "coth", at: 0.0 });
    }

    #[test]
    fn defining_odes() {
        let (df, dg) = check_defining_odes(I, 1.0, &linspace(-5.0, 5.0, 101)).unwrap();
        assert!(df < 1e-12 && dg < 1e-12);
        let (df, dg) = check_defining_odes(IIPlus, 3.0, &linspace(-5.0, 5.0, 11)).unwrap();
        assert_eq!(df, 0.0);
        assert!(dg < 1e-12);
        let (df, dg) = check_defining_odes(III, 2.0, &linspace(0.1, 5.0, 101)).unwrap();
        assert!(df < 1e-12 && dg < 1e-12);
        let (df, dg) = check_defining_odes(IIMinus, 0.5, &linspace(-5.0, 5.0, 21)).unwrap();
        assert!(df < 1e-12 && dg < 1e-12);
    }

    #[test]
    fn vm_values() {
        assert!((potential_vm(I, 1.0, 1.0, 0.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(potential_vm(IIPlus, 1.0, 0.5, 0.0).unwrap().abs() < 1e-15);
        for x in [-2.0, 0.3, 1.7] {
            let m0 = 1.3;
            let s = 1.0 / libm::cosh(x);
            let expect = (0.25 - m0 * m0) * s * s;
            assert!((potential_vm(I, 0.0, m0, x).unwrap() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn vm_routes_agree() {
        for class in [I, IIPlus, IIMinus, III] {
            for x in [0.2, 0.9, 2.4] {
                let a = potential_vm(class, 1.5, 2.0, x).unwrap();
                let b: f64 = potential_vm_algebraic(class, 1.5, 2.0, x).unwrap();
                assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "{class} at {x}");
            }
        }
    }

    #[test]
    fn chi0_values() {
        let g = 0.8_f64;
        let expect = libm::sqrt(1.0 / libm::cosh(g));
        assert!((ground_state_chi0(I, 0.0, 1.0, g).unwrap() - expect).abs() < 1e-15);
        // (1/2)^2.5 e^{-1/2}; reference value from a 30-digit evaluation
        let v = ground_state_chi0(IIPlus, 1.0, 3.0, core::f64::consts::LN_2).unwrap();
        assert!((v - 0.107_220_485_620_088_35).abs() < 1e-15, "{v}");
        assert_eq!(ground_state_chi0(I, 1.0, 2.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn chi0_rejects_negative_base_for_fractional_power() {
        assert!(matches!(
            ground_state_chi0(IIPlus, -1.0, 3.0, 0.2),
            Err(Error::Domain { primitive: "powf", .. })
        ));
        // k - 1/2 = 1 is integral: negative G is fine.
        assert!(ground_state_chi0(I, -1.0, 1.5, 0.2).is_ok());
    }

    #[test]
    fn energies() {
        assert!(bound_energy(0.5).is_err());
        assert!(bound_energy(0.5 + 1e-12).is_ok());
        assert_eq!(bound_energy(1.0).unwrap(), -0.25);
        assert_eq!(bound_energy(3.0).unwrap(), -6.25);
        assert_eq!(casimir(3.0), 6.0);
        assert!(AlgebraParams::new(I, 1.0, 0.4).is_err());
    }

    #[test]
    fn eigen_relation_all_classes() {
        for k in [2.0, 3.0, 5.0] {
            for b in [0.5, 1.0, 2.0] {
                for class in [I, IIPlus, III] {
                    for x in class.default_grid(41) {
                        let r = eigen_relation_residual(class, b, k, x).unwrap();
                        assert!(r < 1e-8, "{class} k={k} b={b} x={x}: {r}");
                    }
                }
                for x in linspace(-5.0, 5.0, 41) {
                    let r = eigen_relation_residual(IIMinus, -b, k, x).unwrap();
                    assert!(r < 1e-8, "II_MINUS k={k} b={} x={x}: {r}", -b);
                }
            }
        }
    }

    #[test]
    fn eigen_relation_detects_wrong_energy_label() {
        // V_m with m != k does not have chi_0 as its ground state.
        let chi = eval_jet2(|t| ground_state_chi0(I, 1.0, 3.0, t), 0.4).unwrap();
        let v = potential_vm(I, 1.0, 3.5, 0.4).unwrap();
        let e = bound_energy(3.0).unwrap();
        assert!(((-chi.d2 + v * chi.value) - e * chi.value).abs() > 1e-3 * chi.value);
    }
}
