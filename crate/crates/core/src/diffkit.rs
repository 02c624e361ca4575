//! Second-order Taylor jets and a central-difference oracle.
//!
//! Every residual check in the crate needs a function together with its
//! first and second derivative. [`Jet2`] carries `(f, f', f'')` through
//! arithmetic and the elementary functions exactly (up to rounding), so the
//! class functions, wavefunctions and mappings are written once against the
//! [`Real`] trait and evaluated either on plain `f64` or on jets.
//!
//! ```
//! use qes_core::diffkit::{eval_jet2, Real};
//!
//! let j = eval_jet2(|x| Ok(x * x), 3.0).unwrap();
//! assert_eq!((j.value, j.d1, j.d2), (9.0, 6.0, 2.0));
//! ```

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Scalar type accepted by the jet-capable evaluators.
///
/// Total functions return `Self`; partial ones return a [`Result`] whose
/// error names the offending primitive.
pub trait Real:
    Copy
    + core::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    /// Lift a constant.
    fn cst(v: f64) -> Self;
    /// The underlying value (drops derivative information).
    fn value(self) -> f64;

    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;
    fn tanh(self) -> Self;
    fn sech(self) -> Self;
    fn atan(self) -> Self;

    fn ln(self) -> Result<Self>;
    fn sqrt(self) -> Result<Self>;
    /// Real power. Negative bases are accepted only for integral exponents.
    fn powf(self, a: f64) -> Result<Self>;
    fn recip(self) -> Result<Self>;
    fn coth(self) -> Result<Self>;
    fn csch(self) -> Result<Self>;
}

fn is_integral(a: f64) -> bool {
    libm::trunc(a) == a && a.abs() < (i32::MAX as f64)
}

fn checked_pow(x: f64, a: f64) -> Result<f64> {
    if is_integral(a) {
        if x == 0.0 && a < 0.0 {
            return Err(Error::Domain { primitive: "powf", arg: x });
        }
        return Ok(libm::pow(x, a));
    }
    if x > 0.0 || (x == 0.0 && a > 0.0) {
        Ok(libm::pow(x, a))
    } else {
        Err(Error::Domain { primitive: "powf", arg: x })
    }
}

impl Real for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn value(self) -> f64 {
        self
    }
    fn exp(self) -> Self {
        libm::exp(self)
    }
    fn sin(self) -> Self {
        libm::sin(self)
    }
    fn cos(self) -> Self {
        libm::cos(self)
    }
    fn sinh(self) -> Self {
        libm::sinh(self)
    }
    fn cosh(self) -> Self {
        libm::cosh(self)
    }
    fn tanh(self) -> Self {
        libm::tanh(self)
    }
    fn sech(self) -> Self {
        1.0 / libm::cosh(self)
    }
    fn atan(self) -> Self {
        libm::atan(self)
    }
    fn ln(self) -> Result<Self> {
        if self > 0.0 {
            Ok(libm::log(self))
        } else {
            Err(Error::Domain { primitive: "ln", arg: self })
        }
    }
    fn sqrt(self) -> Result<Self> {
        if self >= 0.0 {
            Ok(libm::sqrt(self))
        } else {
            Err(Error::Domain { primitive: "sqrt", arg: self })
        }
    }
    fn powf(self, a: f64) -> Result<Self> {
        checked_pow(self, a)
    }
    fn recip(self) -> Result<Self> {
        if self == 0.0 {
            Err(Error::Singularity { what: "1/x", at: self })
        } else {
            Ok(1.0 / self)
        }
    }
    fn coth(self) -> Result<Self> {
        if self == 0.0 {
            Err(Error::Singularity { what: "coth", at: self })
        } else {
            Ok(1.0 / libm::tanh(self))
        }
    }
    fn csch(self) -> Result<Self> {
        if self == 0.0 {
            Err(Error::Singularity { what: "csch", at: self })
        } else {
            Ok(1.0 / libm::sinh(self))
        }
    }
}

/// Value with first and second derivative.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    /// A constant: both derivatives vanish.
    pub const fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    /// The independent variable at `x`.
    pub const fn variable(x: f64) -> Self {
        Self::new(x, 1.0, 0.0)
    }

    /// Compose with a scalar function given its value and first two
    /// derivatives at `self.value`.
    #[inline]
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Self {
            value: f0,
            d1: f1 * self.d1,
            d2: f2 * self.d1 * self.d1 + f1 * self.d2,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2::new(
            self.value * o.value,
            self.d1 * o.value + self.value * o.d1,
            self.d2 * o.value + 2.0 * self.d1 * o.d1 + self.value * o.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        let inv = 1.0 / o.value;
        self * o.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.value, -self.d1, -self.d2)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, c: f64) -> Jet2 {
        Jet2::new(self.value + c, self.d1, self.d2)
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(self, c: f64) -> Jet2 {
        Jet2::new(self.value - c, self.d1, self.d2)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, c: f64) -> Jet2 {
        Jet2::new(self.value * c, self.d1 * c, self.d2 * c)
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, c: f64) -> Jet2 {
        Jet2::new(self.value / c, self.d1 / c, self.d2 / c)
    }
}

impl Real for Jet2 {
    fn cst(v: f64) -> Self {
        Jet2::constant(v)
    }
    fn value(self) -> f64 {
        self.value
    }
    fn exp(self) -> Self {
        let e = libm::exp(self.value);
        self.chain(e, e, e)
    }
    fn sin(self) -> Self {
        let (s, c) = (libm::sin(self.value), libm::cos(self.value));
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = (libm::sin(self.value), libm::cos(self.value));
        self.chain(c, -s, -c)
    }
    fn sinh(self) -> Self {
        let (s, c) = (libm::sinh(self.value), libm::cosh(self.value));
        self.chain(s, c, s)
    }
    fn cosh(self) -> Self {
        let (s, c) = (libm::sinh(self.value), libm::cosh(self.value));
        self.chain(c, s, c)
    }
    fn tanh(self) -> Self {
        let t = libm::tanh(self.value);
        let dt = 1.0 - t * t;
        self.chain(t, dt, -2.0 * t * dt)
    }
    fn sech(self) -> Self {
        let s = 1.0 / libm::cosh(self.value);
        let t = libm::tanh(self.value);
        self.chain(s, -s * t, s * (2.0 * t * t - 1.0))
    }
    fn atan(self) -> Self {
        let x = self.value;
        let q = 1.0 / (1.0 + x * x);
        self.chain(libm::atan(x), q, -2.0 * x * q * q)
    }
    fn ln(self) -> Result<Self> {
        let x = self.value;
        let v = Real::ln(x)?;
        Ok(self.chain(v, 1.0 / x, -1.0 / (x * x)))
    }
    fn sqrt(self) -> Result<Self> {
        let x = self.value;
        if x <= 0.0 {
            return Err(Error::Domain { primitive: "sqrt", arg: x });
        }
        let r = libm::sqrt(x);
        Ok(self.chain(r, 0.5 / r, -0.25 / (r * x)))
    }
    fn powf(self, a: f64) -> Result<Self> {
        let x = self.value;
        if a == 0.0 {
            return Ok(self.chain(1.0, 0.0, 0.0));
        }
        if x == 0.0 {
            // derivatives of x^a at 0 are finite only for these exponents
            if a == 1.0 {
                return Ok(self.chain(0.0, 1.0, 0.0));
            }
            if a == 2.0 {
                return Ok(self.chain(0.0, 0.0, 2.0));
            }
            if is_integral(a) && a > 2.0 {
                return Ok(self.chain(0.0, 0.0, 0.0));
            }
            return Err(Error::Domain { primitive: "powf", arg: x });
        }
        let v2 = checked_pow(x, a - 2.0)?;
        let v1 = v2 * x;
        let v0 = v1 * x;
        Ok(self.chain(v0, a * v1, a * (a - 1.0) * v2))
    }
    fn recip(self) -> Result<Self> {
        let x = self.value;
        if x == 0.0 {
            return Err(Error::Singularity { what: "1/x", at: x });
        }
        let inv = 1.0 / x;
        Ok(self.chain(inv, -inv * inv, 2.0 * inv * inv * inv))
    }
    fn coth(self) -> Result<Self> {
        let c = self.value.coth()?;
        let dc = 1.0 - c * c;
        Ok(self.chain(c, dc, -2.0 * c * dc))
    }
    fn csch(self) -> Result<Self> {
        let q = self.value.csch()?;
        let c = self.value.coth()?;
        Ok(self.chain(q, -q * c, q * (2.0 * c * c - 1.0)))
    }
}

/// Evaluate `f` and its first two derivatives at `x`.
pub fn eval_jet2<F>(f: F, x: f64) -> Result<Jet2>
where
    F: Fn(Jet2) -> Result<Jet2>,
{
    let j = f(Jet2::variable(x))?;
    if j.is_finite() {
        Ok(j)
    } else {
        Err(Error::NonFinite { at: x })
    }
}

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// Central-difference estimates of `(f'(x), f''(x))` with step `h`.
pub fn fd_derivatives<F>(f: F, x: f64, h: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    if !(h > 0.0) {
        return Err(Error::InvalidParameter { name: "h", reason: "step must be positive" });
    }
    let (fm, f0, fp) = (f(x - h), f(x), f(x + h));
    for (v, at) in [(fm, x - h), (f0, x), (fp, x + h)] {
        if !v.is_finite() {
            return Err(Error::NonFinite { at });
        }
    }
    Ok(((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)))
}

/// One Richardson step on top of [`fd_derivatives`]: combines `h` and `h/2`
/// to cancel the leading `O(h^2)` truncation term.
pub fn fd_derivatives_richardson<F>(f: F, x: f64, h: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let (a1, a2) = fd_derivatives(&f, x, h)?;
    let (b1, b2) = fd_derivatives(&f, x, 0.5 * h)?;
    Ok((b1 + (b1 - a1) / 3.0, b2 + (b2 - a2) / 3.0))
}
