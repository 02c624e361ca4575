use core::fmt;

/// Errors raised anywhere in the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A primitive was evaluated outside its real domain (`ln` of a
    /// non-positive number, a real power of a negative base, ...).
    Domain { primitive: &'static str, arg: f64 },
    /// A class function was asked for its value at a pole.
    Singularity { what: &'static str, at: f64 },
    /// A function evaluation returned NaN or an infinity.
    NonFinite { at: f64 },
    /// `k <= 1/2` is not a bound-state representation label.
    Representation { k: f64 },
    /// Wavefunctions only exist on the `m = k` member of the family.
    WavefunctionNeedsMEqualsK { m: f64, k: f64 },
    /// Class II_MINUS has no closed-form QES potential/wavefunction pair.
    UnsupportedClass,
    /// A parameter failed a precondition. `name` identifies it.
    InvalidParameter { name: &'static str, reason: &'static str },
    /// The adaptive integrator could not meet its tolerance.
    DivergenceSuspected { partial: f64, abs_error: f64, subdivisions: usize },
    /// The limit-comparison classifier and the integrator disagree.
    Inconsistent { alpha: f64, partial: f64 },
    /// Neither C convention reproduces the radial equation.
    CalibrationFailure { casimir: f64, chain: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { primitive, arg } => {
                write!(f, "domain error: {primitive} is undefined at {arg}")
            }
            Error::Singularity { what, at } => write!(f, "{what} is singular at {at}"),
            Error::NonFinite { at } => write!(f, "non-finite function value at {at}"),
            Error::Representation { k } => {
                write!(f, "k = {k} is not a bound-state label (need k > 1/2)")
            }
            Error::WavefunctionNeedsMEqualsK { m, k } => write!(
                f,
                "wavefunctions are defined only for m = k (got m = {m}, k = {k})"
            ),
            Error::UnsupportedClass => {
                write!(f, "class II_MINUS has no QES potential; use II (the F = +1 branch)")
            }
            Error::InvalidParameter { name, reason } => write!(f, "invalid {name}: {reason}"),
            Error::DivergenceSuspected {
                partial,
                abs_error,
                subdivisions,
            } => write!(
                f,
                "integral did not converge after {subdivisions} subdivisions \
                 (partial value {partial}, error estimate {abs_error}); divergence suspected"
            ),
            Error::Inconsistent { alpha, partial } => write!(
                f,
                "classifier predicts convergence (alpha = {alpha}) but the integrator failed \
                 (partial value {partial})"
            ),
            Error::CalibrationFailure { casimir, chain } => write!(
                f,
                "no C convention satisfies the radial equation \
                 (k(k-1): {casimir:e}, k(k-1)/2: {chain:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
