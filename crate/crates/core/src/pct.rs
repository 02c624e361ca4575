//! Point canonical transformation between the algebra variable `g` and the
//! radial variable `rho`, through `rho = K(g) = 1/(e^g - 1)`.
//!
//! With the first-derivative coefficient of the transformed equation set to
//! zero the prefactor is `f = |g'|^{-1/2} rho^{-tau/2}`, so a ground state
//! `chi_0` of `V_k` turns into the zero-energy radial solution
//! `psi = f chi_0(g(rho))`.

use crate::closed_forms::QesParams;
use crate::diffkit::{eval_jet2, Jet2, Real};
use crate::error::{Error, Result};
use crate::so21::{bound_energy, ground_state_chi0, potential_vm_algebraic};

fn require_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { primitive: "rho", arg: rho })
    }
}

/// `K(g) = 1/(e^g - 1)`, defined for `g > 0`.
pub fn k_of_g<T: Real>(g: T) -> Result<T> {
    if !(g.value() > 0.0) {
        return Err(Error::Domain { primitive: "K", arg: g.value() });
    }
    (g.exp() - 1.0).recip()
}

/// Inverse mapping `g = ln((rho + 1)/rho) > 0`.
pub fn g_of_rho<T: Real>(rho: T) -> Result<T> {
    require_rho(rho.value())?;
    (rho.recip()? + 1.0).ln()
}

/// `g'(rho) = -1/(rho (rho + 1))`, the closed form the Schwarzian is built on.
pub fn g_prime<T: Real>(rho: T) -> Result<T> {
    require_rho(rho.value())?;
    Ok(-(rho * (rho + 1.0)).recip()?)
}

/// `dK/dg` written in `rho`: `-rho (rho + 1)`.
pub fn k_prime_at_rho(rho: f64) -> f64 {
    -rho * (rho + 1.0)
}

/// Schwarzian `g'''/g' - (3/2)(g''/g')^2` of any map given its first
/// derivative. The jet of `g'` supplies `g''` and `g'''`.
pub fn schwarzian_of<F>(g_prime: F, x: f64) -> Result<f64>
where
    F: Fn(Jet2) -> Result<Jet2>,
{
    let j = eval_jet2(g_prime, x)?;
    if j.value == 0.0 {
        return Err(Error::Singularity { what: "schwarzian (g' = 0)", at: x });
    }
    let r = j.d1 / j.value;
    Ok(j.d2 / j.value - 1.5 * r * r)
}

/// Schwarzian derivative of `g_of_rho` at `rho`.
pub fn schwarzian(rho: f64) -> Result<f64> {
    require_rho(rho)?;
    schwarzian_of(g_prime, rho)
}

/// `|g'(rho)|^{-1/2} rho^{-tau/2} = (rho (rho + 1))^{1/2} rho^{-tau/2}`.
pub fn f_prefactor<T: Real>(rho: T, tau: f64) -> Result<T> {
    require_rho(rho.value())?;
    Ok((rho * (rho + 1.0)).sqrt()? * rho.powf(-0.5 * tau)?)
}

/// Potential rebuilt from the algebra side at zero energy:
///
/// `2 K'^2 V = V_m(g) - E + (1/2) S_K - (tau/2)(tau/2 - 1) K'^2 / K^2`
///
/// with `K' = dK/dg` and `S_K` the Schwarzian of `K` with respect to `g`,
/// which equals `-K'^2` times the Schwarzian of `g` with respect to `rho`.
pub fn algebra_side_potential(p: &QesParams, rho: f64) -> Result<f64> {
    require_rho(rho)?;
    let e = bound_energy(p.k)?;
    let g: f64 = g_of_rho(rho)?;
    let vm: f64 = potential_vm_algebraic(p.class.algebra(), p.b, p.m, g)?;
    let kp = k_prime_at_rho(rho);
    let kp2 = kp * kp;
    let s_k = -kp2 * schwarzian(rho)?;
    let half_tau = 0.5 * p.tau;
    let centrifugal = half_tau * (half_tau - 1.0) * kp2 / (rho * rho);
    Ok((vm - e + 0.5 * s_k - centrifugal) / (2.0 * kp2))
}

/// `psi = f(rho) chi_0(g(rho))`, jet-capable in `rho`.
pub fn generic_wavefunction<T: Real>(p: &QesParams, rho: T) -> Result<T> {
    p.require_wavefunction()?;
    let g = g_of_rho(rho)?;
    let chi = ground_state_chi0(p.class.algebra(), p.b, p.k, g)?;
    Ok(f_prefactor(rho, p.tau)? * chi)
}
