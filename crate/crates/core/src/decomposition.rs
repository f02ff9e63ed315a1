//! The three pieces `T1`, `T`, `T2` of the mixed mock modular decomposition
//! of `(1 + w^{-1}) q V(w; q)` and a numeric check of the identity.
//!
//! Half-integer powers of `w = e^{2 pi i z}` are `w^{±1/2} = e^{±pi i z}`.
//!
//! With the pieces as defined below, the identity that holds numerically is
//!
//! `(1 + w^{-1}) q V(w; q) = T1 + T - w T2`.
//!
//! The variant with `-T1` is reported alongside as
//! [`DecompositionSample::printed_sign_residual`].

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::gf::{evaluate_v, GfError};
use crate::modular::{eta, mu, q_pow, theta, theta_eval, KernelError};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Largest `tail / |lhs|` accepted for the series side.
pub const TAIL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecompositionError {
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Series(#[from] GfError),
    #[error("series tail bound {bound:e} exceeds {TAIL_TOLERANCE:e} of |lhs| = {value:e}; raise the order")]
    TailTooLarge { bound: f64, value: f64 },
}

fn w_half(z: Complex64, sign: f64) -> Complex64 {
    (sign * PI * I * z).exp()
}

/// `T1 = -i q^{1/8} w^{-1/2} mu(z + 1/2, 1/2; tau)`.
pub fn t1(z: Complex64, tau: Complex64) -> Result<Complex64, KernelError> {
    let half = Complex64::new(0.5, 0.0);
    let m = mu(z + half, half, tau)?.value;
    Ok(-I * q_pow(tau, 0.125) * w_half(z, -1.0) * m)
}

/// `T = -q^{-1/8} w^{-1/2} theta(1/2 + z; tau) / theta(tau; 2 tau) * mu(2z + 1/2, 1/2; 2 tau)`.
pub fn t_mid(z: Complex64, tau: Complex64) -> Result<Complex64, KernelError> {
    let half = Complex64::new(0.5, 0.0);
    let numerator = theta(half + z, tau)?.value;
    let denominator = theta_eval(tau, 2.0 * tau, 1.0)?.nonzero()?;
    let m = mu(2.0 * z + half, half, 2.0 * tau)?.value;
    Ok(-q_pow(tau, -0.125) * w_half(z, -1.0) * numerator / denominator * m)
}

/// `theta(4 tau; 12 tau)^3 / theta(2 tau; 6 tau)^3`.
fn t2_modular_factor(tau: Complex64) -> Result<Complex64, KernelError> {
    let num = theta(4.0 * tau, 12.0 * tau)?.value;
    let den = theta_eval(2.0 * tau, 6.0 * tau, 1.0)?.nonzero()?;
    Ok((num / den).powi(3))
}

/// `T2 = i q^{11/8} w^{-1/2} theta(4 tau; 12 tau)^3 / theta(2 tau; 6 tau)^3
///       * theta(z; tau) theta(2z + tau; 2 tau) / theta(4z; 4 tau)`.
///
/// Fails with [`KernelError::ThetaZero`] where `theta(4z; 4 tau)` vanishes,
/// e.g. at `z` in `Z/4`.
pub fn t2(z: Complex64, tau: Complex64) -> Result<Complex64, KernelError> {
    let denominator = theta_eval(4.0 * z, 4.0 * tau, 1.0)?.nonzero()?;
    let numerator = theta(z, tau)?.value * theta(2.0 * z + tau, 2.0 * tau)?.value;
    Ok(
        I * q_pow(tau, 11.0 / 8.0) * w_half(z, -1.0) * t2_modular_factor(tau)? * numerator
            / denominator,
    )
}

/// `lim_{z -> 0} T2`, using `theta'(0; tau) = -2 pi eta(tau)^3`:
/// `i q^{11/8} theta(4 tau; 12 tau)^3 / theta(2 tau; 6 tau)^3
///  * eta(tau)^3 theta(tau; 2 tau) / (4 eta(4 tau)^3)`.
pub fn t2_limit_w1(tau: Complex64) -> Result<Complex64, KernelError> {
    Ok(t2_limit_w1_as_printed(tau)? / 4.0)
}

/// The same expression without the factor `1/4` that the chain rule puts on
/// `d/dz theta(4z; 4 tau)`. Kept for comparison; it is four times the limit.
pub fn t2_limit_w1_as_printed(tau: Complex64) -> Result<Complex64, KernelError> {
    let ratio = (eta(tau)?.value / eta(4.0 * tau)?.value).powi(3);
    Ok(I * q_pow(tau, 11.0 / 8.0) * t2_modular_factor(tau)? * ratio * theta(tau, 2.0 * tau)?.value)
}

/// One evaluation of both sides of the decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionSample {
    pub z: Complex64,
    pub tau: Complex64,
    /// Series order used for the left side.
    pub order: usize,
    /// `(1 + w^{-1}) q V(w; q)` from the truncated series.
    pub lhs: Complex64,
    /// Heuristic bound on the discarded series tail of `lhs`.
    pub lhs_tail_bound: f64,
    pub t1: Complex64,
    pub t: Complex64,
    pub t2: Complex64,
    /// `|T1 + T - w T2 - lhs| / max(1, |lhs|)`.
    pub residual: f64,
    /// `|-T1 + T - w T2 - lhs| / max(1, |lhs|)`.
    pub printed_sign_residual: f64,
}

/// Evaluates both sides of the decomposition at `(z, tau)`, with the left
/// side taken from `V` truncated at `q^order`.
pub fn verify_decomposition(
    z: Complex64,
    tau: Complex64,
    order: usize,
) -> Result<DecompositionSample, DecompositionError> {
    if !(tau.im > 0.0) {
        return Err(KernelError::NotInUpperHalfPlane { tau }.into());
    }
    let w = (2.0 * PI * I * z).exp();
    let q = q_pow(tau, 1.0);
    let v = evaluate_v(w, q, order)?;
    let prefactor = (1.0 + 1.0 / w) * q;
    let lhs = prefactor * v.value;
    let lhs_tail_bound = prefactor.norm() * v.truncation_bound;
    if lhs_tail_bound > TAIL_TOLERANCE * lhs.norm() {
        return Err(DecompositionError::TailTooLarge {
            bound: lhs_tail_bound,
            value: lhs.norm(),
        });
    }
    let (a, b, c) = (t1(z, tau)?, t_mid(z, tau)?, t2(z, tau)?);
    let scale = lhs.norm().max(1.0);
    Ok(DecompositionSample {
        z,
        tau,
        order,
        lhs,
        lhs_tail_bound,
        t1: a,
        t: b,
        t2: c,
        residual: (a + b - w * c - lhs).norm() / scale,
        printed_sign_residual: (-a + b - w * c - lhs).norm() / scale,
    })
}
