//! Complex evaluation of the Jacobi theta function, Dedekind eta, the Mordell
//! integral and level-`l` Appell sums, plus residual checks for their
//! transformation laws.
//!
//! Conventions:
//!
//! * `theta(z; tau) = sum_{n in 1/2 + Z} exp(pi i n^2 tau + 2 pi i n (z + 1/2))`
//! * `eta(tau) = q^{1/24} prod_{k>=1} (1 - q^k)` with `q = exp(2 pi i tau)`
//! * `h(z; tau) = int_R exp(pi i tau x^2 - 2 pi z x) / cosh(pi x) dx`
//! * `A_l(u, v; tau) = e^{pi i l u} sum_n (-1)^{l n} e^{2 pi i n v} q^{l n(n+1)/2} / (1 - e^{2 pi i u} q^n)`
//! * `mu(u, v; tau) = A_1(u, v; tau) / theta(v; tau)`
//!
//! Square roots such as `sqrt(-i tau)` are principal branches.

use core::f64::consts::PI;

use num_complex::Complex64;
// f64 math without std; shadowed by the inherent methods in test builds
#[allow(unused_imports)]
use num_traits::Float;

/// `ln(1e-17)`, the relative size below which series tails are dropped.
const LOG_TAIL: f64 = -39.2;
/// Denominators of Appell sums smaller than this are treated as poles.
pub const POLE_TOLERANCE: f64 = 1e-13;
/// Theta values below this fraction of their term magnitude count as zeros.
pub const ZERO_TOLERANCE: f64 = 1e-12;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("tau = {tau} is not in the upper half-plane")]
    NotInUpperHalfPlane { tau: Complex64 },
    #[error("integral diverges: |Re z| = {re_z} >= 1/2 with real tau")]
    DivergentIntegral { re_z: f64 },
    #[error("Appell sum denominator vanishes at n = {n}")]
    Pole { n: i64 },
    #[error("theta value vanishes in a denominator")]
    ThetaZero,
    #[error("parameter out of range: {what}")]
    OutOfRange { what: &'static str },
    #[error("quadrature did not converge")]
    QuadratureFailed,
    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },
}

/// A numeric value together with a bound on what truncation discarded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    /// Estimate of the discarded tail (rigorous for theta and eta, heuristic
    /// for the quadrature and the Appell sums).
    pub truncation_bound: f64,
}

impl EvalResult {
    fn new(value: Complex64, truncation_bound: f64) -> Self {
        Self {
            value,
            truncation_bound,
        }
    }
}

/// `tau` in the upper half-plane together with an elliptic variable `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    tau: Complex64,
    z: Complex64,
}

impl HalfPlanePoint {
    pub fn new(tau: Complex64, z: Complex64) -> Result<Self, KernelError> {
        if !(tau.im > 0.0) {
            return Err(KernelError::NotInUpperHalfPlane { tau });
        }
        Ok(Self { tau, z })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    /// `exp(2 pi i tau)`.
    pub fn q(&self) -> Complex64 {
        (2.0 * PI * I * self.tau).exp()
    }

    /// `exp(-2 pi i / tau)`.
    pub fn q0(&self) -> Complex64 {
        (-2.0 * PI * I / self.tau).exp()
    }

    /// `exp(2 pi i z)`.
    pub fn w(&self) -> Complex64 {
        (2.0 * PI * I * self.z).exp()
    }
}

/// `q^power = exp(2 pi i tau power)` for real `power`.
pub fn q_pow(tau: Complex64, power: f64) -> Complex64 {
    (2.0 * PI * I * tau * power).exp()
}

/// `q0^power = exp(-2 pi i power / tau)`.
pub fn q0_pow(tau: Complex64, power: f64) -> Complex64 {
    (-2.0 * PI * I * power / tau).exp()
}

/// Principal `sqrt(-i tau)`.
pub fn sqrt_minus_i_tau(tau: Complex64) -> Complex64 {
    (-I * tau).sqrt()
}

fn require_upper(tau: Complex64) -> Result<(), KernelError> {
    if tau.im > 0.0 && tau.im.is_finite() && tau.re.is_finite() {
        Ok(())
    } else {
        Err(KernelError::NotInUpperHalfPlane { tau })
    }
}

/// Theta value plus the sum of the absolute values of its terms, used to
/// decide whether a computed value is a genuine zero.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ThetaEval {
    pub value: Complex64,
    pub bound: f64,
    pub magnitude: f64,
}

impl ThetaEval {
    pub(crate) fn is_zero(&self) -> bool {
        self.value.norm() <= ZERO_TOLERANCE * self.magnitude
    }

    pub(crate) fn nonzero(self) -> Result<Complex64, KernelError> {
        if self.is_zero() {
            Err(KernelError::ThetaZero)
        } else {
            Ok(self.value)
        }
    }
}

/// Below this `Im(tau)` (and inside the unit disc) theta is summed at
/// `-1/tau` instead, where the series has no cancellation.
const INVERSION_THRESHOLD: f64 = 0.2;

pub(crate) fn theta_eval(
    z: Complex64,
    tau: Complex64,
    cutoff_scale: f64,
) -> Result<ThetaEval, KernelError> {
    require_upper(tau)?;
    if tau.im < INVERSION_THRESHOLD && tau.norm_sqr() < 1.0 {
        // theta(z; tau) = i exp(-pi i z^2 / tau) theta(z / tau; -1/tau) / sqrt(-i tau)
        let inner = theta_direct(z / tau, -1.0 / tau, cutoff_scale);
        let factor = I * (-PI * I * z * z / tau).exp() / sqrt_minus_i_tau(tau);
        let scale = factor.norm();
        return Ok(ThetaEval {
            value: factor * inner.value,
            bound: scale * inner.bound,
            magnitude: scale * inner.magnitude,
        });
    }
    Ok(theta_direct(z, tau, cutoff_scale))
}

fn theta_direct(z: Complex64, tau: Complex64, cutoff_scale: f64) -> ThetaEval {
    // log|term(n)| = -a n^2 - b n
    let a = PI * tau.im;
    let b = 2.0 * PI * z.im;
    let center = -b / (2.0 * a);
    let radius = cutoff_scale * ((-LOG_TAIL) / a).sqrt() + 1.0;
    let j_lo = (center - radius - 0.5).floor() as i64;
    let j_hi = (center + radius - 0.5).ceil() as i64;
    let shift = z + 0.5;
    let mut value = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    for j in j_lo..=j_hi {
        let n = j as f64 + 0.5;
        let term = (PI * I * (n * n * tau + 2.0 * n * shift)).exp();
        magnitude += term.norm();
        value += term;
    }
    // Gaussian tail beyond the window on both sides
    let peak = b * b / (4.0 * a);
    let edge = radius - 1.0;
    let bound = 2.0 * (peak - a * edge * edge).exp() / (1.0 - (-a * edge).exp()).max(1e-300);
    ThetaEval {
        value,
        bound,
        magnitude,
    }
}

/// Jacobi theta function. Small `tau` near the origin is handled through the
/// inversion formula.
pub fn theta(z: Complex64, tau: Complex64) -> Result<EvalResult, KernelError> {
    let t = theta_eval(z, tau, 1.0)?;
    Ok(EvalResult::new(t.value, t.bound))
}

/// Theta evaluated with the summation window widened by `scale`, for
/// truncation self-consistency checks.
pub fn theta_with_window(
    z: Complex64,
    tau: Complex64,
    scale: f64,
) -> Result<EvalResult, KernelError> {
    let t = theta_eval(z, tau, scale.max(1.0))?;
    Ok(EvalResult::new(t.value, t.bound))
}

/// Dedekind eta function.
pub fn eta(tau: Complex64) -> Result<EvalResult, KernelError> {
    require_upper(tau)?;
    let q = q_pow(tau, 1.0);
    let r = q.norm();
    let mut product = Complex64::new(1.0, 0.0);
    let mut qk = q;
    let mut k = 1usize;
    while qk.norm() >= 1e-18 {
        product *= Complex64::new(1.0, 0.0) - qk;
        qk *= q;
        k += 1;
        if k > 10_000_000 {
            return Err(KernelError::NoConvergence { terms: k });
        }
    }
    let prefactor = q_pow(tau, 1.0 / 24.0);
    // |prod_{j>=k}(1 - q^j) - 1| <= 2 |q|^k / (1 - |q|) once that is small
    let bound = product.norm() * prefactor.norm() * 2.0 * qk.norm() / (1.0 - r);
    Ok(EvalResult::new(prefactor * product, bound))
}

/// Mordell integral `h(z; tau)` by the trapezoidal rule on a truncated
/// interval. The step is halved until two successive refinements agree to
/// `1e-13` relatively.
pub fn mordell(z: Complex64, tau: Complex64) -> Result<EvalResult, KernelError> {
    if tau.im < 0.0 || !tau.im.is_finite() {
        return Err(KernelError::NotInUpperHalfPlane { tau });
    }
    if tau.im == 0.0 && z.re.abs() >= 0.5 {
        return Err(KernelError::DivergentIntegral { re_z: z.re.abs() });
    }
    let a = PI * tau.im;
    // log of the envelope 2 exp(-a x^2 - 2 pi Re(z) x - pi |x|) on each side
    let envelope = |x: f64| -> f64 { 2f64.ln() - a * x * x - 2.0 * PI * z.re * x - PI * x.abs() };
    let peak = {
        let right = -(2.0 * PI * z.re + PI) / (2.0 * a);
        let left = (-2.0 * PI * z.re + PI) / (2.0 * a);
        let mut m = envelope(0.0);
        if a > 0.0 {
            if right > 0.0 {
                m = m.max(envelope(right));
            }
            if left < 0.0 {
                m = m.max(envelope(left));
            }
        }
        m
    };
    let mut half_width = 1.0;
    while envelope(half_width).max(envelope(-half_width)) > peak + LOG_TAIL - 2.0 {
        half_width += 0.5;
        if half_width > 1e6 {
            return Err(KernelError::QuadratureFailed);
        }
    }
    let tail = envelope(half_width).max(envelope(-half_width)).exp();

    let integrand =
        |x: f64| -> Complex64 { (PI * I * tau * x * x - 2.0 * PI * z * x).exp() / (PI * x).cosh() };

    let mut n_half = (half_width / 0.25).ceil() as usize;
    let mut step = half_width / n_half as f64;
    let mut sum: Complex64 = (-(n_half as i64)..=n_half as i64)
        .map(|k| integrand(k as f64 * step))
        .sum();
    let mut estimate = sum * step;
    for _ in 0..24 {
        // midpoints of the current grid
        let mids: Complex64 = (0..2 * n_half)
            .map(|k| integrand(-half_width + (k as f64 + 0.5) * step))
            .sum();
        sum += mids;
        n_half *= 2;
        step /= 2.0;
        let refined = sum * step;
        let diff = (refined - estimate).norm();
        estimate = refined;
        if diff <= 1e-13 * refined.norm() || diff <= 1e-300 {
            return Ok(EvalResult::new(refined, diff + tail * half_width));
        }
    }
    Err(KernelError::QuadratureFailed)
}

/// Level-`ell` Appell sum.
pub fn appell(
    ell: u32,
    u: Complex64,
    v: Complex64,
    tau: Complex64,
) -> Result<EvalResult, KernelError> {
    require_upper(tau)?;
    if ell == 0 {
        return Err(KernelError::OutOfRange {
            what: "Appell level must be positive",
        });
    }
    let l = ell as f64;
    let sign_step = if ell % 2 == 1 { -1.0 } else { 1.0 };
    let term = |n: i64| -> Result<Complex64, KernelError> {
        let nf = n as f64;
        let numerator_exp = 2.0 * PI * I * (nf * v + tau * (l * nf * (nf + 1.0) / 2.0));
        let sign = if n.rem_euclid(2) == 1 { sign_step } else { 1.0 };
        // x q^n = exp(e)
        let e = 2.0 * PI * I * (u + nf * tau);
        if e.re <= 0.0 {
            let denom = Complex64::new(1.0, 0.0) - e.exp();
            if denom.norm() < POLE_TOLERANCE {
                return Err(KernelError::Pole { n });
            }
            Ok(sign * numerator_exp.exp() / denom)
        } else {
            // 1/(1 - X) = -X^{-1} / (1 - X^{-1})
            let denom = Complex64::new(1.0, 0.0) - (-e).exp();
            if denom.norm() < POLE_TOLERANCE {
                return Err(KernelError::Pole { n });
            }
            Ok(-sign * (numerator_exp - e).exp() / denom)
        }
    };

    // beyond this |n| the Gaussian exponent is strictly decreasing
    let linear =
        PI * tau.im * l + 2.0 * PI * v.im.abs() + 2.0 * PI * tau.im + 2.0 * PI * u.im.abs();
    let n_min = (linear / (PI * tau.im * l)).ceil() as i64 + 1;
    let mut total = Complex64::new(0.0, 0.0);
    let mut largest = 0.0f64;
    let mut last = 0.0f64;
    for direction in [1i64, -1] {
        let mut n = if direction == 1 { 0 } else { -1 };
        loop {
            let t = term(n)?;
            total += t;
            largest = largest.max(t.norm());
            if n.abs() >= n_min && t.norm() <= 1e-18 * largest.max(total.norm()) {
                last = last.max(t.norm());
                break;
            }
            n += direction;
            if n.abs() > 100_000 {
                return Err(KernelError::NoConvergence { terms: 100_000 });
            }
        }
    }
    let prefactor = (PI * I * l * u).exp();
    Ok(EvalResult::new(
        prefactor * total,
        2.0 * last * prefactor.norm(),
    ))
}

/// `mu(u, v; tau) = A_1(u, v; tau) / theta(v; tau)`.
pub fn mu(u: Complex64, v: Complex64, tau: Complex64) -> Result<EvalResult, KernelError> {
    let a = appell(1, u, v, tau)?;
    let th = theta_eval(v, tau, 1.0)?;
    let denom = th.nonzero()?;
    let value = a.value / denom;
    let bound = a.truncation_bound / denom.norm() + value.norm() * th.bound / denom.norm();
    Ok(EvalResult::new(value, bound))
}

/// Leading behaviour as `tau -> 0` of `theta(alpha tau; tau)` (when `k` is
/// `None`) or of `theta(1/k + alpha tau; tau)` (when `k > 1`).
pub fn theta_decay_mainterm(
    alpha: f64,
    k: Option<f64>,
    tau: Complex64,
) -> Result<Complex64, KernelError> {
    require_upper(tau)?;
    if !(0.0..1.0).contains(&alpha) {
        return Err(KernelError::OutOfRange {
            what: "alpha must lie in [0, 1)",
        });
    }
    let root = sqrt_minus_i_tau(tau);
    let q_part = q_pow(tau, -alpha * alpha / 2.0);
    match k {
        None => {
            let s = (PI * alpha).sin();
            Ok(-2.0 * I * s * q_part * q0_pow(tau, 0.125) / root)
        }
        Some(k) => {
            if !(k > 1.0) {
                return Err(KernelError::OutOfRange {
                    what: "k must exceed 1",
                });
            }
            let phase = (PI * I * alpha * (1.0 - 2.0 / k)).exp();
            let exponent = 1.0 / (2.0 * k * k) - 1.0 / (2.0 * k) + 0.125;
            Ok(-q_part * phase * q0_pow(tau, exponent) / root)
        }
    }
}

/// Leading behaviour of `eta(tau)` as `tau -> 0`: `q0^{1/24} / sqrt(-i tau)`.
pub fn eta_decay_mainterm(tau: Complex64) -> Result<Complex64, KernelError> {
    require_upper(tau)?;
    Ok(q0_pow(tau, 1.0 / 24.0) / sqrt_minus_i_tau(tau))
}

/// Relative residual `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_residual(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

/// The transformation laws the kernel is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TransformLaw {
    /// `theta(z + 1) = -theta(z)`
    ThetaShiftOne,
    /// `theta(z + tau) = -exp(-pi i tau - 2 pi i z) theta(z)`
    ThetaShiftTau,
    /// `theta(z; tau + 1) = exp(pi i / 4) theta(z; tau)`
    ThetaTauPlusOne,
    /// `theta(z/tau; -1/tau) = -i sqrt(-i tau) exp(pi i z^2 / tau) theta(z; tau)`
    ThetaInversion,
    /// `eta(tau) = eta(-1/tau) / sqrt(-i tau)`
    EtaInversion,
    /// `eta(tau + 1) = exp(pi i / 12) eta(tau)`
    EtaTauPlusOne,
    /// `-(1/tau) e^{pi i (u^2 - 2uv)/tau} A_1(u/tau, v/tau; -1/tau) + A_1(u, v; tau)
    ///  = h(u - v; tau) theta(v; tau) / (2i)`
    AppellInversion,
    /// `h(z/tau; -1/tau) = sqrt(-i tau) exp(-pi i z^2 / tau) h(z; tau)`
    MordellInversion,
}

impl TransformLaw {
    pub const ALL: [TransformLaw; 8] = [
        TransformLaw::ThetaShiftOne,
        TransformLaw::ThetaShiftTau,
        TransformLaw::ThetaTauPlusOne,
        TransformLaw::ThetaInversion,
        TransformLaw::EtaInversion,
        TransformLaw::EtaTauPlusOne,
        TransformLaw::AppellInversion,
        TransformLaw::MordellInversion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformLaw::ThetaShiftOne => "theta-shift-1",
            TransformLaw::ThetaShiftTau => "theta-shift-tau",
            TransformLaw::ThetaTauPlusOne => "theta-tau-plus-1",
            TransformLaw::ThetaInversion => "theta-inversion",
            TransformLaw::EtaInversion => "eta-inversion",
            TransformLaw::EtaTauPlusOne => "eta-tau-plus-1",
            TransformLaw::AppellInversion => "appell-inversion",
            TransformLaw::MordellInversion => "mordell-inversion",
        }
    }

    /// Whether the law reads the Appell arguments of a [`LawPoint`].
    pub fn uses_appell_arguments(self) -> bool {
        self == TransformLaw::AppellInversion
    }

    /// Relative residual between the two sides of the law at `point`.
    pub fn residual(self, point: &LawPoint) -> Result<f64, KernelError> {
        let LawPoint { z, tau, u, v } = *point;
        let one = Complex64::new(1.0, 0.0);
        let (lhs, rhs) = match self {
            TransformLaw::ThetaShiftOne => (theta(z + one, tau)?.value, -theta(z, tau)?.value),
            TransformLaw::ThetaShiftTau => (
                theta(z + tau, tau)?.value,
                -(-PI * I * tau - 2.0 * PI * I * z).exp() * theta(z, tau)?.value,
            ),
            TransformLaw::ThetaTauPlusOne => (
                theta(z, tau + one)?.value,
                (PI * I / 4.0).exp() * theta(z, tau)?.value,
            ),
            TransformLaw::ThetaInversion => (
                theta(z / tau, -one / tau)?.value,
                -I * sqrt_minus_i_tau(tau) * (PI * I * z * z / tau).exp() * theta(z, tau)?.value,
            ),
            TransformLaw::EtaInversion => (
                eta(tau)?.value,
                eta(-one / tau)?.value / sqrt_minus_i_tau(tau),
            ),
            TransformLaw::EtaTauPlusOne => (
                eta(tau + one)?.value,
                (PI * I / 12.0).exp() * eta(tau)?.value,
            ),
            TransformLaw::AppellInversion => {
                let transformed = appell(1, u / tau, v / tau, -one / tau)?.value;
                let lhs = -(one / tau) * (PI * I * (u * u - 2.0 * u * v) / tau).exp() * transformed
                    + appell(1, u, v, tau)?.value;
                let rhs = mordell(u - v, tau)?.value * theta(v, tau)?.value / (2.0 * I);
                (lhs, rhs)
            }
            TransformLaw::MordellInversion => (
                mordell(z / tau, -one / tau)?.value,
                sqrt_minus_i_tau(tau) * (-PI * I * z * z / tau).exp() * mordell(z, tau)?.value,
            ),
        };
        Ok(relative_residual(lhs, rhs))
    }
}

/// Arguments for a transformation-law check. Theta and Mordell laws read
/// `z`, the Appell law reads `u` and `v`, the eta laws only `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawPoint {
    pub z: Complex64,
    pub tau: Complex64,
    pub u: Complex64,
    pub v: Complex64,
}
