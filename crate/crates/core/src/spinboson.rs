//! Effective decay rate of a spin-boson qubit under repeated measurement,
//! with an ohmic bath `J(w) ~ eta * w * exp(-w / omega_c)`.
//!
//! Units: hbar = 1. Times are in the same units as `1 / omega_c`.
//!
//! Three routes to the rate are provided:
//! * [`gamma_rate`]: time-domain quadrature of the bath kernel,
//! * [`gamma_closed`]: the exact antiderivative for `omega_c = 1`, `T = 0`,
//!   unbiased, `Delta^2 = 2`,
//! * [`gamma_overlap`]: overlap of the bath coupling spectrum with the
//!   measurement filter function.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{Error, Result};
use crate::qstate::ValidationMode;
use crate::quadrature::{integrate, QuadratureConfig};

const ETA_HALF_TOL: f64 = 1e-9;
const CROSSOVER_TOL: f64 = 1e-12;
const SPECTRUM_ENVELOPE_CUTOFF: f64 = 1e-8;
const SPECTRUM_TIME_CAP: f64 = 4000.0;

/// Physical parameters of the spin-boson qubit and its bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinBosonParams {
    /// Tunneling amplitude.
    pub delta: f64,
    /// Level bias, `>= 0`.
    pub bias: f64,
    /// Dimensionless ohmic coupling, `> 0`.
    pub eta: f64,
    /// Bath cutoff frequency, `> 0`.
    pub omega_c: f64,
    /// Inverse temperature, `f64::INFINITY` for zero temperature.
    pub beta: f64,
}

impl Default for SpinBosonParams {
    fn default() -> Self {
        Self::normalized(0.05, 0.0)
    }
}

impl SpinBosonParams {
    /// `Delta^2 = 2`, `omega_c = 1`, zero temperature.
    pub fn normalized(eta: f64, bias: f64) -> Self {
        Self {
            delta: std::f64::consts::SQRT_2,
            bias,
            eta,
            omega_c: 1.0,
            beta: f64::INFINITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return bad("delta must be finite and >= 0");
        }
        if !(self.bias >= 0.0 && self.bias.is_finite()) {
            return bad("bias must be finite and >= 0");
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return bad("eta must be finite and > 0");
        }
        if !(self.omega_c > 0.0 && self.omega_c.is_finite()) {
            return bad("omega_c must be finite and > 0");
        }
        if self.beta.is_nan() || self.beta <= 0.0 {
            return bad("beta must be > 0 (use infinity for zero temperature)");
        }
        Ok(())
    }

    fn rate_prefactor(&self) -> f64 {
        0.5 * self.delta * self.delta
    }
}

/// `ln(x / sinh x)` for `x >= 0`.
fn ln_x_over_sinh(x: f64) -> f64 {
    if x < 1e-3 {
        let x2 = x * x;
        // -ln(1 + x^2/6 + x^4/120)
        -(x2 / 6.0 + x2 * x2 / 120.0).ln_1p()
    } else {
        x.ln() - x - (-(-2.0 * x).exp_m1()).ln() + std::f64::consts::LN_2
    }
}

/// Thermal factor `(pi t / beta)^{2 eta} csch^{2 eta}(pi t / beta)`, equal to 1 at `T = 0` and at `t = 0`.
fn thermal_factor(t: f64, p: &SpinBosonParams) -> f64 {
    if p.beta.is_infinite() {
        return 1.0;
    }
    let x = PI * t / p.beta;
    (2.0 * p.eta * ln_x_over_sinh(x)).exp()
}

fn kernel_envelope(t: f64, p: &SpinBosonParams) -> f64 {
    let wt = p.omega_c * t;
    (1.0 + wt * wt).powf(-p.eta) * thermal_factor(t, p)
}

/// Bath kernel `cos[bias t + 2 eta atan(omega_c t)] (1 + (omega_c t)^2)^{-eta} (x / sinh x)^{2 eta}`
/// with `x = pi t / beta`. Equals 1 at `t = 0`.
pub fn kernel_time(t: f64, p: &SpinBosonParams) -> f64 {
    let phase = p.bias * t + 2.0 * p.eta * (p.omega_c * t).atan();
    phase.cos() * kernel_envelope(t, p)
}

/// `gamma(tau) = (Delta^2 / 2) * int_0^tau kernel_time(t) dt`.
pub fn gamma_rate(tau: f64, p: &SpinBosonParams) -> Result<f64> {
    gamma_rate_with(tau, p, &QuadratureConfig::default())
}

pub fn gamma_rate_with(tau: f64, p: &SpinBosonParams, cfg: &QuadratureConfig) -> Result<f64> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("tau must be finite and >= 0, got {tau}")));
    }
    if tau == 0.0 {
        return Ok(0.0);
    }
    let prefactor = p.rate_prefactor();
    // the quadrature tolerance applies to the rate, not the bare integral
    let cfg = QuadratureConfig {
        abs_tol: if prefactor > 0.0 { cfg.abs_tol / prefactor } else { cfg.abs_tol },
        ..*cfg
    };
    let est = integrate(|t| kernel_time(t, p), 0.0, tau, &cfg)?;
    Ok(prefactor * est.value)
}

/// Closed-form rate for `Delta^2 = 2`, `omega_c = 1`, `T = 0`, zero bias:
/// `(1 + tau^2)^{-eta} (sin[2 eta atan tau] - tau cos[2 eta atan tau]) / (2 eta - 1)`.
pub fn gamma_closed(tau: f64, eta: f64) -> Result<f64> {
    if (eta - 0.5).abs() <= ETA_HALF_TOL {
        return Err(Error::EtaSingular { eta });
    }
    let phase = 2.0 * eta * tau.atan();
    Ok((1.0 + tau * tau).powf(-eta) * (phase.sin() - tau * phase.cos()) / (2.0 * eta - 1.0))
}

/// The `eta -> 1/2` limit of [`gamma_closed`]: the kernel reduces to `1 / (1 + t^2)`.
pub fn gamma_closed_half(tau: f64) -> f64 {
    tau.atan()
}

/// [`gamma_closed`] with the `eta = 1/2` singularity replaced by its limit.
pub fn gamma_closed_or_limit(tau: f64, eta: f64) -> f64 {
    gamma_closed(tau, eta).unwrap_or_else(|_| gamma_closed_half(tau))
}

/// `d gamma / d tau` in normalized units: `(1 + tau^2)^{-eta} cos[bias tau + 2 eta atan tau]`.
pub fn gamma_derivative(tau: f64, eta: f64, bias: f64) -> f64 {
    (1.0 + tau * tau).powf(-eta) * (bias * tau + 2.0 * eta * tau.atan()).cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossoverKind {
    Unbiased,
    Biased,
    None,
}

/// Zeno to anti-Zeno crossover interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverResult {
    /// `tan(pi / (4 eta)) / omega_c`, unbiased case only.
    pub tau_analytic: Option<f64>,
    /// Bisection root of `bias tau + 2 eta atan(omega_c tau) = pi/2`.
    pub tau_numeric: Option<f64>,
    /// `(pi/2 - 2 eta atan(omega_c tau_T)) / bias`, biased case only.
    pub mu: Option<f64>,
    pub kind: CrossoverKind,
}

/// Smallest `tau > 0` at which the rate derivative changes sign.
pub fn crossover_time(p: &SpinBosonParams) -> CrossoverResult {
    let phase_gap = |tau: f64| p.bias * tau + 2.0 * p.eta * (p.omega_c * tau).atan() - FRAC_PI_2;
    let none = CrossoverResult {
        tau_analytic: None,
        tau_numeric: None,
        mu: None,
        kind: CrossoverKind::None,
    };

    let biased = p.bias > 0.0;
    // without bias the phase saturates at eta * pi
    if !biased && PI / (4.0 * p.eta) >= FRAC_PI_2 {
        return none;
    }

    let mut hi = 1.0 / p.omega_c;
    while phase_gap(hi) < 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return none;
        }
    }
    let mut lo = 0.0;
    while hi - lo > CROSSOVER_TOL * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if phase_gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau_t = 0.5 * (lo + hi);

    if biased {
        CrossoverResult {
            tau_analytic: None,
            tau_numeric: Some(tau_t),
            mu: Some((FRAC_PI_2 - 2.0 * p.eta * (p.omega_c * tau_t).atan()) / p.bias),
            kind: CrossoverKind::Biased,
        }
    } else {
        CrossoverResult {
            tau_analytic: Some((PI / (4.0 * p.eta)).tan() / p.omega_c),
            tau_numeric: Some(tau_t),
            mu: None,
            kind: CrossoverKind::Unbiased,
        }
    }
}

/// Measurement filter `F_tau(omega - bias) = (tau / 2 pi) sinc^2[(omega - bias) tau / 2]`.
pub fn filter_function(omega: f64, tau: f64, bias: f64) -> f64 {
    let x = 0.5 * (omega - bias) * tau;
    let sinc = if x.abs() < 1e-8 { 1.0 - x * x / 6.0 } else { x.sin() / x };
    tau / (2.0 * PI) * sinc * sinc
}

/// Value of the numerically transformed coupling spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumValue {
    pub value: f64,
    /// Time horizon actually integrated.
    pub horizon: f64,
    /// The kernel had not decayed below `1e-8` at the time cap; the
    /// transform was regularized with a cosine taper over the second half of
    /// the horizon and is diagnostic-grade.
    pub truncated: bool,
}

/// `K(omega) = 2 Re int_0^T e^{i omega t} kernel_time(t) dt`.
pub fn coupling_spectrum(omega: f64, p: &SpinBosonParams) -> Result<SpectrumValue> {
    let cap = SPECTRUM_TIME_CAP / p.omega_c;
    let mut horizon = 1.0 / p.omega_c;
    while horizon < cap && kernel_envelope(horizon, p) > SPECTRUM_ENVELOPE_CUTOFF {
        horizon *= 2.0;
    }
    let truncated = kernel_envelope(horizon.min(cap), p) > SPECTRUM_ENVELOPE_CUTOFF;
    let horizon = horizon.min(cap);

    let taper = |t: f64| {
        if !truncated || t <= 0.5 * horizon {
            1.0
        } else {
            0.5 * (1.0 + (PI * (2.0 * t / horizon - 1.0)).cos())
        }
    };
    let integrand = |t: f64| (omega * t).cos() * kernel_time(t, p) * taper(t);

    // panels no longer than half the fastest period or the kernel's own scale
    let fastest = omega.abs() + p.bias + p.omega_c;
    let max_len = (PI / fastest).min(0.5 / p.omega_c);
    let pieces = (horizon / max_len).ceil().max(1.0) as usize;
    let cfg = QuadratureConfig {
        abs_tol: 1e-10 / pieces as f64,
        rel_tol: 0.0,
        max_panels: 200,
    };
    let mut total = 0.0;
    for k in 0..pieces {
        let a = horizon * k as f64 / pieces as f64;
        let b = horizon * (k + 1) as f64 / pieces as f64;
        total += integrate(integrand, a, b, &cfg)?.value;
    }
    Ok(SpectrumValue {
        value: 2.0 * total,
        horizon,
        truncated,
    })
}

/// Exact zero-temperature coupling spectrum.
///
/// At `T = 0` the kernel is `Re[e^{i bias t} (1 - i omega_c t)^{-2 eta}]`, whose
/// cosine transform is `pi (rho(omega - bias) + rho(-omega - bias))` with
/// `rho(w) = (w/omega_c)^{2 eta - 1} e^{-w/omega_c} / (Gamma(2 eta) omega_c)` for `w > 0`.
/// It diverges at `omega = +-bias` when `eta < 1/2`.
pub fn coupling_spectrum_ground(omega: f64, p: &SpinBosonParams) -> Result<f64> {
    if p.beta.is_finite() {
        return Err(Error::InvalidParameter(
            "ground-state spectrum requires beta = infinity".into(),
        ));
    }
    let nu = 2.0 * p.eta;
    let rho = |w: f64| {
        if w >= 0.0 {
            let s = w / p.omega_c;
            s.powf(nu - 1.0) * (-s).exp() / (gamma_fn(nu) * p.omega_c)
        } else {
            0.0
        }
    };
    Ok(PI * (rho(omega - p.bias) + rho(-omega - p.bias)))
}

/// `gamma(tau) = 2 (Delta/2)^2 int_0^inf K(omega) F_tau(omega - bias) d omega`.
///
/// At zero temperature the exact spectrum is integrated after the change of
/// variables `omega - bias = omega_c z^{1/(2 eta)}`, which removes the
/// `|omega - bias|^{2 eta - 1}` singularity. At finite temperature the
/// numerically transformed spectrum is used.
pub fn gamma_overlap(tau: f64, p: &SpinBosonParams) -> Result<f64> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter(format!("tau must be finite and > 0, got {tau}")));
    }
    let prefactor = p.rate_prefactor();
    let cfg = QuadratureConfig {
        abs_tol: 1e-13,
        rel_tol: 1e-10,
        max_panels: 10_000,
    };
    let overlap = if p.beta.is_infinite() {
        let nu = 2.0 * p.eta;
        // e^{-s} below 1e-18 past s = 42
        let z_max = 42f64.powf(nu);
        let integrand = |z: f64| {
            let s = z.powf(1.0 / nu);
            (-s).exp() * filter_function(p.omega_c * s, tau, 0.0)
        };
        PI * integrate(integrand, 0.0, z_max, &cfg)?.value / gamma_fn(nu + 1.0)
    } else {
        let upper = p.bias + 42.0 * p.omega_c;
        let integrand = |w: f64| {
            coupling_spectrum(w, p).map(|k| k.value).unwrap_or(f64::NAN) * filter_function(w, tau, p.bias)
        };
        let cfg = QuadratureConfig {
            abs_tol: 1e-8,
            rel_tol: 1e-6,
            max_panels: 400,
        };
        let value = integrate(integrand, 0.0, upper, &cfg)?.value;
        if !value.is_finite() {
            return Err(Error::QuadratureFailure {
                tolerance: cfg.abs_tol,
                panels: 0,
                estimate: f64::NAN,
            });
        }
        value
    };
    Ok(prefactor * overlap)
}

/// Amplitudes of the undecayed branch (`u`) and the reservoir-excitation branch (`v`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalPair {
    pub u: f64,
    pub v: f64,
    pub mode: ValidationMode,
}

impl SurvivalPair {
    /// Trace-preserving pair with `u^2 + v^2 = 1`.
    pub fn ideal(u2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&u2) {
            return Err(Error::DomainError { value: u2 });
        }
        Ok(Self {
            u: u2.sqrt(),
            v: (1.0 - u2).sqrt(),
            mode: ValidationMode::Ideal,
        })
    }

    /// Pair from non-unitary evolution: probabilities are taken as given.
    pub fn lossy(u2: f64, v2: f64) -> Self {
        Self {
            u: u2.max(0.0).sqrt(),
            v: v2.max(0.0).sqrt(),
            mode: ValidationMode::Lossy,
        }
    }

    pub fn u2(&self) -> f64 {
        self.u * self.u
    }

    pub fn v2(&self) -> f64 {
        self.v * self.v
    }

    /// Exchange the qubit and reservoir branches.
    pub fn swapped(&self) -> Self {
        Self {
            u: self.v,
            v: self.u,
            mode: self.mode,
        }
    }
}

/// Survival after one measurement interval: `u^2 = exp(-gamma(tau) tau)`.
pub fn survival(tau: f64, p: &SpinBosonParams) -> Result<SurvivalPair> {
    survival_repeated(tau, p, 1)
}

/// Survival after `n` intervals of length `tau`: `u^2 = exp(-n gamma(tau) tau)`.
pub fn survival_repeated(tau: f64, p: &SpinBosonParams, n: u32) -> Result<SurvivalPair> {
    let gamma = gamma_rate(tau, p)?;
    if gamma < 0.0 {
        return Err(Error::NegativeRate { tau, gamma });
    }
    SurvivalPair::ideal((-(n as f64) * gamma * tau).exp())
}
