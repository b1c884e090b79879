//! Two-level system driven while its energy is continuously measured with
//! finite precision. The measurement enters through an effective
//! non-Hermitian Hamiltonian whose imaginary parts are the rates `lambda_i`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlations::{discord_x, CorrelationReport, Status};
use crate::dynamics::{partition_state, InitialState, Partition};
use crate::error::{Error, Result};
use crate::qstate::{Matrix2, Subsystem, C64};
use crate::spinboson::SurvivalPair;

/// Relative width of the exceptional-point band in [`regime`].
pub const EXCEPTIONAL_TOL: f64 = 1e-12;
/// Below this `|kappa t|` the propagator switches to its Taylor series.
const SERIES_CUTOFF: f64 = 1e-4;
/// Mode disagreement above this is flagged by [`compare_modes`].
pub const MODE_AGREEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionModel {
    pub e1: f64,
    pub e2: f64,
    /// Energy the detector is tuned to.
    pub e_target: f64,
    /// Measurement precision.
    pub e_r: f64,
    pub v0: f64,
    pub omega: f64,
    /// Measurement duration.
    pub tau_meas: f64,
}

impl PrecisionModel {
    /// `hbar = V0 = Delta E = 1`, `tau = 2 pi`, resonant drive, detector on `E1`.
    pub fn unit_system(r: f64) -> Result<Self> {
        let m = Self {
            e1: 0.0,
            e2: 1.0,
            e_target: 0.0,
            e_r: r,
            v0: 1.0,
            omega: 1.0,
            tau_meas: 2.0 * PI,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [self.e1, self.e2, self.e_target, self.e_r, self.v0, self.omega, self.tau_meas];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("precision model fields must be finite".into()));
        }
        if self.e2 <= self.e1 {
            return Err(Error::InvalidParameter(format!("need e2 > e1, got e1={} e2={}", self.e1, self.e2)));
        }
        if self.e_r <= 0.0 {
            return Err(Error::InvalidParameter(format!("precision must be positive, got {}", self.e_r)));
        }
        if self.tau_meas <= 0.0 {
            return Err(Error::InvalidParameter(format!("duration must be positive, got {}", self.tau_meas)));
        }
        if self.v0 < 0.0 {
            return Err(Error::InvalidParameter(format!("drive amplitude must be nonnegative, got {}", self.v0)));
        }
        Ok(())
    }

    pub fn delta_e(&self) -> f64 {
        self.e2 - self.e1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayParams {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda_t: f64,
    /// `lambda2 - lambda1`
    pub omega_shift: f64,
}

/// `lambda_x = (E_x - E)^2 / (2 tau E_r^2)`; `lambda_t` uses `E2 - E1`.
pub fn decay_params(m: &PrecisionModel) -> DecayParams {
    let scale = 2.0 * m.tau_meas * m.e_r * m.e_r;
    let lambda1 = (m.e1 - m.e_target).powi(2) / scale;
    let lambda2 = (m.e2 - m.e_target).powi(2) / scale;
    DecayParams {
        lambda1,
        lambda2,
        lambda_t: m.delta_e().powi(2) / scale,
        omega_shift: lambda2 - lambda1,
    }
}

/// `(cos kt, sin(kt)/k)` as functions of `k^2`, so the result has no branch cut.
fn cos_sinc(kappa2: C64, t: f64) -> (C64, C64) {
    let kt2 = kappa2 * t * t;
    if kt2.norm() < SERIES_CUTOFF * SERIES_CUTOFF {
        let cos = C64::new(1.0, 0.0) - kt2 / 2.0 + kt2 * kt2 / 24.0;
        let sinc = (C64::new(1.0, 0.0) - kt2 / 6.0 + kt2 * kt2 / 120.0) * t;
        return (cos, sinc);
    }
    let mut kappa = kappa2.sqrt();
    if kappa.re < 0.0 {
        kappa = -kappa;
    }
    ((kappa * t).cos(), (kappa * t).sin() / kappa)
}

fn q_of(m: &PrecisionModel, dp: &DecayParams) -> C64 {
    C64::new(0.5 * (m.omega - m.delta_e()), dp.omega_shift)
}

/// Amplitude propagator `[[cos kt - i a1, -i a2], [-i a2, cos kt + i a1]]`
/// with `a1 = q sin(kt)/k`, `a2 = V0 sin(kt)/k`, `k = sqrt(q^2 + V0^2)`.
pub fn propagator(m: &PrecisionModel, t: f64) -> Result<Matrix2> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::DomainError { value: t });
    }
    let dp = decay_params(m);
    let q = q_of(m, &dp);
    let kappa2 = q * q + m.v0 * m.v0;
    let (cos, sinc) = cos_sinc(kappa2, t);
    let i = Complex64::i();
    let a1 = q * sinc;
    let a2 = sinc * m.v0;
    let mut out = Matrix2::zeros();
    out.0[0][0] = cos - i * a1;
    out.0[0][1] = -i * a2;
    out.0[1][0] = -i * a2;
    out.0[1][1] = cos + i * a1;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OccupationMode {
    /// Squared propagator entries; internally consistent.
    #[default]
    Propagator,
    /// The regime-wise closed forms exactly as published.
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Coherent,
    Incoherent,
    Exceptional,
}

/// Coherent for `V0 > lambda_t`, incoherent for `V0 < lambda_t`.
pub fn regime(m: &PrecisionModel) -> Regime {
    let lt = decay_params(m).lambda_t;
    if (m.v0 - lt).abs() <= EXCEPTIONAL_TOL * m.v0.max(lt) {
        Regime::Exceptional
    } else if m.v0 > lt {
        Regime::Coherent
    } else {
        Regime::Incoherent
    }
}

fn printed_probs(v0: f64, lt: f64, t: f64, reg: Regime) -> (f64, f64) {
    let damp = (-lt * t).exp();
    match reg {
        Regime::Exceptional => {
            let x = 0.5 * lt * t;
            ((1.0 - x).powi(2) * damp, x * x * damp)
        }
        Regime::Coherent => {
            let k0 = 2.0 * (v0 * v0 - lt * lt).sqrt();
            let (s, c) = (k0 * t).sin_cos();
            ((c - lt / k0 * s).powi(2) * damp, v0 * v0 / (k0 * k0) * s * s * damp)
        }
        Regime::Incoherent => {
            let k0 = 2.0 * (lt * lt - v0 * v0).sqrt();
            let (s, c) = ((k0 * t).sinh(), (k0 * t).cosh());
            ((c - lt / k0 * s).powi(2) * damp, v0 * v0 / (k0 * k0) * s * s * damp)
        }
    }
}

/// `(P11, P10)` for a system prepared in level 1.
pub fn occupation_probs(m: &PrecisionModel, t: f64, mode: OccupationMode) -> Result<(f64, f64)> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::DomainError { value: t });
    }
    let lt = decay_params(m).lambda_t;
    match mode {
        OccupationMode::Propagator => {
            let u = propagator(m, t)?;
            let damp = (-lt * t).exp();
            Ok((u.get(1, 1).norm_sqr() * damp, u.get(0, 1).norm_sqr() * damp))
        }
        OccupationMode::Printed => Ok(printed_probs(m.v0, lt, t, regime(m))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeComparison {
    pub propagator: (f64, f64),
    pub printed: (f64, f64),
    pub max_deviation: f64,
    pub agrees: bool,
}

/// Evaluates both modes and reports how far apart they are.
pub fn compare_modes(m: &PrecisionModel, t: f64) -> Result<ModeComparison> {
    let propagator = occupation_probs(m, t, OccupationMode::Propagator)?;
    let printed = occupation_probs(m, t, OccupationMode::Printed)?;
    let max_deviation = (propagator.0 - printed.0).abs().max((propagator.1 - printed.1).abs());
    Ok(ModeComparison {
        propagator,
        printed,
        max_deviation,
        agrees: max_deviation <= MODE_AGREEMENT_TOL,
    })
}

/// `E_r^c = Delta E / sqrt(2 tau V0)`, where `V0 = lambda_t`.
pub fn critical_precision(delta_e: f64, tau: f64, v0: f64) -> Result<f64> {
    for x in [delta_e, tau, v0] {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::InvalidParameter(format!("critical precision needs positive inputs, got {x}")));
        }
    }
    Ok(delta_e / (2.0 * tau * v0).sqrt())
}

/// Correlations of the pair when each qubit's survival amplitudes are set
/// by the measured dynamics, `u^2 = P11`, `v^2 = P10`.
///
/// Never fails: unusable inputs or states give an indeterminate report.
pub fn discord_under_measurement(
    m: &PrecisionModel,
    t: f64,
    init: &InitialState,
    part: Partition,
) -> CorrelationReport {
    discord_under_measurement_with(m, t, init, part, OccupationMode::Propagator, Subsystem::A)
}

pub fn discord_under_measurement_with(
    m: &PrecisionModel,
    t: f64,
    init: &InitialState,
    part: Partition,
    mode: OccupationMode,
    side: Subsystem,
) -> CorrelationReport {
    let indeterminate = |reason: String| CorrelationReport {
        concurrence: None,
        mutual_info: None,
        classical_corr: None,
        discord: None,
        side,
        basis: None,
        status: Status::Indeterminate(reason),
    };
    if let Err(e) = m.validate() {
        return indeterminate(e.to_string());
    }
    if !(0.0..=m.tau_meas).contains(&t) {
        return indeterminate(format!("time {t} outside [0, {}]", m.tau_meas));
    }
    let (p11, p10) = match occupation_probs(m, t, mode) {
        Ok(p) => p,
        Err(e) => return indeterminate(e.to_string()),
    };
    if !p11.is_finite() || !p10.is_finite() {
        return indeterminate("non-finite occupation probability".into());
    }
    let pair = SurvivalPair::lossy(p11, p10);
    discord_x(&partition_state(init, &pair, &pair, part), side)
}
