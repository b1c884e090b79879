//! Entanglement and quantum correlations of two-qubit states: concurrence,
//! mutual information, one-sided classical correlation and quantum discord.
//!
//! Classical correlation is maximized over rank-1 projective measurements on
//! one subsystem, parameterized by the Bloch angles of the projector
//! `|psi><psi|`, `psi = (cos(theta/2), e^{i phi} sin(theta/2))`. The search is
//! a fixed grid followed by a Nelder–Mead refinement, so results are
//! reproducible bit for bit.
//!
//! States produced under non-trace-preserving evolution are evaluated on
//! their unnormalized spectra. When a spectrum or probability leaves
//! `[0, 1]` the report is marked indeterminate instead of carrying a number.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimize::{nelder_mead, NelderMeadConfig};
use crate::qstate::{
    binary_entropy, eigh, partial_trace, spectrum_entropy, validate_state, DensityMatrix2, DensityMatrix4,
    Matrix2, Matrix4, Subsystem, ValidationMode, Violation, XState, C64, NEG_EIGEN_TOL,
};

/// Angular grid used before local refinement.
pub const THETA_GRID: usize = 60;
pub const PHI_GRID: usize = 24;
/// Branches with smaller probability contribute nothing to the conditional entropy.
const BRANCH_EPS: f64 = 1e-14;
/// Negative discord down to this value is round-off and clamped to zero.
pub const DISCORD_CLAMP: f64 = 1e-6;
const CLASSICAL_CLAMP: f64 = 1e-9;

/// Direction of a rank-1 projective measurement on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// `[psi_0, psi_1]`, the orthonormal pair defining `Pi_0` and `Pi_1 = I - Pi_0`.
    pub fn vectors(&self) -> [[C64; 2]; 2] {
        let (s, c) = (0.5 * self.theta).sin_cos();
        let e = C64::from_polar(1.0, self.phi);
        [[C64::new(c, 0.0), e * s], [-e.conj() * s, C64::new(c, 0.0)]]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "lowercase")]
pub enum Status {
    Determinate,
    Indeterminate(String),
}

impl Status {
    pub fn is_determinate(&self) -> bool {
        matches!(self, Status::Determinate)
    }
}

/// All correlation measures for one state, measured on `side`.
///
/// Numeric fields are `None` exactly when `status` is indeterminate (the
/// concurrence may still be present for X states, where it needs no entropy).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub concurrence: Option<f64>,
    pub mutual_info: Option<f64>,
    pub classical_corr: Option<f64>,
    pub discord: Option<f64>,
    pub side: Subsystem,
    pub basis: Option<MeasurementBasis>,
    pub status: Status,
}

impl CorrelationReport {
    fn indeterminate(side: Subsystem, concurrence: Option<f64>, reason: String) -> Self {
        Self {
            concurrence,
            mutual_info: None,
            classical_corr: None,
            discord: None,
            side,
            basis: None,
            status: Status::Indeterminate(reason),
        }
    }
}

/// Concurrence of an X state: `2 max(0, |outer| - sqrt(d2 d3), |inner| - sqrt(d1 d4))`.
pub fn concurrence(x: &XState) -> f64 {
    let [d1, d2, d3, d4] = x.d;
    let a = x.outer.abs() - (d2 * d3).max(0.0).sqrt();
    let b = x.inner.abs() - (d1 * d4).max(0.0).sqrt();
    2.0 * a.max(b).max(0.0)
}

fn spin_flip() -> Matrix4 {
    // sigma_y (x) sigma_y
    let mut m = Matrix4::zeros();
    m.0[0][3] = C64::new(-1.0, 0.0);
    m.0[1][2] = C64::new(1.0, 0.0);
    m.0[2][1] = C64::new(1.0, 0.0);
    m.0[3][0] = C64::new(-1.0, 0.0);
    m
}

/// Wootters concurrence from the spectrum of `sqrt(rho) rho~ sqrt(rho)`,
/// `rho~ = (sy x sy) rho* (sy x sy)`.
pub fn concurrence_wootters(rho: &DensityMatrix4) -> Result<f64> {
    let eig = rho.eigen();
    if let Some(&neg) = eig.values.iter().find(|&&v| v < -NEG_EIGEN_TOL) {
        return Err(Error::IndeterminateEntropy { value: neg });
    }
    let sqrt_vals = Matrix4::from_real_diag(eig.values.map(|v| v.max(0.0).sqrt()));
    let sqrt_rho = eig.vectors.mul(&sqrt_vals).mul(&eig.vectors.adjoint());
    let yy = spin_flip();
    let tilde = yy.mul(&rho.matrix().conj()).mul(&yy);
    let r = sqrt_rho.mul(&tilde).mul(&sqrt_rho);
    let mut lambdas = eigh(&r).values.map(|v| v.max(0.0).sqrt());
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

fn entropy4(rho: &Matrix4) -> Result<f64> {
    spectrum_entropy(&eigh(rho).values)
}

fn entropy2(rho: &DensityMatrix2) -> Result<f64> {
    spectrum_entropy(&rho.eigenvalues())
}

/// `I = S(rho_A) + S(rho_B) - S(rho)` in bits.
pub fn mutual_information(rho: &DensityMatrix4) -> Result<f64> {
    let sa = entropy2(&partial_trace(rho, Subsystem::A))?;
    let sb = entropy2(&partial_trace(rho, Subsystem::B))?;
    let s = entropy4(rho.matrix())?;
    Ok(sa + sb - s)
}

/// Unnormalized conditional state of the unmeasured subsystem after outcome `psi` on `side`.
fn conditional_block(m: &Matrix4, psi: &[C64; 2], side: Subsystem) -> Matrix2 {
    let mut out = Matrix2::zeros();
    for r in 0..2 {
        for c in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..2 {
                for k in 0..2 {
                    let (row, col) = match side {
                        Subsystem::A => (2 * i + r, 2 * k + c),
                        Subsystem::B => (2 * r + i, 2 * c + k),
                    };
                    acc += psi[i].conj() * m.get(row, col) * psi[k];
                }
            }
            out.0[r][c] = acc;
        }
    }
    out
}

fn conditional_entropy_matrix(m: &Matrix4, basis: &MeasurementBasis, side: Subsystem) -> Result<f64> {
    let mut total = 0.0;
    for psi in basis.vectors() {
        let block = conditional_block(m, &psi, side);
        let p = block.trace().re;
        if !p.is_finite() || !(-NEG_EIGEN_TOL..=1.0 + NEG_EIGEN_TOL).contains(&p) {
            return Err(Error::IndeterminateEntropy { value: p });
        }
        if p <= BRANCH_EPS {
            continue;
        }
        let a = block.0[0][0].re / p;
        let d = block.0[1][1].re / p;
        let b = block.0[0][1].norm() / p;
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        total += p * spectrum_entropy(&[mean + half_gap, mean - half_gap])?;
    }
    Ok(total)
}

/// `sum_k p_k S(rho_{other|k})` for the projective measurement `basis` on `side`.
pub fn conditional_entropy_projective(rho: &DensityMatrix4, basis: &MeasurementBasis, side: Subsystem) -> Result<f64> {
    conditional_entropy_matrix(rho.matrix(), basis, side)
}

/// Minimum conditional entropy and the basis attaining it.
pub fn minimize_conditional_entropy(rho: &DensityMatrix4, side: Subsystem) -> Result<(f64, MeasurementBasis)> {
    let m = rho.matrix();
    let theta_step = FRAC_PI_2 / (THETA_GRID - 1) as f64;
    let phi_step = PI / PHI_GRID as f64;

    let mut best = (f64::INFINITY, MeasurementBasis::new(0.0, 0.0));
    for i in 0..THETA_GRID {
        for j in 0..PHI_GRID {
            let basis = MeasurementBasis::new(i as f64 * theta_step, j as f64 * phi_step);
            let value = conditional_entropy_matrix(m, &basis, side)?;
            // strict comparison keeps the smallest (theta, phi) on ties
            if value < best.0 {
                best = (value, basis);
            }
        }
    }

    let failure: Cell<Option<Error>> = Cell::new(None);
    let objective = |x: &[f64]| match conditional_entropy_matrix(m, &MeasurementBasis::new(x[0], x[1]), side) {
        Ok(v) => v,
        Err(e) => {
            failure.set(Some(e));
            f64::INFINITY
        }
    };
    let refined = nelder_mead(
        objective,
        &[best.1.theta, best.1.phi],
        &[theta_step, phi_step],
        &NelderMeadConfig::default(),
    );
    if let Some(err) = failure.take() {
        return Err(err);
    }
    if refined.value < best.0 {
        best = (refined.value, MeasurementBasis::new(refined.x[0], refined.x[1]));
    }
    Ok(best)
}

/// `C_side = S(rho_other) - min_basis S(rho | basis on side)`.
pub fn classical_correlation(rho: &DensityMatrix4, side: Subsystem) -> Result<f64> {
    let s_other = entropy2(&partial_trace(rho, side.other()))?;
    let (min_cond, _) = minimize_conditional_entropy(rho, side)?;
    Ok(s_other - min_cond)
}

fn correlations_from(m: &Matrix4, side: Subsystem, mode: ValidationMode, concurrence: Option<f64>) -> CorrelationReport {
    let report = validate_state(m, mode);
    let fatal = report.violations.iter().find(|v| {
        matches!(
            v,
            Violation::NonFinite | Violation::NotHermitian { .. } | Violation::NegativeEigenvalue { .. }
        )
    });
    if let Some(v) = fatal {
        return CorrelationReport::indeterminate(side, concurrence, format!("invalid state: {v:?}"));
    }
    if mode == ValidationMode::Lossy && report.min_eigenvalue < -NEG_EIGEN_TOL {
        return CorrelationReport::indeterminate(
            side,
            concurrence,
            format!("negative eigenvalue {:e}", report.min_eigenvalue),
        );
    }
    if !report.is_ok() {
        return CorrelationReport::indeterminate(side, concurrence, format!("{:?}", report.violations));
    }

    let rho = DensityMatrix4::new(*m).expect("validated as Hermitian");
    let inner = || -> Result<(f64, f64, f64, MeasurementBasis)> {
        let sa = entropy2(&partial_trace(&rho, Subsystem::A))?;
        let sb = entropy2(&partial_trace(&rho, Subsystem::B))?;
        let s = entropy4(m)?;
        let (min_cond, basis) = minimize_conditional_entropy(&rho, side)?;
        let s_other = if side == Subsystem::A { sb } else { sa };
        Ok((sa + sb - s, s_other - min_cond, sa + sb - s - (s_other - min_cond), basis))
    };
    match inner() {
        Err(e) => CorrelationReport::indeterminate(side, concurrence, e.to_string()),
        Ok((mutual, mut classical, mut discord, basis)) => {
            if discord < 0.0 {
                if discord < -DISCORD_CLAMP {
                    return CorrelationReport::indeterminate(
                        side,
                        concurrence,
                        format!("negative discord {discord:e}"),
                    );
                }
                discord = 0.0;
                classical = mutual;
            }
            if classical < 0.0 {
                if classical < -CLASSICAL_CLAMP {
                    return CorrelationReport::indeterminate(
                        side,
                        concurrence,
                        format!("negative classical correlation {classical:e}"),
                    );
                }
                classical = 0.0;
                discord = mutual;
            }
            CorrelationReport {
                concurrence,
                mutual_info: Some(mutual),
                classical_corr: Some(classical),
                discord: Some(discord),
                side,
                basis: Some(basis),
                status: Status::Determinate,
            }
        }
    }
}

/// Full report for a general two-qubit density matrix (ideal mode).
pub fn discord(rho: &DensityMatrix4, side: Subsystem) -> CorrelationReport {
    let concurrence = concurrence_wootters(rho).ok();
    correlations_from(rho.matrix(), side, ValidationMode::Ideal, concurrence)
}

/// Full report for an X state, honoring its validation mode.
pub fn discord_x(x: &XState, side: Subsystem) -> CorrelationReport {
    let concurrence = if x.is_finite() { Some(concurrence(x)) } else { None };
    correlations_from(&x.to_matrix(), side, x.mode, concurrence)
}

/// Discord of the symmetric-decay phi-state evolution:
/// `H(b^2 u^2) - H((1 + sqrt(1 - 4 b^2 u^2 v^2)) / 2)`.
pub fn discord_closed_phi(b2: f64, u: f64, v: f64) -> Result<f64> {
    let radicand = 1.0 - 4.0 * b2 * u * u * v * v;
    if radicand < -1e-12 {
        return Err(Error::DomainError { value: radicand });
    }
    Ok(binary_entropy(b2 * u * u)? - binary_entropy(0.5 * (1.0 + radicand.max(0.0).sqrt()))?)
}

/// Closed form for the psi-state evolution with `c -> a`, `d -> b`:
/// `H(c^2 u^2) - H(u^2) + H((1 + sqrt(1 - 4 d^2 u^2 v^2)) / 2)`.
///
/// Kept as a regression baseline; [`discord_x`] is authoritative for psi states.
pub fn discord_closed_psi(c2: f64, u: f64, v: f64) -> Result<f64> {
    let d2 = 1.0 - c2;
    let radicand = 1.0 - 4.0 * d2 * u * u * v * v;
    if radicand < -1e-12 {
        return Err(Error::DomainError { value: radicand });
    }
    Ok(binary_entropy(c2 * u * u)? - binary_entropy(u * u)?
        + binary_entropy(0.5 * (1.0 + radicand.max(0.0).sqrt()))?)
}

/// `D_qq - D_rr = H(b^2 u^2) - H(b^2 v^2)` under symmetric decay.
pub fn discord_difference_phi(b2: f64, u: f64, v: f64) -> Result<f64> {
    Ok(binary_entropy(b2 * u * u)? - binary_entropy(b2 * v * v)?)
}
