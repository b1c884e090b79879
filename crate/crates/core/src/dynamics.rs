//! Two qubits, each decaying into its own reservoir, starting from a
//! Bell-like state. Tracing out the reservoirs (or the qubits) leaves an X state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{ValidationMode, XState};
use crate::spinboson::SurvivalPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `a|00> + b|11>`
    Phi,
    /// `c|01> + d|10>`
    Psi,
}

/// Initial two-qubit state with real, nonnegative coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub family: Family,
    /// First coefficient (`a` for phi, `c` for psi).
    pub amp: f64,
}

impl InitialState {
    pub fn new(family: Family, amp: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&amp) {
            return Err(Error::InvalidParameter(format!("amplitude must lie in [0, 1], got {amp}")));
        }
        Ok(Self { family, amp })
    }

    /// Second coefficient `sqrt(1 - amp^2)`.
    pub fn partner(&self) -> f64 {
        (1.0 - self.amp * self.amp).max(0.0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Partition {
    QubitQubit,
    ReservoirReservoir,
}

fn combined_mode(s1: &SurvivalPair, s2: &SurvivalPair) -> ValidationMode {
    if s1.mode == ValidationMode::Lossy || s2.mode == ValidationMode::Lossy {
        ValidationMode::Lossy
    } else {
        ValidationMode::Ideal
    }
}

/// Qubit-qubit state evolved from `a|00> + b|11>`.
pub fn evolve_phi(a: f64, s1: &SurvivalPair, s2: &SurvivalPair) -> XState {
    let b2 = (1.0 - a * a).max(0.0);
    let b = b2.sqrt();
    let (u1s, v1s, u2s, v2s) = (s1.u2(), s1.v2(), s2.u2(), s2.v2());
    let d = [
        a * a + b2 * v1s * v2s,
        b2 * v1s * u2s,
        b2 * u1s * v2s,
        b2 * u1s * u2s,
    ];
    XState::new(d, a * b * s1.u * s2.u, 0.0).with_mode(combined_mode(s1, s2))
}

/// Qubit-qubit state evolved from `c|01> + d|10>`.
pub fn evolve_psi(c: f64, s1: &SurvivalPair, s2: &SurvivalPair) -> XState {
    let d2 = (1.0 - c * c).max(0.0);
    let d = d2.sqrt();
    let diag = [
        c * c * s2.v2() + d2 * s1.v2(),
        c * c * s2.u2(),
        d2 * s1.u2(),
        0.0,
    ];
    XState::new(diag, 0.0, c * d * s1.u * s2.u).with_mode(combined_mode(s1, s2))
}

/// State of the requested partition; the reservoir pair is the image of the
/// qubit pair under `u_i <-> v_i`.
pub fn partition_state(init: &InitialState, s1: &SurvivalPair, s2: &SurvivalPair, part: Partition) -> XState {
    let (s1, s2) = match part {
        Partition::QubitQubit => (*s1, *s2),
        Partition::ReservoirReservoir => (s1.swapped(), s2.swapped()),
    };
    match init.family {
        Family::Phi => evolve_phi(init.amp, &s1, &s2),
        Family::Psi => evolve_psi(init.amp, &s1, &s2),
    }
}
