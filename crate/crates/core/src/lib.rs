//! Zeno and anti-Zeno decay of qubits coupled to Ohmic reservoirs, the
//! entanglement and discord they share, and qubit dynamics under
//! continuous finite-precision measurement.

pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod nonhermitian;
pub mod optimize;
pub mod qstate;
pub mod quadrature;
pub mod spinboson;

pub use correlations::{CorrelationReport, MeasurementBasis, Status};
pub use dynamics::{Family, InitialState, Partition};
pub use error::{Error, Result};
pub use nonhermitian::{DecayParams, OccupationMode, PrecisionModel, Regime};
pub use qstate::{DensityMatrix2, DensityMatrix4, Subsystem, ValidationMode, XState};
pub use quadrature::QuadratureConfig;
pub use spinboson::{CrossoverKind, CrossoverResult, SpinBosonParams, SurvivalPair};
