//! Adiabatic charging of an open three-level quantum battery.
//!
//! The battery is a ladder system `|λ₁⟩ → |λ₂⟩ → |λ₃⟩` driven by two resonant
//! fields whose amplitudes are ramped linearly in the scaled time `s = t/t_f`.
//! Population is transported from the empty state `|λ₁⟩` to the full state
//! `|λ₃⟩` along the zero-energy dark state of the rotating-frame Hamiltonian,
//! while the system is weakly coupled to an Ohmic thermal bath through the
//! spin-1 `X` and `Z` operators.
//!
//! The dynamics follow the Markovian adiabatic master equation: jump
//! operators are built in the instantaneous eigenbasis and therefore depend
//! on time. Everything is expressed in that moving eigenbasis, where the
//! basis rotation shows up as the non-adiabatic coupling `M(s)`.
//!
//! Module map:
//!
//! * [`hamiltonian`]: drive schedules, instantaneous eigensystem, `M(s)`,
//!   adiabatic bounds on `t_f`.
//! * [`bath`]: Ohmic spectral density, KMS checks, the fourteen rate
//!   coefficients.
//! * [`lindblad`]: jump operators and the 9×9 generator.
//! * [`dynamics`]: density matrices and the fixed-step RK4 integrator.
//! * [`observables`]: stored energy, ergotropy, efficiency, Gibbs state,
//!   trace distance.
//! * [`sweep`], [`emit`], [`config`]: the `t_f`/coupling/temperature sweep
//!   engine and its deterministic table output.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bath;
pub mod config;
pub mod dynamics;
pub mod emit;
pub mod error;
pub mod hamiltonian;
pub mod lindblad;
pub mod observables;
pub mod sweep;

mod linalg;

pub use bath::{BathSpec, RateSet};
pub use dynamics::{Basis, DensityMatrix, Trajectory};
pub use emit::OutputFormat;
pub use error::{Error, Result};
pub use hamiltonian::{DriveSchedule, InstantEigensystem, PulseOrdering};
pub use lindblad::{Channel, Generator, LindbladOp, MasterEquation, Variant};
pub use observables::{BatterySpec, ObservableRecord};
pub use sweep::{SweepConfig, SweepResult, SweepRow};

pub use num_complex::Complex64 as C64;

/// 3×3 complex matrix used for operators and density matrices.
pub type Mat3 = nalgebra::Matrix3<C64>;
