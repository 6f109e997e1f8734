//! Battery figures of merit.
//!
//! The battery Hamiltonian is the bare level structure
//! `H₀ = Σ λ_i |λ_i⟩⟨λ_i|`. Energies and ergotropy are evaluated on the state
//! expressed in the bare basis; the dark-state population and the distance to
//! the instantaneous Gibbs state are evaluated in the eigenbasis.

use nalgebra::Matrix3;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::bath::BathSpec;
use crate::dynamics::{Basis, DensityMatrix, Trajectory};
use crate::error::{Error, Result};
use crate::hamiltonian::{eigensystem, DriveSchedule};
use crate::linalg;
use crate::Mat3;

/// `|ΔE|` below which the efficiency is reported as undefined.
pub const EFFICIENCY_GUARD: f64 = 1e-9;

/// Bare battery levels `λ₁ < λ₂ < λ₃`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatterySpec {
    pub levels: [f64; 3],
}

impl Default for BatterySpec {
    /// `(0, 1, 1.95)`.
    fn default() -> Self {
        Self { levels: [0.0, 1.0, 1.95] }
    }
}

impl BatterySpec {
    pub fn new(levels: [f64; 3]) -> Result<Self> {
        if !levels.iter().all(|l| l.is_finite()) || !(levels[0] < levels[1] && levels[1] < levels[2]) {
            return Err(Error::param(format!("battery levels must be strictly increasing, got {levels:?}")));
        }
        Ok(Self { levels })
    }

    /// `Tr(ρ H₀)` for a bare-basis state.
    pub fn energy(&self, rho_bare: &DensityMatrix) -> Result<f64> {
        rho_bare.expect_basis(Basis::Bare)?;
        Ok((0..3).map(|i| self.levels[i] * rho_bare.population(i)).sum())
    }
}

/// Observables at one sample of a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub s: f64,
    pub stored_energy: f64,
    pub ergotropy: f64,
    /// `W/ΔE`; `None` for an (almost) empty battery.
    pub efficiency: Option<f64>,
    pub dark_population: f64,
    pub trace_distance_to_gibbs: f64,
}

/// `ρ_bare = V(s) ρ V(s)ᵀ`.
pub fn to_bare_basis(rho: &DensityMatrix, sched: &DriveSchedule, s: f64) -> Result<DensityMatrix> {
    rho.expect_basis(Basis::Eigen)?;
    let v = linalg::complexify(&eigensystem(sched, s)?.eigvecs);
    Ok(DensityMatrix::new_unchecked(v * rho.entries * v.transpose(), Basis::Bare))
}

/// `ρ_eig = V(s)ᵀ ρ V(s)`.
pub fn to_eigen_basis(rho: &DensityMatrix, sched: &DriveSchedule, s: f64) -> Result<DensityMatrix> {
    rho.expect_basis(Basis::Bare)?;
    let v = linalg::complexify(&eigensystem(sched, s)?.eigvecs);
    Ok(DensityMatrix::new_unchecked(v.transpose() * rho.entries * v, Basis::Eigen))
}

/// `ΔE = Tr(ρH₀) − Tr(ρ₀H₀)`.
pub fn stored_energy(rho_bare: &DensityMatrix, spec: &BatterySpec, rho0_bare: &DensityMatrix) -> Result<f64> {
    Ok(spec.energy(rho_bare)? - spec.energy(rho0_bare)?)
}

/// Energy of the passive state: eigenvalues of ρ in decreasing order paired
/// with levels in increasing order.
pub fn passive_energy(rho_bare: &DensityMatrix, spec: &BatterySpec) -> Result<f64> {
    rho_bare.expect_basis(Basis::Bare)?;
    let r = rho_bare.eigenvalues();
    Ok(r.iter().rev().zip(spec.levels.iter()).map(|(r, l)| r * l).sum())
}

/// `W = Tr(ρH₀) − min_U Tr(UρU† H₀)`.
pub fn ergotropy(rho_bare: &DensityMatrix, spec: &BatterySpec) -> Result<f64> {
    let w = spec.energy(rho_bare)? - passive_energy(rho_bare, spec)?;
    Ok(w.max(0.0))
}

/// `W / ΔE`, undefined when the battery holds no energy.
pub fn efficiency(ergotropy: f64, stored_energy: f64) -> Option<f64> {
    (stored_energy.abs() >= EFFICIENCY_GUARD).then(|| ergotropy / stored_energy)
}

/// Gibbs state of `H(s)` at inverse temperature `beta`, in the eigenbasis.
pub fn gibbs_state(sched: &DriveSchedule, s: f64, beta: f64) -> Result<DensityMatrix> {
    if !(beta >= 0.0) {
        return Err(Error::param(format!("beta must be >= 0, got {beta}")));
    }
    let gap = eigensystem(sched, s)?.gap;
    Ok(gibbs_for_gap(gap, beta))
}

pub(crate) fn gibbs_for_gap(gap: f64, beta: f64) -> DensityMatrix {
    // weights relative to the ground state so β → ∞ stays finite
    let x = if beta.is_infinite() { 0.0 } else { (-beta * gap).exp() };
    let z = 1.0 + x + x * x;
    let d = nalgebra::Vector3::new(C64::new(1.0 / z, 0.0), C64::new(x / z, 0.0), C64::new(x * x / z, 0.0));
    DensityMatrix::new_unchecked(Mat3::from_diagonal(&d), Basis::Eigen)
}

/// `‖ρ − σ‖₁`, the sum of absolute eigenvalues of the difference (no ½).
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    sigma.expect_basis(rho.basis)?;
    Ok(trace_norm(&(rho.entries - sigma.entries)))
}

pub(crate) fn trace_norm(m: &Mat3) -> f64 {
    linalg::hermitian_eigenvalues(m).iter().map(|x| x.abs()).sum()
}

/// Observables at every sample of `traj`, with the trajectory's initial
/// state as the energy reference.
pub fn record(
    traj: &Trajectory,
    sched: &DriveSchedule,
    bath: &BathSpec,
    spec: &BatterySpec,
) -> Result<Vec<ObservableRecord>> {
    let rho0_bare = to_bare_basis(traj.initial_state(), sched, 0.0)?;
    traj.samples
        .iter()
        .map(|(s, rho)| observe(*s, rho, &rho0_bare, sched, bath, spec))
        .collect()
}

/// Observables at the last sample only.
pub fn record_final(
    traj: &Trajectory,
    sched: &DriveSchedule,
    bath: &BathSpec,
    spec: &BatterySpec,
) -> Result<ObservableRecord> {
    let rho0_bare = to_bare_basis(traj.initial_state(), sched, 0.0)?;
    let (s, rho) = traj.samples.last().expect("trajectory has samples");
    observe(*s, rho, &rho0_bare, sched, bath, spec)
}

fn observe(
    s: f64,
    rho: &DensityMatrix,
    rho0_bare: &DensityMatrix,
    sched: &DriveSchedule,
    bath: &BathSpec,
    spec: &BatterySpec,
) -> Result<ObservableRecord> {
    let bare = to_bare_basis(rho, sched, s)?;
    let de = stored_energy(&bare, spec, rho0_bare)?;
    let w = ergotropy(&bare, spec)?;
    let gibbs = gibbs_state(sched, s, bath.beta)?;
    Ok(ObservableRecord {
        s,
        stored_energy: de,
        ergotropy: w,
        efficiency: efficiency(w, de),
        dark_population: rho.population(1),
        trace_distance_to_gibbs: trace_distance(rho, &gibbs)?,
    })
}

/// Permutation matrices of three levels, used by tests as a brute-force
/// passive-state oracle.
#[doc(hidden)]
pub fn permutation_matrices() -> Vec<Matrix3<f64>> {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    PERMS
        .iter()
        .map(|p| Matrix3::from_fn(|i, j| if p[i] == j { 1.0 } else { 0.0 }))
        .collect()
}
