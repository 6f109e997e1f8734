//! Density matrices and fixed-step integration of the master equation.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::bath::BathSpec;
use crate::error::{Error, Result};
use crate::hamiltonian::DriveSchedule;
use crate::lindblad::{MasterEquation, Variant};
use crate::linalg;
use crate::Mat3;

type V9 = nalgebra::SVector<f64, 9>;

/// Number of stored sample intervals along `s ∈ [0, 1]`.
pub const SAMPLE_INTERVALS: usize = 1000;

pub const MIN_STEPS: usize = 100;

/// Tolerances a [`DensityMatrix`] must meet.
pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-8;

/// Largest per-step constraint violation accepted by [`evolve`].
pub const MAX_VIOLATION: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Instantaneous eigenbasis `{|ε₁(s)⟩, |ε₂(s)⟩, |ε₃(s)⟩}`.
    Eigen,
    /// Bare battery basis `{|λ₁⟩, |λ₂⟩, |λ₃⟩}`.
    Bare,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    pub entries: Mat3,
    pub basis: Basis,
}

impl DensityMatrix {
    /// Wraps `entries` after checking hermiticity, unit trace and positivity.
    pub fn new(entries: Mat3, basis: Basis) -> Result<Self> {
        let rho = Self { entries, basis };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn new_unchecked(entries: Mat3, basis: Basis) -> Self {
        Self { entries, basis }
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(pops: [f64; 3], basis: Basis) -> Result<Self> {
        let d = nalgebra::Vector3::new(
            C64::new(pops[0], 0.0),
            C64::new(pops[1], 0.0),
            C64::new(pops[2], 0.0),
        );
        Self::new(Mat3::from_diagonal(&d), basis)
    }

    pub fn validate(&self) -> Result<()> {
        let herm = linalg::max_abs(&(self.entries - self.entries.adjoint()));
        if !(herm <= HERMITICITY_TOL) {
            return Err(Error::InvalidState(format!("not Hermitian (residual {herm:.3e})")));
        }
        let tr = self.trace();
        if !((tr - 1.0).abs() <= TRACE_TOL) {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let min = self.min_eigenvalue();
        if !(min >= -POSITIVITY_TOL) {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    pub fn population(&self, i: usize) -> f64 {
        self.entries[(i, i)].re
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 3] {
        linalg::hermitian_eigenvalues(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn expect_basis(&self, basis: Basis) -> Result<()> {
        if self.basis == basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch { expected: basis, found: self.basis })
        }
    }
}

/// The system prepared in the dark state `|ε₂(0)⟩`.
pub fn initial_dark_state() -> DensityMatrix {
    DensityMatrix::new_unchecked(
        Mat3::from_diagonal(&nalgebra::Vector3::new(
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        )),
        Basis::Eigen,
    )
}

/// Default RK4 step count: `max(20000, 200 t_f)`.
pub fn default_steps(tf: f64) -> usize {
    (200.0 * tf).ceil().max(20_000.0) as usize
}

/// A solved trajectory sampled at `SAMPLE_INTERVALS + 1` equally spaced `s`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    /// `(s, ρ(s))` in the eigenbasis.
    pub samples: Vec<(f64, DensityMatrix)>,
    pub tf: f64,
    pub variant: Variant,
    /// Internal RK4 steps actually taken.
    pub steps: usize,
    /// Largest `|Tr ρ − 1|` seen after a step, before renormalization.
    pub max_trace_drift: f64,
    /// Largest anti-Hermitian residual seen after a step, before
    /// re-symmetrization.
    pub max_hermiticity_drift: f64,
    /// Smallest eigenvalue over the stored samples.
    pub min_eigenvalue: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        &self.samples.last().expect("trajectory has samples").1
    }

    pub fn initial_state(&self) -> &DensityMatrix {
        &self.samples[0].1
    }

    /// Largest constraint violation along the trajectory.
    pub fn max_violation(&self) -> f64 {
        self.max_trace_drift.max(self.max_hermiticity_drift).max(-self.min_eigenvalue)
    }
}

impl MasterEquation {
    /// Integrates `dρ/ds` from `s = 0` to `s = 1` with classical RK4.
    ///
    /// The step count is rounded up to a multiple of [`SAMPLE_INTERVALS`].
    /// After every step ρ is re-symmetrized and its trace renormalized;
    /// positivity is only monitored.
    pub fn evolve(&self, tf: f64, variant: Variant, rho0: &DensityMatrix, steps: usize) -> Result<Trajectory> {
        rho0.expect_basis(Basis::Eigen)?;
        rho0.validate()?;
        if steps < MIN_STEPS {
            return Err(Error::param(format!("at least {MIN_STEPS} steps required, got {steps}")));
        }
        if !(tf > 0.0 && tf.is_finite()) {
            return Err(Error::param(format!("tf must be positive, got {tf}")));
        }
        let per_sample = steps.div_ceil(SAMPLE_INTERVALS);
        let steps = per_sample * SAMPLE_INTERVALS;
        let h = 1.0 / steps as f64;

        let mut samples = Vec::with_capacity(SAMPLE_INTERVALS + 1);
        samples.push((0.0, rho0.clone()));
        let mut min_eig = rho0.min_eigenvalue();
        let mut max_trace_drift: f64 = 0.0;
        let mut max_herm: f64 = 0.0;

        // state kept as split real vectors; the generator is real apart from
        // an imaginary diagonal
        let v0 = linalg::vectorize(&rho0.entries);
        let mut xr = V9::from_fn(|k, _| v0[k].re);
        let mut xi = V9::from_fn(|k, _| v0[k].im);
        let mut g_start = self.split_generator(0.0, tf, variant)?;
        for k in 0..steps {
            let s0 = k as f64 * h;
            // the last step lands exactly on s = 1
            let s1 = if k + 1 == steps { 1.0 } else { (k + 1) as f64 * h };
            let g_mid = self.split_generator(s0 + 0.5 * h, tf, variant)?;
            let g_end = self.split_generator(s1, tf, variant)?;

            let (k1r, k1i) = g_start.apply(&xr, &xi);
            let (k2r, k2i) = g_mid.apply(&(xr + k1r * (0.5 * h)), &(xi + k1i * (0.5 * h)));
            let (k3r, k3i) = g_mid.apply(&(xr + k2r * (0.5 * h)), &(xi + k2i * (0.5 * h)));
            let (k4r, k4i) = g_end.apply(&(xr + k3r * h), &(xi + k3i * h));
            xr += (k1r + (k2r + k3r) * 2.0 + k4r) * (h / 6.0);
            xi += (k1i + (k2i + k3i) * 2.0 + k4i) * (h / 6.0);

            // re-symmetrize: ρ_ij ← (ρ_ij + conj ρ_ji)/2, then fix the trace
            let mut herm: f64 = 0.0;
            for i in 0..3 {
                for j in i..3 {
                    let (a, b) = (3 * i + j, 3 * j + i);
                    let (re, im) = (0.5 * (xr[a] + xr[b]), 0.5 * (xi[a] - xi[b]));
                    herm = herm.max(C64::new(xr[a] - xr[b], xi[a] + xi[b]).norm());
                    xr[a] = re;
                    xr[b] = re;
                    xi[a] = im;
                    xi[b] = -im;
                }
            }
            max_herm = max_herm.max(herm);
            let tr = xr[0] + xr[4] + xr[8];
            max_trace_drift = max_trace_drift.max((tr - 1.0).abs());
            if !tr.is_finite() {
                return Err(Error::Integration { tf, steps, violation: f64::INFINITY });
            }
            xr /= tr;
            xi /= tr;

            if (k + 1) % per_sample == 0 {
                let rho = Mat3::from_fn(|i, j| C64::new(xr[3 * i + j], xi[3 * i + j]));
                let dm = DensityMatrix::new_unchecked(rho, Basis::Eigen);
                min_eig = min_eig.min(dm.min_eigenvalue());
                samples.push((s1, dm));
            }
            g_start = g_end;
        }

        let traj = Trajectory {
            samples,
            tf,
            variant,
            steps,
            max_trace_drift,
            max_hermiticity_drift: max_herm,
            min_eigenvalue: min_eig,
        };
        let violation = traj.max_violation();
        if !(violation <= MAX_VIOLATION) {
            return Err(Error::Integration { tf, steps, violation });
        }
        Ok(traj)
    }
}

/// [`MasterEquation::evolve`] with phases included.
pub fn evolve(
    sched: &DriveSchedule,
    bath: &BathSpec,
    tf: f64,
    variant: Variant,
    rho0: &DensityMatrix,
    steps: usize,
) -> Result<Trajectory> {
    MasterEquation::new(*sched, *bath).evolve(tf, variant, rho0, steps)
}
