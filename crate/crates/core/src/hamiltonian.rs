//! Rotating-frame drive Hamiltonian of the ladder battery and its
//! instantaneous eigensystem.
//!
//! In the frame rotating with the bare battery Hamiltonian, and with both
//! fields on resonance, the system Hamiltonian is
//!
//! ```text
//! H(s) = A(s) (|λ₁⟩⟨λ₂| + h.c.) + B(s) (|λ₂⟩⟨λ₃| + h.c.)
//! ```
//!
//! with eigenvalues `−Δ, 0, +Δ` and `Δ = √(A² + B²)`. The zero-energy state
//! `(−B|λ₁⟩ + A|λ₃⟩)/Δ` has no `|λ₂⟩` component and is the charging channel.

use std::f64::consts::SQRT_2;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::bath::BathSpec;
use crate::error::{Error, Result};

/// Which amplitude is switched on first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseOrdering {
    /// `A(s) = ω_A s`, `B(s) = ω_B (1 − s)`: the dark state starts on the
    /// empty level `|λ₁⟩` and ends on the full level `|λ₃⟩`.
    Charge,
    /// `A(s) = ω_A (1 − s)`, `B(s) = ω_B s`: the dark state moves from
    /// `|λ₃⟩` to `|λ₁⟩`.
    PaperLiteral,
}

impl PulseOrdering {
    pub fn as_str(self) -> &'static str {
        match self {
            PulseOrdering::Charge => "charge",
            PulseOrdering::PaperLiteral => "paper",
        }
    }
}

impl std::str::FromStr for PulseOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "charge" => Ok(PulseOrdering::Charge),
            "paper" | "paper-literal" | "paper_literal" => Ok(PulseOrdering::PaperLiteral),
            other => Err(Error::param(format!("unknown pulse ordering `{other}`"))),
        }
    }
}

/// Linear drive ramp for the two fields.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriveSchedule {
    pub omega_a: f64,
    pub omega_b: f64,
    pub ordering: PulseOrdering,
    /// When set, amplitudes are held at their value for this `s` and the
    /// schedule has zero time derivative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frozen_at: Option<f64>,
}

impl DriveSchedule {
    pub fn new(omega_a: f64, omega_b: f64, ordering: PulseOrdering) -> Result<Self> {
        if !(omega_a > 0.0 && omega_a.is_finite()) || !(omega_b > 0.0 && omega_b.is_finite()) {
            return Err(Error::param(format!(
                "drive frequencies must be positive and finite (omega_a = {omega_a}, omega_b = {omega_b})"
            )));
        }
        Ok(Self { omega_a, omega_b, ordering, frozen_at: None })
    }

    /// Charge ordering with `ω_A = ω_B = 1`.
    pub fn unit() -> Self {
        Self { omega_a: 1.0, omega_b: 1.0, ordering: PulseOrdering::Charge, frozen_at: None }
    }

    /// The same schedule held constant at `s0`.
    pub fn frozen(self, s0: f64) -> Result<Self> {
        check_s(s0)?;
        Ok(Self { frozen_at: Some(s0), ..self })
    }

    /// Drive amplitudes `(A(s), B(s))`.
    pub fn amplitudes(&self, s: f64) -> Result<(f64, f64)> {
        check_s(s)?;
        let s = self.frozen_at.unwrap_or(s);
        Ok(match self.ordering {
            PulseOrdering::Charge => (self.omega_a * s, self.omega_b * (1.0 - s)),
            PulseOrdering::PaperLiteral => (self.omega_a * (1.0 - s), self.omega_b * s),
        })
    }

    /// `(∂_s A, ∂_s B)`, constant for a linear ramp.
    pub fn amplitude_derivatives(&self) -> (f64, f64) {
        if self.frozen_at.is_some() {
            return (0.0, 0.0);
        }
        match self.ordering {
            PulseOrdering::Charge => (self.omega_a, -self.omega_b),
            PulseOrdering::PaperLiteral => (-self.omega_a, self.omega_b),
        }
    }

    /// Rotating-frame Hamiltonian in the bare basis `{|λ₁⟩, |λ₂⟩, |λ₃⟩}`.
    pub fn hamiltonian(&self, s: f64) -> Result<Matrix3<f64>> {
        let (a, b) = self.amplitudes(s)?;
        Ok(tridiagonal(a, b))
    }

    /// `√2 ω_A² ω_B² / (ω_A² + ω_B²)^{3/2} · t_f`, the horizontal axis used
    /// when comparing optimal charging times across drive strengths.
    pub fn dimensionless_time(&self, tf: f64) -> f64 {
        tf / gap_bound(self.omega_a, self.omega_b)
    }
}

fn tridiagonal(a: f64, b: f64) -> Matrix3<f64> {
    Matrix3::new(
        0.0, a, 0.0, //
        a, 0.0, b, //
        0.0, b, 0.0,
    )
}

fn check_s(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::ScaledTime(s))
    }
}

/// Drive amplitudes at `s`.
pub fn schedule_eval(sched: &DriveSchedule, s: f64) -> Result<(f64, f64)> {
    sched.amplitudes(s)
}

/// Instantaneous eigenvalues and eigenvectors of `H(s)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InstantEigensystem {
    pub s: f64,
    pub a_val: f64,
    pub b_val: f64,
    pub gap: f64,
    /// `(−Δ, 0, +Δ)`.
    pub eigvals: Vector3<f64>,
    /// Columns are `|ε₁⟩, |ε₂⟩, |ε₃⟩` in the bare basis.
    pub eigvecs: Matrix3<f64>,
}

impl InstantEigensystem {
    /// The dark state `|ε₂(s)⟩`.
    pub fn dark_state(&self) -> Vector3<f64> {
        self.eigvecs.column(1).into_owned()
    }

    pub fn eigvec(&self, k: usize) -> Vector3<f64> {
        self.eigvecs.column(k).into_owned()
    }
}

/// Closed-form eigensystem.
///
/// With `a = A/Δ`, `b = B/Δ`:
/// `|ε₁⟩ = (a, −1, b)/√2`, `|ε₂⟩ = (−b, 0, a)`, `|ε₃⟩ = (a, 1, b)/√2`.
/// Since `A, B ≥ 0` on `[0, 1]` these columns are continuous in `s` and the
/// dark state's `|λ₃⟩` component is never negative.
pub fn eigensystem(sched: &DriveSchedule, s: f64) -> Result<InstantEigensystem> {
    let (a_val, b_val) = sched.amplitudes(s)?;
    let gap = a_val.hypot(b_val);
    if !(gap > 0.0) {
        return Err(Error::DegenerateGap(s));
    }
    let (a, b) = (a_val / gap, b_val / gap);
    let h = 1.0 / SQRT_2;
    let eigvecs = Matrix3::new(
        a * h, -b, a * h, //
        -h, 0.0, h, //
        b * h, a, b * h,
    );
    Ok(InstantEigensystem {
        s,
        a_val,
        b_val,
        gap,
        eigvals: Vector3::new(-gap, 0.0, gap),
        eigvecs,
    })
}

/// Minimum of `Δ(s)` over `[0, 1]` and where it is reached.
pub fn gap_min(sched: &DriveSchedule) -> (f64, f64) {
    if let Some(s0) = sched.frozen_at {
        let (a, b) = sched.amplitudes(s0).expect("frozen point validated at construction");
        return (a.hypot(b), s0);
    }
    let (wa2, wb2) = (sched.omega_a.powi(2), sched.omega_b.powi(2));
    let delta_min = sched.omega_a * sched.omega_b / (wa2 + wb2).sqrt();
    let s_min = match sched.ordering {
        PulseOrdering::PaperLiteral => wa2 / (wa2 + wb2),
        PulseOrdering::Charge => wb2 / (wa2 + wb2),
    };
    (delta_min, s_min)
}

/// `M(s) = ⟨ε₂|∂_s ε₁⟩ = (A ∂_sB − B ∂_sA) / (√2 Δ²)`.
///
/// The full connection in the eigenbasis is
/// `K = ⟨ε_a|∂_s ε_b⟩ = [[0, −M, 0], [M, 0, M], [0, −M, 0]]`.
pub fn m_coupling(sched: &DriveSchedule, s: f64) -> Result<f64> {
    let (a, b) = sched.amplitudes(s)?;
    let (da, db) = sched.amplitude_derivatives();
    nonadiabatic_coupling(a, b, da, db).ok_or(Error::DegenerateGap(s))
}

/// `M` from amplitudes and their derivatives; `None` when `Δ = 0`.
pub fn nonadiabatic_coupling(a: f64, b: f64, da: f64, db: f64) -> Option<f64> {
    let gap2 = a * a + b * b;
    (gap2 > 0.0).then(|| (a * db - b * da) / (SQRT_2 * gap2))
}

/// Lower bounds on `t_f` from the adiabatic conditions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdiabaticBounds {
    /// `(ω_A² + ω_B²)^{3/2} / (√2 ω_A² ω_B²)`, from the gap condition.
    pub tf_gap_bound: f64,
    /// `(β/2π)² √(ω_A² + ω_B²) / √2`, from the bath correlation time.
    pub tf_bath_bound: f64,
}

pub fn adiabatic_bounds(sched: &DriveSchedule, bath: &BathSpec) -> AdiabaticBounds {
    let tau_b = bath.correlation_time();
    AdiabaticBounds {
        tf_gap_bound: gap_bound(sched.omega_a, sched.omega_b),
        tf_bath_bound: tau_b * tau_b * sched.omega_a.hypot(sched.omega_b) / SQRT_2,
    }
}

fn gap_bound(omega_a: f64, omega_b: f64) -> f64 {
    let (wa2, wb2) = (omega_a * omega_a, omega_b * omega_b);
    (wa2 + wb2).powf(1.5) / (SQRT_2 * wa2 * wb2)
}
