//! Ohmic thermal bath and the rate coefficients of the master equation.

use std::f64::consts::PI;
use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::DriveSchedule;

/// Below this `|βω|` the Bose factor is replaced by its first-order series.
const SMALL_BETA_OMEGA: f64 = 1e-8;

/// Parameters of the Ohmic bath.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathSpec {
    /// Coupling product `η g²`.
    pub eta_g2: f64,
    /// Inverse temperature.
    pub beta: f64,
    /// High-frequency cutoff.
    pub omega_c: f64,
    /// Whether the `X`–`Z` cross-correlation rates `γ_xz`, `γ_zx` are
    /// included. When on they equal the single Ohmic `γ(ω)`.
    #[serde(default = "default_cross")]
    pub cross_correlations: bool,
}

fn default_cross() -> bool {
    true
}

impl Default for BathSpec {
    /// `ηg² = 1e−4`, `β = 1/2.6`, `ω_c = 8π`.
    fn default() -> Self {
        Self { eta_g2: 1e-4, beta: 1.0 / 2.6, omega_c: 8.0 * PI, cross_correlations: true }
    }
}

impl BathSpec {
    pub fn new(eta_g2: f64, beta: f64, omega_c: f64) -> Result<Self> {
        let bath = Self { eta_g2, beta, omega_c, cross_correlations: true };
        bath.validate()?;
        Ok(bath)
    }

    pub fn with_cross_correlations(self, on: bool) -> Self {
        Self { cross_correlations: on, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta_g2 >= 0.0 && self.eta_g2.is_finite()) {
            return Err(Error::param(format!("eta_g2 must be >= 0, got {}", self.eta_g2)));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::param(format!("beta must be > 0, got {}", self.beta)));
        }
        if !(self.omega_c > 0.0 && self.omega_c.is_finite()) {
            return Err(Error::param(format!("omega_c must be > 0, got {}", self.omega_c)));
        }
        Ok(())
    }

    /// `γ(ω) = 2π ηg² ω e^{−|ω|/ω_c} / (1 − e^{−βω})`.
    pub fn gamma(&self, omega: f64) -> f64 {
        let x = self.beta * omega;
        let cutoff = (-omega.abs() / self.omega_c).exp();
        let bose = if x.abs() < SMALL_BETA_OMEGA {
            (1.0 + 0.5 * x) / self.beta
        } else {
            // ω / (1 − e^{−βω})
            -omega / (-x).exp_m1()
        };
        2.0 * PI * self.eta_g2 * bose * cutoff
    }

    /// `τ_B = β / 2π`, valid when `ω_c ≫ 1/β`.
    pub fn correlation_time(&self) -> f64 {
        self.beta / (2.0 * PI)
    }

    /// Messages for parameter choices outside the weak-coupling Markovian
    /// regime. These are advisory only.
    pub fn regime_warnings(&self, delta_min: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.omega_c * self.beta < 5.0 {
            out.push(format!(
                "omega_c * beta = {:.3} is not >> 1; tau_B = beta/2pi is unreliable",
                self.omega_c * self.beta
            ));
        }
        let rate = self.gamma(delta_min);
        if rate * self.correlation_time() > 0.1 || rate > 0.1 * delta_min {
            out.push(format!(
                "bath rate {rate:.3e} is not small against the minimum gap {delta_min:.3e}; weak coupling is questionable"
            ));
        }
        out
    }
}

/// `γ(ω)` for `bath`.
pub fn spectral_rate(bath: &BathSpec, omega: f64) -> f64 {
    bath.gamma(omega)
}

/// `|γ(−ω) − e^{−βω} γ(ω)| / γ(|ω|)`.
pub fn kms_residual(bath: &BathSpec, omega: f64) -> Result<f64> {
    if omega == 0.0 {
        return Err(Error::param("KMS residual is undefined at omega = 0"));
    }
    let lhs = bath.gamma(-omega);
    let rhs = (-bath.beta * omega).exp() * bath.gamma(omega);
    Ok((lhs - rhs).abs() / bath.gamma(omega.abs()))
}

pub fn bath_correlation_time(bath: &BathSpec) -> f64 {
    bath.correlation_time()
}

/// The ten transition rates `x₁..x₁₀` and four dephasing rates `y₁..y₄` at a
/// given `s`. Index `x[0]` is `x₁`.
///
/// Each rate is a product of two jump-operator prefactors and one bath rate:
///
/// | rate | prefactors | bath rate |
/// |------|------------|-----------|
/// | x₁, x₂ | `(A−B)²/4Δ²` | `γ_xx(±Δ)` |
/// | x₃, x₄ | `AB(A−B)/√2Δ³` | `γ_xz(±Δ)` |
/// | x₅, x₆ | `AB(A−B)/√2Δ³` | `γ_zx(±Δ)` |
/// | x₇, x₈ | `2A²B²/Δ⁴` | `γ_zz(±Δ)` |
/// | x₉, x₁₀ | `(A²−B²)²/4Δ⁴` | `γ_zz(±2Δ)` |
/// | y₁ | `(A+B)²/2Δ²` | `γ_xx(0)` |
/// | y₂ | `(A²−B²)²/4Δ⁴` | `γ_zz(0)` |
/// | y₃, y₄ | `(A+B)(A²−B²)/2√2Δ³` | `γ_xz(0)`, `γ_zx(0)` |
///
/// The cross rates x₃..x₆, y₃, y₄ change sign with `A − B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateSet {
    pub s: f64,
    pub x: [f64; 10],
    pub y: [f64; 4],
}

impl RateSet {
    /// `x_i` with one-based index.
    pub fn xi(&self, i: usize) -> f64 {
        self.x[i - 1]
    }

    pub fn yi(&self, i: usize) -> f64 {
        self.y[i - 1]
    }
}

pub fn rate_set(bath: &BathSpec, sched: &DriveSchedule, s: f64) -> Result<RateSet> {
    let (a, b) = sched.amplitudes(s)?;
    let gap = a.hypot(b);
    if !(gap > 0.0) {
        return Err(Error::DegenerateGap(s));
    }
    Ok(rates_from_amplitudes(bath, a, b, gap, s))
}

pub(crate) fn rates_from_amplitudes(bath: &BathSpec, a: f64, b: f64, gap: f64, s: f64) -> RateSet {
    let g = |w: f64| bath.gamma(w);
    let cross = if bath.cross_correlations { 1.0 } else { 0.0 };
    let (d2, d3, d4) = (gap * gap, gap * gap * gap, d_pow4(gap));
    let amb = a - b;
    let apb = a + b;
    let a2mb2 = a * a - b * b;

    let (g_p, g_m) = (g(gap), g(-gap));
    let (g_2p, g_2m) = (g(2.0 * gap), g(-2.0 * gap));
    let g0 = g(0.0);

    let xx = amb * amb / (4.0 * d2);
    let xz = cross * a * b * amb / (SQRT_2 * d3);
    let zz = 2.0 * a * a * b * b / d4;
    let zz2 = a2mb2 * a2mb2 / (4.0 * d4);

    let x = [
        xx * g_p,
        xx * g_m,
        xz * g_p,
        xz * g_m,
        xz * g_p,
        xz * g_m,
        zz * g_p,
        zz * g_m,
        zz2 * g_2p,
        zz2 * g_2m,
    ];
    let y = [
        apb * apb / (2.0 * d2) * g0,
        a2mb2 * a2mb2 / (4.0 * d4) * g0,
        cross * apb * a2mb2 / (2.0 * SQRT_2 * d3) * g0,
        cross * apb * a2mb2 / (2.0 * SQRT_2 * d3) * g0,
    ];
    RateSet { s, x, y }
}

fn d_pow4(gap: f64) -> f64 {
    let d2 = gap * gap;
    d2 * d2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::PulseOrdering;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_reference_values() {
        let bath = BathSpec::default();
        assert_relative_eq!(bath.gamma(0.0), 2.0 * PI * 1e-4 * 2.6, max_relative = 1e-14);
        assert_relative_eq!(bath.gamma(0.0), 1.63363e-3, max_relative = 1e-5);
        // direct evaluation at ω = ±1
        let g1 = 2.0 * PI * 1e-4 * (-1.0 / (8.0 * PI)).exp() / (1.0 - (-1.0f64 / 2.6).exp());
        assert_relative_eq!(bath.gamma(1.0), g1, max_relative = 1e-14);
        assert_relative_eq!(bath.gamma(1.0), 1.8911e-3, max_relative = 1e-4);
        assert_relative_eq!(bath.gamma(-1.0), 1.2873e-3, max_relative = 1e-4);
    }

    #[test]
    fn gamma_is_continuous_through_zero() {
        let bath = BathSpec::default();
        for w in [1e-12, 1e-9, 1e-7, 1e-6] {
            for sign in [1.0, -1.0] {
                let r = bath.gamma(sign * w) / bath.gamma(0.0);
                assert!((r - 1.0).abs() < 10.0 * w, "{w}: {r}");
            }
        }
    }

    #[test]
    fn gamma_positive_and_zero_temperature_limit() {
        let cold = BathSpec::new(1e-4, 1e4, 8.0 * PI).unwrap();
        for w in [0.1, 1.0, 5.0] {
            let t0 = 2.0 * PI * 1e-4 * w * (-w / (8.0 * PI)).exp();
            assert_relative_eq!(cold.gamma(w), t0, max_relative = 1e-12);
            assert!(cold.gamma(-w) < 1e-30);
        }
        let bath = BathSpec::default();
        for i in -100..=100 {
            let w = i as f64 * 0.37;
            assert!(bath.gamma(w) > 0.0 && bath.gamma(w).is_finite());
        }
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn kms_examples() {
        let bath = BathSpec::default();
        assert!(kms_residual(&bath, 1.0).unwrap() < 1e-12);
        assert!(kms_residual(&bath, 0.70711).unwrap() < 1e-12);
        let cold = BathSpec::new(1e-4, 13.0, 8.0 * PI).unwrap();
        assert!(kms_residual(&cold, 2.0).unwrap() < 1e-12);
        assert!(kms_residual(&bath, 0.0).is_err());
    }

    #[test]
    fn correlation_time() {
        assert_relative_eq!(BathSpec::default().correlation_time(), 0.061213, max_relative = 1e-5);
        let unit = BathSpec::new(1e-4, 2.0 * PI, 8.0 * PI).unwrap();
        assert_relative_eq!(unit.correlation_time(), 1.0, max_relative = 1e-15);
        let cold = BathSpec::new(1e-4, 5.0 / 2.6, 8.0 * PI).unwrap();
        assert_relative_eq!(bath_correlation_time(&cold), 0.306067, max_relative = 1e-5);
    }

    #[test]
    fn validation() {
        assert!(BathSpec::new(-1.0, 1.0, 1.0).is_err());
        assert!(BathSpec::new(1e-4, 0.0, 1.0).is_err());
        assert!(BathSpec::new(1e-4, 1.0, -1.0).is_err());
        assert!(BathSpec::new(0.0, 1.0, 1.0).is_ok());
    }

    #[test]
    fn symmetric_point_rates() {
        let bath = BathSpec::default();
        let r = rate_set(&bath, &DriveSchedule::unit(), 0.5).unwrap();
        for i in [1, 2, 3, 4, 5, 6, 9, 10] {
            assert_eq!(r.xi(i), 0.0, "x{i}");
        }
        for i in [2, 3, 4] {
            assert_eq!(r.yi(i), 0.0, "y{i}");
        }
        let delta = 0.5f64.sqrt();
        assert_relative_eq!(r.xi(7), 0.5 * bath.gamma(delta), max_relative = 1e-14);
        assert_relative_eq!(r.xi(8), 0.5 * bath.gamma(-delta), max_relative = 1e-14);
        // (A+B)²/(2Δ²) = 1 at A = B = 1/2
        assert_relative_eq!(r.yi(1), bath.gamma(0.0), max_relative = 1e-14);
    }

    #[test]
    fn zero_coupling_gives_zero_rates() {
        let bath = BathSpec::new(0.0, 1.0 / 2.6, 8.0 * PI).unwrap();
        let r = rate_set(&bath, &DriveSchedule::unit(), 0.37).unwrap();
        assert!(r.x.iter().chain(r.y.iter()).all(|&v| v == 0.0));
    }

    #[test]
    fn kms_pairing_in_rate_set() {
        let bath = BathSpec::default();
        let sched = DriveSchedule::new(2.0, 1.0, PulseOrdering::Charge).unwrap();
        let r = rate_set(&bath, &sched, 0.3).unwrap();
        let (a, b) = sched.amplitudes(0.3).unwrap();
        let delta = a.hypot(b);
        let boltz = (-bath.beta * delta).exp();
        // independent evaluation of x₂
        let x2 = (a - b).powi(2) * bath.gamma(-delta) / (4.0 * delta * delta);
        assert_relative_eq!(r.xi(2), x2, max_relative = 1e-14);
        assert_relative_eq!(r.xi(2), boltz * r.xi(1), max_relative = 1e-12);
        assert_relative_eq!(r.xi(10), boltz * boltz * r.xi(9), max_relative = 1e-12);
    }

    #[test]
    fn cross_switch_zeroes_cross_rates() {
        let bath = BathSpec::default().with_cross_correlations(false);
        let sched = DriveSchedule::new(2.0, 1.0, PulseOrdering::Charge).unwrap();
        let r = rate_set(&bath, &sched, 0.2).unwrap();
        for i in 3..=6 {
            assert_eq!(r.xi(i), 0.0);
        }
        assert_eq!(r.yi(3), 0.0);
        assert_eq!(r.yi(4), 0.0);
        assert!(r.xi(1) > 0.0 && r.xi(7) > 0.0);
    }

    #[test]
    fn regime_warnings_fire() {
        assert!(BathSpec::default().regime_warnings(0.7).is_empty());
        let hot = BathSpec::new(1.0, 0.01, 1.0).unwrap();
        assert_eq!(hot.regime_warnings(0.7).len(), 2);
    }
}
