//! Time-dependent jump operators and the master-equation generator in the
//! instantaneous eigenbasis.
//!
//! The state is tracked as `ρ_ij(s) = ⟨ε_i(s)|ρ|ε_j(s)⟩`. Differentiating in
//! the moving frame gives
//!
//! ```text
//! dρ/ds = t_f (−i[H_diag, ρ] + 𝓛[ρ]) + ρK − Kρ,    K_ab = ⟨ε_a|∂_s ε_b⟩
//! ```
//!
//! where `𝓛` is the Lindblad-form dissipator summed over the coupling
//! channels and Bohr frequencies `{0, ±Δ, ±2Δ}`:
//!
//! ```text
//! 𝓛[ρ] = Σ_{αβ} Σ_ω γ_αβ(ω) (L_{β,ω} ρ L†_{α,ω} − ½ {L†_{α,ω} L_{β,ω}, ρ})
//! ```
//!
//! The `ρK − Kρ` term is proportional to `M(s)` and is dropped in the
//! adiabatic-limit variant.

use std::f64::consts::SQRT_2;

use nalgebra::{Matrix3, SMatrix, SVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::bath::{rates_from_amplitudes, BathSpec, RateSet};
use crate::error::{Error, Result};
use crate::hamiltonian::{eigensystem, nonadiabatic_coupling, DriveSchedule, InstantEigensystem};
use crate::linalg::{self, Super, Vec9};
use crate::Mat3;

/// System coupling operator through which the bath acts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    X,
    Z,
}

impl Channel {
    /// Spin-1 operator in the bare basis.
    pub fn bare_operator(self) -> Matrix3<f64> {
        match self {
            Channel::X => {
                let h = 1.0 / SQRT_2;
                Matrix3::new(0.0, h, 0.0, h, 0.0, h, 0.0, h, 0.0)
            }
            Channel::Z => Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 0.0, -1.0)),
        }
    }
}

/// Bohr frequencies in units of the instantaneous gap.
pub const HARMONICS: [i8; 5] = [0, 1, -1, 2, -2];

/// A jump operator `L_{α,ω}` in the instantaneous eigenbasis.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladOp {
    pub channel: Channel,
    /// `ω / Δ`, one of `0, ±1, ±2`.
    pub harmonic: i8,
    pub bohr_freq: f64,
    pub matrix: Matrix3<f64>,
}

fn unit(i: usize, j: usize) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    m[(i, j)] = 1.0;
    m
}

/// Prefactors of the closed-form jump operators.
///
/// With `a = A/Δ`, `b = B/Δ`:
///
/// ```text
/// L(x, 0)   = p (−|1⟩⟨1| + |3⟩⟨3|)            p = (a + b)/√2
/// L(x, ±Δ)  = u (|1⟩⟨2| − |2⟩⟨3|) and h.c.     u = −(a − b)/2
/// L(x, ±2Δ) = 0
/// L(z, 0)   = q (|1⟩⟨1| − 2|2⟩⟨2| + |3⟩⟨3|)   q = (a² − b²)/2
/// L(z, ±Δ)  = v (|1⟩⟨2| + |2⟩⟨3|) and h.c.     v = −√2 a b
/// L(z, 2Δ)  = q |1⟩⟨3|,  L(z, −2Δ) = q |3⟩⟨1|
/// ```
#[derive(Clone, Copy, Debug)]
struct Prefactors {
    p: f64,
    q: f64,
    u: f64,
    v: f64,
}

impl Prefactors {
    fn new(a_val: f64, b_val: f64, gap: f64) -> Self {
        let (a, b) = (a_val / gap, b_val / gap);
        Self { p: (a + b) / SQRT_2, q: 0.5 * (a * a - b * b), u: -0.5 * (a - b), v: -SQRT_2 * a * b }
    }

    fn matrix(&self, channel: Channel, harmonic: i8) -> Matrix3<f64> {
        let (e11, e22, e33) = (unit(0, 0), unit(1, 1), unit(2, 2));
        match (channel, harmonic) {
            (Channel::X, 0) => self.p * (e33 - e11),
            (Channel::X, 1) => self.u * (unit(0, 1) - unit(1, 2)),
            (Channel::X, -1) => self.u * (unit(1, 0) - unit(2, 1)),
            (Channel::X, _) => Matrix3::zeros(),
            (Channel::Z, 0) => self.q * (e11 - 2.0 * e22 + e33),
            (Channel::Z, 1) => self.v * (unit(0, 1) + unit(1, 2)),
            (Channel::Z, -1) => self.v * (unit(1, 0) + unit(2, 1)),
            (Channel::Z, 2) => self.q * unit(0, 2),
            (Channel::Z, -2) => self.q * unit(2, 0),
            (Channel::Z, h) => unreachable!("harmonic {h} out of range"),
        }
    }
}

/// The ten jump operators from their closed forms, ordered X then Z, each
/// over harmonics `0, +1, −1, +2, −2`.
pub fn lindblad_ops(sched: &DriveSchedule, s: f64) -> Result<Vec<LindbladOp>> {
    let es = eigensystem(sched, s)?;
    let pre = Prefactors::new(es.a_val, es.b_val, es.gap);
    Ok(all_ops(es.gap, |c, h| pre.matrix(c, h)))
}

/// The ten jump operators built generically as
/// `L_{α,ω} = Σ_{ε_b − ε_a = ω} ⟨ε_a|A_α|ε_b⟩ |ε_a⟩⟨ε_b|`
/// from the numerical eigenvectors.
pub fn lindblad_ops_projected(sched: &DriveSchedule, s: f64) -> Result<Vec<LindbladOp>> {
    let es = eigensystem(sched, s)?;
    Ok(all_ops(es.gap, |c, h| project_coupling(&es, c, h)))
}

/// Component of `A_α` (in the eigenbasis) that connects eigenstates whose
/// energy difference is `harmonic · Δ`.
pub fn project_coupling(es: &InstantEigensystem, channel: Channel, harmonic: i8) -> Matrix3<f64> {
    let v = &es.eigvecs;
    let in_eig = v.transpose() * channel.bare_operator() * v;
    let omega = harmonic as f64 * es.gap;
    let tol = 1e-9 * es.gap;
    Matrix3::from_fn(|a, b| {
        if ((es.eigvals[b] - es.eigvals[a]) - omega).abs() < tol {
            in_eig[(a, b)]
        } else {
            0.0
        }
    })
}

fn all_ops(gap: f64, mut f: impl FnMut(Channel, i8) -> Matrix3<f64>) -> Vec<LindbladOp> {
    let mut out = Vec::with_capacity(10);
    for channel in [Channel::X, Channel::Z] {
        for harmonic in HARMONICS {
            out.push(LindbladOp {
                channel,
                harmonic,
                bohr_freq: harmonic as f64 * gap,
                matrix: f(channel, harmonic),
            });
        }
    }
    out
}

/// Which terms of the moving-frame equation are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// All terms, including the `M(s)` basis-rotation terms.
    Full,
    /// `M(s)` terms dropped: populations decouple from coherences.
    AdiabaticLimit,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::AdiabaticLimit => "adiabatic",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Variant::Full),
            "adiabatic" | "adiabatic-limit" | "adiabatic_limit" => Ok(Variant::AdiabaticLimit),
            other => Err(Error::param(format!("unknown variant `{other}`"))),
        }
    }
}

/// Real and imaginary-diagonal parts of a generator.
#[derive(Clone, Debug)]
pub(crate) struct SplitGenerator {
    pub re: SMatrix<f64, 9, 9>,
    pub im: SVector<f64, 9>,
}

impl SplitGenerator {
    /// `(re + i·diag(im)) (xr + i·xi)` on split real vectors.
    pub(crate) fn apply(&self, xr: &SVector<f64, 9>, xi: &SVector<f64, 9>) -> (SVector<f64, 9>, SVector<f64, 9>) {
        (self.re * xr - self.im.component_mul(xi), self.re * xi + self.im.component_mul(xr))
    }
}

/// Linear map `vec(ρ) ↦ vec(dρ/ds)` with row-major vectorization.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub matrix: Super,
    pub variant: Variant,
    pub s: f64,
    pub tf: f64,
}

impl Generator {
    pub fn apply(&self, rho: &Mat3) -> Mat3 {
        linalg::unvectorize(&(self.matrix * linalg::vectorize(rho)))
    }

    /// Largest `|Σ_i G[(i,i), k]|` over columns `k`: the trace of the image of
    /// any state vanishes iff this is zero.
    pub fn trace_residual(&self) -> f64 {
        (0..9)
            .map(|k| (self.matrix[(0, k)] + self.matrix[(4, k)] + self.matrix[(8, k)]).norm())
            .fold(0.0, f64::max)
    }

    /// Unit-trace null vector of the generator.
    pub fn stationary_state(&self) -> Result<Mat3> {
        let mut m = self.matrix;
        let mut rhs = Vec9::zeros();
        for k in 0..9 {
            m[(0, k)] = C64::new(0.0, 0.0);
        }
        for k in [0, 4, 8] {
            m[(0, k)] = C64::new(1.0, 0.0);
        }
        rhs[0] = C64::new(1.0, 0.0);
        let sol = m
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidState("generator has no unique stationary state".into()))?;
        Ok(linalg::unvectorize(&sol))
    }
}

/// The master equation for one schedule/bath pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MasterEquation {
    pub schedule: DriveSchedule,
    pub bath: BathSpec,
    /// Include `−i t_f [H_diag, ρ]`. It only rotates coherences.
    pub unitary_phases: bool,
}

/// Everything at one `s` that the generator needs.
struct Frame {
    gap: f64,
    m: f64,
    pre: Prefactors,
}

impl MasterEquation {
    pub fn new(schedule: DriveSchedule, bath: BathSpec) -> Self {
        Self { schedule, bath, unitary_phases: true }
    }

    pub fn without_phases(self) -> Self {
        Self { unitary_phases: false, ..self }
    }

    fn frame(&self, s: f64) -> Result<Frame> {
        let (a, b) = self.schedule.amplitudes(s)?;
        let gap = a.hypot(b);
        if !(gap > 0.0) {
            return Err(Error::DegenerateGap(s));
        }
        let (da, db) = self.schedule.amplitude_derivatives();
        let m = nonadiabatic_coupling(a, b, da, db).ok_or(Error::DegenerateGap(s))?;
        Ok(Frame { gap, m, pre: Prefactors::new(a, b, gap) })
    }

    /// Connection matrix `K_ab = ⟨ε_a|∂_s ε_b⟩`.
    pub fn connection(&self, s: f64) -> Result<Matrix3<f64>> {
        Ok(connection(self.frame(s)?.m))
    }

    /// Dissipator `𝓛` alone (no `t_f`, no phases, no rotation), scaled by `c`
    /// and added to `out`.
    fn add_dissipator(&self, out: &mut SMatrix<f64, 9, 9>, c: f64, fr: &Frame) {
        let cross = if self.bath.cross_correlations { 1.0 } else { 0.0 };
        for h in HARMONICS {
            let g = c * self.bath.gamma(h as f64 * fr.gap);
            let lx = fr.pre.matrix(Channel::X, h);
            let lz = fr.pre.matrix(Channel::Z, h);
            // γ_αβ = g [[1, c], [c, 1]] has eigenvectors (1, ±1)/√2, so the
            // double sum is g(1+c)/2 D[Lx + Lz] + g(1−c)/2 D[Lx − Lz].
            let plus = 0.5 * g * (1.0 + cross);
            let minus = 0.5 * g * (1.0 - cross);
            if plus != 0.0 {
                linalg::add_dissipator(out, plus, &(lx + lz));
            }
            if minus != 0.0 {
                linalg::add_dissipator(out, minus, &(lx - lz));
            }
        }
    }

    /// Generator split as `re + i·diag(im)`: the dissipator and rotation are
    /// real, the unitary phases are purely imaginary and diagonal.
    pub(crate) fn split_generator(&self, s: f64, tf: f64, variant: Variant) -> Result<SplitGenerator> {
        if !(tf > 0.0 && tf.is_finite()) {
            return Err(Error::param(format!("tf must be positive, got {tf}")));
        }
        let fr = self.frame(s)?;
        let mut re = SMatrix::<f64, 9, 9>::zeros();
        self.add_dissipator(&mut re, tf, &fr);
        let mut im = SVector::<f64, 9>::zeros();
        if self.unitary_phases {
            let energies = [-fr.gap, 0.0, fr.gap];
            for i in 0..3 {
                for j in 0..3 {
                    im[3 * i + j] = -tf * (energies[i] - energies[j]);
                }
            }
        }
        if variant == Variant::Full {
            linalg::add_commutator_right(&mut re, &connection(fr.m));
        }
        Ok(SplitGenerator { re, im })
    }

    /// Superoperator of `dρ/ds` at `s` for total time `tf`.
    pub fn generator(&self, s: f64, tf: f64, variant: Variant) -> Result<Generator> {
        let split = self.split_generator(s, tf, variant)?;
        let mut matrix: Super = split.re.map(|x| C64::new(x, 0.0));
        for k in 0..9 {
            matrix[(k, k)] += C64::new(0.0, split.im[k]);
        }
        Ok(Generator { matrix, variant, s, tf })
    }

    /// Component form of the same equation written with the rates
    /// `x₁..x₁₀`, `y₁..y₄`, evaluated entry by entry. Used as an independent
    /// check on [`MasterEquation::generator`].
    ///
    /// Dissipative part (each multiplied by `t_f`):
    ///
    /// ```text
    /// ρ̇11 = (x1+x3+x5+x7) ρ22 + x9 ρ33 − (x2+x4+x6+x8+x10) ρ11
    /// ρ̇22 = (x2+x4+x6+x8) ρ11 + (x1−x3−x5+x7) ρ33
    ///        − (x1+x2+x3−x4+x5−x6+x7+x8) ρ22
    /// ρ̇33 = x10 ρ11 + (x2−x4−x6+x8) ρ22 − (x1−x3−x5+x7+x9) ρ33
    /// ρ̇12 = −(½x1 + x2 + ½x3 + ½x5 + ½x7 + x8 + ½x10 + ½y1 + 9/2 y2 − ½y3 − 5/2 y4) ρ12
    ///        + (−x1 − x3 + x5 + x7) ρ23
    /// ρ̇13 = −(½Σx_{1,2,4,6..10} − ½x3 − ½x5 + 2y1 − y3 + y4) ρ13
    /// ρ̇23 = −(x1 + ½x2 − ½x4 − ½x6 + x7 + ½x8 + ½x9 + ½y1 + 9/2 y2 + 5/2 y3 + ½y4) ρ23
    ///        + (−x2 − x4 + x6 + x8) ρ12
    /// ```
    ///
    /// and `ρ̇21, ρ̇31, ρ̇32` follow with `x3 ↔ x5`, `x4 ↔ x6`, `y3 ↔ y4`.
    /// The `M(s)` rotation terms are
    ///
    /// ```text
    /// ρ̇11 += M(ρ12 + ρ21)           ρ̇12 += −M(ρ11 + ρ13 − ρ22)
    /// ρ̇22 += −M(ρ12+ρ21+ρ23+ρ32)    ρ̇13 += M(ρ12 + ρ23)
    /// ρ̇33 += M(ρ23 + ρ32)           ρ̇23 += M(ρ22 − ρ13 − ρ33)
    /// ```
    pub fn paper_rhs(&self, s: f64, tf: f64, variant: Variant, rho: &Mat3) -> Result<Mat3> {
        if !(tf > 0.0 && tf.is_finite()) {
            return Err(Error::param(format!("tf must be positive, got {tf}")));
        }
        let (a, b) = self.schedule.amplitudes(s)?;
        let gap = a.hypot(b);
        if !(gap > 0.0) {
            return Err(Error::DegenerateGap(s));
        }
        let rates = rates_from_amplitudes(&self.bath, a, b, gap, s);
        let mut d = component_dissipator(&rates, rho) * C64::new(tf, 0.0);
        if self.unitary_phases {
            let e = [-gap, 0.0, gap];
            for i in 0..3 {
                for j in 0..3 {
                    d[(i, j)] += C64::new(0.0, -tf * (e[i] - e[j])) * rho[(i, j)];
                }
            }
        }
        if variant == Variant::Full {
            let (da, db) = self.schedule.amplitude_derivatives();
            let m = C64::new(nonadiabatic_coupling(a, b, da, db).ok_or(Error::DegenerateGap(s))?, 0.0);
            let r = |i: usize, j: usize| rho[(i - 1, j - 1)];
            let add = [
                ((1, 1), m * (r(1, 2) + r(2, 1))),
                ((1, 2), -m * (r(1, 1) + r(1, 3) - r(2, 2))),
                ((1, 3), m * (r(1, 2) + r(2, 3))),
                ((2, 1), -m * (r(1, 1) + r(3, 1) - r(2, 2))),
                ((2, 2), -m * (r(1, 2) + r(2, 1) + r(2, 3) + r(3, 2))),
                ((2, 3), m * (r(2, 2) - r(1, 3) - r(3, 3))),
                ((3, 1), m * (r(2, 1) + r(3, 2))),
                ((3, 2), m * (r(2, 2) - r(3, 1) - r(3, 3))),
                ((3, 3), m * (r(2, 3) + r(3, 2))),
            ];
            for ((i, j), v) in add {
                d[(i - 1, j - 1)] += v;
            }
        }
        Ok(d)
    }

    /// Rate coefficients at `s`.
    pub fn rates(&self, s: f64) -> Result<RateSet> {
        crate::bath::rate_set(&self.bath, &self.schedule, s)
    }
}

fn connection(m: f64) -> Matrix3<f64> {
    Matrix3::new(
        0.0, -m, 0.0, //
        m, 0.0, m, //
        0.0, -m, 0.0,
    )
}

fn component_dissipator(rates: &RateSet, rho: &Mat3) -> Mat3 {
    let x = |i: usize| rates.xi(i);
    let y = |i: usize| rates.yi(i);
    let r = |i: usize, j: usize| rho[(i - 1, j - 1)];
    let c = |v: f64| C64::new(v, 0.0);

    let down12 = x(1) + x(3) + x(5) + x(7);
    let up12 = x(2) + x(4) + x(6) + x(8);
    let down23 = x(1) - x(3) - x(5) + x(7);
    let up23 = x(2) - x(4) - x(6) + x(8);

    let d11 = c(down12) * r(2, 2) + c(x(9)) * r(3, 3) - c(up12 + x(10)) * r(1, 1);
    let d22 = c(up12) * r(1, 1) + c(down23) * r(3, 3) - c(down12 + up23) * r(2, 2);
    let d33 = c(x(10)) * r(1, 1) + c(up23) * r(2, 2) - c(down23 + x(9)) * r(3, 3);

    // (primary, swapped) coherence coefficients; swapped = x3↔x5, x4↔x6, y3↔y4
    let decay12 = |x3: f64, x5: f64, y3: f64, y4: f64| {
        -(0.5 * x(1) + x(2) + 0.5 * x3 + 0.5 * x5 + 0.5 * x(7) + x(8) + 0.5 * x(10) + 0.5 * y(1)
            + 4.5 * y(2)
            - 0.5 * y3
            - 2.5 * y4)
    };
    let feed12 = |x3: f64, x5: f64| -x(1) - x3 + x5 + x(7);
    let decay13 = |x3: f64, x4: f64, x5: f64, x6: f64, y3: f64, y4: f64| {
        -(0.5 * (x(1) + x(2) + x4 + x6 + x(7) + x(8) + x(9) + x(10)) - 0.5 * x3 - 0.5 * x5 + 2.0 * y(1)
            - y3
            + y4)
    };
    let decay23 = |x4: f64, x6: f64, y3: f64, y4: f64| {
        -(x(1) + 0.5 * x(2) - 0.5 * x4 - 0.5 * x6 + x(7) + 0.5 * x(8) + 0.5 * x(9) + 0.5 * y(1)
            + 4.5 * y(2)
            + 2.5 * y3
            + 0.5 * y4)
    };
    let feed23 = |x4: f64, x6: f64| -x(2) - x4 + x6 + x(8);

    let (x3, x4, x5, x6) = (x(3), x(4), x(5), x(6));
    let (y3, y4) = (y(3), y(4));

    let d12 = c(decay12(x3, x5, y3, y4)) * r(1, 2) + c(feed12(x3, x5)) * r(2, 3);
    let d21 = c(decay12(x5, x3, y4, y3)) * r(2, 1) + c(feed12(x5, x3)) * r(3, 2);
    let d13 = c(decay13(x3, x4, x5, x6, y3, y4)) * r(1, 3);
    let d31 = c(decay13(x5, x6, x3, x4, y4, y3)) * r(3, 1);
    let d23 = c(decay23(x4, x6, y3, y4)) * r(2, 3) + c(feed23(x4, x6)) * r(1, 2);
    let d32 = c(decay23(x6, x4, y4, y3)) * r(3, 2) + c(feed23(x6, x4)) * r(2, 1);

    Mat3::new(d11, d12, d13, d21, d22, d23, d31, d32, d33)
}

/// Generator at `s` with phases included.
pub fn build_generator(
    sched: &DriveSchedule,
    bath: &BathSpec,
    s: f64,
    tf: f64,
    variant: Variant,
) -> Result<Generator> {
    MasterEquation::new(*sched, *bath).generator(s, tf, variant)
}

/// Component-form right-hand side with phases included.
pub fn paper_rhs(
    sched: &DriveSchedule,
    bath: &BathSpec,
    s: f64,
    tf: f64,
    variant: Variant,
    rho: &Mat3,
) -> Result<Mat3> {
    MasterEquation::new(*sched, *bath).paper_rhs(s, tf, variant, rho)
}
