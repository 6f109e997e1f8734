#![allow(dead_code)]

use darkcharge::{Basis, DensityMatrix, Mat3, C64};
use nalgebra::Matrix3;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn ginibre(rng: &mut impl Rng) -> Mat3 {
    Mat3::from_fn(|_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Random full-rank mixed state (Hilbert-Schmidt measure).
pub fn random_state(rng: &mut impl Rng, basis: Basis) -> DensityMatrix {
    state_from(ginibre(rng), basis)
}

pub fn state_from(g: Mat3, basis: Basis) -> DensityMatrix {
    let rho = g * g.adjoint();
    let rho = rho / rho.trace();
    // exact hermiticity after the division
    let rho = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(rho, basis).expect("valid random state")
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of R's
/// diagonal moved into Q.
pub fn haar_unitary(rng: &mut impl Rng) -> Mat3 {
    let qr = ginibre(rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = Mat3::from_diagonal(&nalgebra::Vector3::from_fn(|i, _| {
        let d = r[(i, i)];
        d / d.norm()
    }));
    q * phases
}

pub fn conjugate(u: &Mat3, rho: &DensityMatrix) -> DensityMatrix {
    let m = u * rho.entries * u.adjoint();
    DensityMatrix::new((m + m.adjoint()) * C64::new(0.5, 0.0), rho.basis).expect("unitary image is a state")
}

pub fn real(m: &Matrix3<f64>) -> Mat3 {
    m.map(|x| C64::new(x, 0.0))
}

pub fn max_abs(m: &Mat3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
