//! Small dense helpers for 3×3 operators and their 9×9 superoperators.

use nalgebra::{Matrix3, SMatrix, SVector};
use num_complex::Complex64 as C64;

use crate::Mat3;

pub(crate) type Super = SMatrix<C64, 9, 9>;
pub(crate) type Vec9 = SVector<C64, 9>;

pub(crate) fn complexify(m: &Matrix3<f64>) -> Mat3 {
    m.map(|x| C64::new(x, 0.0))
}

/// Row-major vectorization: `vec(ρ)[3i + j] = ρ_ij`.
pub(crate) fn vectorize(m: &Mat3) -> Vec9 {
    Vec9::from_fn(|k, _| m[(k / 3, k % 3)])
}

pub(crate) fn unvectorize(v: &Vec9) -> Mat3 {
    Mat3::from_fn(|i, j| v[3 * i + j])
}

/// Superoperator of `ρ ↦ A ρ B` under row-major vectorization, i.e. `A ⊗ Bᵀ`.
#[cfg(test)]
pub(crate) fn sandwich(a: &Matrix3<f64>, b: &Matrix3<f64>) -> SMatrix<f64, 9, 9> {
    SMatrix::<f64, 9, 9>::from_fn(|r, c| {
        let (i, j) = (r / 3, r % 3);
        let (k, l) = (c / 3, c % 3);
        a[(i, k)] * b[(l, j)]
    })
}

/// Superoperator of `ρ ↦ L ρ Lᵀ − ½{LᵀL, ρ}` for a real jump operator `L`.
#[cfg(test)]
pub(crate) fn dissipator(l: &Matrix3<f64>) -> SMatrix<f64, 9, 9> {
    let lt = l.transpose();
    let ltl = lt * l;
    let id = Matrix3::identity();
    sandwich(l, &lt) - 0.5 * (sandwich(&ltl, &id) + sandwich(&id, &ltl))
}

/// `out += c · D[L]` without temporaries; the hot path of the integrator.
pub(crate) fn add_dissipator(out: &mut SMatrix<f64, 9, 9>, c: f64, l: &Matrix3<f64>) {
    let ltl = l.transpose() * l;
    for i in 0..3 {
        for j in 0..3 {
            let r = 3 * i + j;
            for k in 0..3 {
                let lik = c * l[(i, k)];
                let half_ik = 0.5 * c * ltl[(i, k)];
                for m in 0..3 {
                    let mut v = lik * l[(j, m)];
                    if j == m {
                        v -= half_ik;
                    }
                    if i == k {
                        v -= 0.5 * c * ltl[(m, j)];
                    }
                    out[(r, 3 * k + m)] += v;
                }
            }
        }
    }
}

/// `out += ` superoperator of `ρ ↦ ρ K − K ρ`.
pub(crate) fn add_commutator_right(out: &mut SMatrix<f64, 9, 9>, k: &Matrix3<f64>) {
    for i in 0..3 {
        for j in 0..3 {
            let r = 3 * i + j;
            for m in 0..3 {
                // (ρK)_ij = Σ_m ρ_im K_mj ; (Kρ)_ij = Σ_m K_im ρ_mj
                out[(r, 3 * i + m)] += k[(m, j)];
                out[(r, 3 * m + j)] -= k[(i, m)];
            }
        }
    }
}

/// Superoperator of `ρ ↦ ρ K − K ρ`.
#[cfg(test)]
pub(crate) fn commutator_right(k: &Matrix3<f64>) -> SMatrix<f64, 9, 9> {
    let id = Matrix3::identity();
    sandwich(&id, k) - sandwich(k, &id)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub(crate) fn hermitian_eigenvalues(m: &Mat3) -> [f64; 3] {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut vals = [eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2]];
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

pub(crate) fn max_abs(m: &Mat3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
