//! Hermitian eigendecomposition by cyclic Jacobi sweeps, plus a polar
//! correction that snaps a near-unitary map to an exactly unitary one.
//!
//! The sizes in this crate stay below the group order cap, so a compact
//! quadratically convergent Jacobi iteration is plenty and keeps the
//! dependency surface flat.

use num_complex::Complex;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::LinearMap;
use crate::scalar::Scalar;

/// Errors from the eigensolver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    /// Eigendecomposition only applies to square maps.
    #[error("eigendecomposition needs a square map, got {cod}x{dom}")]
    NotSquare { cod: usize, dom: usize },

    /// The off-diagonal mass refused to die out.
    #[error("Jacobi iteration stalled with off-diagonal norm {off} after {sweeps} sweeps")]
    NoConvergence { off: f64, sweeps: usize },

    /// Polar correction hit a singular factor.
    #[error("cannot unitarize a map with near-zero singular value {sigma_sq}")]
    Singular { sigma_sq: f64 },
}

/// A Hermitian eigendecomposition: `a * vectors == vectors * diag(values)`
/// with `vectors` unitary and `values` ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: LinearMap<T>,
}

const MAX_SWEEPS: usize = 64;

/// Diagonalizes the Hermitian part `(a + a-dagger)/2` of a square map.
/// The iteration stops once the off-diagonal Frobenius norm drops below
/// `tol` times the overall scale of the input.
pub fn hermitian_eigen<T: Scalar>(
    a: &LinearMap<T>,
    tol: T,
) -> Result<HermitianEigen<T>, EigenError> {
    let n = a.cod();
    if !a.is_square() {
        return Err(EigenError::NotSquare {
            cod: a.cod(),
            dom: a.dom(),
        });
    }
    let half = T::from_f64_lossy(0.5);
    let mut b: Vec<Complex<T>> = (0..n * n)
        .map(|i| {
            let (r, c) = (i / n, i % n);
            (a.entry(r, c) + a.entry(c, r).conj()) * half
        })
        .collect();
    let mut v: Vec<Complex<T>> = (0..n * n)
        .map(|i| {
            if i / n == i % n {
                Complex::one()
            } else {
                Complex::zero()
            }
        })
        .collect();

    let scale = a.norm().max(T::one());
    let target = tol * scale;
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&b, n);
        if off <= target {
            break;
        }
        if sweeps >= MAX_SWEEPS {
            return Err(EigenError::NoConvergence {
                off: off.to_f64().unwrap_or(f64::NAN),
                sweeps,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate_out(&mut b, &mut v, n, p, q);
            }
        }
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| b[i * n + i].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let values: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    let vectors = LinearMap::from_fn(n, n, |r, c| v[r * n + order[c]]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm<T: Scalar>(b: &[Complex<T>], n: usize) -> T {
    let mut sum = T::zero();
    for r in 0..n {
        for c in 0..n {
            if r != c {
                sum = sum + b[r * n + c].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation annihilating the `(p, q)` entry of the Hermitian
/// working matrix, accumulated into the eigenvector columns.
fn rotate_out<T: Scalar>(b: &mut [Complex<T>], v: &mut [Complex<T>], n: usize, p: usize, q: usize) {
    let beta = b[p * n + q];
    let mag = beta.norm();
    if mag == T::zero() {
        return;
    }
    let phase = beta / Complex::new(mag, T::zero());
    let alpha = b[p * n + p].re;
    let gamma = b[q * n + q].re;
    let two = T::one() + T::one();
    let tau = (gamma - alpha) / (two * mag);
    let sign = if tau < T::zero() { -T::one() } else { T::one() };
    let t = sign / (tau.abs() + (T::one() + tau * tau).sqrt());
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    // The rotation is J = [[c, s], [-s*conj(phase), c*conj(phase)]] on the
    // (p, q) plane; apply B <- J-dagger B J and V <- V J with O(n) work.
    let cc = Complex::new(c, T::zero());
    let ss = Complex::new(s, T::zero());
    let phase_conj = phase.conj();
    for k in 0..n {
        let bp = b[k * n + p];
        let bq = b[k * n + q];
        b[k * n + p] = bp * cc - bq * phase_conj * ss;
        b[k * n + q] = bp * ss + bq * phase_conj * cc;
        let vp = v[k * n + p];
        let vq = v[k * n + q];
        v[k * n + p] = vp * cc - vq * phase_conj * ss;
        v[k * n + q] = vp * ss + vq * phase_conj * cc;
    }
    for k in 0..n {
        let rp = b[p * n + k];
        let rq = b[q * n + k];
        b[p * n + k] = rp * cc - rq * phase * ss;
        b[q * n + k] = rp * ss + rq * phase * cc;
    }
    // Clean the zeroed pair explicitly to keep roundoff from lingering.
    let fixed = (b[p * n + q] + b[q * n + p].conj()) * T::from_f64_lossy(0.5);
    b[p * n + q] = fixed;
    b[q * n + p] = fixed.conj();
}

/// Snaps a square map to the nearest unitary via the polar decomposition:
/// `u * (u-dagger u)^(-1/2)`.
pub fn unitarize<T: Scalar>(u: &LinearMap<T>) -> Result<LinearMap<T>, EigenError> {
    if !u.is_square() {
        return Err(EigenError::NotSquare {
            cod: u.cod(),
            dom: u.dom(),
        });
    }
    let gram = u.adjoint().compose(u).expect("square");
    let eig = hermitian_eigen(&gram, T::strict_tol())?;
    let floor = T::strict_tol();
    for &lambda in &eig.values {
        if lambda <= floor {
            return Err(EigenError::Singular {
                sigma_sq: lambda.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let n = u.cod();
    let w = &eig.vectors;
    let inv_sqrt = LinearMap::from_fn(n, n, |r, c| {
        if r == c {
            Complex::new(T::one() / eig.values[r].sqrt(), T::zero())
        } else {
            Complex::zero()
        }
    });
    let correction = w
        .compose(&inv_sqrt)
        .and_then(|m| m.compose(&w.adjoint()))
        .expect("square");
    Ok(u.compose(&correction).expect("square"))
}
