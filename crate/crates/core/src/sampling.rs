//! Seeded random matrices: Haar unitaries, contractions, Hermitian and
//! normal test matrices.
//!
//! Every work item gets its own stream, `item_rng(seed, index)`, so sampled
//! output never depends on scheduling.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, diag, nearest_unitary, zeros, ComplexMatrix, C64};

/// Independent RNG stream for work item `index` under a global `seed`.
pub fn item_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let mut m = zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            m[(i, j)] = complex_gaussian(rng);
        }
    }
    m
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(n, n, rng);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            c(1.0, 0.0)
        };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    // QR from Householder reflections is unitary to roundoff; polish anyway.
    nearest_unitary(&q)
}

/// Random Hermitian matrix `(G + G*)/2`.
pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian_matrix(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Random strict contraction `P diag(σ) Q*` with Haar `P, Q` and singular
/// values uniform in `[0, max_sigma)`.
pub fn random_contraction_with<R: Rng + ?Sized>(
    n: usize,
    max_sigma: f64,
    rng: &mut R,
) -> ComplexMatrix {
    let p = haar_unitary(n, rng);
    let q = haar_unitary(n, rng);
    let s: Vec<C64> = (0..n)
        .map(|_| c(rng.random::<f64>() * max_sigma, 0.0))
        .collect();
    p * diag(&s) * q.adjoint()
}

pub fn random_contraction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    random_contraction_with(n, 0.98, rng)
}

/// Random contraction whose first `isometric` singular values equal one, so
/// that its defect number is `n - isometric`.
pub fn random_partial_isometry_mix<R: Rng + ?Sized>(
    n: usize,
    isometric: usize,
    rng: &mut R,
) -> ComplexMatrix {
    let p = haar_unitary(n, rng);
    let q = haar_unitary(n, rng);
    let s: Vec<C64> = (0..n)
        .map(|j| {
            if j < isometric {
                c(1.0, 0.0)
            } else {
                c(rng.random::<f64>() * 0.95, 0.0)
            }
        })
        .collect();
    p * diag(&s) * q.adjoint()
}

/// Random normal matrix `Q diag(eigs) Q*`.
pub fn random_normal<R: Rng + ?Sized>(eigs: &[C64], rng: &mut R) -> ComplexMatrix {
    let q = haar_unitary(eigs.len(), rng);
    &q * diag(eigs) * q.adjoint()
}

/// Uniform point in the closed disk of the given radius.
pub fn random_in_disk<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    let t = rng.random::<f64>() * std::f64::consts::TAU;
    C64::from_polar(r, t)
}
