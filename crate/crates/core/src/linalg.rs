//! Dense complex linear algebra primitives: Hermitian spectra, PSD square
//! roots, defect data, the Cayley chart on the unitary group, and the
//! structural predicates (contraction, unitary, dilation).
//!
//! Matrices are plain [`nalgebra::DMatrix`] values over `Complex<f64>`.
//! Singular value and general eigenvalue decompositions are delegated to
//! `faer`, whose complex SVD stays accurate when singular values cluster
//! (as they do at 1 for near-isometries).

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

/// Slack allowed above 1 in the operator norm before a matrix stops counting
/// as a contraction.
pub const CONTRACTION_SLACK: f64 = 1e-8;

/// Default relative rank tolerance on the singular values of the defect
/// operators. Roundoff in `I - A*A` is of order 1e-16, so its square root
/// carries noise of order 1e-8; the cutoff has to sit above that.
pub const DEFAULT_RANK_TOL: f64 = 1e-7;

pub const UNITARY_TOL: f64 = 1e-8;
pub const DILATION_TOL: f64 = 1e-9;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(rows, cols)
}

/// Builds a matrix from row-major entries.
pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<ComplexMatrix> {
    if entries.len() != rows * cols {
        return Err(Error::Shape(format!(
            "{} entries for a {rows}x{cols} matrix",
            entries.len()
        )));
    }
    let m = ComplexMatrix::from_row_slice(rows, cols, entries);
    check_finite(&m)?;
    Ok(m)
}

/// Real diagonal matrix.
pub fn diag_real(values: &[f64]) -> ComplexMatrix {
    let v: Vec<C64> = values.iter().map(|&x| c(x, 0.0)).collect();
    diag(&v)
}

pub fn diag(values: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values))
}

/// The `n`-dimensional unilateral shift: `S e_j = e_{j+1}`, ones on the
/// subdiagonal.
pub fn shift(n: usize) -> ComplexMatrix {
    let mut s = zeros(n, n);
    for j in 0..n.saturating_sub(1) {
        s[(j + 1, j)] = c(1.0, 0.0);
    }
    s
}

pub fn check_finite(m: &ComplexMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub(crate) fn require_square(m: &ComplexMatrix, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::Shape(format!(
            "{what} must be square and nonempty, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// `(M + M*) / 2`.
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Frobenius norm.
pub fn fro(m: &ComplexMatrix) -> f64 {
    m.norm()
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = match to_faer(m).singular_values() {
        Ok(s) => s,
        Err(_) => m.clone().singular_values().iter().copied().collect(),
    };
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Spectral (operator) norm.
pub fn op_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// `‖U*U - I‖_F`.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    fro(&(u.adjoint() * u - identity(u.nrows())))
}

/// Dimension from which Hermitian eigenvalues are computed with faer, which
/// is much faster than nalgebra's QR iteration on larger inputs.
const FAER_EIGEN_MIN_DIM: usize = 32;

/// Eigenvalues of a Hermitian matrix in descending order, without checks.
///
/// The input is symmetrized first, so the result is well defined for any
/// square input. This is the hot path behind every support-function
/// evaluation.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let h = hermitian_part(m);
    let mut ev: Vec<f64> = if h.nrows() >= FAER_EIGEN_MIN_DIM {
        to_faer(&h)
            .self_adjoint_eigenvalues(faer::Side::Lower)
            .unwrap_or_else(|_| h.symmetric_eigenvalues().iter().copied().collect())
    } else {
        h.symmetric_eigenvalues().iter().copied().collect()
    };
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Full spectrum of a Hermitian matrix: eigenvalues sorted descending and
/// the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Q Λ Q*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d: Vec<f64> = self.eigenvalues.clone();
        let q = &self.eigenvectors;
        q * diag_real(&d) * q.adjoint()
    }

    /// Applies `f` to the eigenvalues: `Q f(Λ) Q*`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let d: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        let q = &self.eigenvectors;
        q * diag_real(&d) * q.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Fails with `NotHermitian` when `‖M - M*‖_F > tol · ‖M‖_F`. The matrix is
/// averaged with its adjoint before solving. Eigenvalues come out sorted
/// descending with a stable sort, so ties keep the solver's order.
pub fn hermitian_spectrum(m: &ComplexMatrix, tol: f64) -> Result<HermitianSpectrum> {
    require_square(m, "Hermitian input")?;
    check_finite(m)?;
    let asym = fro(&(m - m.adjoint()));
    let scale = fro(m);
    if asym > tol * scale {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// `(e^{iθ}A + e^{-iθ}A*) / 2`, Hermitian by construction.
pub fn rotated_real_part(a: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    require_square(a, "A")?;
    Ok(rotated_real_part_unchecked(a, theta))
}

pub(crate) fn rotated_real_part_unchecked(a: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let w = C64::from_polar(1.0, theta);
    hermitian_part(&a.map(|z| z * w))
}

/// Hermitian PSD square root. Eigenvalues down to `-1e-8·‖M‖` are clamped
/// to zero; anything more negative is rejected.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spec = hermitian_spectrum(m, 1e-8)?;
    let norm = spec
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &x| acc.max(x.abs()));
    let lowest = spec.eigenvalues.last().copied().unwrap_or(0.0);
    if lowest < -1e-8 * norm {
        return Err(Error::NotPsd { eigenvalue: lowest });
    }
    Ok(hermitian_part(&spec.map(|x| x.max(0.0).sqrt())))
}

/// Defect operators `D_A = (I - A*A)^{1/2}`, `D_{A*} = (I - AA*)^{1/2}`,
/// their numerical ranks and orthonormal bases of their ranges.
#[derive(Debug, Clone)]
pub struct DefectData {
    pub defect_op: ComplexMatrix,
    pub defect_op_adj: ComplexMatrix,
    pub defect_rank: usize,
    pub defect_rank_adj: usize,
    /// `n × d_A`, orthonormal columns spanning `ran D_A`.
    pub defect_basis: ComplexMatrix,
    /// `n × d_{A*}`, orthonormal columns spanning `ran D_{A*}`.
    pub defect_basis_adj: ComplexMatrix,
}

/// Computes the defect data of a square contraction from one SVD
/// `A = P Σ Q*`: `D_A = Q (I - Σ²)^{1/2} Q*` and `D_{A*} = P (I - Σ²)^{1/2} P*`.
///
/// With this pairing `A` maps the `j`-th column of the defect basis to
/// `σ_j` times the `j`-th column of the adjoint defect basis.
pub fn defect_data(a: &ComplexMatrix, rank_tol: f64) -> Result<DefectData> {
    let n = require_square(a, "A")?;
    check_finite(a)?;
    let Svd {
        u,
        singular_values: sigma,
        v,
    } = svd(a)?;
    if sigma[0] > 1.0 + CONTRACTION_SLACK {
        return Err(Error::NotContraction { norm: sigma[0] });
    }
    let defect: Vec<f64> = sigma
        .iter()
        .map(|&s| ((1.0 - s) * (1.0 + s)).max(0.0).sqrt())
        .collect();
    let top = defect.iter().fold(0.0_f64, |m, &x| m.max(x));
    let cutoff = rank_tol * top.max(1.0);

    let (p, q) = (u, v);
    let d = diag_real(&defect);
    let defect_op = hermitian_part(&(&q * &d * q.adjoint()));
    let defect_op_adj = hermitian_part(&(&p * &d * p.adjoint()));

    // Defects are ascending in index, so kept directions form a suffix.
    let kept: Vec<usize> = (0..n).filter(|&j| defect[j] > cutoff).collect();
    let rank = kept.len();
    let mut basis = zeros(n, rank);
    let mut basis_adj = zeros(n, rank);
    for (dst, &src) in kept.iter().enumerate() {
        basis.set_column(dst, &q.column(src));
        basis_adj.set_column(dst, &p.column(src));
    }
    Ok(DefectData {
        defect_op,
        defect_op_adj,
        defect_rank: rank,
        defect_rank_adj: rank,
        defect_basis: basis,
        defect_basis_adj: basis_adj,
    })
}

/// Cayley chart `X ↦ (I - X)(I + X)^{-1}` from skew-Hermitian matrices onto
/// the unitary group. The input is antisymmetrized first.
pub fn cayley_unitary(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = require_square(x, "X")?;
    check_finite(x)?;
    let skew = (x - x.adjoint()).scale(0.5);
    let id = identity(n);
    let inv = (&id + &skew).try_inverse().ok_or(Error::SingularChart)?;
    let u = (&id - &skew) * inv;
    if unitarity_residual(&u) > 1e-10 * (n as f64).max(1.0) {
        return Err(Error::SingularChart);
    }
    Ok(u)
}

/// Skew-Hermitian `d × d` matrix from `d²` real coordinates: the diagonal
/// carries `i·p_j`, each strict upper entry a complex pair.
pub fn skew_from_params(d: usize, p: &[f64]) -> ComplexMatrix {
    assert_eq!(p.len(), d * d, "need d² parameters");
    let mut x = zeros(d, d);
    let mut it = p.iter().copied();
    for j in 0..d {
        x[(j, j)] = c(0.0, it.next().unwrap());
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let z = c(it.next().unwrap(), it.next().unwrap());
            x[(i, j)] = z;
            x[(j, i)] = -z.conj();
        }
    }
    x
}

/// Results of the structural predicates for a pair `(A, B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuralChecks {
    pub a_is_contraction: bool,
    pub a_is_unitary: bool,
    pub b_is_unitary: bool,
    pub b_dilates_a: bool,
}

pub fn structural_checks(a: &ComplexMatrix, b: &ComplexMatrix) -> StructuralChecks {
    StructuralChecks {
        a_is_contraction: is_contraction(a),
        a_is_unitary: is_unitary(a),
        b_is_unitary: is_unitary(b),
        b_dilates_a: is_dilation_of(b, a),
    }
}

pub fn is_contraction(a: &ComplexMatrix) -> bool {
    !a.is_empty() && op_norm(a) <= 1.0 + CONTRACTION_SLACK
}

pub fn is_unitary(u: &ComplexMatrix) -> bool {
    u.nrows() == u.ncols()
        && !u.is_empty()
        && unitarity_residual(u) <= UNITARY_TOL * (u.nrows() as f64).sqrt()
}

/// True if the leading `dim(A)` principal block of `B` equals `A` to 1e-9.
pub fn is_dilation_of(b: &ComplexMatrix, a: &ComplexMatrix) -> bool {
    let (n, m) = a.shape();
    if n != m || b.nrows() != b.ncols() || b.nrows() < n || n == 0 {
        return false;
    }
    let block = b.view((0, 0), (n, n));
    block
        .iter()
        .zip(a.iter())
        .all(|(x, y)| (x - y).norm() <= DILATION_TOL)
}

/// `k`-th largest eigenvalue (1-based) of a Hermitian matrix.
pub fn lambda_k(m: &ComplexMatrix, k: usize) -> Result<f64> {
    let n = require_square(m, "M")?;
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, dim: n });
    }
    let spec = hermitian_spectrum(m, 1e-8)?;
    Ok(spec.eigenvalues[k - 1])
}

/// `ν_k(M) = -λ_k(-M)`, the `k`-th smallest eigenvalue.
pub fn nu_k(m: &ComplexMatrix, k: usize) -> Result<f64> {
    Ok(-lambda_k(&(-m), k)?)
}

/// Block matrix `[[tl, tr], [bl, br]]`.
pub fn block2(
    tl: &ComplexMatrix,
    tr: &ComplexMatrix,
    bl: &ComplexMatrix,
    br: &ComplexMatrix,
) -> ComplexMatrix {
    let (r0, c0) = tl.shape();
    let (r1, c1) = br.shape();
    assert_eq!(tr.shape(), (r0, c1));
    assert_eq!(bl.shape(), (r1, c0));
    let mut out = zeros(r0 + r1, c0 + c1);
    out.view_mut((0, 0), (r0, c0)).copy_from(tl);
    out.view_mut((0, c0), (r0, c1)).copy_from(tr);
    out.view_mut((r0, 0), (r1, c0)).copy_from(bl);
    out.view_mut((r0, c0), (r1, c1)).copy_from(br);
    out
}

/// `A ⊕ B`.
pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    block2(
        a,
        &zeros(a.nrows(), b.ncols()),
        &zeros(b.nrows(), a.ncols()),
        b,
    )
}

/// Leading `n × n` principal block.
pub fn leading_block(m: &ComplexMatrix, n: usize) -> ComplexMatrix {
    m.view((0, 0), (n, n)).into_owned()
}

/// Orthonormal basis of the orthogonal complement of the column span of an
/// `n × d` matrix with orthonormal columns.
pub fn orthonormal_complement(basis: &ComplexMatrix) -> ComplexMatrix {
    let n = basis.nrows();
    let d = basis.ncols();
    if d == 0 {
        return identity(n);
    }
    let proj = identity(n) - basis * basis.adjoint();
    let spec = SymmetricEigen::new(hermitian_part(&proj));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| spec.eigenvalues[b].total_cmp(&spec.eigenvalues[a]));
    let mut out = zeros(n, n - d);
    for (dst, &src) in order.iter().take(n - d).enumerate() {
        out.set_column(dst, &spec.eigenvectors.column(src));
    }
    out
}

/// Eigenvalues of a general square matrix, in no particular order.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    require_square(m, "M")?;
    check_finite(m)?;
    let eigs = to_faer(m)
        .eigenvalues()
        .map_err(|_| Error::NoConvergence("eigenvalue iteration"))?;
    Ok(eigs.into_iter().map(|z| c(z.re, z.im)).collect())
}

/// Singular value decomposition `M = U diag(σ) V*` with `σ` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    check_finite(m)?;
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Ok(Svd {
            u: identity(rows),
            singular_values: Vec::new(),
            v: identity(cols),
        });
    }
    let dec = to_faer(m)
        .svd()
        .map_err(|_| Error::NoConvergence("singular value decomposition"))?;
    let s = dec.S().column_vector();
    let sigma: Vec<f64> = (0..rows.min(cols)).map(|i| s[i].re).collect();
    let mut order: Vec<usize> = (0..sigma.len()).collect();
    order.sort_by(|&x, &y| sigma[y].total_cmp(&sigma[x]));
    let (fu, fv) = (dec.U(), dec.V());
    // Full U and V; columns past min(rows, cols) keep their position.
    let permute = |k: usize| order.get(k).copied().unwrap_or(k);
    let u = ComplexMatrix::from_fn(rows, rows, |i, j| {
        let z = fu[(i, permute(j))];
        c(z.re, z.im)
    });
    let v = ComplexMatrix::from_fn(cols, cols, |i, j| {
        let z = fv[(i, permute(j))];
        c(z.re, z.im)
    });
    Ok(Svd {
        u,
        singular_values: order.iter().map(|&i| sigma[i]).collect(),
        v,
    })
}

fn to_faer(m: &ComplexMatrix) -> faer::Mat<faer::c64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| {
        let z = m[(i, j)];
        faer::c64::new(z.re, z.im)
    })
}

/// `σ_min(z - m)`: zero iff `z ∈ σ(m)`, and never larger than the distance
/// from `z` to `σ(m)`. Unlike computed eigenvalues it stays accurate for
/// non-normal `m`.
pub fn resolvent_gap(m: &ComplexMatrix, z: C64) -> Result<f64> {
    let n = require_square(m, "M")?;
    check_finite(m)?;
    Ok(
        singular_values(&(ComplexMatrix::from_diagonal_element(n, n, z) - m))
            .last()
            .copied()
            .unwrap_or(f64::INFINITY),
    )
}

/// Nearest unitary matrix in Frobenius norm (unitary polar factor).
pub fn nearest_unitary(m: &ComplexMatrix) -> ComplexMatrix {
    if m.is_empty() {
        return m.clone();
    }
    match svd(m) {
        Ok(d) => {
            let k = m.nrows().min(m.ncols());
            d.u.columns(0, k) * d.v.columns(0, k).adjoint()
        }
        Err(_) => m.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{haar_unitary, item_rng, random_contraction, random_hermitian};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn eigenvalues_of_nilpotent_shifts_terminate() {
        for n in 2..7 {
            let eigs = eigenvalues(&shift(n)).unwrap();
            assert_eq!(eigs.len(), n);
            // Perturbation theory: |λ| ~ ε^{1/n} for an n x n Jordan block.
            assert!(eigs.iter().all(|z| z.norm() < 1e-2), "n = {n}: {eigs:?}");
            assert_abs_diff_eq!(
                resolvent_gap(&shift(n), c(0.0, 0.0)).unwrap(),
                0.0,
                epsilon = 1e-14
            );
        }
        let d = diag(&[c(1.0, 2.0), c(-0.5, 0.0)]);
        let mut eigs = eigenvalues(&d).unwrap();
        eigs.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert_abs_diff_eq!(eigs[1].im, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            resolvent_gap(&d, c(1.0, 1.0)).unwrap(),
            1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let s = hermitian_spectrum(&diag_real(&[1.0, 3.0, 2.0]), 1e-12).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn shift_real_part_matches_characteristic_polynomial() {
        let h = hermitian_part(&shift(3));
        let s = hermitian_spectrum(&h, 1e-12).unwrap();
        // det(H - λI) = -λ³ + λ/2 for the tridiagonal matrix with 1/2 off the diagonal.
        for &l in &s.eigenvalues {
            assert_abs_diff_eq!(-l * l * l + l / 2.0, 0.0, epsilon = 1e-14);
        }
        let r = FRAC_PI_4.cos();
        assert_abs_diff_eq!(s.eigenvalues[0], r, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[2], -r, epsilon = 1e-14);
    }

    #[test]
    fn zero_matrix_spectrum() {
        let s = hermitian_spectrum(&zeros(4, 4), 1e-12).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0; 4]);
    }

    #[test]
    fn spectrum_reconstructs_and_is_orthonormal() {
        let mut rng = item_rng(5, 0);
        let m = random_hermitian(6, &mut rng);
        let s = hermitian_spectrum(&m, 1e-12).unwrap();
        assert!(fro(&(s.reconstruct() - &m)) <= 1e-9 * fro(&m));
        let q = &s.eigenvectors;
        assert!(fro(&(q.adjoint() * q - identity(6))) <= 1e-10 * 6.0);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn non_hermitian_rejected() {
        let e = hermitian_spectrum(&shift(3), 1e-10).unwrap_err();
        assert!(matches!(e, Error::NotHermitian { .. }));
        let mut m = identity(2);
        m[(0, 1)] = c(f64::NAN, 0.0);
        assert_eq!(hermitian_spectrum(&m, 1e-10).unwrap_err(), Error::NonFinite);
    }

    #[test]
    fn rotated_real_part_cases() {
        let mut rng = item_rng(11, 0);
        let a = random_contraction(5, &mut rng);
        assert_eq!(rotated_real_part(&a, 0.0).unwrap(), hermitian_part(&a));

        let ii = identity(2).map(|z| z * c(0.0, 1.0));
        let r = rotated_real_part(&ii, FRAC_PI_2).unwrap();
        assert!(fro(&(r + identity(2))) < 1e-15);

        let theta = 1.234;
        let r = rotated_real_part(&a, theta).unwrap();
        let w = C64::from_polar(1.0, theta);
        for i in 0..5 {
            for j in 0..5 {
                let brute = (w * a[(i, j)] + w.conj() * a[(j, i)].conj()) / 2.0;
                assert!((r[(i, j)] - brute).norm() <= 1e-14);
            }
        }
        assert_eq!(r, r.adjoint());
    }

    #[test]
    fn psd_sqrt_cases() {
        assert!(fro(&(psd_sqrt(&identity(3)).unwrap() - identity(3))) < 1e-14);
        let r = psd_sqrt(&diag_real(&[4.0, 9.0])).unwrap();
        assert!(fro(&(r - diag_real(&[2.0, 3.0]))) < 1e-14);

        let mut rng = item_rng(12, 0);
        let a = random_contraction(4, &mut rng);
        let m = identity(4) - a.adjoint() * &a;
        let r = psd_sqrt(&m).unwrap();
        assert!(fro(&(&r * &r - &m)) <= 1e-9 * fro(&m).max(1.0));

        let e = psd_sqrt(&diag_real(&[1.0, -0.5])).unwrap_err();
        assert!(matches!(e, Error::NotPsd { .. }));
        // Tiny negative roundoff is clamped.
        assert!(psd_sqrt(&diag_real(&[1.0, -1e-12])).is_ok());
    }

    #[test]
    fn defect_data_cases() {
        let d = defect_data(&zeros(3, 3), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(d.defect_rank, 3);
        assert!(fro(&(d.defect_op.clone() - identity(3))) < 1e-14);

        let mut rng = item_rng(13, 0);
        let u = haar_unitary(4, &mut rng);
        let d = defect_data(&u, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(d.defect_rank, 0);
        assert_eq!(d.defect_rank_adj, 0);
        assert!(fro(&d.defect_op) < 1e-7);

        let a = diag_real(&[1.0, 0.5]);
        let d = defect_data(&a, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(d.defect_rank, 1);
        let expected = diag_real(&[0.0, 3f64.sqrt() / 2.0]);
        assert!(fro(&(d.defect_op.clone() - expected)) < 1e-12);

        let e = defect_data(&diag_real(&[2.0, 0.0]), DEFAULT_RANK_TOL).unwrap_err();
        assert!(matches!(e, Error::NotContraction { .. }));
    }

    #[test]
    fn defect_squares_and_intertwining() {
        let mut rng = item_rng(14, 0);
        let a = random_contraction(5, &mut rng);
        let d = defect_data(&a, DEFAULT_RANK_TOL).unwrap();
        let lhs = &d.defect_op * &d.defect_op;
        assert!(fro(&(lhs - (identity(5) - a.adjoint() * &a))) < 1e-9);
        let lhs = &d.defect_op_adj * &d.defect_op_adj;
        assert!(fro(&(lhs - (identity(5) - &a * a.adjoint()))) < 1e-9);
        // A D_A = D_{A*} A
        assert!(fro(&(&a * &d.defect_op - &d.defect_op_adj * &a)) < 1e-9);
    }

    #[test]
    fn cayley_cases() {
        assert!(fro(&(cayley_unitary(&zeros(3, 3)).unwrap() - identity(3))) < 1e-15);
        let mut x = zeros(2, 2);
        x[(0, 1)] = c(1.0, 0.0);
        x[(1, 0)] = c(-1.0, 0.0);
        assert!(
            fro(&(cayley_unitary(&x.map(|z| z * c(0.0, 1.0) * 0.0)).unwrap() - identity(2)))
                < 1e-15
        );
        let p: Vec<f64> = (0..16).map(|i| ((i * 7 % 11) as f64 - 5.0) / 3.0).collect();
        let u = cayley_unitary(&skew_from_params(4, &p)).unwrap();
        assert!(unitarity_residual(&u) <= 1e-10);
    }

    #[test]
    fn structural_predicates() {
        let b = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        let a = zeros(1, 1);
        let s = structural_checks(&a, &b);
        assert!(s.b_is_unitary && s.b_dilates_a && s.a_is_contraction && !s.a_is_unitary);
        assert!(!is_contraction(&identity(2).scale(2.0)));
        assert!(!is_dilation_of(&a, &b));
        assert!(!is_dilation_of(&b, &zeros(1, 2)));
    }

    #[test]
    fn lambda_and_nu() {
        assert_eq!(lambda_k(&diag_real(&[3.0, 2.0, 1.0]), 2).unwrap(), 2.0);
        let l = lambda_k(&hermitian_part(&shift(4)), 2).unwrap();
        assert_abs_diff_eq!(l, (2.0 * std::f64::consts::PI / 5.0).cos(), epsilon = 1e-14);
        assert_abs_diff_eq!(l, 0.309017, epsilon = 1e-6);

        let mut rng = item_rng(15, 0);
        let m = random_hermitian(6, &mut rng);
        let ev = hermitian_spectrum(&m, 1e-12).unwrap().eigenvalues;
        let nu4 = nu_k(&m, 4).unwrap();
        assert_abs_diff_eq!(nu4, ev[6 - 4], epsilon = 1e-12);
        assert_abs_diff_eq!(nu4, -lambda_k(&(-&m), 4).unwrap(), epsilon = 0.0);

        assert_eq!(
            lambda_k(&m, 0).unwrap_err(),
            Error::KOutOfRange { k: 0, dim: 6 }
        );
        assert_eq!(
            lambda_k(&m, 7).unwrap_err(),
            Error::KOutOfRange { k: 7, dim: 6 }
        );
    }

    #[test]
    fn complement_is_orthonormal() {
        let mut rng = item_rng(16, 0);
        let q = haar_unitary(5, &mut rng);
        let basis = q.columns(0, 2).into_owned();
        let comp = orthonormal_complement(&basis);
        assert_eq!(comp.shape(), (5, 3));
        assert!(fro(&(comp.adjoint() * &comp - identity(3))) < 1e-12);
        assert!(fro(&(basis.adjoint() * &comp)) < 1e-12);
    }
}
