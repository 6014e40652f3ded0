//! C-numerical ranges `W_c(A) = {Σ c_j ⟨A q_j, q_j⟩ : (q_j) orthonormal}`.
//!
//! For real weights sorted in descending order the range is convex with
//! support `Σ c_j λ_j(Re(e^{iθ}A))`; for general complex weights only
//! Monte-Carlo clouds are available.

use rand::Rng;

use crate::dilation::{dilation_from_parameter, minimal_dilation, Colligation};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{uniform_grid, ConvexRegion};
use crate::linalg::{
    c, diag, direct_sum, from_row_major, hermitian_eigenvalues, hermitian_part, hermitian_spectrum,
    require_square, rotated_real_part_unchecked, ComplexMatrix, C64,
};
use crate::report::{timed, VerifyReport};
use crate::sampling::{haar_unitary, item_rng};

/// Weight vector `c_1, …, c_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CWeights {
    values: Vec<C64>,
    sorted_real: bool,
}

impl CWeights {
    pub fn new(values: Vec<C64>) -> Result<Self> {
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let sorted_real =
            values.iter().all(|z| z.im == 0.0) && values.windows(2).all(|w| w[0].re >= w[1].re);
        Ok(Self {
            values,
            sorted_real,
        })
    }

    pub fn real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True iff all weights are real and descending.
    pub fn is_sorted_real(&self) -> bool {
        self.sorted_real
    }

    /// `c ⊕ 0` of length `len`.
    pub fn padded(&self, len: usize) -> Result<Self> {
        if len < self.len() {
            return Err(Error::Shape(format!(
                "cannot pad {} weights to length {len}",
                self.len()
            )));
        }
        let mut values = self.values.clone();
        values.resize(len, c(0.0, 0.0));
        Self::new(values)
    }

    /// Real weights padded with zeros to `len` and sorted descending.
    /// Padding can break the order when some weights are negative; sorting
    /// only permutes the basis and leaves `W_c` unchanged.
    fn sorted_real_padded(&self, len: usize) -> Result<Vec<f64>> {
        if !self.sorted_real {
            return Err(Error::WeightsNotSortedReal);
        }
        if len < self.len() {
            return Err(Error::Shape(format!(
                "{} weights exceed the dimension {len}",
                self.len()
            )));
        }
        let mut w: Vec<f64> = self.values.iter().map(|z| z.re).collect();
        w.resize(len, 0.0);
        w.sort_by(|a, b| b.total_cmp(a));
        Ok(w)
    }
}

/// `Σ c_j λ_j` with both sequences descending.
fn paired_sum(weights: &[f64], eigenvalues_desc: &[f64]) -> f64 {
    weights
        .iter()
        .zip(eigenvalues_desc)
        .map(|(w, l)| w * l)
        .sum()
}

/// `W_c(M) = [α, β]` for Hermitian `M`: `β = Σ c_j λ_j(M)` and
/// `α = Σ c_j λ_{n-j+1}(M)`, with `c` padded by zeros.
pub fn c_interval_hermitian(c: &CWeights, m: &ComplexMatrix) -> Result<(f64, f64)> {
    let n = require_square(m, "M")?;
    let w = c.sorted_real_padded(n)?;
    let spec = hermitian_spectrum(m, 1e-10)?;
    let beta = paired_sum(&w, &spec.eigenvalues);
    let ascending: Vec<f64> = spec.eigenvalues.iter().rev().copied().collect();
    let alpha = paired_sum(&w, &ascending);
    Ok((alpha.min(beta), beta.max(alpha)))
}

/// Support `Σ c_j λ_j(Re(e^{iθ}A))` of `W_c(A)`, in the same half-plane
/// convention as the rank-k regions.
pub fn c_support(c: &CWeights, a: &ComplexMatrix, theta: f64) -> Result<f64> {
    let n = require_square(a, "A")?;
    let w = c.sorted_real_padded(n)?;
    Ok(paired_sum(
        &w,
        &hermitian_eigenvalues(&rotated_real_part_unchecked(a, theta)),
    ))
}

pub fn c_region(c: &CWeights, a: &ComplexMatrix, grid: usize) -> Result<ConvexRegion> {
    c_region_with(c, a, grid, Exec::default())
}

pub fn c_region_with(
    c: &CWeights,
    a: &ComplexMatrix,
    grid: usize,
    exec: Exec,
) -> Result<ConvexRegion> {
    let n = require_square(a, "A")?;
    crate::linalg::check_finite(a)?;
    if grid < crate::ranges::MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "grid must have at least {} directions",
            crate::ranges::MIN_GRID
        )));
    }
    let w = c.sorted_real_padded(n)?;
    let thetas = uniform_grid(grid);
    let samples = exec.map_slice(&thetas, |&t| {
        let l = hermitian_eigenvalues(&rotated_real_part_unchecked(a, t));
        (t, paired_sum(&w, &l))
    });
    let region = ConvexRegion::from_samples(samples);
    Ok(crate::ranges::refine(region, exec, |t| {
        paired_sum(
            &w,
            &hermitian_eigenvalues(&rotated_real_part_unchecked(a, t)),
        )
    }))
}

/// `tr(diag(c) Q*AQ) = Σ c_j ⟨A q_j, q_j⟩` for a unitary `Q`.
pub fn c_trace(c: &[C64], a: &ComplexMatrix, q: &ComplexMatrix) -> C64 {
    c.iter()
        .enumerate()
        .map(|(j, &cj)| {
            let col = q.column(j);
            cj * (col.adjoint() * a * col)[(0, 0)]
        })
        .sum()
}

/// Monte-Carlo cloud of `tr(diag(c) Q*AQ)` over Haar unitaries `Q`; sample
/// `i` uses its own stream `(seed, i)`.
pub fn c_sampled(c: &CWeights, a: &ComplexMatrix, n_samples: usize, seed: u64) -> Result<Vec<C64>> {
    c_sampled_with(c, a, n_samples, seed, Exec::default())
}

pub fn c_sampled_with(
    c: &CWeights,
    a: &ComplexMatrix,
    n_samples: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<C64>> {
    let n = require_square(a, "A")?;
    crate::linalg::check_finite(a)?;
    let w = c.padded(n)?;
    Ok(exec.map(n_samples, |i| {
        let q = haar_unitary(n, &mut item_rng(seed, i as u64));
        c_trace(w.values(), a, &q)
    }))
}

/// Nilpotent Jordan block `[[0, 1], [0, 0]]`.
pub fn jordan_block() -> ComplexMatrix {
    from_row_major(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).expect("2x2")
}

/// A 4×4 unitary dilation of a 2×2 contraction: the twisted block form
/// with a Haar `U_o`, or a minimal dilation with Haar `(V, W)` padded by a
/// random unimodular scalar.
pub fn sample_dilation<R: Rng + ?Sized>(
    a: &ComplexMatrix,
    minimal: bool,
    rng: &mut R,
) -> Result<ComplexMatrix> {
    let n = require_square(a, "A")?;
    if minimal {
        let d = Colligation::new(a)?.d();
        let v = haar_unitary(d, rng);
        let w = haar_unitary(d, rng);
        let u = minimal_dilation(a, &v, &w)?;
        let pad: Vec<C64> = (0..n - d)
            .map(|_| C64::from_polar(1.0, rng.random::<f64>() * std::f64::consts::TAU))
            .collect();
        Ok(direct_sum(&u, &diag(&pad)))
    } else {
        dilation_from_parameter(a, &haar_unitary(n, rng))
    }
}

/// Interval `[α_U, β_U] = W_{(1,1)}(Re U)` for one dilation, and `λ_1(Re U)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationInterval {
    pub alpha: f64,
    pub beta: f64,
    pub lambda_1: f64,
}

/// Samples unitary 4×4 dilations `U` of the Jordan block and compares
/// `W_c(A) = {0}` (for `c = (1, 1)`) with the intervals `W_{c⊕0}(Re U)`.
///
/// Even samples come from the twisted block family with a Haar `U_o`; odd
/// samples are minimal 3×3 dilations with Haar `(V, W)`, padded by a random
/// unimodular scalar.
pub fn counterexample_gap(n_dilations: usize, seed: u64) -> VerifyReport {
    counterexample_gap_with(n_dilations, seed, Exec::default())
}

pub fn counterexample_intervals(
    n_dilations: usize,
    seed: u64,
    exec: Exec,
) -> Vec<DilationInterval> {
    let a = jordan_block();
    exec.map(n_dilations, |i| {
        let mut rng = item_rng(seed, i as u64);
        let u =
            sample_dilation(&a, i % 2 == 1, &mut rng).expect("the Jordan block is a contraction");
        let eig = hermitian_eigenvalues(&hermitian_part(&u));
        let n = eig.len();
        DilationInterval {
            alpha: eig[n - 1] + eig[n - 2],
            beta: eig[0] + eig[1],
            lambda_1: eig[0],
        }
    })
}

pub fn counterexample_gap_with(n_dilations: usize, seed: u64, exec: Exec) -> VerifyReport {
    let (mut report, ms) = timed(|| {
        let mut report = VerifyReport::new(
            "cnum_gap",
            format!("A = [[0,1],[0,0]], c = (1,1); {n_dilations} sampled 4x4 unitary dilations"),
            seed,
        );
        let a = jordan_block();
        let weights = CWeights::real(&[1.0, 1.0]).expect("finite");
        let region =
            c_region_with(&weights, &a, crate::ranges::DEFAULT_GRID, exec).expect("valid input");
        let width = region.sampled_width().unwrap_or(f64::INFINITY);
        let centre_dist = region.distance_to(c(0.0, 0.0));
        report.metric("c_region_width", width);
        report.metric("c_region_distance_to_zero", centre_dist);

        let intervals = counterexample_intervals(n_dilations, seed, exec);
        let min_beta = intervals
            .iter()
            .map(|r| r.beta)
            .fold(f64::INFINITY, f64::min);
        let max_alpha = intervals
            .iter()
            .map(|r| r.alpha)
            .fold(f64::NEG_INFINITY, f64::max);
        let min_lambda_1 = intervals
            .iter()
            .map(|r| r.lambda_1)
            .fold(f64::INFINITY, f64::min);
        report.metric("min_beta", min_beta);
        report.metric("max_alpha", max_alpha);
        report.metric("min_lambda_1", min_lambda_1);
        report.residuals = intervals.iter().map(|r| r.beta).collect();

        let mut ok = true;
        if !(width <= 1e-12 && centre_dist <= 1e-12) {
            ok = false;
            report.note(format!(
                "W_c(A) is not the single point 0 (width {width:e})"
            ));
        }
        if let Some(i) = intervals
            .iter()
            .position(|r| r.alpha > 1e-9 || r.beta < -1e-9)
        {
            ok = false;
            report.note(format!("sample {i}: interval misses 0"));
        }
        if n_dilations > 0 && min_beta < 0.25 {
            ok = false;
            report.note(format!("min beta_U = {min_beta} < 0.25"));
        }
        if let Some(i) = intervals.iter().position(|r| r.lambda_1 < 0.5 - 1e-9) {
            ok = false;
            report.note(format!("sample {i}: lambda_1(Re U) below 1/2"));
        }
        report.passed = ok;
        report
    });
    report.runtime_ms = ms;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag_real, identity};
    use crate::ranges::omega_region;
    use crate::sampling::{random_contraction, random_hermitian};
    use approx::assert_abs_diff_eq;

    /// Extremes of `Σ c_j μ_{π(j)}` over all permutations `π` of the
    /// eigenvalues; the trace functional is extremal at permuted eigenbases.
    fn permutation_oracle(c: &[f64], eigs: &[f64]) -> (f64, f64) {
        fn rec(c: &[f64], rest: &mut Vec<f64>, acc: f64, out: &mut (f64, f64)) {
            let j = c.len() - rest.len();
            if rest.is_empty() {
                out.0 = out.0.min(acc);
                out.1 = out.1.max(acc);
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                rec(c, rest, acc + c[j] * x, out);
                rest.insert(i, x);
            }
        }
        let mut padded = c.to_vec();
        padded.resize(eigs.len(), 0.0);
        let mut out = (f64::INFINITY, f64::NEG_INFINITY);
        rec(&padded, &mut eigs.to_vec(), 0.0, &mut out);
        out
    }

    #[test]
    fn interval_of_diagonal() {
        let w = CWeights::real(&[2.0, 1.0]).unwrap();
        let (a, b) = c_interval_hermitian(&w, &diag_real(&[3.0, -1.0])).unwrap();
        assert_abs_diff_eq!(a, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(b, 5.0, epsilon = 1e-14);
    }

    #[test]
    fn interval_against_permutation_oracle() {
        let mut rng = item_rng(30, 0);
        for _ in 0..10 {
            let m = random_hermitian(4, &mut rng);
            let eigs = hermitian_eigenvalues(&m);
            for c in [vec![3.0, 1.0, 0.5, -1.0], vec![1.0, 1.0], vec![2.0, -0.5]] {
                let (lo, hi) = permutation_oracle(&c, &eigs);
                let (a, b) = c_interval_hermitian(&CWeights::real(&c).unwrap(), &m).unwrap();
                assert_abs_diff_eq!(a, lo, epsilon = 1e-10);
                assert_abs_diff_eq!(b, hi, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn interval_first_weight_is_numerical_range() {
        let m = random_hermitian(3, &mut item_rng(31, 0));
        let eigs = hermitian_eigenvalues(&m);
        let (a, b) = c_interval_hermitian(&CWeights::real(&[1.0]).unwrap(), &m).unwrap();
        assert_abs_diff_eq!(a, eigs[2], epsilon = 1e-14);
        assert_abs_diff_eq!(b, eigs[0], epsilon = 1e-14);
    }

    #[test]
    fn interval_of_trace_weights() {
        let m = hermitian_part(&jordan_block());
        let (a, b) = c_interval_hermitian(&CWeights::real(&[1.0, 1.0]).unwrap(), &m).unwrap();
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn unsorted_weights_rejected() {
        let w = CWeights::real(&[1.0, 2.0]).unwrap();
        assert!(!w.is_sorted_real());
        assert_eq!(
            c_interval_hermitian(&w, &identity(2)).unwrap_err(),
            Error::WeightsNotSortedReal
        );
        let complex = CWeights::new(vec![c(1.0, 1.0)]).unwrap();
        assert!(c_region(&complex, &identity(2), 64).is_err());
    }

    #[test]
    fn region_with_unit_weight_is_numerical_range() {
        let a = random_contraction(3, &mut item_rng(32, 0));
        let r = c_region(&CWeights::real(&[1.0]).unwrap(), &a, 360).unwrap();
        let w = omega_region(&a, 1, 360).unwrap();
        for (x, y) in r.samples.iter().zip(&w.samples) {
            assert_abs_diff_eq!(x.1, y.1, epsilon = 1e-9);
        }
    }

    #[test]
    fn trace_weights_collapse_jordan_block() {
        let r = c_region(&CWeights::real(&[1.0, 1.0]).unwrap(), &jordan_block(), 720).unwrap();
        assert!(r.sampled_width().unwrap() <= 1e-12);
        assert!(
            r.distance_to(c(0.0, 0.0)) <= 1e-12,
            "{:?} {}",
            r.vertices,
            r.distance_to(c(0.0, 0.0))
        );
    }

    #[test]
    fn padding_is_invisible() {
        let a = random_contraction(4, &mut item_rng(33, 0));
        let w = CWeights::real(&[1.0, 0.5]).unwrap();
        let r1 = c_region(&w, &a, 90).unwrap();
        let r2 = c_region(&w.padded(4).unwrap(), &a, 90).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn sampled_identity_weights_give_trace() {
        let a = random_contraction(3, &mut item_rng(34, 0));
        let tr = a.trace();
        for z in c_sampled(&CWeights::real(&[1.0; 3]).unwrap(), &a, 50, 1).unwrap() {
            assert!((z - tr).norm() < 1e-12);
        }
    }

    #[test]
    fn sampled_jordan_block() {
        let a = jordan_block();
        let pts = c_sampled(&CWeights::real(&[1.0, 0.0]).unwrap(), &a, 4000, 2).unwrap();
        let radius = pts.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(radius <= 0.5 + 1e-12);
        assert!(radius > 0.45);
        let pts = c_sampled(&CWeights::real(&[1.0, 1.0]).unwrap(), &a, 200, 3).unwrap();
        assert!(pts.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn samples_lie_in_region() {
        let a = random_contraction(3, &mut item_rng(35, 0));
        let w = CWeights::real(&[2.0, 0.5, -1.0]).unwrap();
        let r = c_region(&w, &a, 720).unwrap();
        for z in c_sampled(&w, &a, 300, 4).unwrap() {
            assert!(r.worst_margin(z) >= -1e-8);
        }
    }

    #[test]
    fn counterexample_small_run() {
        let r = counterexample_gap(200, 0);
        assert!(r.passed, "{:?}", r.diagnostics);
        assert!(r.metrics["min_lambda_1"] >= 0.5 - 1e-9);
    }

    #[test]
    fn sampled_dilations_are_unitary_dilations() {
        let a = jordan_block();
        let mut rng = item_rng(36, 0);
        for minimal in [false, true] {
            let u = sample_dilation(&a, minimal, &mut rng).unwrap();
            assert_eq!(u.nrows(), 4);
            assert!(crate::linalg::is_unitary(&u) && crate::linalg::is_dilation_of(&u, &a));
        }
    }
}
