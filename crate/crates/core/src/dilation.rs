//! Unitary and contractive dilations of a contraction `A`.
//!
//! Three families are provided:
//!
//! * the block form `[[A, -D_{A*}], [D_A, A*]]` and its right-twisted
//!   variants `[[A, -D_{A*} U_o], [D_A, A* U_o]]` on `H ⊕ H`;
//! * minimal dilations on `H ⊕ C^d`, `d = rank D_A`, parameterized by two
//!   `d × d` unitaries `(V, W)`;
//! * searches inside the minimal family for dilations with prescribed
//!   spectral features (extremal `k`-th eigenvalue of a rotated real part,
//!   prescribed eigenvalues with multiplicity).
//!
//! Minimal dilations are written through the unitary colligation
//! `[[A, X], [Y, Z]]` with `X = D_{A*} B_{A*}`, `Y = B_A* D_A`,
//! `Z = -B_A* A* B_{A*}`. Then `U(V, W) = (I ⊕ W) U(G) (I ⊕ W*)` with
//! `U(G) = [[A, X G], [Y, Z G]]` and `G = V W`, and `U(G)` has eigenvalue
//! `λ ∉ σ(A)` with multiplicity `d` exactly when `Φ(λ) G = λ I`, where
//! `Φ(λ) = Z + Y (λ - A)^{-1} X` is the characteristic function. On the
//! unit circle `Φ(λ)` is unitary, which gives the closed-form parameter
//! `G = λ Φ(λ)*` used as the first attempt before any numerical search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::io::MatrixJson;
use crate::linalg::{
    block2, c, defect_data, direct_sum, hermitian_eigenvalues, hermitian_part, hermitian_spectrum,
    identity, leading_block, nearest_unitary, orthonormal_complement, require_square,
    resolvent_gap, rotated_real_part_unchecked, singular_values, unitarity_residual, zeros,
    ComplexMatrix, DefectData, C64, DEFAULT_RANK_TOL,
};
use crate::optimize::{search_unitary, NelderMeadOptions};
use crate::sampling::{haar_unitary, item_rng};

/// Gap below which an extremal dilation counts as found.
pub const GAP_TOL: f64 = 1e-6;
/// Largest admissible `n_j`-th smallest singular value of `U - λ_j I`.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-7;
/// Unitarity tolerance for user-supplied parameter blocks.
pub const PARAMETER_TOL: f64 = 1e-10;
/// Smallest admissible `σ_min(λ - A)` for a prescribed eigenvalue `λ`.
pub const SPECTRUM_SEPARATION: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DilationKind {
    #[serde(rename = "halmos")]
    Halmos,
    #[serde(rename = "family_Uo")]
    FamilyUo,
    #[serde(rename = "minimal_VW")]
    MinimalVW,
}

/// Parameter blocks selecting one member of a dilation family.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationParameter {
    pub kind: DilationKind,
    pub uo: Option<ComplexMatrix>,
    pub v: Option<ComplexMatrix>,
    pub w: Option<ComplexMatrix>,
}

fn check_parameter_unitary(m: &ComplexMatrix, dim: usize, name: &str) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::Shape(format!(
            "{name} must be {dim}x{dim}, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let residual = unitarity_residual(m);
    if !residual.is_finite() || residual > PARAMETER_TOL * (dim.max(1) as f64).sqrt() {
        return Err(Error::NotUnitaryParameter { residual });
    }
    Ok(())
}

impl DilationParameter {
    pub fn halmos() -> Self {
        Self {
            kind: DilationKind::Halmos,
            uo: None,
            v: None,
            w: None,
        }
    }

    pub fn family(uo: ComplexMatrix) -> Result<Self> {
        check_parameter_unitary(&uo, uo.nrows(), "Uo")?;
        Ok(Self {
            kind: DilationKind::FamilyUo,
            uo: Some(uo),
            v: None,
            w: None,
        })
    }

    pub fn minimal(v: ComplexMatrix, w: ComplexMatrix) -> Result<Self> {
        check_parameter_unitary(&v, v.nrows(), "V")?;
        check_parameter_unitary(&w, v.nrows(), "W")?;
        Ok(Self {
            kind: DilationKind::MinimalVW,
            uo: None,
            v: Some(v),
            w: Some(w),
        })
    }

    /// Builds the dilation of `a` selected by this parameter.
    pub fn build(&self, a: &ComplexMatrix) -> Result<ComplexMatrix> {
        let missing =
            |name: &str| Error::InvalidArgument(format!("parameter block {name} missing"));
        match self.kind {
            DilationKind::Halmos => halmos_dilation(a),
            DilationKind::FamilyUo => {
                dilation_from_parameter(a, self.uo.as_ref().ok_or_else(|| missing("Uo"))?)
            }
            DilationKind::MinimalVW => minimal_dilation(
                a,
                self.v.as_ref().ok_or_else(|| missing("V"))?,
                self.w.as_ref().ok_or_else(|| missing("W"))?,
            ),
        }
    }
}

/// `[[A, -D_{A*}], [D_A, A*]]`.
pub fn halmos_dilation(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dd = defect_data(a, DEFAULT_RANK_TOL)?;
    Ok(block2(
        a,
        &(-&dd.defect_op_adj),
        &dd.defect_op,
        &a.adjoint(),
    ))
}

/// `[[A, -D_{A*} U_o], [D_A, A* U_o]]` for a unitary `U_o`.
pub fn dilation_from_parameter(a: &ComplexMatrix, uo: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = require_square(a, "A")?;
    let dd = defect_data(a, DEFAULT_RANK_TOL)?;
    check_parameter_unitary(uo, n, "Uo")?;
    Ok(block2(
        a,
        &(-&dd.defect_op_adj * uo),
        &dd.defect_op,
        &(a.adjoint() * uo),
    ))
}

/// The unitary colligation `[[A, X], [Y, Z]]` underlying all minimal
/// dilations of `A`.
#[derive(Debug, Clone)]
pub struct Colligation {
    pub a: ComplexMatrix,
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
    pub z: ComplexMatrix,
    pub defect: DefectData,
}

impl Colligation {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        require_square(a, "A")?;
        let defect = defect_data(a, DEFAULT_RANK_TOL)?;
        if defect.defect_rank != defect.defect_rank_adj {
            return Err(Error::DefectMismatch {
                d_a: defect.defect_rank,
                d_a_adj: defect.defect_rank_adj,
            });
        }
        let x = &defect.defect_op_adj * &defect.defect_basis_adj;
        let y = defect.defect_basis.adjoint() * &defect.defect_op;
        let z = -(defect.defect_basis.adjoint() * a.adjoint() * &defect.defect_basis_adj);
        Ok(Self {
            a: a.clone(),
            x,
            y,
            z,
            defect,
        })
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }

    /// Defect number `d`.
    pub fn d(&self) -> usize {
        self.defect.defect_rank
    }

    /// `[[A, X G], [Y, Z G]]`.
    pub fn assemble(&self, g: &ComplexMatrix) -> ComplexMatrix {
        block2(&self.a, &(&self.x * g), &self.y, &(&self.z * g))
    }

    /// `[[A, X V], [W Y, W Z V]]`.
    pub fn assemble_vw(&self, v: &ComplexMatrix, w: &ComplexMatrix) -> ComplexMatrix {
        block2(&self.a, &(&self.x * v), &(w * &self.y), &(w * &self.z * v))
    }

    /// Characteristic function `Φ(λ) = Z + Y (λ - A)^{-1} X`, or `None` when
    /// `λ` is numerically in `σ(A)`.
    pub fn transfer(&self, lambda: C64) -> Option<ComplexMatrix> {
        let shifted = identity(self.n()) * lambda - &self.a;
        let inv = shifted.try_inverse()?;
        if inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return None;
        }
        Some(&self.z + &self.y * inv * &self.x)
    }

    /// Parameter `G` for which `U(G)` has `λ` as an eigenvalue of
    /// multiplicity `d`: the unitary polar factor of `λ Φ(λ)*`.
    pub fn eigen_parameter(&self, lambda: C64) -> Option<ComplexMatrix> {
        if self.d() == 0 {
            return Some(zeros(0, 0));
        }
        let phi = self.transfer(lambda)?;
        let g = phi.adjoint() * lambda;
        if g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return None;
        }
        Some(nearest_unitary(&g))
    }
}

/// Minimal unitary dilation `[[A, X V], [W Y, W Z V]]` of size `n + d`.
pub fn minimal_dilation(
    a: &ComplexMatrix,
    v: &ComplexMatrix,
    w: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let col = Colligation::new(a)?;
    check_parameter_unitary(v, col.d(), "V")?;
    check_parameter_unitary(w, col.d(), "W")?;
    Ok(col.assemble_vw(v, w))
}

/// Budget and execution policy for the numerical searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBudget {
    pub restarts: usize,
    /// Objective evaluations per restart.
    pub max_evals: usize,
    pub seed: u64,
    pub exec: Exec,
    /// Try the closed-form characteristic-function parameter first.
    pub closed_form: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_evals: 20_000,
            seed: 0,
            exec: Exec::default(),
            closed_form: true,
        }
    }
}

impl SearchBudget {
    pub fn with_restarts(self, restarts: usize) -> Self {
        Self { restarts, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn with_exec(self, exec: Exec) -> Self {
        Self { exec, ..self }
    }

    pub fn search_only(self) -> Self {
        Self {
            closed_form: false,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// No search needed (`d = 0`, or the target is already at the top).
    Trivial,
    ClosedForm,
    Search,
}

/// A minimal dilation minimizing `λ_k(Re(e^{iθ}U)) - λ_k(Re(e^{iθ}A))`.
#[derive(Debug, Clone)]
pub struct ExtremalDilation {
    pub u: ComplexMatrix,
    pub parameter: DilationParameter,
    pub target: f64,
    pub achieved: f64,
    pub gap: f64,
    pub converged: bool,
    pub construction: Construction,
}

impl ExtremalDilation {
    /// Turns a non-converged result into `OptimizerDidNotConverge`.
    pub fn check(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::OptimizerDidNotConverge { best_gap: self.gap })
        }
    }
}

fn rotated_lambda_k(u: &ComplexMatrix, theta: f64, k: usize) -> f64 {
    hermitian_eigenvalues(&rotated_real_part_unchecked(u, theta))[k - 1]
}

/// Searches the minimal dilations of `a` for one whose rotated real part
/// keeps the `k`-th eigenvalue: `λ_k(Re(e^{iθ}U)) = λ_k(Re(e^{iθ}A))`.
///
/// With `μ = λ_k(Re(e^{iθ}A)) < 1`, the parameter that puts the chord point
/// `e^{-iθ}(μ ± i√(1-μ²))` into `σ(U)` with multiplicity `d` attains gap zero;
/// it is tried first, then Nelder–Mead restarts over Cayley charts. A
/// non-converged result is returned with `converged = false`; call
/// [`ExtremalDilation::check`] to turn it into an error.
pub fn extremal_dilation(
    a: &ComplexMatrix,
    k: usize,
    theta: f64,
    budget: &SearchBudget,
) -> Result<ExtremalDilation> {
    let n = require_square(a, "A")?;
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, dim: n });
    }
    if !theta.is_finite() {
        return Err(Error::NonFinite);
    }
    let col = Colligation::new(a)?;
    let d = col.d();
    let target = rotated_lambda_k(a, theta, k);
    let finish = |g: ComplexMatrix, construction: Construction| {
        let u = col.assemble(&g);
        let achieved = rotated_lambda_k(&u, theta, k);
        let gap = achieved - target;
        ExtremalDilation {
            u,
            parameter: DilationParameter {
                kind: DilationKind::MinimalVW,
                uo: None,
                v: Some(g),
                w: Some(identity(d)),
            },
            target,
            achieved,
            gap,
            converged: gap <= GAP_TOL,
            construction,
        }
    };

    if d == 0 || target >= 1.0 - 1e-12 {
        return Ok(finish(identity(d), Construction::Trivial));
    }

    let gap_of = |g: &ComplexMatrix| rotated_lambda_k(&col.assemble(g), theta, k) - target;
    let mut best: Option<(f64, ComplexMatrix)> = None;
    if budget.closed_form {
        let rotation = C64::from_polar(1.0, -theta);
        'outer: for eps in [0.0, 1e-12, 1e-10, 1e-8] {
            let m = target + eps;
            if m > 1.0 {
                break;
            }
            let s = (1.0 - m * m).max(0.0).sqrt();
            for lambda in [c(m, s), c(m, -s)] {
                let Some(g) = col.eigen_parameter(rotation * lambda) else {
                    continue;
                };
                let gap = gap_of(&g);
                if best.as_ref().is_none_or(|(b, _)| gap < *b) {
                    best = Some((gap, g));
                }
                if gap <= 1e-10 {
                    break 'outer;
                }
            }
        }
    }
    if let Some((gap, g)) = &best {
        if *gap <= GAP_TOL {
            return Ok(finish(g.clone(), Construction::ClosedForm));
        }
    }

    let warm = best.as_ref().map(|(_, g)| g.clone());
    let opts = NelderMeadOptions {
        max_evals: budget.max_evals,
        f_tol: 1e-15,
        f_target: 1e-12,
        ..Default::default()
    };
    let found = search_unitary(
        d,
        budget.restarts.max(1),
        |r| match (&warm, r) {
            (Some(g), 0) => (g.clone(), 0.05),
            _ => (haar_unitary(d, &mut item_rng(budget.seed, r as u64)), 0.5),
        },
        |g| gap_of(g),
        &opts,
        budget.exec,
    );
    let result = match (found, best) {
        (Some(s), Some((gap, g))) if gap <= s.value => finish(g, Construction::ClosedForm),
        (Some(s), _) => finish(s.best, Construction::Search),
        (None, Some((_, g))) => finish(g, Construction::ClosedForm),
        (None, None) => finish(identity(d), Construction::Search),
    };
    Ok(result)
}

/// Contractive `2n × 2n` dilation `Z` of `A` with lower-left block `B` and
/// `λ_k(Re Z) = λ_k(Re A)`, for `A*A + B*B ≤ I`.
///
/// Builds an extremal unitary dilation `U₀`, pads it to `H ⊕ H`, rotates the
/// defect space so that its lower-left block becomes `D_A`, and compresses
/// `U ⊕ (-I)` to the range of the isometry `(x, y) ↦ (x, J*y, -(I-JJ*)^{1/2}y)`
/// where `B = J D_A`.
pub fn contractive_dilation(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    k: usize,
    budget: &SearchBudget,
) -> Result<ComplexMatrix> {
    let n = require_square(a, "A")?;
    if b.shape() != (n, n) {
        return Err(Error::Shape(format!(
            "B must be {n}x{n}, got {}x{}",
            b.nrows(),
            b.ncols()
        )));
    }
    crate::linalg::check_finite(b)?;
    let slack = identity(n) - a.adjoint() * a - b.adjoint() * b;
    let min_eigenvalue = *hermitian_eigenvalues(&hermitian_part(&slack))
        .last()
        .expect("nonempty");
    if min_eigenvalue < -1e-9 {
        return Err(Error::ConstraintViolated { min_eigenvalue });
    }

    let ext = extremal_dilation(a, k, 0.0, budget)?.check()?;
    let col = Colligation::new(a)?;
    let d = col.d();
    let basis = &col.defect.defect_basis;
    let w = ext.parameter.w.clone().unwrap_or_else(|| identity(d));

    // U₀ ⊕ (-I_{n-d}) conjugated by I ⊕ [B_A W*, B_A^⊥].
    let padded = direct_sum(&ext.u, &(-identity(n - d)));
    let mut q = zeros(n, n);
    q.view_mut((0, 0), (n, d)).copy_from(&(basis * w.adjoint()));
    q.view_mut((0, d), (n, n - d))
        .copy_from(&orthonormal_complement(basis));
    let frame = direct_sum(&identity(n), &q);
    let u = &frame * padded * frame.adjoint();

    // J = B · D_A^+ with the pseudo-inverse taken on ran D_A.
    let pinv = if d == 0 {
        zeros(n, n)
    } else {
        let core = basis.adjoint() * &col.defect.defect_op * basis;
        let core_inv = core
            .try_inverse()
            .ok_or(Error::ConstraintViolated { min_eigenvalue })?;
        basis * core_inv * basis.adjoint()
    };
    let j = b * pinv;
    let complement = {
        let m = hermitian_part(&(identity(n) - &j * j.adjoint()));
        hermitian_spectrum(&m, 1e-8)?.map(|x| x.max(0.0).sqrt())
    };

    let mut v = zeros(3 * n, 2 * n);
    v.view_mut((0, 0), (n, n)).copy_from(&identity(n));
    v.view_mut((n, n), (n, n)).copy_from(&j.adjoint());
    v.view_mut((2 * n, n), (n, n)).copy_from(&(-complement));
    let big = direct_sum(&u, &(-identity(n)));
    Ok(v.adjoint() * big * v)
}

/// Target eigenvalues `λ_j` on the unit circle with multiplicities `n_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvaluePrescription {
    targets: Vec<(C64, usize)>,
}

impl EigenvaluePrescription {
    pub fn new(targets: Vec<(C64, usize)>) -> Result<Self> {
        for (i, &(lambda, mult)) in targets.iter().enumerate() {
            if !lambda.re.is_finite() || !lambda.im.is_finite() {
                return Err(Error::NonFinite);
            }
            if (lambda.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidPrescription(format!(
                    "target {lambda} is not unimodular"
                )));
            }
            if mult == 0 {
                return Err(Error::InvalidPrescription(format!(
                    "target {lambda} has multiplicity 0"
                )));
            }
            if targets[..i]
                .iter()
                .any(|(other, _)| (other - lambda).norm() <= 1e-12)
            {
                return Err(Error::InvalidPrescription(format!(
                    "target {lambda} listed twice"
                )));
            }
        }
        Ok(Self { targets })
    }

    /// A single target of multiplicity `mult`.
    pub fn single(lambda: C64, mult: usize) -> Result<Self> {
        Self::new(vec![(lambda, mult)])
    }

    pub fn targets(&self) -> &[(C64, usize)] {
        &self.targets
    }

    /// `N = Σ n_j`.
    pub fn total(&self) -> usize {
        self.targets.iter().map(|t| t.1).sum()
    }
}

/// The `n_j`-th smallest singular value of `U - λ_j I` for each target.
pub fn prescription_residuals(u: &ComplexMatrix, rx: &EigenvaluePrescription) -> Vec<f64> {
    let id = identity(u.nrows());
    rx.targets()
        .iter()
        .map(|&(lambda, mult)| {
            let sv = singular_values(&(u - &id * lambda));
            sv.get(sv.len().wrapping_sub(mult))
                .copied()
                .unwrap_or(f64::INFINITY)
        })
        .collect()
}

fn prescription_objective(u: &ComplexMatrix, rx: &EigenvaluePrescription) -> f64 {
    let id = identity(u.nrows());
    rx.targets()
        .iter()
        .map(|&(lambda, mult)| {
            let sv = singular_values(&(u - &id * lambda));
            sv.iter().rev().take(mult).map(|s| s * s).sum::<f64>()
        })
        .sum()
}

#[derive(Debug, Clone)]
pub struct PrescribedDilation {
    pub u: ComplexMatrix,
    pub parameter: DilationParameter,
    /// Per-target residuals, see [`prescription_residuals`].
    pub residuals: Vec<f64>,
    pub residual: f64,
    pub converged: bool,
    pub construction: Construction,
}

impl PrescribedDilation {
    pub fn check(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::PrescriptionInfeasibleNumerically {
                residual: self.residual,
            })
        }
    }
}

/// Minimal unitary dilation of size `n + N` having each `λ_j` as an
/// eigenvalue of multiplicity at least `n_j`, where `N = Σ n_j` must equal
/// the defect number.
///
/// A single target is solved in closed form; several targets are handled by
/// minimizing the summed squared smallest singular values over the
/// parameter, warm-started from the closed form of the first target.
pub fn prescribed_eigenvalue_ndilation(
    a: &ComplexMatrix,
    rx: &EigenvaluePrescription,
    budget: &SearchBudget,
) -> Result<PrescribedDilation> {
    let col = Colligation::new(a)?;
    let d = col.d();
    if rx.total() != d {
        return Err(Error::InvalidPrescription(format!(
            "total multiplicity {} must equal the defect number {d}",
            rx.total()
        )));
    }
    for &(lambda, _) in rx.targets() {
        let gap = resolvent_gap(a, lambda)?;
        if gap < SPECTRUM_SEPARATION {
            return Err(Error::InvalidPrescription(format!(
                "target {lambda} is numerically in the spectrum of A (smallest singular value of lambda - A is {gap:e})"
            )));
        }
    }
    let finish = |g: ComplexMatrix, construction: Construction| {
        let u = col.assemble(&g);
        let residuals = prescription_residuals(&u, rx);
        let residual = residuals.iter().fold(0.0_f64, |m, &r| m.max(r));
        PrescribedDilation {
            u,
            parameter: DilationParameter {
                kind: DilationKind::MinimalVW,
                uo: None,
                v: Some(g),
                w: Some(identity(d)),
            },
            residuals,
            residual,
            converged: residual <= EIGEN_RESIDUAL_TOL,
            construction,
        }
    };
    if d == 0 {
        return Ok(finish(zeros(0, 0), Construction::Trivial));
    }

    let warm = if budget.closed_form {
        col.eigen_parameter(rx.targets()[0].0)
    } else {
        None
    };
    if let Some(g) = &warm {
        let done = finish(g.clone(), Construction::ClosedForm);
        if done.converged {
            return Ok(done);
        }
    }

    let opts = NelderMeadOptions {
        max_evals: budget.max_evals,
        f_tol: 1e-30,
        f_target: 1e-20,
        ..Default::default()
    };
    let found = search_unitary(
        d,
        budget.restarts.max(1),
        |r| match (&warm, r) {
            (Some(g), 0) => (g.clone(), 0.1),
            _ => (haar_unitary(d, &mut item_rng(budget.seed, r as u64)), 0.5),
        },
        |g| prescription_objective(&col.assemble(g), rx),
        &opts,
        budget.exec,
    );
    let searched = found.map(|s| finish(s.best, Construction::Search));
    let warm_result = warm.map(|g| finish(g, Construction::ClosedForm));
    Ok(match (searched, warm_result) {
        (Some(s), Some(w)) if w.residual <= s.residual => w,
        (Some(s), _) => s,
        (None, Some(w)) => w,
        (None, None) => finish(identity(d), Construction::Search),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilationResiduals {
    /// `‖U*U - I‖_F`.
    pub unitarity: f64,
    /// Largest entrywise deviation of the leading block from `A`.
    pub dilation: f64,
}

/// JSON descriptor `{kind, parameter blocks, residuals}` of a dilation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilationDescriptor {
    pub kind: DilationKind,
    pub dim: usize,
    #[serde(rename = "Uo", skip_serializing_if = "Option::is_none")]
    pub uo: Option<MatrixJson>,
    #[serde(rename = "V", skip_serializing_if = "Option::is_none")]
    pub v: Option<MatrixJson>,
    #[serde(rename = "W", skip_serializing_if = "Option::is_none")]
    pub w: Option<MatrixJson>,
    pub residuals: DilationResiduals,
    pub matrix: MatrixJson,
}

impl DilationDescriptor {
    pub fn new(a: &ComplexMatrix, parameter: &DilationParameter, u: &ComplexMatrix) -> Self {
        let n = a.nrows();
        let dilation = if u.nrows() >= n && u.ncols() >= n {
            leading_block(u, n)
                .iter()
                .zip(a.iter())
                .fold(0.0_f64, |m, (x, y)| m.max((x - y).norm()))
        } else {
            f64::INFINITY
        };
        Self {
            kind: parameter.kind,
            dim: u.nrows(),
            uo: parameter.uo.as_ref().map(MatrixJson::from_matrix),
            v: parameter.v.as_ref().map(MatrixJson::from_matrix),
            w: parameter.w.as_ref().map(MatrixJson::from_matrix),
            residuals: DilationResiduals {
                unitarity: unitarity_residual(u),
                dilation,
            },
            matrix: MatrixJson::from_matrix(u),
        }
    }
}
