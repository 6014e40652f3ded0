//! Numerical checks of the dilation-intersection identities, truncation
//! monotonicity, the normal-matrix formula and the accumulating-spectrum
//! example, each producing a [`VerifyReport`].

use std::f64::consts::PI;

use crate::dilation::{
    dilation_from_parameter, extremal_dilation, halmos_dilation, minimal_dilation,
    prescribed_eigenvalue_ndilation, Colligation, EigenvaluePrescription, SearchBudget,
    EIGEN_RESIDUAL_TOL, GAP_TOL,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{uniform_grid, ConvexRegion};
use crate::linalg::{
    c, diag, hermitian_eigenvalues, is_dilation_of, is_unitary, require_square, resolvent_gap,
    rotated_real_part_unchecked, ComplexMatrix, C64,
};
use crate::ranges::{
    normal_region_on_grid, omega_inf, omega_region_with, spectral_v_k, support_samples,
    Multiplicity, Operator, RankIndex, SpectralModel,
};
use crate::report::{timed, DirectionRecord, VerifyReport};
use crate::sampling::{haar_unitary, item_rng};

/// Hausdorff tolerance for region comparisons.
pub const HAUSDORFF_TOL: f64 = 2e-3;
/// Slack for the interlacing lower bound `λ_k(Re(e^{iθ}U)) ≥ λ_k(Re(e^{iθ}A))`.
pub const INTERLACING_TOL: f64 = 1e-9;
/// Slack for monotonicity of finite-section supports.
pub const MONOTONE_TOL: f64 = 1e-10;
/// Chord offsets used by [`verify_bt`].
pub const EPSILON_CHAIN: [f64; 3] = [0.1, 0.01, 0.001];

fn rotated_lambda_k(u: &ComplexMatrix, theta: f64, k: usize) -> f64 {
    hermitian_eigenvalues(&rotated_real_part_unchecked(u, theta))[k - 1]
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        Err(Error::KOutOfRange { k, dim: n })
    } else {
        Ok(())
    }
}

fn sequential(budget: &SearchBudget) -> SearchBudget {
    budget.with_exec(Exec::Sequential)
}

/// Smallest margin `λ_k(Re(e^{iθ}U)) - λ_k(Re(e^{iθ}A))` over a grid, for a
/// handful of dilations from each family.
fn interlacing_margin(a: &ComplexMatrix, k: usize, grid: usize, seed: u64) -> Result<f64> {
    let n = a.nrows();
    let col = Colligation::new(a)?;
    let d = col.d();
    let mut dilations = vec![halmos_dilation(a)?];
    for i in 0..3 {
        let mut rng = item_rng(seed ^ 0x5eed, i);
        dilations.push(dilation_from_parameter(a, &haar_unitary(n, &mut rng))?);
        let v = haar_unitary(d, &mut rng);
        let w = haar_unitary(d, &mut rng);
        dilations.push(minimal_dilation(a, &v, &w)?);
    }
    let base = support_samples(a, k, grid, Exec::Sequential)?;
    let mut worst = f64::INFINITY;
    for u in &dilations {
        for &(t, s) in &base {
            worst = worst.min(rotated_lambda_k(u, t, k) - s);
        }
    }
    Ok(worst)
}

/// For each direction on a `grid`-point circle, builds an extremal minimal
/// unitary dilation and records `λ_k(Re(e^{iθ}U)) - λ_k(Re(e^{iθ}A))`. The
/// half-planes of the dilations are intersected and compared with `Ω_k(A)`.
///
/// Passes iff every gap lies in `[-1e-9, 1e-6]`, the Hausdorff distance is
/// at most `2e-3`, and sampled dilations from every family dominate the
/// supports of `A`.
pub fn verify_glw(
    a: &ComplexMatrix,
    k: usize,
    grid: usize,
    budget: &SearchBudget,
) -> Result<VerifyReport> {
    let n = require_square(a, "A")?;
    check_k(n, k)?;
    Colligation::new(a)?;
    let (result, ms) = timed(|| -> Result<VerifyReport> {
        let mut report = VerifyReport::new(
            "glw_intersection",
            format!("{n}x{n} contraction, k = {k}, {grid} directions"),
            budget.seed,
        );
        let inner = sequential(budget);
        let thetas = uniform_grid(grid);
        let rows = budget.exec.map_slice(&thetas, |&t| {
            extremal_dilation(a, k, t, &inner).map(|e| (t, e))
        });
        let mut records = Vec::with_capacity(grid);
        for row in rows {
            let (t, e) = row?;
            if !e.converged {
                report.note(format!("theta = {t}: optimizer stopped at gap {:e}", e.gap));
            }
            if !(is_unitary(&e.u) && is_dilation_of(&e.u, a)) {
                report.note(format!(
                    "theta = {t}: constructed matrix is not a unitary dilation"
                ));
            }
            records.push(DirectionRecord {
                theta: t,
                target: e.target,
                achieved: e.achieved,
                gap: e.gap,
            });
        }
        let target =
            ConvexRegion::from_samples(records.iter().map(|r| (r.theta, r.target)).collect());
        let achieved =
            ConvexRegion::from_samples(records.iter().map(|r| (r.theta, r.achieved)).collect());
        report.hausdorff = target.hausdorff(&achieved);
        report.per_direction = records;

        let margin = interlacing_margin(a, k, grid, budget.seed)?;
        report.metric("interlacing_min_margin", margin);
        let max_gap = report.max_gap();
        let min_gap = report.min_gap();
        report.metric("max_gap", max_gap);
        report.metric("min_gap", min_gap);
        report.residuals = report.per_direction.iter().map(|r| r.gap).collect();

        if max_gap > GAP_TOL {
            report.note(format!("max gap {max_gap:e} exceeds {GAP_TOL:e}"));
        }
        if min_gap < -INTERLACING_TOL {
            report.note(format!(
                "gap {min_gap:e} violates the interlacing lower bound"
            ));
        }
        if report.hausdorff > HAUSDORFF_TOL {
            report.note(format!(
                "hausdorff {:e} exceeds {HAUSDORFF_TOL:e}",
                report.hausdorff
            ));
        }
        if margin < -INTERLACING_TOL {
            report.note(format!(
                "a sampled dilation undercuts A's support by {:e}",
                -margin
            ));
        }
        report.passed = report.diagnostics.is_empty();
        Ok(report)
    });
    let mut report = result?;
    report.runtime_ms = ms;
    Ok(report)
}

/// Per direction, places the chord point `λ_ε = (μ+ε) + i√(1-(μ+ε)²)`
/// (rotated back by `e^{-iθ}`) in the spectrum of an `N`-dilation with
/// multiplicity `N = d_A`, and checks
/// `μ ≤ λ_k(Re(e^{iθ}U_ε)) ≤ μ + ε` for each `ε` of [`EPSILON_CHAIN`],
/// where `μ = λ_k(Re(e^{iθ}A))`.
pub fn verify_bt(
    a: &ComplexMatrix,
    k: usize,
    grid: usize,
    budget: &SearchBudget,
) -> Result<VerifyReport> {
    let n = require_square(a, "A")?;
    check_k(n, k)?;
    let col = Colligation::new(a)?;
    let d = col.d();
    let (result, ms) = timed(|| -> Result<VerifyReport> {
        let mut report = VerifyReport::new(
            "bt_ndilation",
            format!("{n}x{n} contraction, N = {d}, k = {k}, {grid} directions"),
            budget.seed,
        );
        let inner = sequential(budget);
        let thetas = uniform_grid(grid);

        struct Row {
            theta: f64,
            mu: f64,
            chain: Vec<(f64, f64, f64)>,
            notes: Vec<String>,
        }
        let rows = budget.exec.map_slice(&thetas, |&t| -> Result<Row> {
            let mu = rotated_lambda_k(a, t, k);
            let mut chain = Vec::new();
            let mut notes = Vec::new();
            for eps in EPSILON_CHAIN {
                let m = mu + eps;
                let (u, residual) = if d == 0 {
                    (a.clone(), 0.0)
                } else if m >= 1.0 {
                    // Any N-dilation satisfies λ_k ≤ 1 ≤ μ + ε.
                    (col.assemble(&crate::linalg::identity(d)), 0.0)
                } else {
                    let s = (1.0 - m * m).sqrt();
                    let rotation = C64::from_polar(1.0, -t);
                    let mut lambda = rotation * c(m, s);
                    if resolvent_gap(a, lambda)? < crate::dilation::SPECTRUM_SEPARATION {
                        lambda = rotation * c(m, -s);
                    }
                    let rx = EigenvaluePrescription::single(lambda, d)?;
                    let p = prescribed_eigenvalue_ndilation(a, &rx, &inner)?;
                    (p.u, p.residual)
                };
                let achieved = rotated_lambda_k(&u, t, k);
                if residual > EIGEN_RESIDUAL_TOL {
                    notes.push(format!(
                        "theta = {t}, eps = {eps}: eigenvalue residual {residual:e}"
                    ));
                }
                if achieved > mu + eps + INTERLACING_TOL {
                    notes.push(format!(
                        "theta = {t}, eps = {eps}: lambda_k = {achieved} exceeds mu + eps = {}",
                        mu + eps
                    ));
                }
                if achieved < mu - INTERLACING_TOL {
                    notes.push(format!(
                        "theta = {t}, eps = {eps}: interlacing bound violated"
                    ));
                }
                if !(is_unitary(&u) && is_dilation_of(&u, a)) {
                    notes.push(format!("theta = {t}, eps = {eps}: not a unitary dilation"));
                }
                chain.push((eps, achieved, residual));
            }
            Ok(Row {
                theta: t,
                mu,
                chain,
                notes,
            })
        });

        let mut records = Vec::with_capacity(grid);
        let mut residuals = Vec::new();
        for row in rows {
            let row = row?;
            let &(_, achieved, _) = row.chain.last().expect("nonempty chain");
            records.push(DirectionRecord {
                theta: row.theta,
                target: row.mu,
                achieved,
                gap: achieved - row.mu,
            });
            residuals.extend(row.chain.iter().map(|x| x.2));
            for note in row.notes {
                report.note(note);
            }
        }
        let smallest = *EPSILON_CHAIN.last().expect("nonempty");
        let target =
            ConvexRegion::from_samples(records.iter().map(|r| (r.theta, r.target)).collect());
        let achieved =
            ConvexRegion::from_samples(records.iter().map(|r| (r.theta, r.achieved)).collect());
        report.hausdorff = target.hausdorff(&achieved);
        report.per_direction = records;
        report.residuals = residuals;
        report.metric("defect_number", d as f64);
        report.metric("max_gap", report.max_gap());
        report.metric("min_gap", report.min_gap());
        if report.hausdorff > smallest + HAUSDORFF_TOL {
            report.note(format!(
                "hausdorff {:e} exceeds eps + {HAUSDORFF_TOL:e}",
                report.hausdorff
            ));
        }
        report.passed = report.diagnostics.is_empty();
        Ok(report)
    });
    let mut report = result?;
    report.runtime_ms = ms;
    Ok(report)
}

/// Term rule `m ↦ a_m` for `m = 1, 2, …`.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceRule {
    /// `a_m = 1 - 1/m`.
    OneMinusReciprocal,
    Constant(C64),
    /// Explicit terms; sections longer than the list are rejected.
    Values(Vec<C64>),
}

impl SequenceRule {
    pub fn term(&self, m: usize) -> Result<C64> {
        match self {
            SequenceRule::OneMinusReciprocal => Ok(c(1.0 - 1.0 / m as f64, 0.0)),
            SequenceRule::Constant(z) => Ok(*z),
            SequenceRule::Values(v) => v.get(m - 1).copied().ok_or_else(|| {
                Error::InvalidArgument(format!("sequence has only {} terms", v.len()))
            }),
        }
    }
}

/// Block rule `m ↦ B_m` for `m = 1, 2, …`.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockRule {
    /// `B_m = diag(-1/(m+1), e^{iπ/(m+1)}/(m+1))`: two eigenvalues per block
    /// approaching 0 from the negative axis and from the upper half-plane.
    RotatingPairs,
    /// Explicit square blocks.
    Blocks(Vec<ComplexMatrix>),
}

impl BlockRule {
    fn block(&self, m: usize) -> Result<ComplexMatrix> {
        match self {
            BlockRule::RotatingPairs => {
                let r = (m + 1) as f64;
                Ok(diag(&[c(-1.0 / r, 0.0), C64::from_polar(1.0 / r, PI / r)]))
            }
            BlockRule::Blocks(b) => b.get(m - 1).cloned().ok_or_else(|| {
                Error::InvalidArgument(format!("block rule has only {} blocks", b.len()))
            }),
        }
    }
}

/// Infinite matrix given by a rule; `section(n)` is its leading `n × n`
/// block, so sections are nested.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorGenerator {
    Diagonal(SequenceRule),
    /// Weights on the subdiagonal: `A e_m = w_m e_{m+1}`.
    WeightedShift(SequenceRule),
    BlockDirectSum(BlockRule),
}

impl OperatorGenerator {
    pub fn section(&self, n: usize) -> Result<ComplexMatrix> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "section size must be positive".into(),
            ));
        }
        match self {
            OperatorGenerator::Diagonal(rule) => {
                let terms = (1..=n).map(|m| rule.term(m)).collect::<Result<Vec<_>>>()?;
                Ok(diag(&terms))
            }
            OperatorGenerator::WeightedShift(rule) => {
                let mut a = crate::linalg::zeros(n, n);
                for m in 1..n {
                    a[(m, m - 1)] = rule.term(m)?;
                }
                Ok(a)
            }
            OperatorGenerator::BlockDirectSum(rule) => {
                let mut a = crate::linalg::zeros(n, n);
                let mut offset = 0;
                let mut m = 1;
                while offset < n {
                    let b = rule.block(m)?;
                    require_square(&b, "block")?;
                    let size = b.nrows().min(n - offset);
                    a.view_mut((offset, offset), (size, size))
                        .copy_from(&b.view((0, 0), (size, size)));
                    offset += b.nrows();
                    m += 1;
                }
                Ok(a)
            }
        }
    }
}

/// `λ_k(Re(e^{iθ}A_n))` for `n = k, …, n_max`.
pub fn truncation_sequence(
    generator: &OperatorGenerator,
    k: usize,
    theta: f64,
    n_max: usize,
) -> Result<Vec<f64>> {
    (k.max(1)..=n_max)
        .map(|n| Ok(rotated_lambda_k(&generator.section(n)?, theta, k)))
        .collect()
}

/// Checks that `λ_k(Re(e^{iθ}A_n))` is nondecreasing in `n` (within `1e-10`)
/// on `directions` equally spaced directions. Each row records the last
/// two values of a sequence and the final increment; `residuals` holds the
/// smallest increment per direction.
pub fn truncation_convergence(
    generator: &OperatorGenerator,
    k: usize,
    n_max: usize,
    directions: usize,
) -> Result<VerifyReport> {
    if k == 0 {
        return Err(Error::KOutOfRange { k, dim: n_max });
    }
    if n_max < k + 2 {
        return Err(Error::InvalidArgument(format!(
            "n_max = {n_max} must be at least k + 2 = {}",
            k + 2
        )));
    }
    if directions == 0 {
        return Err(Error::InvalidArgument("need at least one direction".into()));
    }
    let (result, ms) = timed(|| -> Result<VerifyReport> {
        let mut report = VerifyReport::new(
            "truncation_monotone",
            format!("{generator:?}, k = {k}, sections up to {n_max}"),
            0,
        );
        let mut worst = f64::INFINITY;
        for t in uniform_grid(directions) {
            let seq = truncation_sequence(generator, k, t, n_max)?;
            let min_inc = seq
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::INFINITY, f64::min);
            let last = seq[seq.len() - 1];
            let prev = seq[seq.len() - 2];
            report.per_direction.push(DirectionRecord {
                theta: t,
                target: last,
                achieved: prev,
                gap: last - prev,
            });
            report.residuals.push(min_inc);
            if min_inc < -MONOTONE_TOL {
                report.note(format!("theta = {t}: sequence decreases by {:e}", -min_inc));
            }
            worst = worst.min(min_inc);
        }
        report.metric("min_increment", worst);
        report.passed = report.diagnostics.is_empty();
        Ok(report)
    });
    let mut report = result?;
    report.runtime_ms = ms;
    Ok(report)
}

/// Compares the subset-hull formula for a normal matrix with the half-plane
/// intersection for `diag(eigs)`.
pub fn verify_normal_equivalence(eigs: &[C64], k: usize, grid: usize) -> Result<VerifyReport> {
    if eigs.is_empty() || eigs.len() > 8 {
        return Err(Error::InvalidArgument(format!(
            "need between 1 and 8 eigenvalues, got {}",
            eigs.len()
        )));
    }
    check_k(eigs.len(), k)?;
    let (result, ms) = timed(|| -> Result<VerifyReport> {
        let mut report = VerifyReport::new(
            "normal_equivalence",
            format!("{} eigenvalues, k = {k}, {grid} directions", eigs.len()),
            0,
        );
        let hulls = normal_region_on_grid(eigs, k, grid)?;
        let halfplanes = omega_region_with(&diag(eigs), k, grid, Exec::Sequential)?;
        report.hausdorff = hulls.hausdorff(&halfplanes);
        if !hulls.empty && !halfplanes.empty {
            report.per_direction = hulls
                .samples
                .iter()
                .zip(&halfplanes.samples)
                .map(|(&(t, s0), &(_, s1))| {
                    let s1_tight = halfplanes.support(t).unwrap_or(s1);
                    DirectionRecord {
                        theta: t,
                        target: s0,
                        achieved: s1_tight,
                        gap: s1_tight - s0,
                    }
                })
                .collect();
        }
        report.metric("empty_hulls", f64::from(u8::from(hulls.empty)));
        report.metric("empty_halfplanes", f64::from(u8::from(halfplanes.empty)));
        if report.hausdorff > HAUSDORFF_TOL {
            report.note(format!(
                "hausdorff {:e} exceeds {HAUSDORFF_TOL:e}",
                report.hausdorff
            ));
        }
        report.passed = report.diagnostics.is_empty();
        Ok(report)
    });
    let mut report = result?;
    report.runtime_ms = ms;
    Ok(report)
}

/// Finite diagonal section listing the atoms of a model in order.
fn model_section(model: &SpectralModel) -> ComplexMatrix {
    let mut entries = Vec::new();
    for atom in model.atoms() {
        let copies = match atom.multiplicity {
            Multiplicity::Finite(m) => m as usize,
            Multiplicity::Infinite => 1,
        };
        entries.extend(std::iter::repeat_n(atom.point, copies));
    }
    diag(&entries)
}

/// The accumulating spectrum `{-1/n} ∪ {e^{iπ/n}/n}`, `2 ≤ n ≤ n_trunc`.
///
/// Checks that `0` lies in the rank-k regions of the truncated model for
/// every `k` in `k_list`, in `W` of the finite section, and in `Ω_2(U)` of
/// sampled unitary dilations `U` of the section. Because the atoms nearest
/// to `0` are cut off, containment is tested up to the truncation scale
/// `1/n_trunc` (see the `truncation_tolerance` metric). The statement that
/// the infinite-rank range of the full operator is empty is only recorded
/// at the model level.
pub fn example_counterexample_inf(
    k_list: &[usize],
    n_trunc: usize,
    n_dilations: usize,
    grid: usize,
    seed: u64,
    exec: Exec,
) -> Result<VerifyReport> {
    if n_trunc < 2 {
        return Err(Error::InvalidArgument("n_trunc must be at least 2".into()));
    }
    let (result, ms) = timed(|| -> Result<VerifyReport> {
        let mut report = VerifyReport::new(
            "inf_example",
            format!(
                "atoms -1/n and e^(i pi/n)/n for 2 <= n <= {n_trunc}; k in {k_list:?}; {n_dilations} dilations"
            ),
            seed,
        );
        let tol = 1.0 / n_trunc as f64;
        report.metric("truncation_tolerance", tol);
        let origin = c(0.0, 0.0);
        let model = SpectralModel::example_blocks(n_trunc, Multiplicity::Finite(1))?;

        for &k in k_list {
            let region = spectral_v_k(&model, RankIndex::Finite(k), grid)?;
            let dist = region.distance_to(origin);
            report.metric(&format!("v{k}_distance_to_zero"), dist);
            report.metric(
                &format!("v{k}_max_width"),
                region.max_width().unwrap_or(f64::NEG_INFINITY),
            );
            if dist > tol {
                report.note(format!("k = {k}: 0 is {dist:e} away from the model region"));
            }
        }

        let section = model_section(&model);
        let w = omega_region_with(&section, 1, grid, exec)?;
        let dist_w = w.distance_to(origin);
        report.metric("section_w_distance_to_zero", dist_w);
        if dist_w > tol {
            report.note(format!("0 is {dist_w:e} away from W of the section"));
        }

        let size = section.nrows();
        let margins = exec.map(n_dilations, |i| -> Result<f64> {
            let mut rng = item_rng(seed, i as u64);
            let u = if i % 2 == 0 {
                dilation_from_parameter(&section, &haar_unitary(size, &mut rng))?
            } else {
                let d = Colligation::new(&section)?.d();
                let v = haar_unitary(d, &mut rng);
                let w = haar_unitary(d, &mut rng);
                minimal_dilation(&section, &v, &w)?
            };
            let samples = support_samples(&u, 2.min(u.nrows()), grid, Exec::Sequential)?;
            Ok(samples
                .iter()
                .map(|&(_, s)| s)
                .fold(f64::INFINITY, f64::min))
        });
        let mut worst = f64::INFINITY;
        for (i, m) in margins.into_iter().enumerate() {
            let m = m?;
            report.residuals.push(m);
            if m < -tol {
                report.note(format!("dilation {i}: 0 is outside Omega_2(U) by {:e}", -m));
            }
            worst = worst.min(m);
        }
        report.metric("dilation_min_margin", worst);

        let inf_region = omega_inf(&Operator::Model(model), grid)?;
        report.metric(
            "model_omega_inf_empty",
            f64::from(u8::from(inf_region.empty)),
        );
        report.passed = report.diagnostics.is_empty();
        report.note(
            "model-level only: emptiness of the infinite-rank range of the full operator is not checked at finite size",
        );
        Ok(report)
    });
    let mut report = result?;
    report.runtime_ms = ms;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag_real, identity, shift};
    use crate::sampling::{random_contraction, random_contraction_with};
    use approx::assert_abs_diff_eq;

    #[test]
    fn glw_on_shift() {
        let r = verify_glw(&shift(3), 1, 90, &SearchBudget::default()).unwrap();
        assert!(r.passed, "{:?}", r.diagnostics);
        let disk = ConvexRegion::from_samples(
            uniform_grid(720)
                .into_iter()
                .map(|t| (t, std::f64::consts::FRAC_PI_4.cos()))
                .collect(),
        );
        let achieved = ConvexRegion::from_samples(
            r.per_direction
                .iter()
                .map(|d| (d.theta, d.achieved))
                .collect(),
        );
        assert!(achieved.hausdorff(&disk) <= 2e-3);
    }

    #[test]
    fn glw_on_unitary() {
        let u = haar_unitary(3, &mut item_rng(40, 0));
        let r = verify_glw(&u, 2, 24, &SearchBudget::default()).unwrap();
        assert!(r.passed);
        assert!(r.per_direction.iter().all(|d| d.gap == 0.0));
    }

    #[test]
    fn glw_on_random_contraction() {
        let a = random_contraction(4, &mut item_rng(41, 0));
        let r = verify_glw(&a, 2, 90, &SearchBudget::default()).unwrap();
        assert!(r.passed, "{:?}", r.diagnostics);
    }

    #[test]
    fn bt_examples() {
        let r = verify_bt(
            &diag_real(&[0.5, -1.0 / 3.0]),
            1,
            24,
            &SearchBudget::default(),
        )
        .unwrap();
        assert!(r.passed, "{:?}", r.diagnostics);
        assert_eq!(r.metrics["defect_number"], 2.0);

        let r = verify_bt(&identity(2), 1, 12, &SearchBudget::default()).unwrap();
        assert!(r.passed);

        let a = random_contraction_with(3, 0.9, &mut item_rng(42, 0));
        let r = verify_bt(&a, 2, 24, &SearchBudget::default()).unwrap();
        assert!(r.passed, "{:?}", r.diagnostics);
    }

    #[test]
    fn diagonal_sections() {
        let g = OperatorGenerator::Diagonal(SequenceRule::OneMinusReciprocal);
        let seq = truncation_sequence(&g, 1, 0.0, 30).unwrap();
        for (i, v) in seq.iter().enumerate() {
            let n = (i + 1) as f64;
            assert_abs_diff_eq!(*v, 1.0 - 1.0 / n, epsilon = 1e-14);
        }
        assert!(truncation_convergence(&g, 1, 30, 8).unwrap().passed);
    }

    #[test]
    fn shift_sections() {
        let g = OperatorGenerator::WeightedShift(SequenceRule::Constant(c(1.0, 0.0)));
        assert_eq!(g.section(5).unwrap(), shift(5));
        let seq = truncation_sequence(&g, 1, 0.0, 20).unwrap();
        for (i, v) in seq.iter().enumerate() {
            let n = (i + 1) as f64;
            assert_abs_diff_eq!(*v, (PI / (n + 1.0)).cos(), epsilon = 1e-12);
        }
        assert!(truncation_convergence(&g, 1, 20, 8).unwrap().passed);
    }

    #[test]
    fn block_sections_are_nested() {
        let g = OperatorGenerator::BlockDirectSum(BlockRule::RotatingPairs);
        let big = g.section(9).unwrap();
        for n in 1..9 {
            assert_eq!(g.section(n).unwrap(), big.view((0, 0), (n, n)).into_owned());
        }
        let seq = truncation_sequence(&g, 1, PI, 40).unwrap();
        assert_abs_diff_eq!(*seq.last().unwrap(), 0.5, epsilon = 1e-12);
        assert!(truncation_convergence(&g, 2, 40, 8).unwrap().passed);
    }

    #[test]
    fn truncation_rejects_short_runs() {
        let g = OperatorGenerator::Diagonal(SequenceRule::OneMinusReciprocal);
        assert!(truncation_convergence(&g, 3, 4, 8).is_err());
    }

    #[test]
    fn normal_equivalence_examples() {
        let roots: Vec<C64> = (0..4)
            .map(|j| C64::from_polar(1.0, PI / 2.0 * j as f64))
            .collect();
        assert!(verify_normal_equivalence(&roots, 2, 720).unwrap().passed);
        let line: Vec<C64> = [1.0, 2.0, 3.0, 4.0].iter().map(|&x| c(x, 0.0)).collect();
        assert!(verify_normal_equivalence(&line, 2, 720).unwrap().passed);
        let same = vec![c(0.3, -0.2); 5];
        for k in 1..=5 {
            assert!(verify_normal_equivalence(&same, k, 720).unwrap().passed);
        }
        assert!(verify_normal_equivalence(&[c(0.0, 0.0); 9], 1, 720).is_err());
    }

    #[test]
    fn accumulating_spectrum_example() {
        let r = example_counterexample_inf(&[1, 2, 3], 40, 2, 90, 0, Exec::default()).unwrap();
        assert!(r.passed, "{:?} {:?}", r.diagnostics, r.metrics);
        assert_eq!(r.metrics["model_omega_inf_empty"], 1.0);
    }
}
