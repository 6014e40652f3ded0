//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the criteria execute one after the
//! other and their wall-clock limits are measured in isolation.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use nrange_core::cnum::{self, CWeights};
use nrange_core::dilation::{
    contractive_dilation, dilation_from_parameter, halmos_dilation, minimal_dilation,
    prescribed_eigenvalue_ndilation, Colligation, EigenvaluePrescription, SearchBudget,
};
use nrange_core::linalg::{
    self, c, fro, hermitian_part, lambda_k, op_norm, singular_values, ComplexMatrix, C64,
};
use nrange_core::ranges::{normal_region_on_grid, omega_region, support_value};
use nrange_core::sampling::{
    gaussian_matrix, haar_unitary, item_rng, random_contraction, random_hermitian, random_in_disk,
    random_normal, random_partial_isometry_mix,
};
use nrange_core::verify::{truncation_sequence, verify_glw, OperatorGenerator, SequenceRule};
use nrange_core::{ConvexRegion, Exec};

/// Outcome of one criterion: a short summary of the measured quantities, or
/// the reason it failed.
type Verdict = Result<String, String>;

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn disk_oracle(radius: f64, grid: usize) -> ConvexRegion {
    let samples = (0..grid)
        .map(|i| (2.0 * PI * i as f64 / grid as f64, radius))
        .collect();
    ConvexRegion::from_samples(samples)
}

fn shift_oracle_reproduction() -> Verdict {
    let mut worst = 0.0_f64;
    let mut empties = 0;
    for n in 2..=12usize {
        let top = n.div_ceil(2);
        for k in 1..=n {
            let region = omega_region(&linalg::shift(n), k, 720).map_err(|e| e.to_string())?;
            if k <= top {
                let radius = (k as f64 * PI / (n + 1) as f64).cos();
                let h = region.hausdorff(&disk_oracle(radius, 720));
                worst = worst.max(h);
                ensure(h <= 1e-3, || {
                    format!("n={n} k={k}: Hausdorff {h:.3e} > 1e-3")
                })?;
            } else {
                ensure(region.empty, || {
                    format!("n={n} k={k}: region should be empty")
                })?;
                empties += 1;
            }
        }
    }
    Ok(format!("max Hausdorff {worst:.2e}, {empties} empty cases"))
}

fn normal_formula_equivalence() -> Verdict {
    let mut worst = 0.0_f64;
    for i in 0..50u64 {
        let mut rng = item_rng(2, i);
        let n = rng.random_range(1..=6);
        let k = rng.random_range(1..=3.min(n));
        let eigs: Vec<C64> = (0..n).map(|_| random_in_disk(1.0, &mut rng)).collect();
        let a = random_normal(&eigs, &mut rng);
        let direct = omega_region(&a, k, 720).map_err(|e| e.to_string())?;
        let hulls = normal_region_on_grid(&eigs, k, 720).map_err(|e| e.to_string())?;
        let h = direct.hausdorff(&hulls);
        worst = worst.max(h);
        ensure(h <= 2e-3, || {
            format!("instance {i} (n={n}, k={k}): Hausdorff {h:.3e}")
        })?;
    }
    Ok(format!("50 normal matrices, max Hausdorff {worst:.2e}"))
}

fn glw_intersection() -> Verdict {
    let budget = SearchBudget::default().with_restarts(16);
    let (mut total, mut tight, mut worst_gap, mut worst_h) = (0usize, 0usize, 0.0_f64, 0.0_f64);
    for i in 0..10u64 {
        let mut rng = item_rng(3, i);
        let n = if i < 5 { 3 } else { 4 };
        // Every other instance has an isometric singular value, so the
        // defect number drops below n.
        let a = if i % 2 == 0 {
            random_contraction(n, &mut rng)
        } else {
            random_partial_isometry_mix(n, 1, &mut rng)
        };
        for k in 1..=2 {
            let report = verify_glw(&a, k, 90, &budget.with_seed(i)).map_err(|e| e.to_string())?;
            for rec in &report.per_direction {
                total += 1;
                if rec.gap <= 1e-6 {
                    tight += 1;
                }
                worst_gap = worst_gap.max(rec.gap);
            }
            worst_h = worst_h.max(report.hausdorff);
        }
    }
    let fraction = tight as f64 / total as f64;
    ensure(fraction >= 0.99, || {
        format!("only {:.2}% of gaps <= 1e-6", 100.0 * fraction)
    })?;
    ensure(worst_gap <= 1e-4, || {
        format!("worst gap {worst_gap:.3e} > 1e-4")
    })?;
    ensure(worst_h <= 2e-3, || {
        format!("Hausdorff {worst_h:.3e} > 2e-3")
    })?;
    Ok(format!(
        "{tight}/{total} gaps <= 1e-6, worst gap {worst_gap:.2e}, max Hausdorff {worst_h:.2e}"
    ))
}

fn interlacing_containment() -> Verdict {
    let mut worst = f64::INFINITY;
    for i in 0..500u64 {
        let mut rng = item_rng(4, i);
        let n = rng.random_range(1..=4);
        let a = if rng.random_bool(0.5) {
            random_contraction(n, &mut rng)
        } else {
            let isometric = rng.random_range(0..n);
            random_partial_isometry_mix(n, isometric, &mut rng)
        };
        let u = match i % 3 {
            0 => halmos_dilation(&a),
            1 => dilation_from_parameter(&a, &haar_unitary(n, &mut rng)),
            _ => {
                let d = Colligation::new(&a).map_err(|e| e.to_string())?.d();
                let v = haar_unitary(d, &mut rng);
                let w = haar_unitary(d, &mut rng);
                minimal_dilation(&a, &v, &w)
            }
        }
        .map_err(|e| e.to_string())?;
        for _ in 0..32 {
            let k = rng.random_range(1..=n);
            let theta = rng.random::<f64>() * 2.0 * PI;
            let su = support_value(&u, k, theta).map_err(|e| e.to_string())?;
            let sa = support_value(&a, k, theta).map_err(|e| e.to_string())?;
            worst = worst.min(su - sa);
            ensure(su >= sa - 1e-9, || {
                format!("pair {i}: k={k} theta={theta:.4}: {su} < {sa} - 1e-9")
            })?;
        }
    }
    Ok(format!("16000 checks, smallest margin {worst:.2e}"))
}

fn contractive_construction() -> Verdict {
    let budget = SearchBudget::default();
    let mut worst = 0.0_f64;
    for i in 0..20u64 {
        let mut rng = item_rng(5, i);
        let n = rng.random_range(1..=4);
        let k = rng.random_range(1..=2.min(n));
        // [A; B] is a contraction, i.e. A*A + B*B <= I.
        let g = gaussian_matrix(2 * n, n, &mut rng);
        let g = g.scale(rng.random_range(0.5..1.0) / op_norm(&g));
        let a = g.rows(0, n).into_owned();
        let b = g.rows(n, n).into_owned();
        let z = contractive_dilation(&a, &b, k, &budget).map_err(|e| e.to_string())?;
        let lz = lambda_k(&(&z + z.adjoint()), k).map_err(|e| e.to_string())?;
        let la = lambda_k(&(&a + a.adjoint()), k).map_err(|e| e.to_string())?;
        let err = (lz - la).abs();
        worst = worst.max(err);
        ensure(err <= 1e-5, || {
            format!("instance {i} (n={n}, k={k}): error {err:.3e}")
        })?;
        ensure(op_norm(&z) <= 1.0 + 1e-9, || {
            format!("instance {i}: ||Z|| > 1")
        })?;
        let lower_left = z.view((n, 0), (n, n)).into_owned();
        ensure(fro(&(lower_left - &b)) <= 1e-8, || {
            format!("instance {i}: Z_21 != B")
        })?;
    }
    Ok(format!("20 pairs, max |lambda_k error| {worst:.2e}"))
}

fn prescribed_eigenvalue() -> Verdict {
    let budget = SearchBudget::default();
    let mut worst = 0.0_f64;
    for i in 0..20u64 {
        let mut rng = item_rng(6, i);
        let n = rng.random_range(1..=3);
        let a = random_contraction(n, &mut rng);
        let lambda = C64::from_polar(1.0, rng.random::<f64>() * 2.0 * PI);
        let rx = EigenvaluePrescription::single(lambda, n).map_err(|e| e.to_string())?;
        let p = prescribed_eigenvalue_ndilation(&a, &rx, &budget).map_err(|e| e.to_string())?;
        // Independent check: the n smallest singular values of U - lambda I.
        let shifted = &p.u - ComplexMatrix::from_diagonal_element(2 * n, 2 * n, lambda);
        let sv = singular_values(&shifted);
        let residual = sv[sv.len() - n];
        worst = worst.max(residual).max(p.residual);
        ensure(residual <= 1e-7 && p.residual <= 1e-7, || {
            format!("instance {i} (n={n}): residual {residual:.3e}")
        })?;
        ensure(
            linalg::is_unitary(&p.u) && linalg::is_dilation_of(&p.u, &a),
            || format!("instance {i}: not a unitary dilation"),
        )?;
    }
    Ok(format!("20 contractions, max residual {worst:.2e}"))
}

fn counterexample_gap() -> Verdict {
    let j = cnum::jordan_block();
    let weights = CWeights::real(&[1.0, 1.0]).map_err(|e| e.to_string())?;
    let region = cnum::c_region(&weights, &j, 720).map_err(|e| e.to_string())?;
    let width = region.sampled_width().ok_or("c_region is empty")?;
    ensure(width <= 1e-12, || format!("c_region width {width:.3e}"))?;
    ensure(region.distance_to(c(0.0, 0.0)) <= 1e-12, || {
        "0 not in c_region".into()
    })?;

    let intervals = cnum::counterexample_intervals(1000, 0, Exec::default());
    ensure(intervals.len() == 1000, || "expected 1000 samples".into())?;
    let mut min_beta = f64::INFINITY;
    let mut min_lambda = f64::INFINITY;
    for (i, iv) in intervals.iter().enumerate() {
        ensure(iv.alpha <= 1e-9 && iv.beta >= -1e-9, || {
            format!("sample {i}: [{}, {}] misses 0", iv.alpha, iv.beta)
        })?;
        min_beta = min_beta.min(iv.beta);
        min_lambda = min_lambda.min(iv.lambda_1);
    }
    ensure(min_beta >= 0.25, || format!("min beta {min_beta}"))?;
    ensure(min_lambda >= 0.5 - 1e-9, || {
        format!("min lambda_1 {min_lambda}")
    })?;
    Ok(format!(
        "width {width:.1e}, min beta {min_beta:.4}, min lambda_1(Re U) {min_lambda:.6}"
    ))
}

fn monotone_truncations() -> Verdict {
    let diagonal = OperatorGenerator::Diagonal(SequenceRule::OneMinusReciprocal);
    let values = truncation_sequence(&diagonal, 1, 0.0, 64).map_err(|e| e.to_string())?;
    let mut worst_diag = 0.0_f64;
    for (i, v) in values.iter().enumerate() {
        let n = (i + 1) as f64;
        worst_diag = worst_diag.max((v - (1.0 - 1.0 / n)).abs());
    }
    ensure(worst_diag <= 1e-14, || {
        format!("diagonal error {worst_diag:.3e}")
    })?;

    let shift = OperatorGenerator::WeightedShift(SequenceRule::Constant(c(1.0, 0.0)));
    let values = truncation_sequence(&shift, 1, 0.0, 64).map_err(|e| e.to_string())?;
    let mut worst_shift = 0.0_f64;
    for (i, v) in values.iter().enumerate() {
        let n = (i + 1) as f64;
        worst_shift = worst_shift.max((v - (PI / (n + 1.0)).cos()).abs());
    }
    ensure(worst_shift <= 1e-10, || {
        format!("shift error {worst_shift:.3e}")
    })?;
    ensure(values.windows(2).all(|w| w[1] >= w[0]), || {
        "shift sequence not monotone".into()
    })?;
    let diag_values = truncation_sequence(&diagonal, 1, 0.0, 64).map_err(|e| e.to_string())?;
    ensure(diag_values.windows(2).all(|w| w[1] >= w[0]), || {
        "diagonal sequence not monotone".into()
    })?;
    Ok(format!(
        "n <= 64: diagonal error {worst_diag:.1e}, shift error {worst_shift:.1e}, both monotone"
    ))
}

fn random_matrix(rng: &mut impl Rng) -> ComplexMatrix {
    let n = rng.random_range(2..=5);
    gaussian_matrix(n, n, rng).scale(rng.random_range(0.1..2.0))
}

fn invariant_suite() -> Verdict {
    let rel = |scale: f64| 1e-8 * scale.max(1.0);
    let sv = |a: &ComplexMatrix, k: usize, t: f64| support_value(a, k, t).unwrap();
    let mut failures = Vec::new();
    for i in 0..200u64 {
        let mut rng = item_rng(9, i);
        let a = random_matrix(&mut rng);
        let n = a.nrows();
        let norm = op_norm(&a);
        let k = rng.random_range(1..=n);
        let theta = rng.random::<f64>() * 2.0 * PI;

        // Affine covariance.
        let phi = rng.random::<f64>() * 2.0 * PI;
        let beta = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let moved = a.scale(1.0) * C64::from_polar(1.0, phi)
            + ComplexMatrix::from_diagonal_element(n, n, beta);
        let lhs = sv(&moved, k, theta);
        let rhs = sv(&a, k, theta + phi) + (C64::from_polar(1.0, theta) * beta).re;
        if (lhs - rhs).abs() > rel(norm + beta.norm()) {
            failures.push(format!("P1 #{i}: {lhs} vs {rhs}"));
        }

        // Unitary invariance.
        let q = haar_unitary(n, &mut rng);
        let rotated = q.adjoint() * &a * &q;
        let (lhs, rhs) = (sv(&rotated, k, theta), sv(&a, k, theta));
        if (lhs - rhs).abs() > 1e-10 * norm.max(1.0) {
            failures.push(format!("P4 #{i}: {lhs} vs {rhs}"));
        }

        // Compression monotonicity.
        let m = rng.random_range(k..=n);
        let v = haar_unitary(n, &mut rng).columns(0, m).into_owned();
        let compressed = v.adjoint() * &a * &v;
        let (lhs, rhs) = (sv(&compressed, k, theta), sv(&a, k, theta));
        if lhs > rhs + rel(norm) {
            failures.push(format!("P5 #{i}: {lhs} > {rhs}"));
        }

        // Nesting.
        if k < n {
            let (lhs, rhs) = (sv(&a, k + 1, theta), sv(&a, k, theta));
            if lhs > rhs + rel(norm) {
                failures.push(format!("nesting #{i}: {lhs} > {rhs}"));
            }
        }

        // Lipschitz supports.
        let theta2 = rng.random::<f64>() * 2.0 * PI;
        let diff = (sv(&a, k, theta) - sv(&a, k, theta2)).abs();
        if diff > norm * (theta - theta2).abs() + rel(norm) {
            failures.push(format!("Lipschitz #{i}: {diff}"));
        }

        // Weyl perturbation.
        let mh = random_hermitian(n, &mut rng);
        let nh = hermitian_part(&(&mh + random_hermitian(n, &mut rng).scale(0.1)));
        let bound = op_norm(&(&mh - &nh));
        let diff = (lambda_k(&mh, k).unwrap() - lambda_k(&nh, k).unwrap()).abs();
        if diff > bound + rel(op_norm(&mh)) {
            failures.push(format!("Weyl #{i}: {diff} > {bound}"));
        }
    }
    ensure(failures.is_empty(), || failures.join("; "))?;
    Ok("6 properties x 200 instances, zero failures".into())
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Verdict,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            name: "shift oracle reproduction",
            limit: Duration::from_secs(5),
            run: shift_oracle_reproduction,
        },
        Criterion {
            name: "normal formula equivalence",
            limit: Duration::from_secs(30),
            run: normal_formula_equivalence,
        },
        Criterion {
            name: "dilation intersection identity",
            limit: Duration::from_secs(300),
            run: glw_intersection,
        },
        Criterion {
            name: "interlacing containment",
            limit: Duration::from_secs(20),
            run: interlacing_containment,
        },
        Criterion {
            name: "contractive dilation construction",
            limit: Duration::from_secs(120),
            run: contractive_construction,
        },
        Criterion {
            name: "prescribed eigenvalue dilation",
            limit: Duration::from_secs(120),
            run: prescribed_eigenvalue,
        },
        Criterion {
            name: "C-numerical range counterexample",
            limit: Duration::from_secs(30),
            run: counterexample_gap,
        },
        Criterion {
            name: "monotone truncation convergence",
            limit: Duration::from_secs(5),
            run: monotone_truncations,
        },
        Criterion {
            name: "invariant suite",
            limit: Duration::from_secs(60),
            run: invariant_suite,
        },
    ];

    let mut failed = 0;
    for (i, criterion) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(criterion.run))
            .unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let verdict = verdict.and_then(|summary| {
            if elapsed <= criterion.limit {
                Ok(summary)
            } else {
                Err(format!("{summary}; over the {:?} limit", criterion.limit))
            }
        });
        let secs = elapsed.as_secs_f64();
        match verdict {
            Ok(summary) => println!(
                "PASS {}. {}: {summary} ({secs:.2} s)",
                i + 1,
                criterion.name
            ),
            Err(reason) => {
                failed += 1;
                println!("FAIL {}. {}: {reason} ({secs:.2} s)", i + 1, criterion.name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
