//! Derivative-free minimization (Nelder–Mead) and the restart driver used
//! for searches over the unitary group through Cayley charts.

use crate::exec::Exec;
use crate::linalg::{cayley_unitary, skew_from_params, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub initial_step: f64,
    pub max_evals: usize,
    /// Stop once the spread of simplex values falls below this.
    pub f_tol: f64,
    /// Stop once the objective itself falls below this.
    pub f_target: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            initial_step: 0.5,
            max_evals: 4000,
            f_tol: 1e-15,
            f_target: f64::NEG_INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Nelder–Mead with the standard coefficients (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Non-finite objective values are treated as
/// `+∞`.
pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    if n == 0 {
        return Minimum {
            x: Vec::new(),
            value: eval(x0),
            evals: 1,
        };
    }
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| eval(p)).collect();
    let mut evals = n + 1;

    while evals < opts.max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let best = values[0];
        let worst = values[n];
        if best <= opts.f_target || (worst - best).abs() <= opts.f_tol {
            break;
        }

        let mut centroid = vec![0.0; n];
        for p in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / n as f64;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = along(1.0);
        let fr = eval(&reflected);
        evals += 1;
        if fr < values[0] {
            let expanded = along(2.0);
            let fe = eval(&expanded);
            evals += 1;
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
            continue;
        }
        let (contracted, fc) = if fr < values[n] {
            let p = along(0.5);
            let v = eval(&p);
            (p, v)
        } else {
            let p = along(-0.5);
            let v = eval(&p);
            (p, v)
        };
        evals += 1;
        if fc < values[n].min(fr) {
            simplex[n] = contracted;
            values[n] = fc;
            continue;
        }
        let x_best = simplex[0].clone();
        for i in 1..=n {
            let p: Vec<f64> = simplex[i]
                .iter()
                .zip(&x_best)
                .map(|(x, b)| b + 0.5 * (x - b))
                .collect();
            values[i] = eval(&p);
            simplex[i] = p;
        }
        evals += n;
    }

    let (i, &value) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("simplex is nonempty");
    Minimum {
        x: simplex[i].clone(),
        value,
        evals,
    }
}

/// Outcome of a multi-start search over the `d × d` unitary group.
#[derive(Debug, Clone)]
pub struct UnitarySearch {
    pub best: ComplexMatrix,
    pub value: f64,
    pub restart: usize,
    pub evals: usize,
}

/// Minimizes `objective(G)` over unitary `G` by running Nelder–Mead in the
/// Cayley chart `G = base_r · cayley(X(p))` around one base point per
/// restart. Restarts run independently; the winner is the lexicographic
/// minimum of `(value, restart index)`, so the result does not depend on
/// scheduling.
pub fn search_unitary<O, B>(
    d: usize,
    restarts: usize,
    base: B,
    objective: O,
    opts: &NelderMeadOptions,
    exec: Exec,
) -> Option<UnitarySearch>
where
    O: Fn(&ComplexMatrix) -> f64 + Sync + Send,
    B: Fn(usize) -> (ComplexMatrix, f64) + Sync + Send,
{
    let runs = exec.map(restarts, |r| {
        let (g0, step) = base(r);
        let chart = |p: &[f64]| -> Option<ComplexMatrix> {
            cayley_unitary(&skew_from_params(d, p))
                .ok()
                .map(|c| &g0 * c)
        };
        let local = NelderMeadOptions {
            initial_step: step,
            ..*opts
        };
        let m = nelder_mead(
            |p| chart(p).map_or(f64::INFINITY, |g| objective(&g)),
            &vec![0.0; d * d],
            &local,
        );
        let g = chart(&m.x).unwrap_or(g0);
        (m.value, r, g, m.evals)
    });
    let evals = runs.iter().map(|r| r.3).sum();
    runs.into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(value, restart, best, _)| UnitarySearch {
            best,
            value,
            restart,
            evals,
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, fro, identity, unitarity_residual};

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = nelder_mead(
            f,
            &[-1.2, 1.0],
            &NelderMeadOptions {
                max_evals: 10_000,
                f_tol: 1e-20,
                ..Default::default()
            },
        );
        assert!(
            (m.x[0] - 1.0).abs() < 1e-5 && (m.x[1] - 1.0).abs() < 1e-5,
            "{m:?}"
        );
    }

    #[test]
    fn stops_at_target() {
        let m = nelder_mead(
            |x| x[0] * x[0],
            &[3.0],
            &NelderMeadOptions {
                f_target: 1e-2,
                ..Default::default()
            },
        );
        assert!(m.value <= 1e-2);
        assert!(m.evals < 100);
    }

    #[test]
    fn finds_a_target_unitary() {
        // Nearest-unitary problem with a known answer.
        let target = {
            let mut t = identity(2);
            t[(0, 0)] = c(0.0, 1.0);
            t
        };
        let s = search_unitary(
            2,
            4,
            |_| (identity(2), 0.5),
            |g| fro(&(g - &target)).powi(2),
            &NelderMeadOptions {
                max_evals: 5000,
                f_tol: 1e-24,
                ..Default::default()
            },
            Exec::Sequential,
        )
        .unwrap();
        assert!(s.value < 1e-10, "{}", s.value);
        assert!(unitarity_residual(&s.best) < 1e-10);
    }
}
