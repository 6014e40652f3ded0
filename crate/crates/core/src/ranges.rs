//! Rank-k numerical ranges as intersections of half-planes
//! `{μ : Re(e^{iθ}μ) ≤ λ_k(Re(e^{iθ}A))}`, plus the independent oracles:
//! the subset-hull formula for normal matrices, the closed-form shift disk,
//! and the multiplicity sweep over atomic spectral models (including
//! `k = ∞`).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{
    hull_halfplanes, intersect_halfplanes, uniform_grid, ConvexRegion, HalfPlane, REFINE_TOL_REL,
};
use crate::linalg::{
    hermitian_eigenvalues, op_norm, rotated_real_part_unchecked, ComplexMatrix, C64,
};

pub const DEFAULT_GRID: usize = 720;
pub const MIN_GRID: usize = 16;

/// Maximum number of subsets `normal_region` will enumerate.
pub const SUBSET_BUDGET: u128 = 1_000_000;

/// `k` for rank-k ranges: a positive integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankIndex {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for RankIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RankIndex::Finite(k) => write!(f, "{k}"),
            RankIndex::Infinite => write!(f, "inf"),
        }
    }
}

fn check_k(a: &ComplexMatrix, k: usize) -> Result<usize> {
    let n = a.nrows();
    if n != a.ncols() || n == 0 {
        return Err(Error::Shape(format!(
            "A must be square, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, dim: n });
    }
    Ok(n)
}

fn check_grid(grid: usize) -> Result<()> {
    if grid < MIN_GRID {
        return Err(Error::InvalidArgument(format!(
            "direction grid must have at least {MIN_GRID} points, got {grid}"
        )));
    }
    Ok(())
}

/// `λ_k(Re(e^{iθ}A))`: the support of the rank-k range in the half-plane
/// convention `Re(e^{iθ}μ) ≤ s`.
pub fn support_value(a: &ComplexMatrix, k: usize, theta: f64) -> Result<f64> {
    check_k(a, k)?;
    Ok(support_value_unchecked(a, k, theta))
}

#[inline]
pub(crate) fn support_value_unchecked(a: &ComplexMatrix, k: usize, theta: f64) -> f64 {
    hermitian_eigenvalues(&rotated_real_part_unchecked(a, theta))[k - 1]
}

/// Support samples on a uniform grid, one eigenvalue problem per direction.
pub fn support_samples(
    a: &ComplexMatrix,
    k: usize,
    grid: usize,
    exec: Exec,
) -> Result<Vec<(f64, f64)>> {
    check_k(a, k)?;
    let thetas = uniform_grid(grid);
    Ok(exec.map_slice(&thetas, |&t| (t, support_value_unchecked(a, k, t))))
}

/// Outer polygonal approximation of the closure of `Λ_k(A)`.
pub fn omega_region(a: &ComplexMatrix, k: usize, grid: usize) -> Result<ConvexRegion> {
    omega_region_with(a, k, grid, Exec::default())
}

pub fn omega_region_with(
    a: &ComplexMatrix,
    k: usize,
    grid: usize,
    exec: Exec,
) -> Result<ConvexRegion> {
    check_grid(grid)?;
    let region = ConvexRegion::from_samples(support_samples(a, k, grid, exec)?);
    Ok(refine(region, exec, |t| support_value_unchecked(a, k, t)))
}

/// Refines a sampled region at the tolerance [`REFINE_TOL_REL`] relative to
/// its largest support.
pub(crate) fn refine(
    region: ConvexRegion,
    exec: Exec,
    support: impl Fn(f64) -> f64 + Sync,
) -> ConvexRegion {
    let scale = region
        .samples
        .iter()
        .filter(|s| s.1.is_finite())
        .fold(0.0_f64, |m, &(_, s)| m.max(s.abs()));
    region.refine(support, REFINE_TOL_REL * scale + 1e-15, exec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

/// Classifies `μ` against the sampled half-planes on the default grid.
pub fn membership(a: &ComplexMatrix, k: usize, mu: C64, tol: f64) -> Result<Membership> {
    membership_with_grid(a, k, mu, tol, DEFAULT_GRID)
}

/// Outside if some direction violates its support by more than `tol`,
/// boundary if the worst margin is within `±tol`, inside otherwise.
pub fn membership_with_grid(
    a: &ComplexMatrix,
    k: usize,
    mu: C64,
    tol: f64,
    grid: usize,
) -> Result<Membership> {
    let region = ConvexRegion {
        samples: support_samples(a, k, grid, Exec::default())?,
        vertices: Vec::new(),
        empty: false,
        cuts: Vec::new(),
    };
    Ok(classify_margin(region.worst_margin(mu), tol))
}

pub fn classify_margin(worst: f64, tol: f64) -> Membership {
    if worst < -tol {
        Membership::Outside
    } else if worst <= tol {
        Membership::Boundary
    } else {
        Membership::Inside
    }
}

fn binomial(n: usize, r: usize) -> u128 {
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Rank-k range of a normal matrix with eigenvalues `eigs`, as the
/// intersection of the convex hulls of all `(n-k+1)`-subsets.
pub fn normal_region(eigs: &[C64], k: usize) -> Result<ConvexRegion> {
    normal_region_on_grid(eigs, k, DEFAULT_GRID)
}

/// [`normal_polygon`] with its tight supports sampled on a `grid`-point
/// direction grid.
pub fn normal_region_on_grid(eigs: &[C64], k: usize, grid: usize) -> Result<ConvexRegion> {
    check_grid(grid)?;
    Ok(ConvexRegion::from_vertices(normal_polygon(eigs, k)?, grid))
}

/// Exact polygon (CCW vertices, empty if the range is empty) of the rank-k
/// range of a normal matrix with eigenvalues `eigs`.
pub fn normal_polygon(eigs: &[C64], k: usize) -> Result<Vec<C64>> {
    let n = eigs.len();
    if k == 0 || k > n {
        return Err(Error::KOutOfRange { k, dim: n });
    }
    let size = n - k + 1;
    let count = binomial(n, size);
    if count > SUBSET_BUDGET {
        return Err(Error::TooLarge {
            count,
            budget: SUBSET_BUDGET,
        });
    }
    let scale = eigs.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
    let slack = 1e-12 * scale;
    let mut planes: Vec<HalfPlane> = Vec::new();
    let mut subset: Vec<usize> = (0..size).collect();
    loop {
        let pts: Vec<C64> = subset.iter().map(|&i| eigs[i]).collect();
        planes.extend(hull_halfplanes(&pts, slack));
        // Next combination in lexicographic order.
        let mut i = size;
        while i > 0 && subset[i - 1] == n - size + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        subset[i - 1] += 1;
        for j in i..size {
            subset[j] = subset[j - 1] + 1;
        }
    }
    Ok(intersect_halfplanes(&planes, 2.0 * scale + 1.0))
}

/// Closed-form rank-k range of the `n`-dimensional shift: the closed disk of
/// radius `cos(kπ/(n+1))` when `k ≤ ⌊(n+1)/2⌋`, empty otherwise.
pub fn shift_oracle(n: usize, k: usize) -> Result<ConvexRegion> {
    shift_oracle_on_grid(n, k, DEFAULT_GRID)
}

pub fn shift_oracle_on_grid(n: usize, k: usize, grid: usize) -> Result<ConvexRegion> {
    if n < 2 || k == 0 || k > n {
        return Err(Error::KOutOfRange { k, dim: n });
    }
    if k > n.div_ceil(2) {
        return Ok(ConvexRegion::empty_on_grid(grid));
    }
    let r = shift_radius(n, k).max(0.0);
    Ok(ConvexRegion::from_samples(
        uniform_grid(grid).into_iter().map(|t| (t, r)).collect(),
    ))
}

/// `cos(kπ/(n+1))`.
pub fn shift_radius(n: usize, k: usize) -> f64 {
    (k as f64 * PI / (n as f64 + 1.0)).cos()
}

/// Multiplicity of a spectral atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    fn add(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::Infinite,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralAtom {
    pub point: C64,
    pub multiplicity: Multiplicity,
}

/// Finite list of spectral atoms standing in for the spectral measure of a
/// normal operator. Atoms at the same point are merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralModel {
    atoms: Vec<SpectralAtom>,
}

impl SpectralModel {
    pub fn new(atoms: impl IntoIterator<Item = SpectralAtom>) -> Result<Self> {
        let mut merged: Vec<SpectralAtom> = Vec::new();
        for atom in atoms {
            if !(atom.point.re.is_finite() && atom.point.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            if atom.multiplicity == Multiplicity::Finite(0) {
                return Err(Error::InvalidArgument(
                    "atom multiplicity must be positive".into(),
                ));
            }
            match merged.iter_mut().find(|a| a.point == atom.point) {
                Some(existing) => {
                    existing.multiplicity = existing.multiplicity.add(atom.multiplicity)
                }
                None => merged.push(atom),
            }
        }
        Ok(SpectralModel { atoms: merged })
    }

    /// Model of a diagonalizable matrix's eigenvalue list, each with
    /// multiplicity one before merging.
    pub fn from_eigenvalues(eigs: &[C64]) -> Result<Self> {
        Self::new(eigs.iter().map(|&z| SpectralAtom {
            point: z,
            multiplicity: Multiplicity::Finite(1),
        }))
    }

    pub fn atoms(&self) -> &[SpectralAtom] {
        &self.atoms
    }

    /// Sum of the finite multiplicities.
    pub fn finite_multiplicity(&self) -> u64 {
        self.atoms
            .iter()
            .map(|a| match a.multiplicity {
                Multiplicity::Finite(m) => m,
                Multiplicity::Infinite => 0,
            })
            .sum()
    }

    pub fn has_infinite_atom(&self) -> bool {
        self.atoms
            .iter()
            .any(|a| a.multiplicity == Multiplicity::Infinite)
    }

    /// Atoms `(-1/n, 1)` and `(e^{iπ/n}/n, 1)` for `2 ≤ n ≤ n_max`: the
    /// finite truncation of the block-diagonal operator
    /// `⊕ diag(-1/n, e^{iπ/n}/n)`. The multiplicity of each atom is an input.
    pub fn example_blocks(n_max: usize, multiplicity: Multiplicity) -> Result<Self> {
        let mut atoms = Vec::new();
        for n in 2..=n_max {
            let nf = n as f64;
            atoms.push(SpectralAtom {
                point: C64::new(-1.0 / nf, 0.0),
                multiplicity,
            });
            atoms.push(SpectralAtom {
                point: C64::from_polar(1.0 / nf, PI / nf),
                multiplicity,
            });
        }
        Self::new(atoms)
    }

    /// Support of `V_k` in direction `θ`: the `k`-th largest value of
    /// `Re(e^{iθ}z)` counted with multiplicity (an infinite atom counts as
    /// at least `k` copies). `None` when the total multiplicity is below `k`.
    pub fn kth_support(&self, k: RankIndex, theta: f64) -> Option<f64> {
        let w = C64::from_polar(1.0, theta);
        let mut vals: Vec<(f64, Multiplicity)> = self
            .atoms
            .iter()
            .map(|a| ((w * a.point).re, a.multiplicity))
            .collect();
        vals.sort_by(|a, b| b.0.total_cmp(&a.0));
        match k {
            RankIndex::Infinite => vals
                .iter()
                .find(|v| v.1 == Multiplicity::Infinite)
                .map(|v| v.0),
            RankIndex::Finite(k) => {
                let mut count: u64 = 0;
                for (value, mult) in vals {
                    match mult {
                        Multiplicity::Infinite => return Some(value),
                        Multiplicity::Finite(m) => {
                            count += m;
                            if count >= k as u64 {
                                return Some(value);
                            }
                        }
                    }
                }
                None
            }
        }
    }
}

/// `V_k` of a spectral model by a rotating-direction sweep. For
/// `k = ∞` only infinite atoms can support a direction, so the region is the
/// hull of the infinite atoms (empty if there are none).
pub fn spectral_v_k(model: &SpectralModel, k: RankIndex, grid: usize) -> Result<ConvexRegion> {
    if model.atoms.is_empty() {
        return Err(Error::EmptyModel);
    }
    if k == RankIndex::Finite(0) {
        return Err(Error::KOutOfRange { k: 0, dim: 0 });
    }
    check_grid(grid)?;
    let thetas = uniform_grid(grid);
    let supports: Vec<Option<f64>> = thetas.iter().map(|&t| model.kth_support(k, t)).collect();
    if supports.iter().any(Option::is_none) {
        return Ok(ConvexRegion::empty_on_grid(grid));
    }
    let region = ConvexRegion::from_samples(
        thetas
            .into_iter()
            .zip(supports.into_iter().flatten())
            .collect(),
    );
    Ok(refine(region, Exec::default(), |t| {
        model.kth_support(k, t).unwrap_or(f64::INFINITY)
    }))
}

/// Operator input for `Ω_∞`.
#[derive(Debug, Clone)]
pub enum Operator {
    Matrix(ComplexMatrix),
    Model(SpectralModel),
}

/// `Ω_∞ = ∩_k Ω_k`. For an `n × n` matrix this is `Ω_n`; for a spectral
/// model the finite-k regions are intersected for `k` up to the total finite
/// multiplicity plus one, beyond which the sweep no longer changes.
pub fn omega_inf(op: &Operator, grid: usize) -> Result<ConvexRegion> {
    match op {
        Operator::Matrix(a) => omega_region(a, a.nrows(), grid),
        Operator::Model(model) => {
            let top = model.finite_multiplicity() as usize + 1;
            let mut region = spectral_v_k(model, RankIndex::Finite(1), grid)?;
            for k in 2..=top {
                if region.empty {
                    break;
                }
                region = region.intersect(&spectral_v_k(model, RankIndex::Finite(k), grid)?);
            }
            Ok(region)
        }
    }
}

/// Bound on `‖A‖` used for Lipschitz checks of supports.
pub fn support_lipschitz_constant(a: &ComplexMatrix) -> f64 {
    op_norm(a)
}
