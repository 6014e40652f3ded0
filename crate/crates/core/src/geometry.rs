//! Planar convex geometry: half-planes, polygonal outer approximations of
//! convex regions built by incremental convex clipping, convex hulls, and
//! support-function distances.
//!
//! Sign convention used throughout the crate: a half-plane with direction
//! `θ` and support `s` is the set `{μ : Re(e^{iθ}μ) ≤ s}`. Its outward
//! normal is `e^{-iθ}`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::linalg::C64;

/// Antipodal support sums below this value mark a region as empty.
pub const EMPTY_THRESHOLD: f64 = -1e-12;

/// Vertices closer than this are merged.
pub const VERTEX_MERGE_TOL: f64 = 1e-14;

const CLIP_SLACK_REL: f64 = 1e-11;

/// Sample second difference, relative to the region's scale, that triggers
/// refinement.
pub const REFINE_TOL_REL: f64 = 5e-5;

const REFINE_PROBES: usize = 9;
const GOLDEN_STEPS: usize = 40;

pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// `n` uniformly spaced directions `2πi/n`, `i = 0..n`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| TAU * i as f64 / n as f64).collect()
}

/// `Re(e^{iθ}μ)`.
#[inline]
pub fn directional(theta: f64, mu: C64) -> f64 {
    let (s, c) = theta.sin_cos();
    c * mu.re - s * mu.im
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub direction: f64,
    pub support: f64,
}

impl HalfPlane {
    pub fn new(direction: f64, support: f64) -> Self {
        Self {
            direction: normalize_angle(direction),
            support,
        }
    }

    /// Half-plane `{z : ⟨normal, z⟩ ≤ offset}` for a nonzero outward normal.
    pub fn from_normal(normal: C64, offset: f64) -> Self {
        let len = normal.norm();
        Self::new(-normal.arg(), offset / len)
    }

    /// Signed violation `Re(e^{iθ}μ) - s`; positive means outside.
    #[inline]
    pub fn excess(&self, mu: C64) -> f64 {
        directional(self.direction, mu) - self.support
    }

    pub fn contains(&self, mu: C64, slack: f64) -> bool {
        self.excess(mu) <= slack
    }
}

/// Clips a convex polygon (CCW vertex list, possibly degenerate) against one
/// half-plane, with `slack` added to the support.
pub fn clip_polygon(poly: &[C64], plane: &HalfPlane, slack: f64) -> Vec<C64> {
    let n = poly.len();
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = poly[i];
        let q = poly[(i + 1) % n];
        let fp = plane.excess(p) - slack;
        let fq = plane.excess(q) - slack;
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push(p + (q - p) * t);
        }
    }
    dedup_cycle(out)
}

fn dedup_cycle(mut pts: Vec<C64>) -> Vec<C64> {
    pts.dedup_by(|a, b| (*a - *b).norm() <= VERTEX_MERGE_TOL);
    while pts.len() > 1 && (pts[0] - pts[pts.len() - 1]).norm() <= VERTEX_MERGE_TOL {
        pts.pop();
    }
    pts
}

/// Intersects half-planes by incremental convex clipping of a bounding
/// square. `bound` must exceed the extent of the true intersection.
pub fn intersect_halfplanes(planes: &[HalfPlane], bound: f64) -> Vec<C64> {
    let scale = planes.iter().fold(1.0_f64, |m, p| m.max(p.support.abs()));
    let slack = CLIP_SLACK_REL * scale;
    let mut poly = vec![
        C64::new(-bound, -bound),
        C64::new(bound, -bound),
        C64::new(bound, bound),
        C64::new(-bound, bound),
    ];
    for plane in planes {
        poly = clip_polygon(&poly, plane, slack);
        if poly.is_empty() {
            break;
        }
    }
    poly
}

/// Convex hull in counterclockwise order (Andrew's monotone chain). Collinear
/// points are dropped; one or two vertices are returned for degenerate input.
pub fn convex_hull(points: &[C64]) -> Vec<C64> {
    let mut pts: Vec<C64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup_by(|a, b| (*a - *b).norm() <= VERTEX_MERGE_TOL);
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: C64, a: C64, b: C64| (a - o).re * (b - o).im - (a - o).im * (b - o).re;
    let mut lower: Vec<C64> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<C64> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Half-planes whose intersection is the hull of `points`, fattened by
/// `slack`. Degenerate hulls (a point or a segment) become thin boxes.
pub fn hull_halfplanes(points: &[C64], slack: f64) -> Vec<HalfPlane> {
    let hull = convex_hull(points);
    match hull.len() {
        0 => Vec::new(),
        1 => {
            let p = hull[0];
            [
                C64::new(1.0, 0.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
            ]
            .iter()
            .map(|&n| HalfPlane::from_normal(n, dot(n, p) + slack))
            .collect()
        }
        2 => {
            let (a, b) = (hull[0], hull[1]);
            let along = (b - a) / (b - a).norm();
            let across = along * C64::new(0.0, 1.0);
            vec![
                HalfPlane::from_normal(along, dot(along, b) + slack),
                HalfPlane::from_normal(-along, dot(-along, a) + slack),
                HalfPlane::from_normal(across, dot(across, a) + slack),
                HalfPlane::from_normal(-across, dot(-across, a) + slack),
            ]
        }
        n => (0..n)
            .map(|i| {
                let a = hull[i];
                let b = hull[(i + 1) % n];
                let edge = b - a;
                // CCW order: outward normal points to the right of the edge.
                let normal = C64::new(edge.im, -edge.re);
                HalfPlane::from_normal(normal, dot(normal, a) + slack * normal.norm())
            })
            .collect(),
    }
}

#[inline]
fn dot(a: C64, b: C64) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Convex region represented by support samples on a uniform direction grid
/// together with the polygon they cut out.
///
/// `samples[i] = (θ_i, s_i)` encodes the half-plane `Re(e^{iθ_i}μ) ≤ s_i`.
/// The samples need not be tight: for higher-rank ranges many of them are
/// redundant. [`ConvexRegion::support`] gives the tight support of the
/// polygon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexRegion {
    pub samples: Vec<(f64, f64)>,
    pub vertices: Vec<C64>,
    pub empty: bool,
    /// Extra half-planes `(θ, s)` off the sample grid, added by
    /// [`ConvexRegion::refine`].
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cuts: Vec<(f64, f64)>,
}

impl ConvexRegion {
    /// Builds the region cut out by support samples. Emptiness is declared if
    /// an antipodal pair of grid directions has `s(θ) + s(θ+π)` below
    /// [`EMPTY_THRESHOLD`], or if the clipped polygon vanishes.
    pub fn from_samples(samples: Vec<(f64, f64)>) -> Self {
        Self::with_cuts(samples, Vec::new())
    }

    /// [`ConvexRegion::from_samples`] with additional off-grid half-planes.
    pub fn with_cuts(samples: Vec<(f64, f64)>, cuts: Vec<(f64, f64)>) -> Self {
        let n = samples.len();
        let mut empty = false;
        if n.is_multiple_of(2) {
            let half = n / 2;
            for i in 0..half {
                let (t0, s0) = samples[i];
                let (t1, s1) = samples[i + half];
                let antipodal = ((t1 - t0).rem_euclid(TAU) - PI).abs() < 1e-9;
                if antipodal && s0 + s1 < EMPTY_THRESHOLD {
                    empty = true;
                    break;
                }
            }
        }
        let vertices = if empty {
            Vec::new()
        } else {
            let planes: Vec<HalfPlane> = samples
                .iter()
                .chain(&cuts)
                .map(|&(t, s)| HalfPlane::new(t, s))
                .collect();
            intersect_halfplanes(&planes, bounding_radius(&samples))
        };
        let empty = empty || vertices.is_empty();
        ConvexRegion {
            samples,
            vertices: if empty { Vec::new() } else { vertices },
            empty,
            cuts,
        }
    }

    /// Region cut out by arbitrary half-planes; samples are the tight supports
    /// of the resulting polygon on a uniform grid of `grid` directions.
    pub fn from_halfplanes(planes: &[HalfPlane], bound: f64, grid: usize) -> Self {
        let vertices = intersect_halfplanes(planes, bound);
        Self::from_vertices(vertices, grid)
    }

    /// Region given by its polygon (CCW vertices); an empty list is the
    /// empty region.
    pub fn from_vertices(vertices: Vec<C64>, grid: usize) -> Self {
        if vertices.is_empty() {
            return Self::empty_on_grid(grid);
        }
        let samples = uniform_grid(grid)
            .into_iter()
            .map(|t| (t, tight_support(&vertices, t)))
            .collect();
        ConvexRegion {
            samples,
            vertices,
            empty: false,
            cuts: Vec::new(),
        }
    }

    pub fn empty_on_grid(grid: usize) -> Self {
        ConvexRegion {
            samples: uniform_grid(grid)
                .into_iter()
                .map(|t| (t, f64::NEG_INFINITY))
                .collect(),
            vertices: Vec::new(),
            empty: true,
            cuts: Vec::new(),
        }
    }

    /// Tightens the polygon where the support function kinks between grid
    /// directions.
    ///
    /// `support(θ)` must give a valid support value (the region lies in
    /// `Re(e^{iθ}μ) ≤ support(θ)`). A kink with slope jump `J` between two
    /// grid directions leaves the polygon up to `J·Δθ/4` too large there,
    /// and shows up as a second difference of the samples of at least
    /// `J·Δθ/2`. Each grid interval with a neighbouring second difference
    /// above `tol` is searched for the direction where `support` cuts
    /// deepest into the polygon, and that half-plane is added as a cut.
    pub fn refine<F>(self, support: F, tol: f64, exec: Exec) -> Self
    where
        F: Fn(f64) -> f64 + Sync,
    {
        let n = self.samples.len();
        if self.empty || n < 3 {
            return self;
        }
        let s = |i: usize| self.samples[i % n].1;
        let bend = |i: usize| s(i + n - 1) - 2.0 * s(i) + s(i + 1);
        let candidates: Vec<usize> = (0..n).filter(|&i| bend(i).max(bend(i + 1)) > tol).collect();
        if candidates.is_empty() {
            return self;
        }
        let vertices = &self.vertices;
        let slack = 1e-13 * bounding_radius(&self.samples);
        let found = exec.map_slice(&candidates, |&i| {
            let t0 = self.samples[i].0;
            let t1 = t0 + TAU / n as f64;
            let excess = |t: f64| tight_support(vertices, t) - support(t);
            let t = maximize(&excess, t0, t1);
            let s = support(t);
            (tight_support(vertices, t) - s > slack).then_some((t.rem_euclid(TAU), s))
        });
        let new: Vec<(f64, f64)> = found.into_iter().flatten().collect();
        if new.is_empty() {
            return self;
        }
        let mut cuts = self.cuts;
        cuts.extend(new);
        Self::with_cuts(self.samples, cuts)
    }

    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    /// Tight support `max_v Re(e^{iθ}v)` of the polygon, `None` if empty.
    pub fn support(&self, theta: f64) -> Option<f64> {
        if self.empty {
            None
        } else {
            Some(tight_support(&self.vertices, theta))
        }
    }

    /// `s(θ) + s(θ+π)` of the polygon.
    pub fn width(&self, theta: f64) -> Option<f64> {
        Some(self.support(theta)? + self.support(theta + PI)?)
    }

    /// Largest width over the sample grid and its midpoints.
    pub fn max_width(&self) -> Option<f64> {
        if self.empty {
            return None;
        }
        let n = self.grid_size().max(16) * 2;
        uniform_grid(n)
            .into_iter()
            .map(|t| self.width(t).unwrap())
            .reduce(f64::max)
    }

    /// Largest `s_i + s_{i+N/2}` over antipodal pairs of raw samples, which
    /// bounds the width of the sampled region without polygon roundoff.
    /// `None` for an empty region or a grid without antipodal pairs.
    pub fn sampled_width(&self) -> Option<f64> {
        let n = self.samples.len();
        if self.empty || n == 0 || !n.is_multiple_of(2) {
            return None;
        }
        let half = n / 2;
        let mut widest = f64::NEG_INFINITY;
        for i in 0..half {
            let (t0, s0) = self.samples[i];
            let (t1, s1) = self.samples[i + half];
            if ((t1 - t0).rem_euclid(TAU) - PI).abs() >= 1e-9 {
                return None;
            }
            widest = widest.max(s0 + s1);
        }
        Some(widest)
    }

    /// Hausdorff distance between convex polygons via support functions,
    /// evaluated on a grid twice as fine as the finer sample grid (and at
    /// least 1440 directions). Empty against nonempty is `+∞`; two empty
    /// regions are at distance zero.
    pub fn hausdorff(&self, other: &ConvexRegion) -> f64 {
        match (self.empty, other.empty) {
            (true, true) => 0.0,
            (true, false) | (false, true) => f64::INFINITY,
            (false, false) => {
                let n = (2 * self.grid_size().max(other.grid_size())).max(1440);
                uniform_grid(n)
                    .into_iter()
                    .map(|t| {
                        (tight_support(&self.vertices, t) - tight_support(&other.vertices, t)).abs()
                    })
                    .fold(0.0, f64::max)
            }
        }
    }

    /// Intersection with another region. Regions on the same grid combine by
    /// taking the smaller raw support per direction.
    pub fn intersect(&self, other: &ConvexRegion) -> ConvexRegion {
        let grid = self.grid_size().max(other.grid_size());
        if self.empty || other.empty {
            return Self::empty_on_grid(grid);
        }
        let same_grid = self.grid_size() == other.grid_size()
            && self
                .samples
                .iter()
                .zip(&other.samples)
                .all(|(a, b)| (a.0 - b.0).abs() < 1e-12);
        if same_grid {
            let samples = self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| (a.0, a.1.min(b.1)))
                .collect();
            let cuts = self.cuts.iter().chain(&other.cuts).copied().collect();
            return Self::with_cuts(samples, cuts);
        }
        let planes: Vec<HalfPlane> = self
            .samples
            .iter()
            .chain(&other.samples)
            .chain(&self.cuts)
            .chain(&other.cuts)
            .map(|&(t, s)| HalfPlane::new(t, s))
            .collect();
        let bound = bounding_radius(&self.samples).min(bounding_radius(&other.samples));
        Self::from_halfplanes(&planes, bound, grid)
    }

    /// Euclidean distance from `p` to the polygon (zero inside), `+∞` for
    /// an empty region.
    pub fn distance_to(&self, p: C64) -> f64 {
        if self.empty {
            return f64::INFINITY;
        }
        let v = &self.vertices;
        match v.len() {
            1 => (p - v[0]).norm(),
            2 => segment_distance(p, v[0], v[1]),
            n => {
                let inside = (0..n).all(|i| {
                    let a = v[i];
                    let b = v[(i + 1) % n];
                    let e = b - a;
                    let w = p - a;
                    e.re * w.im - e.im * w.re >= -1e-14 * e.norm()
                });
                if inside {
                    0.0
                } else {
                    (0..n)
                        .map(|i| segment_distance(p, v[i], v[(i + 1) % n]))
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Smallest raw support margin `min_i (s_i - Re(e^{iθ_i}μ))`; negative
    /// means some sampled half-plane excludes `μ`.
    pub fn worst_margin(&self, mu: C64) -> f64 {
        self.samples
            .iter()
            .chain(&self.cuts)
            .map(|&(t, s)| s - directional(t, mu))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn centroid(&self) -> Option<C64> {
        if self.empty {
            return None;
        }
        let sum: C64 = self.vertices.iter().sum();
        Some(sum / self.vertices.len() as f64)
    }
}

/// Maximizer of `g` on `[a, b]`: the best of a few probes, polished by
/// golden-section search on the bracket around it.
fn maximize(g: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let h = (b - a) / (REFINE_PROBES + 1) as f64;
    let (mut best_t, mut best) = (a + h, f64::NEG_INFINITY);
    for j in 1..=REFINE_PROBES {
        let t = a + h * j as f64;
        let val = g(t);
        if val > best {
            (best_t, best) = (t, val);
        }
    }
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (best_t - h, best_t + h);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..GOLDEN_STEPS {
        if g1 < g2 {
            lo = x1;
            (x1, g1) = (x2, g2);
            x2 = lo + ratio * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            (x2, g2) = (x1, g1);
            x1 = hi - ratio * (hi - lo);
            g1 = g(x1);
        }
    }
    let (t, val) = if g1 > g2 { (x1, g1) } else { (x2, g2) };
    if val > best {
        t
    } else {
        best_t
    }
}

fn segment_distance(p: C64, a: C64, b: C64) -> f64 {
    let e = b - a;
    let len2 = e.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (dot(p - a, e) / len2).clamp(0.0, 1.0);
    (p - (a + e * t)).norm()
}

fn tight_support(vertices: &[C64], theta: f64) -> f64 {
    vertices
        .iter()
        .map(|&v| directional(theta, v))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn bounding_radius(samples: &[(f64, f64)]) -> f64 {
    let m = samples
        .iter()
        .filter(|s| s.1.is_finite())
        .fold(0.0_f64, |m, &(_, s)| m.max(s.abs()));
    4.0 * m + 1.0
}
