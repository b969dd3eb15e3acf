//! Deterministic stratified Monte Carlo sampling. Every draw is a pure
//! function of (seed, index), so totals are bitwise independent of how the
//! index range is partitioned across workers.

use crate::geometry::{Point2, Rectangle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const STRATA_SIDE: u64 = 64;
pub(crate) const STRATA: u64 = STRATA_SIDE * STRATA_SIDE;

/// Normal quantile for a two-sided 95% interval.
pub(crate) const Z95: f64 = 1.96;

/// Rounds the requested sample count up so every stratum of the 64 x 64 grid
/// receives the same number of draws, keeping the estimator unbiased.
pub(crate) fn rounded_samples(n: u64) -> u64 {
    n.max(1).div_ceil(STRATA) * STRATA
}

/// Independent stream per (seed, a, b): the tuple forms the ChaCha key.
pub(crate) fn rng_at(seed: u64, a: u64, b: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&a.to_le_bytes());
    key[16..24].copy_from_slice(&b.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Precomputed rectangle frame for fast containment tests.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Frame {
    cx: f64,
    cy: f64,
    cos: f64,
    sin: f64,
    half_u: f64,
    half_v: f64,
}

impl Frame {
    pub fn new(r: &Rectangle) -> Self {
        let (sin, cos) = r.theta().sin_cos();
        Self {
            cx: r.center().x,
            cy: r.center().y,
            cos,
            sin,
            half_u: 0.5 * r.long(),
            half_v: 0.5 * r.short(),
        }
    }

    #[inline]
    pub fn contains(&self, p: Point2) -> bool {
        let dx = p.x - self.cx;
        let dy = p.y - self.cy;
        let u = dx * self.cos + dy * self.sin;
        let v = -dx * self.sin + dy * self.cos;
        u.abs() <= self.half_u && v.abs() <= self.half_v
    }

    /// Maps frame coordinates to the plane.
    #[inline]
    pub fn to_plane(self, u: f64, v: f64) -> Point2 {
        Point2::new(
            self.cx + u * self.cos - v * self.sin,
            self.cy + u * self.sin + v * self.cos,
        )
    }

    pub fn area(&self) -> f64 {
        4.0 * self.half_u * self.half_v
    }

    /// Stratified uniform point for the given (seed, index); stratum
    /// `index mod 4096` on the 64 x 64 grid, jittered within its cell.
    pub fn stratified_point(&self, seed: u64, index: u64) -> Point2 {
        let stratum = index % STRATA;
        let sx = (stratum % STRATA_SIDE) as f64;
        let sy = (stratum / STRATA_SIDE) as f64;
        let mut rng = rng_at(seed, index, 0);
        let fu = (sx + rng.gen_range(0.0..1.0)) / STRATA_SIDE as f64;
        let fv = (sy + rng.gen_range(0.0..1.0)) / STRATA_SIDE as f64;
        self.to_plane(
            (2.0 * fu - 1.0) * self.half_u,
            (2.0 * fv - 1.0) * self.half_v,
        )
    }

    /// Plain uniform point in the rectangle for stream (seed, tag, draw),
    /// returned with its frame coordinates.
    pub fn uniform_point(&self, seed: u64, tag: u64, draw: u64) -> (f64, f64, Point2) {
        let mut rng = rng_at(seed, tag, draw.wrapping_add(1));
        let u = (2.0 * rng.gen_range(0.0..1.0) - 1.0) * self.half_u;
        let v = (2.0 * rng.gen_range(0.0..1.0) - 1.0) * self.half_v;
        (u, v, self.to_plane(u, v))
    }
}

/// Counts stratified samples in `window` satisfying the predicate; `n` must
/// already be a multiple of the stratum count. Partition-independent.
pub(crate) fn count_hits<F>(window: &Frame, seed: u64, n: u64, pred: F) -> u64
where
    F: Fn(Point2) -> bool + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| u64::from(pred(window.stratified_point(seed, i))))
        .sum()
}

/// Area estimate and 95% half-width from binomial variance of the hit count.
pub(crate) fn area_from_hits(window_area: f64, hits: u64, n: u64) -> (f64, f64) {
    let p = hits as f64 / n as f64;
    let value = window_area * p;
    let half = Z95 * window_area * (p * (1.0 - p) / n as f64).sqrt();
    (value, half)
}

/// Axis-parallel bounding rectangle of a set of rectangles.
pub(crate) fn family_window(members: &[Rectangle]) -> Option<Rectangle> {
    let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
    let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for r in members {
        for v in r.vertices() {
            min.x = min.x.min(v.x);
            min.y = min.y.min(v.y);
            max.x = max.x.max(v.x);
            max.y = max.y.max(v.y);
        }
    }
    if !min.is_finite() || !max.is_finite() {
        return None;
    }
    Rectangle::axis_aligned(
        Point2::new(0.5 * (min.x + max.x), 0.5 * (min.y + max.y)),
        max.x - min.x,
        max.y - min.y,
    )
    .ok()
}
