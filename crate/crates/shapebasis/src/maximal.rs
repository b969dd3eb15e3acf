//! Exact rectangle averages of simple functions, pointwise maximal values
//! over finite rectangle families, Monte Carlo superlevel-set measures, the
//! two-sided average comparison against the axis-parallel companions, and
//! empirical weak-type constants.
//!
//! A finite family only ever underestimates the maximal operator of the full
//! homothecy-invariant basis, so every superlevel measure computed here is a
//! certified lower bound, which is the useful direction for counterexamples.

use crate::error::{Error, Result};
use crate::geometry::{bounding_axis_rect, clip_convex, inscribed_axis_rect, Point2, Rectangle};
use crate::orlicz::{phi_integral, SimpleFunction, YoungFunction};
use crate::sampling::{area_from_hits, count_hits, rng_at, rounded_samples, Frame};
use crate::shape_law::ShapeLawParams;
use rand::Rng;
use std::f64::consts::FRAC_PI_6;

/// Finite materialization of a rectangle basis.
#[derive(Clone, Debug)]
pub struct RectFamily {
    pub members: Vec<Rectangle>,
    pub label: String,
}

impl RectFamily {
    pub fn new(members: Vec<Rectangle>, label: impl Into<String>) -> Self {
        Self {
            members,
            label: label.into(),
        }
    }
}

/// Monte Carlo area estimate with a 95% confidence half-width derived from
/// the binomial variance of the hit fraction.
#[derive(Clone, Copy, Debug)]
pub struct MeasureEstimate {
    pub value: f64,
    pub half_width95: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Empirical lower estimate of an admissible weak-type constant at one level.
#[derive(Clone, Debug)]
pub struct WeakTypeReport {
    pub lambda: f64,
    pub superlevel: MeasureEstimate,
    pub phi_mass: f64,
    pub c_lower: f64,
}

/// Average of `f` over `r`: `sum_i c_i |S_i cap r| / |r|`, with the
/// intersection areas computed by exact convex clipping.
pub fn average_over(r: &Rectangle, f: &SimpleFunction) -> f64 {
    let rp = r.to_polygon();
    let mass: f64 = f
        .terms()
        .iter()
        .map(|(c, support)| c * clip_convex(support, &rp).area())
        .sum();
    mass / r.area()
}

/// Largest average of `f` over the family members containing `x`; `None`
/// when no member contains `x`. Monotone in the family.
pub fn maximal_at(x: Point2, fam: &RectFamily, f: &SimpleFunction) -> Option<f64> {
    fam.members
        .iter()
        .filter(|r| r.contains(x))
        .map(|r| average_over(r, f))
        .fold(None, |acc, v| Some(acc.map_or(v, |a: f64| a.max(v))))
}

fn window_contains_family(window: &Rectangle, fam: &RectFamily) -> Result<()> {
    let tol = 1e-9 * window.long().max(1.0);
    for (i, r) in fam.members.iter().enumerate() {
        for v in r.vertices() {
            if !window.contains_with_tol(v, tol) {
                return Err(Error::WindowTooSmall { member: i });
            }
        }
    }
    Ok(())
}

/// Monte Carlo measure of `{x in window : max average over members containing
/// x exceeds lambda}`. The average over a fixed rectangle does not depend on
/// the sample point, so the per-member averages are clipped exactly once up
/// front and the sampling loop reduces to containment tests. The sample
/// count is rounded up to fill the stratification grid evenly; the returned
/// estimate records the count actually used.
pub fn superlevel_measure(
    fam: &RectFamily,
    f: &SimpleFunction,
    lambda: f64,
    window: &Rectangle,
    n_samples: u64,
    seed: u64,
) -> Result<MeasureEstimate> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    window_contains_family(window, fam)?;
    let frames: Vec<Frame> = fam.members.iter().map(Frame::new).collect();
    let exceeds: Vec<bool> = fam
        .members
        .iter()
        .map(|r| average_over(r, f) > lambda)
        .collect();
    let window_frame = Frame::new(window);
    let n = rounded_samples(n_samples);
    let hits = count_hits(&window_frame, seed, n, |p| {
        frames
            .iter()
            .zip(&exceeds)
            .any(|(fr, &e)| e && fr.contains(p))
    });
    let (value, half_width95) = area_from_hits(window_frame.area(), hits, n);
    Ok(MeasureEstimate {
        value,
        half_width95,
        samples: n,
        seed,
    })
}

/// Outcome of the two-sided per-rectangle average comparison.
#[derive(Clone, Copy, Debug)]
pub struct SandwichCheck {
    /// Average over the inscribed companion is at most `rho0` times the
    /// average over the rectangle.
    pub inscribed_ok: bool,
    /// Average over the rectangle is at most `rho0` times the average over
    /// the bounding companion.
    pub bounding_ok: bool,
}

impl SandwichCheck {
    pub fn both(&self) -> bool {
        self.inscribed_ok && self.bounding_ok
    }
}

/// Per-rectangle form of the two-sided maximal comparison: for a rectangle
/// whose area ratio is at most `rho0`, the inscribed average is bounded by
/// `rho0` times the rectangle average, which is bounded by `rho0` times the
/// bounding average. Verified with floating-point slack `1e-12` at the scale
/// of the compared values.
pub fn sandwich_check(
    r: &Rectangle,
    t: f64,
    rho0: f64,
    f: &SimpleFunction,
) -> Result<SandwichCheck> {
    let inner = inscribed_axis_rect(r, t)?;
    let outer = bounding_axis_rect(r);
    let inner_avg = average_over(&inner, f);
    let mid_avg = average_over(r, f);
    let outer_avg = average_over(&outer, f);
    let slack = |a: f64, b: f64| 1e-12 * a.abs().max(b.abs()).max(1.0);
    Ok(SandwichCheck {
        inscribed_ok: inner_avg <= rho0 * mid_avg + slack(inner_avg, rho0 * mid_avg),
        bounding_ok: mid_avg <= rho0 * outer_avg + slack(mid_avg, rho0 * outer_avg),
    })
}

/// One report per level: the superlevel measure, the Young-function mass
/// `int Phi(|f| / lambda)`, and their quotient, an empirical lower bound for
/// any constant admissible in the weak-type estimate.
pub fn weak_type_probe(
    fam: &RectFamily,
    f: &SimpleFunction,
    phi: &YoungFunction,
    lambdas: &[f64],
    window: &Rectangle,
    n_samples: u64,
    seed: u64,
) -> Result<Vec<WeakTypeReport>> {
    let mut reports = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let phi_mass = phi_integral(phi, f, lambda);
        if phi_mass.is_nan() || phi_mass <= 0.0 {
            return Err(Error::PhiMassZero);
        }
        let superlevel = superlevel_measure(fam, f, lambda, window, n_samples, seed)?;
        reports.push(WeakTypeReport {
            lambda,
            c_lower: superlevel.value / phi_mass,
            superlevel,
            phi_mass,
        });
    }
    Ok(reports)
}

/// Reproducible random (rectangle, simple function) pair for exercising
/// [`sandwich_check`]: the rectangle angle is uniform in `(0, pi/6]`, its
/// shape is solver-built for `params`, scale and position are randomized, and
/// the function is one to three disjoint boxes with random coefficients
/// placed around the rectangle. Pure in `(params, seed, index)`.
pub fn random_sandwich_trial(
    params: &ShapeLawParams,
    seed: u64,
    index: u64,
) -> Result<(Rectangle, SimpleFunction)> {
    let mut rng = rng_at(seed, index, u64::MAX);
    let theta = FRAC_PI_6 * (1.0 - rng.gen_range(0.0..1.0));
    let sigma = crate::shape_law::solve_shape(params, theta)?;
    let short = rng.gen_range(0.5..2.0);
    let center = Point2::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
    let rect = Rectangle::new(center, theta, sigma * short, short)?;

    // Supports live in disjoint vertical strips of the padded bounding box,
    // so some of them meet the rectangle while disjointness holds by
    // construction.
    let bbox = bounding_axis_rect(&rect);
    let (bw, bh) = bbox.axis_extents();
    let (w, h) = (1.3 * bw, 1.3 * bh);
    let terms = rng.gen_range(1..=3usize);
    let strip = w / 3.0;
    let mut parts = Vec::with_capacity(terms);
    for j in 0..terms {
        let x_lo = bbox.center().x - 0.5 * w + j as f64 * strip;
        let margin = 0.05 * strip;
        let lo = x_lo + margin + rng.gen_range(0.0..0.4) * strip;
        let hi = lo + rng.gen_range(0.1..0.5) * strip;
        let y_mid = bbox.center().y + rng.gen_range(-0.4..0.4) * h;
        let y_half = rng.gen_range(0.05..0.5) * h;
        let support =
            Rectangle::axis_aligned(Point2::new(0.5 * (lo + hi), y_mid), hi - lo, 2.0 * y_half)?;
        let coefficient = rng.gen_range(0.0..10.0);
        parts.push((coefficient, support.to_polygon()));
    }
    Ok((rect, SimpleFunction::new(parts)?))
}
