//! Closed-form area laws for a rectangle of shape `sigma` at angle `theta`:
//! the multipliers giving the areas of its axis-parallel bounding and
//! inscribed companions, their ratio, the critical shape where the inscribed
//! rectangle degenerates, the ratio's partial derivatives, and a bisection
//! solver producing the shape at which the ratio attains a prescribed value.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_6;

/// Relative residual at which the shape solver stops.
pub const SOLVER_REL_TOL: f64 = 1e-10;
/// Bisection iteration cap; the interval is far below f64 resolution by then.
const SOLVER_MAX_ITER: usize = 200;

/// Inset fraction `t` and target area ratio `rho0` for the shape construction.
///
/// `rho0` must be at least `4 ((1 - t) / (1 - 2t))^2`, which guarantees that
/// the ratio at the minimal admissible shape `1 / (1 - 2t)` does not exceed
/// the target for any angle up to pi/6.
#[derive(Clone, Copy, Debug)]
pub struct ShapeLawParams {
    t: f64,
    rho0: f64,
}

impl ShapeLawParams {
    pub fn new(t: f64, rho0: f64) -> Result<Self> {
        if !(t.is_finite() && t > 0.0 && t < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "t must lie in (0, 1/2), got {t}"
            )));
        }
        if !(rho0.is_finite() && rho0 >= feasibility_bound(t)) {
            return Err(Error::InvalidParameter(format!(
                "rho0 must be at least {}, got {rho0}",
                feasibility_bound(t)
            )));
        }
        Ok(Self { t, rho0 })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    /// Smallest admissible shape, `1 / (1 - 2t)`.
    pub fn min_shape(&self) -> f64 {
        1.0 / (1.0 - 2.0 * self.t)
    }
}

/// Smallest admissible area-ratio target for a given inset fraction.
pub fn feasibility_bound(t: f64) -> f64 {
    let q = (1.0 - t) / (1.0 - 2.0 * t);
    4.0 * q * q
}

/// Areas of the axis-parallel bounding and inscribed rectangles of a
/// rectangle with shape `sigma` at angle `theta`, as multiples of its area.
#[derive(Clone, Copy, Debug)]
pub struct AreaMultipliers {
    /// `1 + (sigma + 1/sigma) sin(2 theta) / 2`; at least 1.
    pub bounding: f64,
    /// `(1-2t) cos(2 theta) + [1/sigma - (1-2t)^2 sigma] sin(2 theta) / 2`;
    /// positive exactly below the critical shape.
    pub inscribed: f64,
}

/// Both area multipliers. Total: a nonpositive `inscribed` value signals a
/// degenerate inscribed rectangle and is left to the caller to interpret.
pub fn area_multipliers(t: f64, theta: f64, sigma: f64) -> AreaMultipliers {
    let tau = 1.0 - 2.0 * t;
    let (s2, c2) = (2.0 * theta).sin_cos();
    AreaMultipliers {
        bounding: 1.0 + 0.5 * (sigma + 1.0 / sigma) * s2,
        inscribed: tau * c2 + 0.5 * (1.0 / sigma - tau * tau * sigma) * s2,
    }
}

/// Bounding area over inscribed area. Strictly increasing in `sigma` and, for
/// `sigma >= 1/(1-2t)`, strictly increasing in `theta`; blows up as `sigma`
/// approaches the critical shape.
pub fn area_ratio(t: f64, theta: f64, sigma: f64) -> Result<f64> {
    let m = area_multipliers(t, theta, sigma);
    if m.inscribed <= 0.0 {
        return Err(Error::DegenerateShape {
            shape: sigma,
            critical: critical_shape(t, theta),
        });
    }
    Ok(m.bounding / m.inscribed)
}

/// Shape at which the inscribed rectangle degenerates:
/// `(cot(2 theta) + sqrt(1 + cot(2 theta)^2)) / (1 - 2t)`, which simplifies
/// to `cot(theta) / (1 - 2t)`.
pub fn critical_shape(t: f64, theta: f64) -> f64 {
    let cot2 = 1.0 / (2.0 * theta).tan();
    (cot2 + (1.0 + cot2 * cot2).sqrt()) / (1.0 - 2.0 * t)
}

/// Partial derivatives of the area ratio.
#[derive(Clone, Copy, Debug)]
pub struct RatioPartials {
    /// Positive on `sigma in [1, critical)`.
    pub by_shape: f64,
    /// Positive when additionally `sigma >= 1/(1-2t)` and `theta < pi/4`.
    pub by_angle: f64,
}

pub fn area_ratio_partials(t: f64, theta: f64, sigma: f64) -> Result<RatioPartials> {
    let m = area_multipliers(t, theta, sigma);
    if m.inscribed <= 0.0 {
        return Err(Error::DegenerateShape {
            shape: sigma,
            critical: critical_shape(t, theta),
        });
    }
    let tau = 1.0 - 2.0 * t;
    let (s2, c2) = (2.0 * theta).sin_cos();
    let s4 = 2.0 * s2 * c2;
    let denom = m.inscribed * m.inscribed;
    let by_shape = (0.5 / sigma * s2 * s2 * (1.0 + tau * tau)
        + 0.25 * tau * s4 * (1.0 - 1.0 / (sigma * sigma))
        + 0.5 * s2 * (1.0 / (sigma * sigma) + tau * tau))
        / denom;
    let by_angle =
        (tau * (sigma + 1.0 / sigma) + 2.0 * tau * s2 + (tau * tau * sigma - 1.0 / sigma) * c2)
            / denom;
    Ok(RatioPartials { by_shape, by_angle })
}

/// Shape `sigma(theta)` in `[1/(1-2t), critical)` with
/// `area_ratio(t, theta, sigma) = rho0`, found by bisection on the monotone
/// ratio. The relative residual of the returned shape is at most
/// [`SOLVER_REL_TOL`].
pub fn solve_shape(params: &ShapeLawParams, theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= FRAC_PI_6 * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!(
            "angle must lie in (0, pi/6], got {theta}"
        )));
    }
    let (t, rho0) = (params.t, params.rho0);
    let tol = SOLVER_REL_TOL * rho0;
    let mut lo = params.min_shape();
    let at_min = area_ratio(t, theta, lo)?;
    if at_min > rho0 {
        return Err(Error::Infeasible {
            at_min,
            target: rho0,
        });
    }
    if (at_min - rho0).abs() <= tol {
        return Ok(lo);
    }
    // The ratio tends to infinity at the critical shape, so [lo, hi] brackets
    // the solution; beyond the critical shape the ratio counts as above target.
    let mut hi = critical_shape(t, theta);
    let mut best = lo;
    for _ in 0..SOLVER_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        match area_ratio(t, theta, mid) {
            Ok(r) if (r - rho0).abs() <= tol => return Ok(mid),
            Ok(r) if r < rho0 => {
                lo = mid;
                best = mid;
            }
            _ => hi = mid,
        }
    }
    let residual = (area_ratio(t, theta, best)? - rho0).abs();
    if residual <= tol {
        Ok(best)
    } else {
        Err(Error::PreconditionViolated(format!(
            "bisection stalled at residual {residual} (target tolerance {tol})"
        )))
    }
}

/// Closed-form lower bound for the solved shape:
/// `[(1-2t) rho0 - sec(2 theta)] / [(1-2t)^2 rho0 + 1] * cot(2 theta)`.
/// Tends to infinity as the angle tends to zero.
pub fn shape_lower_bound(t: f64, rho0: f64, theta: f64) -> f64 {
    let tau = 1.0 - 2.0 * t;
    let (s2, c2) = (2.0 * theta).sin_cos();
    (tau * rho0 - 1.0 / c2) / (tau * tau * rho0 + 1.0) * (c2 / s2)
}

/// Envelope constants of `theta * sigma(theta)` over a sample set.
#[derive(Clone, Copy, Debug)]
pub struct GrowthFit {
    pub c1: f64,
    pub c2: f64,
}

/// Linear-growth envelope: `c1 = min theta*sigma`, `c2 = max theta*sigma`.
pub fn growth_fit(samples: &[(f64, f64)]) -> Result<GrowthFit> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut c1 = f64::INFINITY;
    let mut c2 = f64::NEG_INFINITY;
    for &(theta, sigma) in samples {
        if theta <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "growth fit needs positive angles, got {theta}"
            )));
        }
        let p = theta * sigma;
        c1 = c1.min(p);
        c2 = c2.max(p);
    }
    Ok(GrowthFit { c1, c2 })
}
