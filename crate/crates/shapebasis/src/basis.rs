//! Angle-set and shape-function constructors: geometric angle sequences,
//! block configurations with per-block constant shapes, solver-built shape
//! functions, the unit-area witness rectangle, and pairwise-incomparable
//! interval families.

use crate::error::{Error, Result};
use crate::geometry::{Point2, Rectangle};
use crate::shape_law::{solve_shape, ShapeLawParams};

/// Strictly decreasing angles `theta_0 > theta_1 > ... > 0` together with,
/// for each consecutive pair `(theta_{k+1}, theta_k)`, the number `N_k` of
/// uniformly inserted angles and the constant shape `sigma_k` used on that
/// block. `counts` and `sigmas` therefore have one entry fewer than `thetas`.
#[derive(Clone, Debug)]
pub struct BlockConfig {
    thetas: Vec<f64>,
    counts: Vec<usize>,
    sigmas: Vec<f64>,
}

impl BlockConfig {
    pub fn new(thetas: Vec<f64>, counts: Vec<usize>, sigmas: Vec<f64>) -> Result<Self> {
        if thetas.len() < 2 {
            return Err(Error::InvalidParameter(
                "a block configuration needs at least two angles".into(),
            ));
        }
        if counts.len() + 1 != thetas.len() || sigmas.len() + 1 != thetas.len() {
            return Err(Error::InvalidParameter(format!(
                "expected one count and one shape per consecutive angle pair: \
                 {} angles, {} counts, {} shapes",
                thetas.len(),
                counts.len(),
                sigmas.len()
            )));
        }
        if !thetas.iter().all(|&t| t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParameter("angles must be positive".into()));
        }
        for w in thetas.windows(2) {
            if w[0] <= w[1] {
                return Err(Error::InvalidParameter(
                    "angles must be strictly decreasing".into(),
                ));
            }
        }
        if counts.contains(&0) {
            return Err(Error::InvalidParameter("counts must be at least 1".into()));
        }
        if !sigmas.iter().all(|&s| s.is_finite() && s >= 1.0) {
            return Err(Error::InvalidParameter("shapes must be at least 1".into()));
        }
        Ok(Self {
            thetas,
            counts,
            sigmas,
        })
    }

    /// Number of blocks (consecutive angle pairs).
    pub fn blocks(&self) -> usize {
        self.counts.len()
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.blocks() {
            Err(Error::IndexOutOfRange {
                index: k,
                len: self.blocks(),
            })
        } else {
            Ok(())
        }
    }

    /// `(theta_k, theta_{k+1}, N_k, sigma_k)` for block `k`.
    pub fn block(&self, k: usize) -> Result<(f64, f64, usize, f64)> {
        self.check_index(k)?;
        Ok((
            self.thetas[k],
            self.thetas[k + 1],
            self.counts[k],
            self.sigmas[k],
        ))
    }
}

/// The geometric angle set `{2^-k : 0 <= k <= k_max}` in decreasing order.
pub fn geometric_angles(k_max: usize) -> Vec<f64> {
    (0..=k_max as i32).map(|k| 2f64.powi(-k)).collect()
}

/// The `N_k` angles of block `k`, uniformly spaced from `theta_{k+1}`
/// (inclusive) towards `theta_k` (exclusive): the i-th angle is
/// `theta_{k+1} + (i-1)/N_k * (theta_k - theta_{k+1})` for `1 <= i <= N_k`.
pub fn block_angles(cfg: &BlockConfig, k: usize) -> Result<Vec<f64>> {
    let (hi, lo, n, _) = cfg.block(k)?;
    let gap = (hi - lo) / n as f64;
    Ok((0..n).map(|i| lo + i as f64 * gap).collect())
}

/// Whether `sin((theta_k - theta_{k+1}) / N_k) >= 4 / sigma_k` holds for
/// block `k`. This is the overlap-control condition under which at least
/// half of each family rectangle avoids all the others. Shapes are matched
/// to the condition with equality in [`geometric_block_config`], so the
/// comparison allows `1e-12` relative slack against double rounding.
pub fn angle_condition_holds(cfg: &BlockConfig, k: usize) -> Result<bool> {
    let (hi, lo, n, sigma) = cfg.block(k)?;
    let rhs = 4.0 / sigma;
    Ok(((hi - lo) / n as f64).sin() >= rhs * (1.0 - 1e-12))
}

/// Block configuration on the geometric angles `theta_k = 2^-k` with shapes
/// `sigma_k = 4 / sin(2^-k-1 / N_k)` matched so the angle condition holds
/// with equality on every block.
pub fn geometric_block_config(counts: &[usize]) -> Result<BlockConfig> {
    if counts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let thetas = geometric_angles(counts.len());
    let sigmas = counts
        .iter()
        .enumerate()
        .map(|(k, &n)| 4.0 / (2f64.powi(-(k as i32) - 1) / n as f64).sin())
        .collect();
    BlockConfig::new(thetas, counts.to_vec(), sigmas)
}

/// How the entries of a [`ShapeFunction`] were produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    SolverBuilt,
    BlockConstant,
    Explicit,
}

/// Finite map from angles to shapes, stored with angles strictly decreasing.
#[derive(Clone, Debug)]
pub struct ShapeFunction {
    entries: Vec<(f64, f64)>,
    provenance: Provenance,
}

impl ShapeFunction {
    /// Solves for the shape at each angle so the bounding/inscribed area
    /// ratio equals `params.rho0()`. The resulting map is strictly
    /// decreasing in the angle.
    pub fn from_solver(angles: &[f64], params: &ShapeLawParams) -> Result<Self> {
        let mut sorted: Vec<f64> = angles.to_vec();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sorted.dedup();
        if sorted.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut entries = Vec::with_capacity(sorted.len());
        for theta in sorted {
            entries.push((theta, solve_shape(params, theta)?));
        }
        for w in entries.windows(2) {
            debug_assert!(w[0].1 < w[1].1, "solver shapes must grow as angles shrink");
        }
        Ok(Self {
            entries,
            provenance: Provenance::SolverBuilt,
        })
    }

    /// All block angles of `cfg` mapped to their block's constant shape.
    pub fn from_blocks(cfg: &BlockConfig) -> Result<Self> {
        let mut entries = Vec::new();
        for k in (0..cfg.blocks()).rev() {
            let sigma = cfg.sigmas()[k];
            for theta in block_angles(cfg, k)? {
                entries.push((theta, sigma));
            }
        }
        entries.reverse();
        Ok(Self {
            entries,
            provenance: Provenance::BlockConstant,
        })
    }

    /// Explicit entries; angles must be positive and distinct, shapes >= 1.
    pub fn explicit(mut entries: Vec<(f64, f64)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        for &(theta, sigma) in &entries {
            if !(theta.is_finite() && theta > 0.0 && sigma.is_finite() && sigma >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "entry (theta={theta}, sigma={sigma}) out of range"
                )));
            }
        }
        entries.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidParameter("angles must be distinct".into()));
            }
        }
        Ok(Self {
            entries,
            provenance: Provenance::Explicit,
        })
    }

    /// Entries, angles strictly decreasing.
    pub fn entries(&self) -> &[(f64, f64)] {
        &self.entries
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }
}

/// Unit-area rectangle centered at the origin with the given shape and angle,
/// paired with the distance from the origin to its farthest vertex,
/// `sqrt(sigma + 1/sigma) / 2`. As the shape grows this distance grows like
/// `sqrt(sigma) / 2`, witnessing that the union of basis members through the
/// origin with area at most one is unbounded.
pub fn unboundedness_witness(theta: f64, sigma: f64) -> Result<(Rectangle, f64)> {
    if !(sigma.is_finite() && sigma >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "shape must be at least 1, got {sigma}"
        )));
    }
    let long = sigma.sqrt();
    let short = 1.0 / long;
    let rect = Rectangle::new(Point2::new(0.0, 0.0), theta, long, short)?;
    let far = 0.5 * long.hypot(short);
    Ok((rect, far))
}

/// The axis-parallel family `Q_k = 2^k [0, base] x [0, base / shapes[k]]`
/// for `0 <= k <= n`. When the shapes grow strictly and `shapes[k] * 2^-k`
/// grows strictly, the horizontal sides grow while the vertical sides
/// shrink, so no member contains a translate of another.
pub fn incomparable_intervals(base: f64, shapes: &[f64], n: usize) -> Result<Vec<Rectangle>> {
    if !(base.is_finite() && base >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "base side must be at least 1, got {base}"
        )));
    }
    if n + 1 > shapes.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: shapes.len(),
        });
    }
    if shapes.iter().any(|&s| !(s.is_finite() && s >= 1.0)) {
        return Err(Error::PreconditionViolated(
            "shapes must be at least 1".into(),
        ));
    }
    for (k, w) in shapes.windows(2).enumerate().take(n) {
        if w[1] <= w[0] {
            return Err(Error::PreconditionViolated(format!(
                "shapes must increase strictly (violated at index {k})"
            )));
        }
        if w[1] * 2f64.powi(-(k as i32) - 1) <= w[0] * 2f64.powi(-(k as i32)) {
            return Err(Error::PreconditionViolated(format!(
                "shape[k] * 2^-k must increase strictly (violated at index {k})"
            )));
        }
    }
    let mut out = Vec::with_capacity(n + 1);
    for (k, &sigma) in shapes.iter().enumerate().take(n + 1) {
        let scale = 2f64.powi(k as i32);
        let width = scale * base;
        let height = width / sigma;
        out.push(Rectangle::axis_aligned(
            Point2::new(0.5 * width, 0.5 * height),
            width,
            height,
        )?);
    }
    Ok(out)
}
