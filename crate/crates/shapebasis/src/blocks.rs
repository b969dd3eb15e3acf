//! Materialized block families: the rectangles obtained by rotating
//! `[-sigma_k, sigma_k] x [-1, 1]` around the origin through the block
//! angles, the rotated unit test square, union-area and overlap checks, the
//! quarter lower bound for the maximal function, and the divergence table of
//! necessity ratios.

use crate::basis::{angle_condition_holds, block_angles, BlockConfig};
use crate::error::{Error, Result};
use crate::geometry::{ConvexPolygon, Point2, Rectangle};
use crate::maximal::MeasureEstimate;
use crate::orlicz::{necessity_ratio, SimpleFunction, YoungFunction};
use crate::sampling::{area_from_hits, count_hits, family_window, rounded_samples, Frame};
use rayon::prelude::*;

/// The rectangles of one block, all centered at the origin with area
/// `4 sigma_k`, together with the unit test square rotated by the first
/// block angle.
#[derive(Clone, Debug)]
pub struct BlockFamily {
    pub k: usize,
    pub sigma: f64,
    pub rects: Vec<Rectangle>,
    pub theta_set: ConvexPolygon,
}

/// Builds block `k` of `cfg`. Warns on stderr, but still builds, when the
/// angle condition fails, so the violating regime can be explored.
pub fn build_family(cfg: &BlockConfig, k: usize) -> Result<BlockFamily> {
    let angles = block_angles(cfg, k)?;
    let sigma = cfg.sigmas()[k];
    if !angle_condition_holds(cfg, k)? {
        eprintln!("warning: block {k} violates the angle condition; overlap bounds may fail");
    }
    let rects = angles
        .iter()
        .map(|&a| Rectangle::new(Point2::new(0.0, 0.0), a, 2.0 * sigma, 2.0))
        .collect::<Result<Vec<_>>>()?;
    let base = angles[0];
    let (s, c) = base.sin_cos();
    let theta_set = ConvexPolygon::new(vec![
        Point2::new(0.0, 0.0),
        Point2::new(c, s),
        Point2::new(c - s, s + c),
        Point2::new(-s, c),
    ])?;
    Ok(BlockFamily {
        k,
        sigma,
        rects,
        theta_set,
    })
}

/// The test function `sigma_k` times the indicator of the rotated unit square.
pub fn scaled_indicator(fam: &BlockFamily) -> Result<SimpleFunction> {
    SimpleFunction::scaled(fam.sigma, fam.theta_set.clone())
}

/// Whether every vertex of the test square lies in every family rectangle
/// (closed test with a small absolute tolerance for the rotation round trip).
pub fn containment_check(fam: &BlockFamily) -> bool {
    fam.rects.iter().all(|r| {
        fam.theta_set
            .vertices()
            .iter()
            .all(|&v| r.contains_with_tol(v, 1e-12))
    })
}

/// Samples each rectangle and verifies that points in its outer halves (long
/// axis coordinate beyond `sigma_k / 2`) belong to no other family member.
/// Under the angle condition this holds exactly, which is what forces the
/// union to fill at least half of the total member area.
pub fn uncovered_strip_check(fam: &BlockFamily, n_per_rect: u64, seed: u64) -> bool {
    let frames: Vec<Frame> = fam.rects.iter().map(Frame::new).collect();
    let half = 0.5 * fam.sigma;
    frames.par_iter().enumerate().all(|(i, frame)| {
        (0..n_per_rect).into_par_iter().all(|draw| {
            let (u, _, p) = frame.uniform_point(seed, i as u64, draw);
            if u.abs() <= half {
                return true;
            }
            frames
                .iter()
                .enumerate()
                .all(|(j, other)| j == i || !other.contains(p))
        })
    })
}

/// Monte Carlo estimate of the union area of the family over its bounding box.
pub fn union_area(fam: &BlockFamily, n_samples: u64, seed: u64) -> MeasureEstimate {
    let window = family_window(&fam.rects).expect("family is nonempty");
    let window_frame = Frame::new(&window);
    let frames: Vec<Frame> = fam.rects.iter().map(Frame::new).collect();
    let n = rounded_samples(n_samples);
    let hits = count_hits(&window_frame, seed, n, |p| {
        frames.iter().any(|fr| fr.contains(p))
    });
    let (value, half_width95) = area_from_hits(window_frame.area(), hits, n);
    MeasureEstimate {
        value,
        half_width95,
        samples: n,
        seed,
    }
}

/// Union area relative to the total member area `N_k |R_k|`, and whether the
/// ratio reaches one half within the confidence half-width.
pub fn half_area_check(fam: &BlockFamily, n_samples: u64, seed: u64) -> (bool, f64) {
    let est = union_area(fam, n_samples, seed);
    let total = fam.rects.len() as f64 * 4.0 * fam.sigma;
    let ratio = est.value / total;
    (ratio >= 0.5 - est.half_width95 / total, ratio)
}

/// Samples the union and verifies that the maximal average of the scaled
/// test square at every sampled point reaches one quarter (up to `1e-12`):
/// each member containing the point averages the function to exactly
/// `sigma_k / |R_k| = 1/4` once the test square is contained in it.
pub fn quarter_bound_check(fam: &BlockFamily, n_samples: u64, seed: u64) -> Result<bool> {
    if !containment_check(fam) {
        return Err(Error::ContainmentFailed { block: fam.k });
    }
    let f = scaled_indicator(fam)?;
    let averages: Vec<f64> = fam
        .rects
        .iter()
        .map(|r| crate::maximal::average_over(r, &f))
        .collect();
    let frames: Vec<Frame> = fam.rects.iter().map(Frame::new).collect();
    let window = family_window(&fam.rects).expect("family is nonempty");
    let window_frame = Frame::new(&window);
    let n = rounded_samples(n_samples);
    let ok = (0..n).into_par_iter().all(|i| {
        let p = window_frame.stratified_point(seed, i);
        let mut best: Option<f64> = None;
        for (fr, &avg) in frames.iter().zip(&averages) {
            if fr.contains(p) {
                best = Some(best.map_or(avg, |b: f64| b.max(avg)));
            }
        }
        match best {
            Some(m) => m >= 0.25 - 1e-12,
            None => true,
        }
    });
    Ok(ok)
}

/// One row of the divergence table.
#[derive(Clone, Copy, Debug)]
pub struct DivergenceRow {
    pub k: usize,
    pub count: usize,
    pub sigma: f64,
    pub angle_ok: bool,
    pub ratio: f64,
}

/// Necessity ratios `N_k sigma_k / Phi(sigma_k)` for `k = 0..=k_max` with the
/// angle-condition flag, plus the last-over-first growth statistic. An
/// unbounded ratio column refutes the weak-type estimate for `Phi`.
#[derive(Clone, Debug)]
pub struct DivergenceReport {
    pub rows: Vec<DivergenceRow>,
    pub growth: f64,
}

pub fn divergence_report(
    cfg: &BlockConfig,
    phi: &YoungFunction,
    k_max: usize,
) -> Result<DivergenceReport> {
    if k_max >= cfg.blocks() {
        return Err(Error::IndexOutOfRange {
            index: k_max,
            len: cfg.blocks(),
        });
    }
    let mut rows = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        rows.push(DivergenceRow {
            k,
            count: cfg.counts()[k],
            sigma: cfg.sigmas()[k],
            angle_ok: angle_condition_holds(cfg, k)?,
            ratio: necessity_ratio(cfg, phi, k)?,
        });
    }
    let growth = rows.last().unwrap().ratio / rows.first().unwrap().ratio;
    Ok(DivergenceReport { rows, growth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::geometric_block_config;

    fn quadratic_config(k_max: usize) -> BlockConfig {
        let counts: Vec<usize> = (0..=k_max).map(|k| (k * k).max(1)).collect();
        geometric_block_config(&counts).unwrap()
    }

    #[test]
    fn family_geometry() {
        let cfg = geometric_block_config(&[1, 1, 1]).unwrap();
        let fam = build_family(&cfg, 1).unwrap();
        assert_eq!(fam.rects.len(), 1);
        // A single inserted angle sits at the lower block endpoint.
        assert_eq!(fam.rects[0].theta(), 0.25);
        assert!((fam.theta_set.area() - 1.0).abs() <= 1e-12);
        for r in &fam.rects {
            assert!((r.area() - 4.0 * fam.sigma).abs() <= 1e-12 * 4.0 * fam.sigma);
            assert!(r.contains(Point2::new(0.0, 0.0)));
        }
        assert!(matches!(
            build_family(&cfg, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn containment_holds_for_matched_families() {
        for k in 2..=8 {
            let cfg = quadratic_config(k);
            let fam = build_family(&cfg, k).unwrap();
            assert!(containment_check(&fam), "containment failed at block {k}");
        }
        // A single inserted angle reduces to one containment test.
        let cfg = geometric_block_config(&[1]).unwrap();
        let fam = build_family(&cfg, 0).unwrap();
        assert_eq!(fam.rects.len(), 1);
        assert!(containment_check(&fam));
    }

    #[test]
    fn containment_fails_for_flat_family() {
        // Shape 1 with a wide relative angle: the far corner of the rotated
        // unit square leaves the square member at the other block angle.
        let cfg = BlockConfig::new(vec![1.2, 0.1], vec![2], vec![1.0]).unwrap();
        let fam = build_family(&cfg, 0).unwrap();
        assert!(!containment_check(&fam));
        assert!(matches!(
            quarter_bound_check(&fam, 1000, 1),
            Err(Error::ContainmentFailed { .. })
        ));
    }

    #[test]
    fn uncovered_strip_two_rectangles_analytic() {
        // Two strips at relative angle beta with sin(beta) slightly above
        // 4 / sigma: any point of one with |u| > 2 / sin(beta) misses the
        // other, and 2 / sin(beta) <= sigma / 2.
        let sigma = 1000.0f64;
        let beta = (4.2 / sigma).asin();
        let cfg = BlockConfig::new(vec![0.1 + 2.0 * beta, 0.1], vec![2], vec![sigma]).unwrap();
        assert!(angle_condition_holds(&cfg, 0).unwrap());
        let fam = build_family(&cfg, 0).unwrap();
        assert_eq!(fam.rects.len(), 2);
        assert!(uncovered_strip_check(&fam, 20_000, 3));
    }

    #[test]
    fn uncovered_strip_single_rect_is_vacuous() {
        let cfg = geometric_block_config(&[1]).unwrap();
        let fam = build_family(&cfg, 0).unwrap();
        assert!(uncovered_strip_check(&fam, 100, 0));
    }

    #[test]
    fn uncovered_strip_matched_families() {
        for k in 2..=5 {
            let cfg = quadratic_config(k);
            let fam = build_family(&cfg, k).unwrap();
            assert!(
                uncovered_strip_check(&fam, 5_000, 11),
                "strip check failed at k={k}"
            );
        }
    }

    #[test]
    fn union_area_single_and_disjoint() {
        let cfg = geometric_block_config(&[1]).unwrap();
        let fam = build_family(&cfg, 0).unwrap();
        let est = union_area(&fam, 100_000, 5);
        let expect = 4.0 * fam.sigma;
        assert!(
            (est.value - expect).abs() <= est.half_width95 + 0.01 * expect,
            "union {} vs member area {expect}",
            est.value
        );

        // Synthetic disjoint family: shifted translates, union is the sum.
        let r1 = Rectangle::axis_aligned(Point2::new(0.0, 0.0), 4.0, 1.0).unwrap();
        let r2 = Rectangle::axis_aligned(Point2::new(0.0, 3.0), 4.0, 1.0).unwrap();
        let fam = BlockFamily {
            k: 0,
            sigma: 1.0,
            rects: vec![r1, r2],
            theta_set: r1.to_polygon(),
        };
        let est = union_area(&fam, 200_000, 6);
        assert!((est.value - 8.0).abs() <= est.half_width95 + 0.05);
    }

    #[test]
    fn union_area_reaches_half_bound() {
        let cfg = quadratic_config(4);
        let fam = build_family(&cfg, 4).unwrap();
        let est = union_area(&fam, 400_000, 7);
        let total = fam.rects.len() as f64 * 4.0 * fam.sigma;
        assert!(est.value >= 0.5 * total - est.half_width95);
        let (passed, ratio) = half_area_check(&fam, 400_000, 7);
        assert!(passed, "half-area check failed with ratio {ratio}");
        assert!(ratio > 0.5 && ratio <= 1.0 + 1e-3);
    }

    #[test]
    fn half_area_single_rect_ratio_is_one() {
        let cfg = geometric_block_config(&[1]).unwrap();
        let fam = build_family(&cfg, 0).unwrap();
        let (passed, ratio) = half_area_check(&fam, 100_000, 2);
        assert!(passed);
        assert!((ratio - 1.0).abs() < 0.02);
    }

    #[test]
    fn half_area_reported_for_violating_family() {
        // Shape 4 with tiny gaps violates the angle condition badly; the
        // ratio is reported, not asserted.
        let n = 40;
        let thetas = vec![0.21, 0.2];
        let cfg = BlockConfig::new(thetas, vec![n], vec![4.0]).unwrap();
        assert!(!angle_condition_holds(&cfg, 0).unwrap());
        let fam = build_family(&cfg, 0).unwrap();
        let (_, ratio) = half_area_check(&fam, 200_000, 9);
        assert!(ratio > 0.0 && ratio <= 1.0);
        // With 40 nearly identical strips the union is far below half the
        // total member area.
        assert!(ratio < 0.5);
    }

    #[test]
    fn quarter_bound_matched_family() {
        let cfg = quadratic_config(4);
        let fam = build_family(&cfg, 4).unwrap();
        assert!(quarter_bound_check(&fam, 10_000, 13).unwrap());
    }

    #[test]
    fn divergence_table_shapes() {
        let cfg = quadratic_config(10);
        let linear = YoungFunction::linear();
        let report = divergence_report(&cfg, &linear, 10).unwrap();
        assert_eq!(report.rows.len(), 11);
        for row in &report.rows {
            assert!((row.ratio - row.count as f64).abs() <= 1e-12 * row.count as f64);
            assert!(row.angle_ok);
        }

        let phi = YoungFunction::llogl(1.0).unwrap();
        let cfg = quadratic_config(40);
        let report = divergence_report(&cfg, &phi, 40).unwrap();
        assert!((report.rows[20].ratio - 17.441467753241252).abs() <= 1e-9);
        assert!((report.rows[40].ratio - 41.903368678078174).abs() <= 1e-9);
        assert!(report.growth > 1.0);

        // Constant counts: the ratio column decays towards zero.
        let cfg = geometric_block_config(&vec![1usize; 41]).unwrap();
        let report = divergence_report(&cfg, &phi, 40).unwrap();
        assert!(report.growth < 1.0);
        assert!(report.rows.last().unwrap().ratio < 0.05);
    }
}
