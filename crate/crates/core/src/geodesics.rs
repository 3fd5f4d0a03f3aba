//! Aligned triples, argmax sets of the Apollonian supremum, and the geodesic
//! arcs of the disk's Apollonian weak metric.
//!
//! A path is a geodesic of a weak metric when every ordered triple of its
//! points is aligned, `δ(x, z) = δ(x, y) + δ(y, z)`. In the unit disk the arcs
//! of circles orthogonal to the unit circle, traversed from `x` through `y`
//! towards the boundary, are geodesics of the Apollonian weak metric.

use std::f64::consts::PI;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geom::{orthogonal_circle, pt, GeneralizedCircle, Point2, COINCIDENCE_EPS};
use crate::metrics::{apollonian, initial_window, scan_boundary, WeakMetric};

/// Distance kept between sampled arc points and the unit circle.
pub const ARC_CLEARANCE: f64 = 1e-6;

const MAX_VERIFIED_TRIPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlignedVerdict {
    /// `δ(x, z)`
    pub lhs: f64,
    /// `δ(x, y) + δ(y, z)`
    pub rhs: f64,
    pub aligned: bool,
    /// `rhs − lhs`, nonnegative up to rounding by the triangle inequality.
    pub defect: f64,
}

/// Whether `x, y, z` (in that order) are aligned for `d`.
pub fn aligned<M: WeakMetric + ?Sized>(d: &M, x: Point2, y: Point2, z: Point2, tol: f64) -> Result<AlignedVerdict> {
    let lhs = d.distance(x, z)?;
    let rhs = d.distance(x, y)? + d.distance(y, z)?;
    let defect = rhs - lhs;
    Ok(AlignedVerdict { lhs, rhs, aligned: defect.abs() <= tol, defect })
}

/// Boundary points realizing `δ_A(x, y)`, one representative per cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgmaxSet {
    pub points: Vec<Point2>,
    pub value: f64,
}

/// The set `M_{x,y}` of boundary points where `log(|x − a| / |y − a|)` attains
/// `δ_A(x, y)`, found by sampling and refinement.
///
/// Refined local maxima within `cluster_tol` of the best one are kept; those
/// closer than two sample steps along the boundary are merged.
pub fn argmax_set(domain: &Domain, x: Point2, y: Point2, cfg: &Config, cluster_tol: f64) -> Result<ArgmaxSet> {
    domain.check_apollonian_eligible()?;
    domain.ensure_contains(x)?;
    domain.ensure_contains(y)?;
    if (x - y).norm() <= COINCIDENCE_EPS {
        return Err(Error::DegenerateInput("argmax set needs x ≠ y".into()));
    }
    let f = |a: Point2| ((x - a).norm() / (y - a).norm()).ln();
    let scan = scan_boundary(domain, &f, initial_window(x, y), cfg);
    let Some(best) = scan.best().map(|p| p.value) else {
        return Ok(ArgmaxSet { points: vec![], value: 0.0 });
    };
    if !domain.is_bounded() && best < 0.0 {
        // The supremum 0 is only approached at infinity.
        return Ok(ArgmaxSet { points: vec![], value: 0.0 });
    }

    let mut clusters: Vec<(f64, Point2, f64)> = Vec::new();
    // Peaks arrive sorted by value, so the first member of a cluster is its best.
    for peak in scan.peaks.iter().filter(|p| p.value >= best - cluster_tol) {
        let near = clusters.iter().any(|(param, _, _)| scan.param_distance(*param, peak.param) <= 2.0 * scan.step);
        if !near {
            clusters.push((peak.param, peak.point, peak.value));
        }
    }
    clusters.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(ArgmaxSet { points: clusters.into_iter().map(|c| c.1).collect(), value: cfg.clamp(best) })
}

/// A boundary point at which all three suprema of an aligned triple are attained.
///
/// Returns `None` when the triple is not aligned or no common point is found.
pub fn common_witness(domain: &Domain, x: Point2, y: Point2, z: Point2, cfg: &Config) -> Result<Option<Point2>> {
    if !domain.is_bounded() {
        return Err(Error::IneligibleDomain("common witness needs a bounded domain".into()));
    }
    domain.check_apollonian_eligible()?;
    let delta = |p, q| apollonian(domain, p, q, cfg);
    let (dxy, dyz, dxz) = (delta(x, y)?, delta(y, z)?, delta(x, z)?);
    if (dxy + dyz - dxz).abs() > cfg.align_tol {
        return Ok(None);
    }
    let (p, q) = if (x - z).norm() > COINCIDENCE_EPS {
        (x, z)
    } else if (x - y).norm() > COINCIDENCE_EPS {
        (x, y)
    } else {
        // All three coincide; every boundary point is a witness.
        return Ok(domain.sample_boundary(2, 1.0).points.first().copied());
    };
    let log_ratio = |u: Point2, v: Point2, a: Point2| ((u - a).norm() / (v - a).norm()).ln();
    let tol = 10.0 * cfg.align_tol;
    let candidates = argmax_set(domain, p, q, cfg, cfg.align_tol)?;
    Ok(candidates.points.into_iter().find(|&a| {
        (log_ratio(x, y, a) - dxy).abs() <= tol
            && (log_ratio(y, z, a) - dyz).abs() <= tol
            && (log_ratio(x, z, a) - dxz).abs() <= tol
    }))
}

/// Arc of a generalized circle orthogonal to the unit circle, starting at
/// `from`, passing through `through`, and ending where it meets the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicArc {
    pub support: GeneralizedCircle,
    pub from: Point2,
    pub through: Point2,
    /// +1 when the arc runs counterclockwise about the support's center (or
    /// along the line direction), −1 otherwise.
    pub orientation: i8,
    /// Point of the unit circle where the arc ends.
    pub exit: Point2,
}

impl GeodesicArc {
    /// Arc parameter of a point on the support: the angle about the center
    /// measured from the direction of the origin, or the signed length along a line.
    fn param(&self, p: Point2) -> f64 {
        match self.support {
            GeneralizedCircle::Circle { center, .. } => wrap_angle((p - center).arg() - (-center).arg()),
            GeneralizedCircle::Line { direction, .. } => p.re * direction.re + p.im * direction.im,
        }
    }

    fn point_at(&self, t: f64) -> Point2 {
        match self.support {
            GeneralizedCircle::Circle { center, radius } => {
                center + Point2::from_polar(radius, (-center).arg() + t)
            }
            GeneralizedCircle::Line { direction, .. } => direction * t,
        }
    }

    /// Parameter of the exit point on the unit circle.
    fn exit_param(&self) -> f64 {
        match self.support {
            GeneralizedCircle::Circle { radius, .. } => f64::from(self.orientation) * 1f64.atan2(radius),
            GeneralizedCircle::Line { .. } => 1.0,
        }
    }
}

fn wrap_angle(t: f64) -> f64 {
    let w = (t + PI).rem_euclid(2.0 * PI) - PI;
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

/// The arc from `x` through `y` of the generalized circle orthogonal to the
/// unit circle. Its continuation past `y` meets the circle at `a⁺(x, y)`.
pub fn geodesic_arc_disk(x: Point2, y: Point2) -> Result<GeodesicArc> {
    geodesic_arc_disk_with(x, y, Config::default().collinear_tol)
}

pub fn geodesic_arc_disk_with(x: Point2, y: Point2, collinear_tol: f64) -> Result<GeodesicArc> {
    Domain::UnitDisk.ensure_contains(x)?;
    Domain::UnitDisk.ensure_contains(y)?;
    if (x - y).norm() <= COINCIDENCE_EPS {
        return Err(Error::DegenerateInput("geodesic arc needs x ≠ y".into()));
    }
    // x, y and 0 collinear (this covers y = 0, where 1/ȳ is ∞): a diameter.
    let cross = x.re * y.im - x.im * y.re;
    let span2 = x.norm_sqr().max(y.norm_sqr()).max((x - y).norm_sqr());
    if 0.5 * cross.abs() / span2 < collinear_tol {
        let direction = (y - x) / (y - x).norm();
        let support = GeneralizedCircle::line(pt(0.0, 0.0), direction)?;
        return Ok(GeodesicArc { support, from: x, through: y, orientation: 1, exit: direction });
    }
    // A circle through x orthogonal to the unit circle has Re(c x̄) = (1 + |x|²)/2,
    // and likewise for y; it is the circle through x, y and 1/ȳ.
    let (bx, by) = (0.5 * (1.0 + x.norm_sqr()), 0.5 * (1.0 + y.norm_sqr()));
    let center = pt((bx * y.im - by * x.im) / cross, (x.re * by - y.re * bx) / cross);
    let (center, radius) = orthogonal_circle(center);
    let support = GeneralizedCircle::circle(center, radius)?;
    let mut arc = GeodesicArc { support, from: x, through: y, orientation: 1, exit: x };
    let (tx, ty) = (arc.param(x), arc.param(y));
    arc.orientation = if ty > tx { 1 } else { -1 };
    arc.exit = arc.point_at(arc.exit_param());
    Ok(arc)
}

/// `k` points of the arc, from `from` towards the exit, ending `ARC_CLEARANCE`
/// inside the unit circle.
pub fn sample_arc(arc: &GeodesicArc, k: usize) -> Vec<Point2> {
    let k = k.max(2);
    let t0 = arc.param(arc.from);
    // Bisect for the parameter where the arc is ARC_CLEARANCE inside the circle.
    let target = 1.0 - ARC_CLEARANCE;
    let (mut lo, mut hi) = (t0, arc.exit_param());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if arc.point_at(mid).norm() < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t1 = lo;
    (0..k)
        .map(|j| {
            if j == 0 {
                arc.from
            } else {
                arc.point_at(t0 + (t1 - t0) * j as f64 / (k - 1) as f64)
            }
        })
        .collect()
}

/// Worst alignment defect over ordered triples of a path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodesicReport {
    pub triples_checked: usize,
    /// Largest `|δ(pᵢ, pⱼ) + δ(pⱼ, pₖ) − δ(pᵢ, pₖ)|` over checked `i < j < k`.
    pub max_defect: f64,
    pub worst: [usize; 3],
    pub passed: bool,
}

/// Check every ordered triple `i < j < k` of `path` for alignment (a fixed
/// pseudo-random subsample of 1000 triples when there are more).
pub fn verify_geodesic<M: WeakMetric + ?Sized>(path: &[Point2], d: &M, tol: f64) -> Result<GeodesicReport> {
    let n = path.len();
    if n < 3 {
        return Err(Error::DegenerateInput("a path needs at least 3 points".into()));
    }
    let mut triples: Vec<[usize; 3]> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                triples.push([i, j, k]);
            }
        }
    }
    if triples.len() > MAX_VERIFIED_TRIPLES {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut picked = sample(&mut rng, triples.len(), MAX_VERIFIED_TRIPLES).into_vec();
        picked.sort_unstable();
        triples = picked.into_iter().map(|t| triples[t]).collect();
    }
    let mut report = GeodesicReport { triples_checked: triples.len(), max_defect: 0.0, worst: [0, 1, 2], passed: true };
    for [i, j, k] in triples {
        let v = aligned(d, path[i], path[j], path[k], tol)?;
        if v.defect.abs() > report.max_defect {
            report.max_defect = v.defect.abs();
            report.worst = [i, j, k];
        }
    }
    report.passed = report.max_defect <= tol;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{circumcircle, cross_ratio, in_order, invert_unit_circle};
    use crate::metrics::{apollonian_disk, extremal_points_disk, funk, Metric, MetricKind};

    #[test]
    fn aligned_disk_triple_on_a_diameter() {
        let v = aligned(&apollonian_disk, pt(-0.5, 0.0), pt(0.0, 0.0), pt(0.5, 0.0), 1e-9).unwrap();
        assert!((v.lhs - 3f64.ln()).abs() < 1e-15);
        assert!((v.rhs - 3f64.ln()).abs() < 1e-15);
        assert!(v.aligned);
    }

    #[test]
    fn aligned_is_order_sensitive() {
        let fwd = aligned(&apollonian_disk, pt(-0.5, 0.0), pt(0.0, 0.0), pt(0.5, 0.0), 1e-9).unwrap();
        let back = aligned(&apollonian_disk, pt(0.5, 0.0), pt(0.0, 0.0), pt(-0.5, 0.0), 1e-9).unwrap();
        assert!(fwd.aligned);
        // δ(.5,0) + δ(0,−.5) = log 1.5 + log 2 = δ(.5,−.5) = log 3: the diameter is symmetric.
        assert!(back.aligned);
        let off = aligned(&apollonian_disk, pt(-0.5, 0.0), pt(0.0, 0.4), pt(0.5, 0.0), 1e-9).unwrap();
        assert!(!off.aligned && off.defect > 0.0);
        let same = aligned(&apollonian_disk, pt(0.2, 0.2), pt(0.2, 0.2), pt(0.2, 0.2), 1e-9).unwrap();
        assert!(same.aligned && same.defect == 0.0);
    }

    #[test]
    fn funk_segments_are_aligned() {
        let d = |x, y| funk(&Domain::UnitDisk, x, y);
        let v = aligned(&d, pt(-0.6, 0.1), pt(-0.1, 0.2), pt(0.4, 0.3), 1e-9).unwrap();
        assert!(v.aligned, "{v:?}");
    }

    #[test]
    fn disk_argmax_is_a_single_cluster_at_a_plus() {
        let cfg = Config::default();
        let m = argmax_set(&Domain::UnitDisk, pt(0.5, 0.0), pt(0.0, 0.0), &cfg, 1e-9).unwrap();
        assert_eq!(m.points.len(), 1);
        assert!((m.points[0] - pt(-1.0, 0.0)).norm() < 1e-6);
        let (x, y) = (pt(0.2, -0.3), pt(-0.4, 0.5));
        let m = argmax_set(&Domain::UnitDisk, x, y, &cfg, 1e-9).unwrap();
        assert_eq!(m.points.len(), 1);
        let a = extremal_points_disk(x, y).unwrap().max.point;
        assert!((m.points[0] - a).norm() < 1e-6);
    }

    #[test]
    fn argmax_clusters_follow_symmetry() {
        // x, y on the vertical mid-line of the unit square: the picture is symmetric
        // under x ↦ 1 − x, so maxima come in mirror pairs unless they sit on the axis.
        let cfg = Config::default();
        let sq = Domain::unit_square();
        let m = argmax_set(&sq, pt(0.5, 0.3), pt(0.5, 0.6), &cfg, 1e-9).unwrap();
        assert_eq!(m.points.len(), 1);
        assert!((m.points[0] - pt(0.5, 1.0)).norm() < 1e-6);
        let m = argmax_set(&sq, pt(0.5, 0.1), pt(0.5, 0.2), &cfg, 1e-9).unwrap();
        assert_eq!(m.points.len(), 1);
        assert!((m.points[0] - pt(0.5, 1.0)).norm() < 1e-6);
        // In the isosceles triangle the level circle touches both slanted edges first.
        let tri = Domain::convex_polygon(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(0.5, 1.0)]).unwrap();
        let m = argmax_set(&tri, pt(0.5, 0.1), pt(0.5, 0.2), &cfg, 1e-9).unwrap();
        assert_eq!(m.points.len(), 2, "{m:?}");
        assert!((m.points[0].re + m.points[1].re - 1.0).abs() < 1e-6);
    }

    #[test]
    fn common_points_imply_alignment() {
        let cfg = Config::default();
        let d = Domain::UnitDisk;
        let (x, y, z) = (pt(-0.5, 0.0), pt(0.0, 0.0), pt(0.5, 0.0));
        for (p, q) in [(x, y), (y, z), (x, z)] {
            let m = argmax_set(&d, p, q, &cfg, 1e-9).unwrap();
            assert!((m.points[0] - pt(1.0, 0.0)).norm() < 1e-6);
        }
        assert!(aligned(&apollonian_disk, x, y, z, 1e-9).unwrap().aligned);
    }

    #[test]
    fn common_witness_examples() {
        let cfg = Config::default();
        let a0 = common_witness(&Domain::UnitDisk, pt(-0.5, 0.0), pt(0.0, 0.0), pt(0.5, 0.0), &cfg)
            .unwrap()
            .unwrap();
        assert!((a0 - pt(1.0, 0.0)).norm() < 1e-6);
        assert!((a0.norm() - 1.0).abs() < 1e-10);
        let none = common_witness(&Domain::UnitDisk, pt(-0.5, 0.0), pt(0.0, 0.4), pt(0.5, 0.0), &cfg).unwrap();
        assert!(none.is_none());
        assert!(common_witness(&Domain::UpperHalfPlane, pt(0.0, 1.0), pt(0.0, 2.0), pt(0.0, 3.0), &cfg).is_err());
    }

    #[test]
    fn diameter_arc() {
        let arc = geodesic_arc_disk(pt(-0.5, 0.0), pt(0.5, 0.0)).unwrap();
        assert_eq!(arc.support, GeneralizedCircle::Line { point: pt(0.0, 0.0), direction: pt(1.0, 0.0) });
        assert!((arc.exit - pt(1.0, 0.0)).norm() < 1e-15);
        let pts = sample_arc(&arc, 3);
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().all(|p| p.im == 0.0));
        assert!(pts[0].re < pts[1].re && pts[1].re < pts[2].re);
        // y = 0 takes the same branch.
        let arc = geodesic_arc_disk(pt(0.0, 0.3), pt(0.0, 0.0)).unwrap();
        assert!((arc.exit - pt(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn curved_arc_is_orthogonal_and_exits_at_a_plus() {
        let (x, y) = (pt(0.3, 0.0), pt(0.0, 0.5));
        let arc = geodesic_arc_disk(x, y).unwrap();
        assert!(matches!(arc.support, GeneralizedCircle::Circle { .. }));
        assert!(arc.support.unit_orthogonality_defect() < 1e-10);
        assert!(arc.support.distance_to(x) < 1e-12 && arc.support.distance_to(y) < 1e-12);
        let via_inverse = circumcircle(x, y, invert_unit_circle(y).unwrap()).unwrap();
        match (arc.support, via_inverse) {
            (GeneralizedCircle::Circle { center: c1, radius: r1 }, GeneralizedCircle::Circle { center: c2, radius: r2 }) => {
                assert!((c1 - c2).norm() < 1e-12 && (r1 - r2).abs() < 1e-12);
            }
            _ => panic!("expected circles"),
        }
        let a_plus = extremal_points_disk(x, y).unwrap().max.point;
        assert!((arc.exit - a_plus).norm() < 1e-8);
    }

    #[test]
    fn sampled_arc_is_ordered_and_interior() {
        let (x, y) = (pt(0.3, 0.0), pt(0.0, 0.5));
        let arc = geodesic_arc_disk(x, y).unwrap();
        let pts = sample_arc(&arc, 8);
        assert_eq!(pts[0], x);
        assert!(pts.iter().all(|p| p.norm() < 1.0));
        assert!((pts[7].norm() - (1.0 - ARC_CLEARANCE)).abs() < 1e-9);
        for w in pts.windows(2) {
            let (z, w) = (w[0], w[1]);
            let a = extremal_points_disk(z, w).unwrap().max.point;
            let cr = cross_ratio(z, w, a, invert_unit_circle(w).unwrap()).unwrap();
            assert!(in_order(cr, 1e-9), "{cr}");
        }
    }

    #[test]
    fn arc_is_an_apollonian_geodesic() {
        let arc = geodesic_arc_disk(pt(0.3, 0.0), pt(0.0, 0.5)).unwrap();
        let report = verify_geodesic(&sample_arc(&arc, 8), &apollonian_disk, 1e-9).unwrap();
        assert_eq!(report.triples_checked, 56);
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn euclidean_segment_is_a_funk_geodesic() {
        let path: Vec<Point2> = (0..10).map(|k| pt(-0.7, -0.2) + pt(1.3, 0.5) * (k as f64 / 9.0)).collect();
        let report = verify_geodesic(&path, &Metric::new(MetricKind::Funk, Domain::UnitDisk), 1e-9).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn long_paths_are_subsampled() {
        let path: Vec<Point2> = (0..30).map(|k| pt(-0.9 + 1.8 * k as f64 / 29.0, 0.0)).collect();
        let report = verify_geodesic(&path, &apollonian_disk, 1e-9).unwrap();
        assert_eq!(report.triples_checked, 1000);
        assert!(verify_geodesic(&path[..2], &apollonian_disk, 1e-9).is_err());
    }
}
