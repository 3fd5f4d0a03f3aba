//! Planar domains and the boundary queries the metrics rely on.
//!
//! Four boundary representations are supported: the unit disk, the upper
//! half-plane, strictly convex polygons and a caller-supplied sample of
//! boundary points. The JSON form is tagged by `"type"`:
//!
//! ```json
//! {"type":"unit_disk"}
//! {"type":"upper_half_plane"}
//! {"type":"convex_polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]}
//! {"type":"sampled_boundary","points":[[1,0],[0,1],[-1,0],[0,-1]],"bounded":true}
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{ensure_finite, pt, Point2, Similarity, COINCIDENCE_EPS};

/// Points closer than this to the boundary are treated as outside.
pub const BOUNDARY_EPS: f64 = 1e-12;

const RAY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainSpec", into = "DomainSpec")]
pub enum Domain {
    UnitDisk,
    UpperHalfPlane,
    /// Counterclockwise, strictly convex.
    ConvexPolygon(ConvexPolygon),
    SampledBoundary { points: Vec<Point2>, bounded: bool },
}

/// Wire form of [`Domain`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DomainSpec {
    UnitDisk,
    UpperHalfPlane,
    ConvexPolygon { vertices: Vec<[f64; 2]> },
    SampledBoundary { points: Vec<[f64; 2]>, bounded: bool },
}

impl TryFrom<DomainSpec> for Domain {
    type Error = Error;

    fn try_from(spec: DomainSpec) -> Result<Self> {
        let conv = |v: Vec<[f64; 2]>| v.into_iter().map(|[x, y]| pt(x, y)).collect::<Vec<_>>();
        match spec {
            DomainSpec::UnitDisk => Ok(Domain::UnitDisk),
            DomainSpec::UpperHalfPlane => Ok(Domain::UpperHalfPlane),
            DomainSpec::ConvexPolygon { vertices } => Domain::convex_polygon(conv(vertices)),
            DomainSpec::SampledBoundary { points, bounded } => {
                Domain::sampled_boundary(conv(points), bounded)
            }
        }
    }
}

impl From<Domain> for DomainSpec {
    fn from(d: Domain) -> Self {
        let conv = |v: &[Point2]| v.iter().map(|p| [p.re, p.im]).collect::<Vec<_>>();
        match d {
            Domain::UnitDisk => DomainSpec::UnitDisk,
            Domain::UpperHalfPlane => DomainSpec::UpperHalfPlane,
            Domain::ConvexPolygon(poly) => DomainSpec::ConvexPolygon { vertices: conv(&poly.vertices) },
            Domain::SampledBoundary { points, bounded } => {
                DomainSpec::SampledBoundary { points: conv(&points), bounded }
            }
        }
    }
}

/// A strictly convex polygon with counterclockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point2>,
    perimeter: f64,
}

impl ConvexPolygon {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidDomain(format!("polygon needs at least 3 vertices, got {n}")));
        }
        for v in &vertices {
            ensure_finite(*v).map_err(|_| Error::InvalidDomain("non-finite vertex".into()))?;
        }
        let mut turning = 0.0;
        for i in 0..n {
            let (p, q, r) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            let (e1, e2) = (q - p, r - q);
            if e1.norm() <= COINCIDENCE_EPS {
                return Err(Error::InvalidDomain(format!("repeated vertex at index {}", (i + 1) % n)));
            }
            let cross = e1.re * e2.im - e1.im * e2.re;
            if cross <= 0.0 {
                return Err(Error::InvalidDomain(format!(
                    "polygon is not strictly convex and counterclockwise at vertex {}",
                    (i + 1) % n
                )));
            }
            turning += (e2 / e1).arg();
        }
        // A star polygon has positive turns everywhere but winds more than once.
        if (turning - 2.0 * PI).abs() > 1e-6 {
            return Err(Error::InvalidDomain("polygon winds more than once".into()));
        }
        let perimeter = (0..n).map(|i| (vertices[(i + 1) % n] - vertices[i]).norm()).sum();
        Ok(Self { vertices, perimeter })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Signed distance to the supporting line of each edge, positive inside.
    fn edge_offsets(&self, x: Point2) -> impl Iterator<Item = f64> + '_ {
        self.edges().map(move |(p, q)| {
            let e = q - p;
            let v = x - p;
            (e.re * v.im - e.im * v.re) / e.norm()
        })
    }

    /// Point at arclength `s` (taken modulo the perimeter) measured from vertex 0.
    pub fn point_at(&self, s: f64) -> Point2 {
        let mut s = s.rem_euclid(self.perimeter);
        for (p, q) in self.edges() {
            let len = (q - p).norm();
            if s <= len {
                return p + (q - p) * (s / len);
            }
            s -= len;
        }
        self.vertices[0]
    }

    /// Arclength coordinate of each vertex.
    pub fn vertex_arclengths(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.edges()
            .map(|(p, q)| {
                let s = acc;
                acc += (q - p).norm();
                s
            })
            .collect()
    }

    fn ray_exit_param(&self, x: Point2, d: Point2) -> Option<f64> {
        // Edge-by-edge: leaving through edge (p, q) happens at the smallest t
        // with the outward component of d positive.
        let mut best: Option<f64> = None;
        for (p, q) in self.edges() {
            let e = q - p;
            let len = e.norm();
            let inside = (e.re * (x - p).im - e.im * (x - p).re) / len;
            let rate = (e.re * d.im - e.im * d.re) / len;
            if rate < 0.0 {
                let t = inside / -rate;
                if best.is_none_or(|b| t < b) {
                    best = Some(t);
                }
            }
        }
        best
    }
}

/// Ordered sample of boundary points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub points: Vec<Point2>,
    pub resolution: usize,
}

impl Domain {
    pub fn convex_polygon(vertices: Vec<Point2>) -> Result<Self> {
        Ok(Domain::ConvexPolygon(ConvexPolygon::new(vertices)?))
    }

    /// The axis-aligned unit square `[0,1]²`.
    pub fn unit_square() -> Self {
        Domain::convex_polygon(vec![pt(0.0, 0.0), pt(1.0, 0.0), pt(1.0, 1.0), pt(0.0, 1.0)])
            .expect("unit square is convex")
    }

    pub fn sampled_boundary(points: Vec<Point2>, bounded: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidDomain("sampled boundary needs at least 2 points".into()));
        }
        for p in &points {
            ensure_finite(*p).map_err(|_| Error::InvalidDomain("non-finite boundary point".into()))?;
        }
        if bounded && points.len() < 3 {
            return Err(Error::InvalidDomain("bounded sampled boundary needs at least 3 points".into()));
        }
        Ok(Domain::SampledBoundary { points, bounded })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Domain::UnitDisk => "unit_disk",
            Domain::UpperHalfPlane => "upper_half_plane",
            Domain::ConvexPolygon(_) => "convex_polygon",
            Domain::SampledBoundary { .. } => "sampled_boundary",
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            Domain::UnitDisk | Domain::ConvexPolygon(_) => true,
            Domain::UpperHalfPlane => false,
            Domain::SampledBoundary { bounded, .. } => *bounded,
        }
    }

    /// Bounded convex domains carry the Funk, Hilbert and affine part metrics.
    pub fn is_bounded_convex(&self) -> bool {
        matches!(self, Domain::UnitDisk | Domain::ConvexPolygon(_))
    }

    /// Whether the Apollonian weak metric is defined: the domain is bounded or its
    /// boundary is unbounded. A finite sample cannot witness an unbounded boundary.
    pub fn check_apollonian_eligible(&self) -> Result<()> {
        match self {
            Domain::SampledBoundary { bounded: false, .. } => Err(Error::IneligibleDomain(
                "a finite boundary sample cannot represent an unbounded boundary".into(),
            )),
            _ => Ok(()),
        }
    }

    fn raw_boundary_distance(&self, x: Point2) -> f64 {
        match self {
            Domain::UnitDisk => 1.0 - x.norm(),
            Domain::UpperHalfPlane => x.im,
            Domain::ConvexPolygon(poly) => {
                poly.edges().map(|(p, q)| segment_distance(x, p, q)).fold(f64::INFINITY, f64::min)
            }
            Domain::SampledBoundary { points, .. } => {
                points.iter().map(|p| (x - p).norm()).fold(f64::INFINITY, f64::min)
            }
        }
    }

    pub fn contains(&self, x: Point2) -> bool {
        if !(x.re.is_finite() && x.im.is_finite()) {
            return false;
        }
        let inside = match self {
            Domain::UnitDisk | Domain::UpperHalfPlane => true,
            Domain::ConvexPolygon(poly) => poly.edge_offsets(x).all(|h| h > 0.0),
            Domain::SampledBoundary { points, bounded: true } => point_in_polygon(x, points),
            Domain::SampledBoundary { bounded: false, .. } => true,
        };
        inside && self.raw_boundary_distance(x) > BOUNDARY_EPS
    }

    pub fn ensure_contains(&self, x: Point2) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::outside(x))
        }
    }

    /// Euclidean distance from an interior point to the boundary.
    pub fn boundary_distance(&self, x: Point2) -> Result<f64> {
        self.ensure_contains(x)?;
        Ok(self.raw_boundary_distance(x))
    }

    /// Where the ray from `x` through `y` leaves the domain.
    pub fn ray_exit(&self, x: Point2, y: Point2) -> Result<Point2> {
        if !self.is_bounded() {
            return Err(Error::UnboundedDomain);
        }
        self.ensure_contains(x)?;
        self.ensure_contains(y)?;
        let d = y - x;
        if d.norm() <= COINCIDENCE_EPS {
            return Err(Error::DegenerateInput("ray_exit needs x ≠ y".into()));
        }
        let t = match self {
            Domain::UnitDisk => {
                // |x + t d|² = 1  ⇔  |d|² t² + 2 b t + (|x|² − 1) = 0
                let a = d.norm_sqr();
                let b = x.re * d.re + x.im * d.im;
                let c = x.norm_sqr() - 1.0;
                let s = (b * b - a * c).sqrt();
                if b > 0.0 {
                    -c / (b + s)
                } else {
                    (s - b) / a
                }
            }
            Domain::ConvexPolygon(poly) => {
                poly.ray_exit_param(x, d).ok_or_else(|| Error::DegenerateInput("ray does not exit".into()))?
            }
            Domain::SampledBoundary { points, .. } => polyline_ray_exit(x, d, points)
                .ok_or_else(|| Error::DegenerateInput("ray does not meet the sampled boundary".into()))?,
            Domain::UpperHalfPlane => unreachable!(),
        };
        Ok(x + d * t.max(1.0))
    }

    /// Endpoints `(b, a)` of the chord through `x` and `y`, so that `b, x, y, a`
    /// follow each other along the line.
    pub fn chord(&self, x: Point2, y: Point2) -> Result<(Point2, Point2)> {
        let a = self.ray_exit(x, y)?;
        let b = self.ray_exit(y, x)?;
        Ok((b, a))
    }

    /// Uniform sample of `n` boundary points; the half-plane uses `[-window, window]`.
    pub fn sample_boundary(&self, n: usize, window: f64) -> BoundarySample {
        let n = n.max(2);
        let points = match self {
            Domain::UnitDisk => (0..n).map(|k| disk_point(2.0 * PI * k as f64 / n as f64)).collect(),
            Domain::UpperHalfPlane => {
                (0..n).map(|k| pt(-window + 2.0 * window * k as f64 / (n - 1) as f64, 0.0)).collect()
            }
            Domain::ConvexPolygon(poly) => {
                (0..n).map(|k| poly.point_at(poly.perimeter() * k as f64 / n as f64)).collect()
            }
            Domain::SampledBoundary { points, .. } => points.clone(),
        };
        BoundarySample { resolution: points.len(), points }
    }

    /// Image of the domain under a similarity. The disk and the half-plane are
    /// only returned when `s` maps them onto themselves.
    pub fn transformed(&self, s: &Similarity) -> Option<Domain> {
        match self {
            Domain::ConvexPolygon(poly) => {
                let mut v: Vec<Point2> = poly.vertices().iter().map(|&p| s.apply(p)).collect();
                if s.reflect {
                    v.reverse();
                }
                Domain::convex_polygon(v).ok()
            }
            Domain::SampledBoundary { points, bounded } => Some(Domain::SampledBoundary {
                points: points.iter().map(|&p| s.apply(p)).collect(),
                bounded: *bounded,
            }),
            Domain::UnitDisk => {
                let fixes = (s.scale - 1.0).abs() < 1e-12 && s.translation.norm() < 1e-12;
                fixes.then_some(Domain::UnitDisk)
            }
            Domain::UpperHalfPlane => {
                let r = if s.reflect { -s.rotation } else { s.rotation };
                let fixes = (r - pt(1.0, 0.0)).norm() < 1e-12 && s.translation.im.abs() < 1e-12;
                fixes.then_some(Domain::UpperHalfPlane)
            }
        }
    }
}

#[inline]
pub(crate) fn disk_point(theta: f64) -> Point2 {
    let (s, c) = theta.sin_cos();
    pt(c, s)
}

fn segment_distance(x: Point2, p: Point2, q: Point2) -> f64 {
    let e = q - p;
    let len2 = e.norm_sqr();
    let t = (((x - p).re * e.re + (x - p).im * e.im) / len2).clamp(0.0, 1.0);
    (x - (p + e * t)).norm()
}

fn point_in_polygon(x: Point2, ring: &[Point2]) -> bool {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let (p, q) = (ring[i], ring[(i + 1) % n]);
        if (p.im > x.im) != (q.im > x.im) {
            let cross_re = p.re + (x.im - p.im) / (q.im - p.im) * (q.re - p.re);
            if x.re < cross_re {
                inside = !inside;
            }
        }
    }
    inside
}

fn polyline_ray_exit(x: Point2, d: Point2, ring: &[Point2]) -> Option<f64> {
    let n = ring.len();
    let mut best: Option<f64> = None;
    for i in 0..n {
        let (p, q) = (ring[i], ring[(i + 1) % n]);
        let e = q - p;
        let den = d.re * e.im - d.im * e.re;
        if den.abs() < 1e-300 {
            continue;
        }
        let w = p - x;
        let t = (w.re * e.im - w.im * e.re) / den;
        let u = (w.re * d.im - w.im * d.re) / den;
        if t >= 1.0 - RAY_TOL && (-RAY_TOL..=1.0 + RAY_TOL).contains(&u) && best.is_none_or(|b| t < b) {
            best = Some(t);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Point2, b: Point2, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn boundary_distance_examples() {
        assert_eq!(Domain::UnitDisk.boundary_distance(pt(0.0, 0.0)).unwrap(), 1.0);
        assert_eq!(Domain::UpperHalfPlane.boundary_distance(pt(3.0, 2.0)).unwrap(), 2.0);
        assert_eq!(Domain::unit_square().boundary_distance(pt(0.5, 0.5)).unwrap(), 0.5);
    }

    #[test]
    fn boundary_distance_rejects_outside_points() {
        assert!(matches!(
            Domain::UnitDisk.boundary_distance(pt(1.0, 0.0)),
            Err(Error::PointOutsideDomain { .. })
        ));
        assert!(Domain::UpperHalfPlane.boundary_distance(pt(0.0, -1.0)).is_err());
        assert!(Domain::unit_square().boundary_distance(pt(1.5, 0.5)).is_err());
        // within 1e-12 of the boundary counts as outside
        assert!(!Domain::UnitDisk.contains(pt(1.0 - 5e-13, 0.0)));
    }

    #[test]
    fn boundary_distance_shrinks_along_a_radius() {
        let mut prev = f64::INFINITY;
        for k in 0..100 {
            let r = k as f64 / 100.0;
            let d = Domain::UnitDisk.boundary_distance(pt(r * 0.6, r * 0.8)).unwrap();
            assert!(d > 0.0 && d < prev);
            prev = d;
        }
    }

    #[test]
    fn ray_exit_examples() {
        let disk = Domain::UnitDisk;
        assert!(close(disk.ray_exit(pt(0.0, 0.0), pt(0.5, 0.0)).unwrap(), pt(1.0, 0.0), 1e-15));
        assert!(close(disk.ray_exit(pt(0.5, 0.0), pt(0.0, 0.0)).unwrap(), pt(-1.0, 0.0), 1e-15));
        let sq = Domain::unit_square();
        assert!(close(sq.ray_exit(pt(0.25, 0.5), pt(0.75, 0.5)).unwrap(), pt(1.0, 0.5), 1e-15));
    }

    #[test]
    fn ray_exit_errors() {
        assert_eq!(Domain::UpperHalfPlane.ray_exit(pt(0.0, 1.0), pt(0.0, 2.0)), Err(Error::UnboundedDomain));
        assert!(matches!(
            Domain::UnitDisk.ray_exit(pt(0.1, 0.0), pt(0.1, 0.0)),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn ray_exit_through_a_vertex() {
        let sq = Domain::unit_square();
        let a = sq.ray_exit(pt(0.25, 0.25), pt(0.5, 0.5)).unwrap();
        assert!(close(a, pt(1.0, 1.0), 1e-15));
    }

    #[test]
    fn chord_examples() {
        let disk = Domain::UnitDisk;
        let (b, a) = disk.chord(pt(-0.5, 0.0), pt(0.5, 0.0)).unwrap();
        assert!(close(b, pt(-1.0, 0.0), 1e-15) && close(a, pt(1.0, 0.0), 1e-15));
        let (b, a) = disk.chord(pt(0.0, 0.0), pt(0.0, 0.3)).unwrap();
        assert!(close(b, pt(0.0, -1.0), 1e-15) && close(a, pt(0.0, 1.0), 1e-15));
        let (b, a) = Domain::unit_square().chord(pt(0.25, 0.5), pt(0.75, 0.5)).unwrap();
        assert!(close(b, pt(0.0, 0.5), 1e-15) && close(a, pt(1.0, 0.5), 1e-15));
    }

    #[test]
    fn sample_boundary_examples() {
        let s = Domain::UnitDisk.sample_boundary(4, 1.0);
        let expect = [pt(1.0, 0.0), pt(0.0, 1.0), pt(-1.0, 0.0), pt(0.0, -1.0)];
        for (p, q) in s.points.iter().zip(expect) {
            assert!(close(*p, q, 1e-15));
        }
        let s = Domain::UpperHalfPlane.sample_boundary(3, 1.0);
        assert_eq!(s.points, vec![pt(-1.0, 0.0), pt(0.0, 0.0), pt(1.0, 0.0)]);
        let s = Domain::unit_square().sample_boundary(8, 1.0);
        let expect = [
            pt(0.0, 0.0), pt(0.5, 0.0), pt(1.0, 0.0), pt(1.0, 0.5),
            pt(1.0, 1.0), pt(0.5, 1.0), pt(0.0, 1.0), pt(0.0, 0.5),
        ];
        for (p, q) in s.points.iter().zip(expect) {
            assert!(close(*p, q, 1e-15), "{p} vs {q}");
        }
        for p in Domain::UnitDisk.sample_boundary(4096, 1.0).points {
            assert!((p.norm() - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn polygon_validation() {
        assert!(Domain::convex_polygon(vec![pt(0.0, 0.0), pt(1.0, 0.0)]).is_err());
        // clockwise
        assert!(Domain::convex_polygon(vec![pt(0.0, 0.0), pt(0.0, 1.0), pt(1.0, 1.0), pt(1.0, 0.0)]).is_err());
        // collinear vertex
        assert!(Domain::convex_polygon(vec![pt(0.0, 0.0), pt(0.5, 0.0), pt(1.0, 0.0), pt(0.0, 1.0)]).is_err());
        // repeated vertex
        assert!(Domain::convex_polygon(vec![pt(0.0, 0.0), pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0)]).is_err());
        // pentagram: every turn is left but it winds twice
        let star: Vec<Point2> = (0..5).map(|k| disk_point(4.0 * PI * k as f64 / 5.0)).collect();
        assert!(Domain::convex_polygon(star).is_err());
    }

    #[test]
    fn sampled_boundary_queries() {
        let ring: Vec<Point2> = (0..64).map(|k| disk_point(2.0 * PI * k as f64 / 64.0)).collect();
        let d = Domain::sampled_boundary(ring, true).unwrap();
        assert!(d.contains(pt(0.2, 0.1)));
        assert!(!d.contains(pt(1.2, 0.1)));
        assert!((d.boundary_distance(pt(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        let a = d.ray_exit(pt(0.0, 0.0), pt(0.5, 0.0)).unwrap();
        assert!(close(a, pt(1.0, 0.0), 1e-12));
        let open = Domain::sampled_boundary(vec![pt(-1.0, 0.0), pt(1.0, 0.0)], false).unwrap();
        assert!(matches!(open.check_apollonian_eligible(), Err(Error::IneligibleDomain(_))));
    }

    #[test]
    fn domain_json_schema() {
        let d: Domain = serde_json::from_str(r#"{"type":"unit_disk"}"#).unwrap();
        assert_eq!(d, Domain::UnitDisk);
        let d: Domain = serde_json::from_str(r#"{"type":"upper_half_plane"}"#).unwrap();
        assert_eq!(d, Domain::UpperHalfPlane);
        let d: Domain =
            serde_json::from_str(r#"{"type":"convex_polygon","vertices":[[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
        assert_eq!(d, Domain::unit_square());
        let d: Domain = serde_json::from_str(
            r#"{"type":"sampled_boundary","points":[[1,0],[0,1],[-1,0],[0,-1]],"bounded":true}"#,
        )
        .unwrap();
        assert!(d.is_bounded());
        let bad = serde_json::from_str::<Domain>(r#"{"type":"convex_polygon","vertices":[[0,0],[1,0]]}"#);
        assert!(bad.is_err());
        let back = serde_json::to_string(&Domain::unit_square()).unwrap();
        assert_eq!(back, r#"{"type":"convex_polygon","vertices":[[0.0,0.0],[1.0,0.0],[1.0,1.0],[0.0,1.0]]}"#);
    }
}
