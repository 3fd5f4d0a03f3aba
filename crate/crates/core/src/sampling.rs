//! Seeded random inputs shared by the property suites, the acceptance tests and the CLI.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::Domain;
use crate::geom::{pt, Point2};

/// An RNG for one independent stream of a seeded run.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Uniform (by area) point of the closed disk of radius `r_max`.
pub fn disk_point<R: Rng>(rng: &mut R, r_max: f64) -> Point2 {
    Point2::from_polar(r_max * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

/// Point with real part in [−2, 2] and imaginary part in [0.1, 2].
pub fn half_plane_point<R: Rng>(rng: &mut R) -> Point2 {
    pt(rng.gen_range(-2.0..=2.0), rng.gen_range(0.1..=2.0))
}

/// A convex polygon with 3 to 9 vertices on a randomly placed ellipse.
pub fn convex_polygon<R: Rng>(rng: &mut R) -> Domain {
    loop {
        let n = rng.gen_range(3..=9);
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let gaps_ok = angles.windows(2).all(|w| w[1] - w[0] > 0.1) && angles[0] + TAU - angles[n - 1] > 0.1;
        if !gaps_ok {
            continue;
        }
        let (a, b) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
        let rot = Point2::from_polar(1.0, rng.gen_range(0.0..TAU));
        let shift = pt(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let vertices = angles.iter().map(|t| shift + rot * pt(a * t.cos(), b * t.sin())).collect();
        if let Ok(d) = Domain::convex_polygon(vertices) {
            return d;
        }
    }
}

/// Interior point of a convex polygon, `c + t (p − c)` with `c` the vertex
/// centroid, `p` uniform on the boundary by arclength and `t ≤ 0.9`.
pub fn polygon_point<R: Rng>(rng: &mut R, domain: &Domain) -> Point2 {
    let Domain::ConvexPolygon(poly) = domain else { panic!("polygon_point needs a convex polygon") };
    let vs = poly.vertices();
    let c = vs.iter().sum::<Point2>() / vs.len() as f64;
    let p = poly.point_at(rng.gen_range(0.0..poly.perimeter()));
    c + (p - c) * (0.9 * rng.gen::<f64>().sqrt())
}

/// A random interior point of the disk (|z| ≤ 0.95), half-plane or convex polygon.
pub fn domain_point<R: Rng>(rng: &mut R, domain: &Domain) -> Point2 {
    match domain {
        Domain::UnitDisk => disk_point(rng, 0.95),
        Domain::UpperHalfPlane => half_plane_point(rng),
        Domain::ConvexPolygon(_) => polygon_point(rng, domain),
        Domain::SampledBoundary { .. } => panic!("no sampler for sampled boundaries"),
    }
}
