//! The `i_A` family, the Funk and Hilbert metrics, and the two part metrics.

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geom::{Point2, COINCIDENCE_EPS};

use super::clamp;

fn same(x: Point2, y: Point2) -> bool {
    (x - y).norm() <= COINCIDENCE_EPS
}

/// `i_A(x, y) = log(1 + |x − y| / d(x, ∂A))`.
pub fn i_weak(domain: &Domain, x: Point2, y: Point2) -> Result<f64> {
    let dx = domain.boundary_distance(x)?;
    domain.ensure_contains(y)?;
    Ok(clamp(((x - y).norm() / dx).ln_1p()))
}

/// Gehring–Osgood metric, the mean symmetrization of `i_A`.
pub fn j_tilde(domain: &Domain, x: Point2, y: Point2) -> Result<f64> {
    Ok(clamp(0.5 * (i_weak(domain, x, y)? + i_weak(domain, y, x)?)))
}

/// Vuorinen's metric `log(1 + |x − y| / min{d(x), d(y)})`, the max symmetrization of `i_A`.
pub fn j_vuorinen(domain: &Domain, x: Point2, y: Point2) -> Result<f64> {
    let d = domain.boundary_distance(x)?.min(domain.boundary_distance(y)?);
    Ok(clamp(((x - y).norm() / d).ln_1p()))
}

fn require_bounded_convex(domain: &Domain) -> Result<()> {
    if !domain.is_bounded() {
        Err(Error::UnboundedDomain)
    } else if !domain.is_bounded_convex() {
        Err(Error::UnsupportedDomain(format!("{} is not a bounded convex domain", domain.name())))
    } else {
        Ok(())
    }
}

/// Boundary hits of the line through `x`, `y`, or `None` when `x = y`.
fn chord_or_diagonal(domain: &Domain, x: Point2, y: Point2) -> Result<Option<(Point2, Point2)>> {
    require_bounded_convex(domain)?;
    domain.ensure_contains(x)?;
    domain.ensure_contains(y)?;
    if same(x, y) {
        return Ok(None);
    }
    domain.chord(x, y).map(Some)
}

#[inline]
fn log_ratio(x: Point2, y: Point2, a: Point2) -> f64 {
    ((x - a).norm() / (y - a).norm()).ln()
}

/// Funk weak metric `log(|x − a| / |y − a|)`, `a` the exit of the ray from `x` through `y`.
pub fn funk(domain: &Domain, x: Point2, y: Point2) -> Result<f64> {
    require_bounded_convex(domain)?;
    domain.ensure_contains(x)?;
    domain.ensure_contains(y)?;
    if same(x, y) {
        return Ok(0.0);
    }
    let a = domain.ray_exit(x, y)?;
    Ok(clamp(log_ratio(x, y, a)))
}

/// Klein–Hilbert metric `½ log(|x − a|/|y − a| · |y − b|/|x − b|)` along the chord `b, x, y, a`.
pub fn hilbert(domain: &Domain, x: Point2, y: Point2) -> Result<f64> {
    Ok(match chord_or_diagonal(domain, x, y)? {
        None => 0.0,
        Some((b, a)) => {
            let cr = (x - a).norm() / (y - a).norm() * ((y - b).norm() / (x - b).norm());
            clamp(0.5 * cr.ln())
        }
    })
}

/// Part metric of the positive affine functions on a bounded convex domain,
/// `max{log |x − a|/|y − a|, log |y − b|/|x − b|}`.
pub fn part_affine(domain: &Domain, x: Point2, y: Point2) -> Result<f64> {
    Ok(match chord_or_diagonal(domain, x, y)? {
        None => 0.0,
        Some((b, a)) => clamp(log_ratio(x, y, a).max(log_ratio(y, x, b))),
    })
}

/// Harmonic part metric of the unit disk, evaluated over the Poisson kernels
/// `P(z, ζ) = (1 − |z|²) / |z − ζ|²` at `n_angles` equispaced boundary points.
pub fn part_harmonic_disk(x: Point2, y: Point2, n_angles: usize) -> Result<f64> {
    Domain::UnitDisk.ensure_contains(x)?;
    Domain::UnitDisk.ensure_contains(y)?;
    if n_angles == 0 {
        return Err(Error::DegenerateInput("need at least one boundary angle".into()));
    }
    let (rx, ry) = (x.norm(), y.norm());
    let base = ((1.0 - rx) * (1.0 + rx) / ((1.0 - ry) * (1.0 + ry))).ln();
    let best = (0..n_angles)
        .map(|k| {
            let zeta = crate::domain::disk_point(2.0 * std::f64::consts::PI * k as f64 / n_angles as f64);
            (base + 2.0 * ((y - zeta).norm() / (x - zeta).norm()).ln()).abs()
        })
        .fold(0.0, f64::max);
    Ok(clamp(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;

    const LN2: f64 = std::f64::consts::LN_2;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-14
    }

    #[test]
    fn i_weak_examples() {
        let disk = Domain::UnitDisk;
        assert!(approx(i_weak(&disk, pt(0.0, 0.0), pt(0.5, 0.0)).unwrap(), 1.5f64.ln()));
        assert_eq!(i_weak(&disk, pt(0.2, 0.3), pt(0.2, 0.3)).unwrap(), 0.0);
        let h = Domain::UpperHalfPlane;
        assert!(approx(i_weak(&h, pt(0.0, 2.0), pt(2.0, 2.0)).unwrap(), LN2));
        assert!(i_weak(&h, pt(0.0, 2.0), pt(2.0, -2.0)).is_err());
    }

    #[test]
    fn j_examples() {
        let disk = Domain::UnitDisk;
        let (x, y) = (pt(0.0, 0.0), pt(0.5, 0.0));
        assert!(approx(j_tilde(&disk, x, y).unwrap(), 0.5 * 3f64.ln()));
        assert!(approx(j_vuorinen(&disk, x, y).unwrap(), LN2));
        assert_eq!(j_tilde(&disk, x, x).unwrap(), 0.0);
        assert_eq!(j_vuorinen(&disk, y, y).unwrap(), 0.0);
        let max_form = i_weak(&disk, x, y).unwrap().max(i_weak(&disk, y, x).unwrap());
        assert!((j_vuorinen(&disk, x, y).unwrap() - max_form).abs() <= 1e-12);
    }

    #[test]
    fn funk_examples() {
        let disk = Domain::UnitDisk;
        assert!(approx(funk(&disk, pt(0.0, 0.0), pt(0.5, 0.0)).unwrap(), LN2));
        assert!(approx(funk(&disk, pt(0.5, 0.0), pt(0.0, 0.0)).unwrap(), 1.5f64.ln()));
        assert_eq!(funk(&disk, pt(0.0, 0.0), pt(0.0, 0.0)).unwrap(), 0.0);
        assert_eq!(funk(&Domain::UpperHalfPlane, pt(0.0, 1.0), pt(0.0, 2.0)), Err(Error::UnboundedDomain));
        let ring = Domain::sampled_boundary(vec![pt(1.0, 0.0), pt(0.0, 1.0), pt(-1.0, 0.0), pt(0.0, -1.0)], true).unwrap();
        assert!(matches!(funk(&ring, pt(0.0, 0.0), pt(0.1, 0.0)), Err(Error::UnsupportedDomain(_))));
    }

    #[test]
    fn hilbert_and_part_affine_examples() {
        let disk = Domain::UnitDisk;
        let (x, y) = (pt(0.0, 0.0), pt(0.5, 0.0));
        assert!(approx(hilbert(&disk, x, y).unwrap(), 0.5 * 3f64.ln()));
        assert!(approx(hilbert(&disk, pt(-0.5, 0.0), y).unwrap(), 3f64.ln()));
        assert_eq!(hilbert(&disk, x, x).unwrap(), 0.0);
        assert!(approx(part_affine(&disk, x, y).unwrap(), LN2));
        assert!(approx(part_affine(&disk, y, x).unwrap(), LN2));
        assert_eq!(part_affine(&disk, y, y).unwrap(), 0.0);
    }

    #[test]
    fn part_harmonic_examples() {
        assert_eq!(part_harmonic_disk(pt(0.1, 0.1), pt(0.1, 0.1), 64).unwrap(), 0.0);
        let v = part_harmonic_disk(pt(0.0, 0.0), pt(0.5, 0.0), 4096).unwrap();
        assert!((v - 3f64.ln()).abs() < 1e-4);
    }

    #[test]
    fn part_harmonic_grows_under_refinement() {
        let (x, y) = (pt(0.13, -0.4), pt(-0.35, 0.52));
        let mut prev = 0.0;
        for n in [16, 32, 64, 128, 256, 512, 1024] {
            let v = part_harmonic_disk(x, y, n).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }
}
