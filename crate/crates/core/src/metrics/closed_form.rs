//! Closed forms on the unit disk and the upper half-plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geom::{Point2, COINCIDENCE_EPS};

use super::{clamp, ExtremalBoundaryPoint, ExtremalKind};

fn in_disk(x: Point2) -> Result<()> {
    Domain::UnitDisk.ensure_contains(x)
}

fn in_half_plane(x: Point2) -> Result<()> {
    Domain::UpperHalfPlane.ensure_contains(x)
}

/// `1 − |z|²` without cancellation near the circle.
#[inline]
fn one_minus_norm_sqr(z: Point2) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

/// Apollonian weak metric of the unit disk,
/// `log((|x − y| + |x ȳ − 1|) / (1 − |y|²))`.
pub fn apollonian_disk(x: Point2, y: Point2) -> Result<f64> {
    in_disk(x)?;
    in_disk(y)?;
    let num = (x - y).norm() + (x * y.conj() - 1.0).norm();
    Ok(clamp((num / one_minus_norm_sqr(y)).ln()))
}

/// Apollonian weak metric of the upper half-plane,
/// `log((|x − ȳ| + |x − y|) / |y − ȳ|)`.
///
/// This is the supremum over real `a` of `log(|x − a| / |y − a|)`. On the
/// imaginary axis it reads `max{0, log(s/t)}` for `x = is`, `y = it`.
pub fn apollonian_halfplane(x: Point2, y: Point2) -> Result<f64> {
    in_half_plane(x)?;
    in_half_plane(y)?;
    let num = (x - y.conj()).norm() + (x - y).norm();
    Ok(clamp((num / (2.0 * y.im)).ln()))
}

/// Poincaré metric of the disk,
/// `½ log((|1 − x ȳ| + |x − y|) / (|1 − x ȳ| − |x − y|))`.
pub fn poincare_disk(x: Point2, y: Point2) -> Result<f64> {
    in_disk(x)?;
    in_disk(y)?;
    let n = (1.0 - x * y.conj()).norm();
    let m = (x - y).norm();
    // |1 − xȳ|² − |x − y|² = (1 − |x|²)(1 − |y|²)
    let diff = one_minus_norm_sqr(x) * one_minus_norm_sqr(y) / (n + m);
    Ok(clamp(0.5 * ((n + m) / diff).ln()))
}

/// Poincaré metric of the half-plane,
/// `½ log((|x − ȳ| + |x − y|) / (|x − ȳ| − |x − y|))`.
pub fn poincare_halfplane(x: Point2, y: Point2) -> Result<f64> {
    in_half_plane(x)?;
    in_half_plane(y)?;
    let n = (x - y.conj()).norm();
    let m = (x - y).norm();
    // |x − ȳ|² − |x − y|² = 4 Im x Im y
    let diff = 4.0 * x.im * y.im / (n + m);
    Ok(clamp(0.5 * ((n + m) / diff).ln()))
}

/// Boundary maximizer and minimizer of `|x − a| / |y − a|` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskExtremals {
    pub max: ExtremalBoundaryPoint,
    pub min: ExtremalBoundaryPoint,
}

/// The unique points `a⁺`, `a⁻` of the unit circle where `|x − a| / |y − a|`
/// is largest and smallest, with the extreme values.
pub fn extremal_points_disk(x: Point2, y: Point2) -> Result<DiskExtremals> {
    in_disk(x)?;
    in_disk(y)?;
    if (x - y).norm() <= COINCIDENCE_EPS {
        return Err(Error::DegenerateInput("extremal points need x ≠ y".into()));
    }
    let m = (x - y).norm();
    let w = x * y.conj() - 1.0;
    let n = w.norm();
    let den = one_minus_norm_sqr(y);
    let point = |sign: f64| -> Point2 {
        let num = w * y * m + (x - y) * n * sign;
        let dnm = w * m + (x - y) * n * y.conj() * sign;
        let a = num / dnm;
        // Exact arithmetic lands on the circle; remove the rounding drift.
        a / a.norm()
    };
    Ok(DiskExtremals {
        max: ExtremalBoundaryPoint { point: point(1.0), achieved: (m + n) / den, kind: ExtremalKind::Max },
        min: ExtremalBoundaryPoint { point: point(-1.0), achieved: (n - m).abs() / den, kind: ExtremalKind::Min },
    })
}

/// Extrema of `|λ (μ z + 1)|` over the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleExtrema {
    pub zmax: Point2,
    pub vmax: f64,
    pub zmin: Point2,
    pub vmin: f64,
}

/// Maximum `|λ|(|μ| + 1)` at `|μ|/μ` and minimum `|λ| ||μ| − 1|` at `−|μ|/μ`.
pub fn circle_affine_extrema(lambda: Complex64, mu: Complex64) -> Result<CircleExtrema> {
    let r = mu.norm();
    if r < COINCIDENCE_EPS {
        return Err(Error::DegenerateInput("μ must be nonzero".into()));
    }
    let l = lambda.norm();
    let z = r / mu;
    Ok(CircleExtrema { zmax: z, vmax: l * (r + 1.0), zmin: -z, vmin: l * (r - 1.0).abs() })
}
