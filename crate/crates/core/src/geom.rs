//! Planar primitives: points as complex numbers, generalized circles,
//! similarities, Möbius maps and cross-ratios.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the plane, read as the complex number `re + i·im`.
pub type Point2 = Complex64;

/// Two points closer than this are considered coincident.
pub const COINCIDENCE_EPS: f64 = 1e-14;

#[inline]
pub fn pt(re: f64, im: f64) -> Point2 {
    Complex64::new(re, im)
}

pub(crate) fn ensure_finite(p: Point2) -> Result<()> {
    if p.re.is_finite() && p.im.is_finite() {
        Ok(())
    } else {
        Err(Error::DegenerateInput(format!("non-finite point ({}, {})", p.re, p.im)))
    }
}

fn ensure_distinct(points: &[Point2]) -> Result<()> {
    for p in points {
        ensure_finite(*p)?;
    }
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            if (p - q).norm() <= COINCIDENCE_EPS {
                return Err(Error::DegenerateInput(format!(
                    "coincident points ({}, {}) and ({}, {})",
                    p.re, p.im, q.re, q.im
                )));
            }
        }
    }
    Ok(())
}

/// A point of the extended plane ℂ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtPoint {
    Finite(Point2),
    Infinity,
}

impl ExtPoint {
    pub fn finite(self) -> Option<Point2> {
        match self {
            ExtPoint::Finite(p) => Some(p),
            ExtPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtPoint::Infinity)
    }
}

impl From<Point2> for ExtPoint {
    fn from(p: Point2) -> Self {
        ExtPoint::Finite(p)
    }
}

/// A Euclidean circle or a straight line (a circle through ∞).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GeneralizedCircle {
    Circle { center: Point2, radius: f64 },
    Line { point: Point2, direction: Point2 },
}

impl GeneralizedCircle {
    pub fn circle(center: Point2, radius: f64) -> Result<Self> {
        ensure_finite(center)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::DegenerateInput(format!("circle radius {radius}")));
        }
        Ok(GeneralizedCircle::Circle { center, radius })
    }

    /// Line through `point` with the given (not necessarily unit) direction.
    pub fn line(point: Point2, direction: Point2) -> Result<Self> {
        ensure_finite(point)?;
        ensure_finite(direction)?;
        let len = direction.norm();
        if len <= COINCIDENCE_EPS {
            return Err(Error::DegenerateInput("zero line direction".into()));
        }
        Ok(GeneralizedCircle::Line { point, direction: direction / len })
    }

    /// Euclidean distance from `p` to the curve.
    pub fn distance_to(&self, p: Point2) -> f64 {
        match *self {
            GeneralizedCircle::Circle { center, radius } => ((p - center).norm() - radius).abs(),
            GeneralizedCircle::Line { point, direction } => {
                let v = p - point;
                (direction.re * v.im - direction.im * v.re).abs()
            }
        }
    }

    /// How far the curve is from meeting the unit circle at right angles.
    ///
    /// For a circle this is `| |c|² − r² − 1 |`; for a line it is the distance
    /// from the origin to the line.
    pub fn unit_orthogonality_defect(&self) -> f64 {
        match *self {
            GeneralizedCircle::Circle { center, radius } => {
                // Exact products and compensated summation: the three squares nearly
                // cancel for large circles.
                orthogonality_residual(center, radius).abs()
            }
            GeneralizedCircle::Line { .. } => self.distance_to(Point2::new(0.0, 0.0)),
        }
    }
}

/// `|c|² − r² − 1` with exact products and compensated summation.
fn orthogonality_residual(c: Point2, r: f64) -> f64 {
    let (pa, pb, pr) = (c.re * c.re, c.im * c.im, r * r);
    let terms = [pa, pb, -pr, -1.0, c.re.mul_add(c.re, -pa), c.im.mul_add(c.im, -pb), -r.mul_add(r, -pr)];
    neumaier_sum(&terms)
}

fn ulp_step(v: f64, k: i64) -> f64 {
    let mut v = v;
    for _ in 0..k.unsigned_abs() {
        v = if k > 0 { next_up(v) } else { next_down(v) };
    }
    v
}

fn next_up(v: f64) -> f64 {
    match v {
        _ if v == 0.0 => f64::from_bits(1),
        _ if v > 0.0 => f64::from_bits(v.to_bits() + 1),
        _ => f64::from_bits(v.to_bits() - 1),
    }
}

fn next_down(v: f64) -> f64 {
    -next_up(-v)
}

/// A circle orthogonal to the unit circle about (nearly) `center`, given
/// `|center| > 1`. Center and radius are moved by a few ulps to the floating-point
/// pair whose exact residual `|c|² − r² − 1` is smallest.
pub(crate) fn orthogonal_circle(center: Point2) -> (Point2, f64) {
    let mut best = (center, 0.0, f64::INFINITY);
    for i in -3..=3 {
        for j in -3..=3 {
            let c = Point2::new(ulp_step(center.re, i), ulp_step(center.im, j));
            let r0 = orthogonality_residual(c, 0.0).sqrt();
            for r in [next_down(r0), r0, next_up(r0)] {
                let e = orthogonality_residual(c, r).abs();
                if e < best.2 {
                    best = (c, r, e);
                }
            }
        }
    }
    (best.0, best.1)
}

fn neumaier_sum(terms: &[f64]) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &t in terms {
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
    }
    sum + comp
}

/// `z ↦ scale · rotation · (z or z̄) + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub scale: f64,
    pub rotation: Point2,
    pub translation: Point2,
    pub reflect: bool,
}

impl Similarity {
    pub fn new(scale: f64, rotation: Point2, translation: Point2, reflect: bool) -> Result<Self> {
        ensure_finite(rotation)?;
        ensure_finite(translation)?;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::DegenerateInput(format!("similarity scale {scale}")));
        }
        if (rotation.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::DegenerateInput("rotation is not a unit complex".into()));
        }
        Ok(Self { scale, rotation, translation, reflect })
    }

    pub fn identity() -> Self {
        Self { scale: 1.0, rotation: pt(1.0, 0.0), translation: pt(0.0, 0.0), reflect: false }
    }

    pub fn from_angle(scale: f64, angle: f64, translation: Point2, reflect: bool) -> Result<Self> {
        Self::new(scale, Complex64::from_polar(1.0, angle), translation, reflect)
    }

    pub fn apply(&self, z: Point2) -> Point2 {
        let z = if self.reflect { z.conj() } else { z };
        self.rotation * z * self.scale + self.translation
    }

    /// The similarity `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Similarity) -> Similarity {
        // self(other(z)) = s1 r1 (s2 r2 w(z) + t2)^~ + t1 where ~ is conj when self reflects.
        let (rot2, t2) = if self.reflect {
            (other.rotation.conj(), other.translation.conj())
        } else {
            (other.rotation, other.translation)
        };
        Similarity {
            scale: self.scale * other.scale,
            rotation: self.rotation * rot2,
            translation: self.rotation * t2 * self.scale + self.translation,
            reflect: self.reflect != other.reflect,
        }
    }

    pub fn inverse(&self) -> Similarity {
        // z = s r w + t  =>  w = conj?( (z - t) / (s r) )
        let inv_rot = self.rotation.conj();
        let inv_scale = 1.0 / self.scale;
        let base = Similarity {
            scale: inv_scale,
            rotation: inv_rot,
            translation: -(inv_rot * self.translation) * inv_scale,
            reflect: false,
        };
        if self.reflect {
            Similarity { reflect: true, ..base }.conj_output()
        } else {
            base
        }
    }

    // Post-compose with complex conjugation, expressed as a similarity on the input.
    fn conj_output(self) -> Similarity {
        Similarity {
            scale: self.scale,
            rotation: self.rotation.conj(),
            translation: self.translation.conj(),
            reflect: self.reflect,
        }
    }
}

/// `z ↦ (a z + b) / (c z + d)`, stored with `ad − bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MobiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        for z in [a, b, c, d] {
            ensure_finite(z)?;
        }
        let det = a * d - b * c;
        let scale = [a, b, c, d].iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 || det.norm() <= 1e-12 * scale * scale {
            return Err(Error::DegenerateInput("Möbius determinant vanishes".into()));
        }
        let k = det.sqrt();
        Ok(Self { a: a / k, b: b / k, c: c / k, d: d / k })
    }

    pub fn identity() -> Self {
        let one = pt(1.0, 0.0);
        let zero = pt(0.0, 0.0);
        Self { a: one, b: zero, c: zero, d: one }
    }

    /// Automorphism of the unit disk `z ↦ e^{iθ} (z − p) / (1 − p̄ z)`, `|p| < 1`.
    pub fn disk_automorphism(p: Point2, theta: f64) -> Result<Self> {
        if p.norm() >= 1.0 {
            return Err(Error::DegenerateInput("automorphism base point must lie in the disk".into()));
        }
        let rot = Complex64::from_polar(1.0, theta);
        Self::new(rot, -rot * p, -p.conj(), pt(1.0, 0.0))
    }

    /// The map `z ↦ (y − b)/(y − a) · (z − a)/(z − b)` sending `a ↦ 0`, `b ↦ ∞`, `y ↦ 1`.
    pub fn normalizing(y: Point2, a: Point2, b: Point2) -> Result<Self> {
        ensure_distinct(&[y, a, b])?;
        let k = (y - b) / (y - a);
        Self::new(k, -k * a, pt(1.0, 0.0), -b)
    }

    /// The disk automorphism of order two that exchanges `x` and `y`.
    ///
    /// It is the half-turn about the hyperbolic midpoint of `[x, y]`.
    pub fn disk_exchange(x: Point2, y: Point2) -> Result<Self> {
        if x.norm() >= 1.0 || y.norm() >= 1.0 {
            return Err(Error::DegenerateInput("exchange points must lie in the disk".into()));
        }
        ensure_distinct(&[x, y])?;
        let to_origin = Self::disk_automorphism(x, 0.0)?;
        let w = to_origin.apply_finite(y)?;
        // Hyperbolic midpoint of [0, w]: radius tanh(artanh(|w|)/2).
        let r = w.norm();
        let mid_r = r / (1.0 + (1.0 - r * r).sqrt());
        let mid = w * (mid_r / r);
        let recenter = Self::disk_automorphism(mid, 0.0)?;
        let half_turn = Self::new(pt(-1.0, 0.0), pt(0.0, 0.0), pt(0.0, 0.0), pt(1.0, 0.0))?;
        let local = recenter.inverse().compose(&half_turn).compose(&recenter);
        Ok(to_origin.inverse().compose(&local).compose(&to_origin))
    }

    pub fn apply(&self, z: ExtPoint) -> ExtPoint {
        match z {
            ExtPoint::Finite(z) => self.apply_point(z),
            ExtPoint::Infinity => {
                if self.c.norm() < COINCIDENCE_EPS {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite(self.a / self.c)
                }
            }
        }
    }

    pub fn apply_point(&self, z: Point2) -> ExtPoint {
        let den = self.c * z + self.d;
        if den.norm() < COINCIDENCE_EPS {
            ExtPoint::Infinity
        } else {
            ExtPoint::Finite((self.a * z + self.b) / den)
        }
    }

    pub(crate) fn apply_finite(&self, z: Point2) -> Result<Point2> {
        self.apply_point(z)
            .finite()
            .ok_or_else(|| Error::DegenerateInput("Möbius image is ∞".into()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        MobiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }
}

/// The complex cross-ratio `(x, y, a, b) = (x − a)/(y − a) · (y − b)/(x − b)`.
pub fn cross_ratio(x: Point2, y: Point2, a: Point2, b: Point2) -> Result<Complex64> {
    ensure_distinct(&[x, y, a, b])?;
    Ok((x - a) / (y - a) * ((y - b) / (x - b)))
}

/// True when the cross-ratio is real, i.e. the four points are concyclic or collinear.
pub fn is_real(z: Complex64, rel_tol: f64) -> bool {
    z.im.abs() <= rel_tol * (1.0 + z.re.abs())
}

/// True when the cross-ratio lies in `(1, ∞)`: the points appear in the order
/// `x, y, a, b` on their common generalized circle.
pub fn in_order(z: Complex64, rel_tol: f64) -> bool {
    is_real(z, rel_tol) && z.re > 1.0
}

/// The generalized circle through three distinct points.
pub fn circumcircle(p: Point2, q: Point2, r: Point2) -> Result<GeneralizedCircle> {
    circumcircle_with(p, q, r, 1e-12)
}

pub fn circumcircle_with(p: Point2, q: Point2, r: Point2, collinear_tol: f64) -> Result<GeneralizedCircle> {
    ensure_distinct(&[p, q, r])?;
    let b = q - p;
    let c = r - p;
    let cross = b.re * c.im - b.im * c.re;
    let pairs = [(p, q), (p, r), (q, r)];
    let (from, to) = pairs
        .iter()
        .copied()
        .max_by(|u, v| (u.1 - u.0).norm_sqr().total_cmp(&(v.1 - v.0).norm_sqr()))
        .unwrap();
    let span2 = (to - from).norm_sqr();
    if (0.5 * cross.abs()) / span2 < collinear_tol {
        return GeneralizedCircle::line(p, to - from);
    }
    let d = 2.0 * cross;
    let b2 = b.norm_sqr();
    let c2 = c.norm_sqr();
    let offset = pt((c.im * b2 - b.im * c2) / d, (b.re * c2 - c.re * b2) / d);
    let center = p + offset;
    let radius = ((center - p).norm() + (center - q).norm() + (center - r).norm()) / 3.0;
    GeneralizedCircle::circle(center, radius)
}

/// Inversion in the unit circle, `z ↦ 1 / z̄`.
pub fn invert_unit_circle(z: Point2) -> Result<Point2> {
    ensure_finite(z)?;
    if z.norm() <= COINCIDENCE_EPS {
        return Err(Error::DegenerateInput("cannot invert the origin".into()));
    }
    Ok(z / z.norm_sqr())
}
