//! Brute-force boundary suprema.
//!
//! The boundary is sampled uniformly, every discrete local maximum that could
//! hide the true supremum is refined by ternary search on the boundary
//! parameter, and the best refined value wins. On the half-plane the sampled
//! window is doubled until the maximum settles.

use std::f64::consts::PI;

use crate::config::Config;
use crate::domain::{disk_point, ConvexPolygon, Domain};
use crate::error::Result;
use crate::geom::{pt, Point2, COINCIDENCE_EPS};

use super::{ExtremalBoundaryPoint, ExtremalKind};

const MAX_REFINED: usize = 64;
const MAX_TERNARY_STEPS: usize = 400;

/// One refined local maximum of a boundary function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPeak {
    pub param: f64,
    pub point: Point2,
    pub value: f64,
}

/// Refined peaks of one boundary scan, with the geometry needed to cluster them.
#[derive(Debug, Clone)]
pub struct BoundaryScan {
    pub peaks: Vec<BoundaryPeak>,
    /// Parameter spacing between consecutive samples.
    pub step: f64,
    /// Period of the boundary parameter, `None` for an open boundary.
    pub period: Option<f64>,
}

impl BoundaryScan {
    pub fn best(&self) -> Option<&BoundaryPeak> {
        self.peaks.iter().max_by(|a, b| a.value.total_cmp(&b.value))
    }

    /// Parameter distance, wrapping around closed boundaries.
    pub fn param_distance(&self, s: f64, t: f64) -> f64 {
        let d = (s - t).abs();
        match self.period {
            Some(p) => d.rem_euclid(p).min(p - d.rem_euclid(p)),
            None => d,
        }
    }
}

/// Parameterized boundary curve.
enum Curve<'a> {
    Circle,
    Polygon(&'a ConvexPolygon),
    Segment { lo: f64, hi: f64 },
    Discrete(&'a [Point2]),
}

impl Curve<'_> {
    fn point(&self, t: f64) -> Point2 {
        match self {
            Curve::Circle => disk_point(t),
            Curve::Polygon(poly) => poly.point_at(t),
            Curve::Segment { .. } => pt(t, 0.0),
            Curve::Discrete(points) => points[t as usize],
        }
    }

    fn period(&self) -> Option<f64> {
        match self {
            Curve::Circle => Some(2.0 * PI),
            Curve::Polygon(poly) => Some(poly.perimeter()),
            _ => None,
        }
    }

    fn sample_params(&self, n: usize) -> Vec<f64> {
        match self {
            Curve::Circle | Curve::Polygon(_) => {
                let p = self.period().unwrap();
                (0..n).map(|k| p * k as f64 / n as f64).collect()
            }
            Curve::Segment { lo, hi } => {
                (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
            }
            Curve::Discrete(points) => (0..points.len()).map(|k| k as f64).collect(),
        }
    }
}

fn scan_curve(curve: &Curve, f: &dyn Fn(Point2) -> f64, n: usize, cfg: &Config) -> BoundaryScan {
    let params = curve.sample_params(n.max(3));
    let values: Vec<f64> = params.iter().map(|&t| f(curve.point(t))).collect();
    let m = params.len();
    let periodic = curve.period().is_some();
    let step = match curve {
        Curve::Discrete(_) => 1.0,
        _ => params[1] - params[0],
    };

    let neighbour = |i: usize, di: isize| -> Option<f64> {
        let j = i as isize + di;
        if periodic {
            Some(values[j.rem_euclid(m as isize) as usize])
        } else if j < 0 || j >= m as isize {
            None
        } else {
            Some(values[j as usize])
        }
    };
    // A peak between two samples can rise above them by roughly one inter-sample jump.
    let margin = (0..m)
        .filter_map(|i| neighbour(i, 1).map(|v| (v - values[i]).abs()))
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max);
    let best_sample = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut candidates: Vec<usize> = (0..m)
        .filter(|&i| {
            let v = values[i];
            v >= best_sample - margin
                && neighbour(i, -1).is_none_or(|l| v >= l)
                && neighbour(i, 1).is_none_or(|r| v >= r)
        })
        .collect();
    candidates.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    candidates.truncate(MAX_REFINED);

    let mut peaks: Vec<BoundaryPeak> = candidates
        .into_iter()
        .map(|i| match curve {
            Curve::Discrete(points) => BoundaryPeak { param: i as f64, point: points[i], value: values[i] },
            _ => refine(curve, f, params[i], step, cfg.refine_tol),
        })
        .collect();

    // Kinks of a polygon can be maximizers; make sure vertices are represented.
    if let Curve::Polygon(poly) = curve {
        for (s, v) in poly.vertex_arclengths().into_iter().zip(poly.vertices()) {
            let value = f(*v);
            if value >= best_sample - margin {
                peaks.push(BoundaryPeak { param: s, point: *v, value });
            }
        }
    }
    peaks.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.param.total_cmp(&b.param)));
    BoundaryScan { peaks, step, period: curve.period() }
}

fn refine(curve: &Curve, f: &dyn Fn(Point2) -> f64, center: f64, step: f64, tol: f64) -> BoundaryPeak {
    let (mut lo, mut hi) = (center - step, center + step);
    if let Curve::Segment { lo: a, hi: b } = curve {
        lo = lo.max(*a);
        hi = hi.min(*b);
    }
    let g = |t: f64| f(curve.point(t));
    let mut steps = 0;
    while hi - lo > tol && steps < MAX_TERNARY_STEPS {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) < g(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
        steps += 1;
    }
    let mut param = 0.5 * (lo + hi);
    let mut value = g(param);
    // Never return something worse than the sample that seeded the search.
    let seed = g(center);
    if seed > value {
        param = center;
        value = seed;
    }
    if let Some(p) = curve.period() {
        param = param.rem_euclid(p);
    }
    BoundaryPeak { param, point: curve.point(param), value }
}

/// Starting half-width of the half-plane window.
pub(crate) fn initial_window(x: Point2, y: Point2) -> f64 {
    8.0 * (x.norm() + y.norm() + 1.0)
}

/// Supremum over the boundary of `f`, returned as a scan of refined peaks.
///
/// For the half-plane the window is doubled until the best value moves by
/// less than `cfg.window_tol`; the scan of the last window is returned.
pub fn scan_boundary(
    domain: &Domain,
    f: &dyn Fn(Point2) -> f64,
    window_seed: f64,
    cfg: &Config,
) -> BoundaryScan {
    let n = cfg.oracle_resolution;
    match domain {
        Domain::UnitDisk => scan_curve(&Curve::Circle, f, n, cfg),
        Domain::ConvexPolygon(poly) => scan_curve(&Curve::Polygon(poly), f, n, cfg),
        Domain::SampledBoundary { points, .. } => scan_curve(&Curve::Discrete(points), f, n, cfg),
        Domain::UpperHalfPlane => {
            let mut w = window_seed;
            let mut merged: Vec<BoundaryPeak> = Vec::new();
            let mut best = f64::NEG_INFINITY;
            let mut last_step = 0.0;
            for k in 0..=cfg.max_doublings {
                let scan = scan_curve(&Curve::Segment { lo: -w, hi: w }, f, n, cfg);
                last_step = scan.step;
                merged.extend(scan.peaks);
                let now = merged.iter().map(|p| p.value).fold(f64::NEG_INFINITY, f64::max);
                let settled = k > 0 && (now - best).abs() < cfg.window_tol;
                best = now;
                if settled {
                    break;
                }
                w *= 2.0;
            }
            merged.sort_by(|a, b| b.value.total_cmp(&a.value).then(a.param.total_cmp(&b.param)));
            merged.dedup_by(|a, b| (a.param - b.param).abs() <= 1e-12 * (1.0 + a.param.abs()));
            BoundaryScan { peaks: merged, step: last_step, period: None }
        }
    }
}

/// Value of the directed Apollonian supremum together with its maximizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    /// `None` when the supremum is only approached as the boundary point runs to ∞.
    pub argmax: Option<ExtremalBoundaryPoint>,
}

/// `sup_{a ∈ ∂A} log(|x − a| / |y − a|)` by boundary sampling and refinement.
pub fn apollonian_oracle(domain: &Domain, x: Point2, y: Point2, n: usize) -> Result<OracleResult> {
    let cfg = Config { oracle_resolution: n, ..Config::default() };
    apollonian_oracle_with(domain, x, y, &cfg)
}

pub fn apollonian_oracle_with(domain: &Domain, x: Point2, y: Point2, cfg: &Config) -> Result<OracleResult> {
    domain.check_apollonian_eligible()?;
    domain.ensure_contains(x)?;
    domain.ensure_contains(y)?;
    if (x - y).norm() <= COINCIDENCE_EPS {
        return Ok(OracleResult { value: 0.0, argmax: None });
    }
    let f = |a: Point2| ((x - a).norm() / (y - a).norm()).ln();
    let scan = scan_boundary(domain, &f, initial_window(x, y), cfg);
    let best = scan.best().copied();
    let mut result = match best {
        Some(peak) => OracleResult {
            value: peak.value,
            argmax: Some(ExtremalBoundaryPoint {
                point: peak.point,
                achieved: (x - peak.point).norm() / (y - peak.point).norm(),
                kind: ExtremalKind::Max,
            }),
        },
        None => OracleResult { value: f64::NEG_INFINITY, argmax: None },
    };
    // Along an unbounded boundary the ratio tends to 1, so the supremum is at least 0.
    if !domain.is_bounded() && result.value < 0.0 {
        result = OracleResult { value: 0.0, argmax: None };
    }
    result.value = cfg.clamp(result.value);
    Ok(result)
}

/// `sup_{a ∈ ∂A} |log(|x − a| / |y − a|)|` by the same sampling scheme.
pub(crate) fn abs_log_ratio_oracle(domain: &Domain, x: Point2, y: Point2, cfg: &Config) -> Result<f64> {
    domain.check_apollonian_eligible()?;
    domain.ensure_contains(x)?;
    domain.ensure_contains(y)?;
    if (x - y).norm() <= COINCIDENCE_EPS {
        return Ok(0.0);
    }
    let f = |a: Point2| ((x - a).norm() / (y - a).norm()).ln().abs();
    let scan = scan_boundary(domain, &f, initial_window(x, y), cfg);
    // Near-zero peaks of |log r| are kinks, not smooth maxima, but they never win.
    let best = scan.best().map_or(0.0, |p| p.value);
    Ok(cfg.clamp(best.max(0.0)))
}
