//! Seeded property suites.
//!
//! Each suite draws its inputs from its own stream of the seed, so a suite's
//! rows are the same whether it runs alone or as part of `all`. Rows are
//! sorted by case id.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geodesics::{geodesic_arc_disk, sample_arc, verify_geodesic};
use crate::geom::{cross_ratio, in_order, invert_unit_circle, pt, MobiusMap, Point2, Similarity};
use crate::metrics::{
    apollonian, apollonian_disk, apollonian_halfplane, apollonian_oracle_with, apollonian_semimetric,
    circle_affine_extrema, extremal_points_disk, funk, half_apollonian, hilbert, i_weak, mobius_defect,
    mobius_invariance_witness, part_affine, poincare_disk, poincare_halfplane, s_symmetrize, sigma_symmetrize,
    WeakMetric,
};
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Axioms,
    Identities,
    Extremals,
    Geodesics,
    Separation,
    Invariance,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Axioms, Suite::Identities, Suite::Extremals, Suite::Geodesics, Suite::Separation, Suite::Invariance];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Identities => "identities",
            Suite::Extremals => "extremals",
            Suite::Geodesics => "geodesics",
            Suite::Separation => "separation",
            Suite::Invariance => "invariance",
        }
    }

    fn stream(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).unwrap() as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::DegenerateInput(format!("unknown suite {s:?}")))
    }
}

/// One checked property instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRow {
    pub case_id: String,
    pub input: String,
    pub expected: f64,
    pub actual: f64,
    pub abs_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: Vec<CaseRow>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseRow> {
        self.cases.iter().filter(|c| !c.pass)
    }
}

pub fn fmt_point(p: Point2) -> String {
    format!("{},{}", p.re, p.im)
}

fn pair(x: Point2, y: Point2) -> String {
    format!("x={} y={}", fmt_point(x), fmt_point(y))
}

fn triple(x: Point2, y: Point2, z: Point2) -> String {
    format!("x={} y={} z={}", fmt_point(x), fmt_point(y), fmt_point(z))
}

#[derive(Default)]
struct Rows(Vec<CaseRow>);

impl Rows {
    fn push(&mut self, id: String, input: String, expected: f64, actual: f64, abs_error: f64, pass: bool) {
        self.0.push(CaseRow { case_id: id, input, expected, actual, abs_error, pass });
    }

    /// `|actual − expected| ≤ tol`
    fn eq(&mut self, id: String, input: String, expected: f64, actual: f64, tol: f64) {
        let e = (actual - expected).abs();
        self.push(id, input, expected, actual, e, e <= tol);
    }

    /// `actual ≤ bound + tol`
    fn le(&mut self, id: String, input: String, bound: f64, actual: f64, tol: f64) {
        let e = (actual - bound).max(0.0);
        self.push(id, input, bound, actual, e, e <= tol);
    }

    /// `actual > bound`
    fn gt(&mut self, id: String, input: String, bound: f64, actual: f64) {
        let e = if actual > bound { 0.0 } else { bound - actual };
        self.push(id, input, bound, actual, e, actual > bound);
    }
}

fn id(suite: Suite, property: &str, k: usize) -> String {
    format!("{suite}/{property}/{k:05}")
}

/// Run one suite with inputs drawn from `seed`.
pub fn run_suite(suite: Suite, seed: u64, cfg: &Config) -> Result<SuiteReport> {
    let mut rows = Rows::default();
    match suite {
        Suite::Axioms => axioms(seed, cfg, &mut rows)?,
        Suite::Identities => identities(seed, cfg, &mut rows)?,
        Suite::Extremals => extremals(seed, &mut rows)?,
        Suite::Geodesics => geodesics(seed, &mut rows)?,
        Suite::Separation => separation(seed, &mut rows)?,
        Suite::Invariance => invariance(seed, cfg, &mut rows)?,
    }
    let mut cases = rows.0;
    cases.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    Ok(SuiteReport { suite: suite.name().into(), seed, cases })
}

/// Every suite, rows merged and sorted by case id.
pub fn run_all(seed: u64, cfg: &Config) -> Result<SuiteReport> {
    let mut cases = Vec::new();
    for s in Suite::ALL {
        cases.extend(run_suite(s, seed, cfg)?.cases);
    }
    cases.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    Ok(SuiteReport { suite: "all".into(), seed, cases })
}

type BoxedMetric<'a> = Box<dyn Fn(Point2, Point2) -> Result<f64> + 'a>;

const AXIOM_TRIPLES: usize = 300;

fn axioms(seed: u64, cfg: &Config, rows: &mut Rows) -> Result<()> {
    let mut rng = sampling::rng(seed, Suite::Axioms.stream());
    let polygon = sampling::convex_polygon(&mut rng);
    for (tag, domain) in [("disk", Domain::UnitDisk), ("half_plane", Domain::UpperHalfPlane), ("polygon", polygon)] {
        let mut metrics: Vec<(&str, BoxedMetric<'_>)> = vec![
            ("i_weak", Box::new(|x, y| i_weak(&domain, x, y))),
            ("apollonian", Box::new(|x, y| apollonian(&domain, x, y, cfg))),
        ];
        if domain.is_bounded_convex() {
            metrics.push(("funk", Box::new(|x, y| funk(&domain, x, y))));
        }
        for (name, d) in &metrics {
            let n = if matches!(domain, Domain::ConvexPolygon(_)) && *name == "apollonian" { 100 } else { AXIOM_TRIPLES };
            for k in 0..n {
                let (x, y, z) = (
                    sampling::domain_point(&mut rng, &domain),
                    sampling::domain_point(&mut rng, &domain),
                    sampling::domain_point(&mut rng, &domain),
                );
                let rhs = d(x, y)? + d(y, z)?;
                rows.le(id(Suite::Axioms, &format!("{name}/{tag}/triangle"), k), triple(x, y, z), rhs, d(x, z)?, 1e-9);
                if k % 10 == 0 {
                    let v = d(x, x)?;
                    rows.push(id(Suite::Axioms, &format!("{name}/{tag}/zero"), k), pair(x, x), 0.0, v, v.abs(), v == 0.0);
                    rows.le(id(Suite::Axioms, &format!("{name}/{tag}/nonneg"), k), pair(x, y), d(x, y)?, 0.0, 0.0);
                }
            }
        }
    }
    Ok(())
}

const IDENTITY_PAIRS: usize = 200;

fn identities(seed: u64, cfg: &Config, rows: &mut Rows) -> Result<()> {
    let mut rng = sampling::rng(seed, Suite::Identities.stream());
    let s = Suite::Identities;
    let disk = Domain::UnitDisk;
    for k in 0..IDENTITY_PAIRS {
        let (x, y) = (sampling::disk_point(&mut rng, 0.95), sampling::disk_point(&mut rng, 0.95));
        let input = pair(x, y);
        let s_delta = s_symmetrize(apollonian_disk).distance(x, y)?;
        let sigma_delta = sigma_symmetrize(apollonian_disk).distance(x, y)?;
        rows.eq(id(s, "s_apollonian_eq_poincare/disk", k), input.clone(), poincare_disk(x, y)?, s_delta, 1e-12);
        rows.eq(id(s, "half_apollonian_eq_sigma/disk", k), input.clone(), sigma_delta, half_apollonian(&disk, x, y, cfg)?, 1e-12);
        rows.eq(id(s, "semimetric_eq_2s/disk", k), input.clone(), 2.0 * s_delta, apollonian_semimetric(&disk, x, y, cfg)?, 1e-12);
        let f = |p, q| funk(&disk, p, q);
        rows.eq(id(s, "hilbert_eq_s_funk/disk", k), input.clone(), s_symmetrize(f).distance(x, y)?, hilbert(&disk, x, y)?, 1e-12);
        rows.eq(id(s, "part_affine_eq_sigma_funk/disk", k), input.clone(), sigma_symmetrize(f).distance(x, y)?, part_affine(&disk, x, y)?, 1e-12);
        rows.le(id(s, "sandwich_lower/disk", k), input.clone(), sigma_delta, s_delta, 1e-12);
        rows.le(id(s, "sandwich_upper/disk", k), input, 2.0 * s_delta, sigma_delta, 1e-12);

        let (x, y) = (sampling::half_plane_point(&mut rng), sampling::half_plane_point(&mut rng));
        let s_delta = s_symmetrize(apollonian_halfplane).distance(x, y)?;
        rows.eq(id(s, "s_apollonian_eq_poincare/half_plane", k), pair(x, y), poincare_halfplane(x, y)?, s_delta, 1e-12);
    }
    for p in 0..5 {
        let poly = sampling::convex_polygon(&mut rng);
        for k in 0..40 {
            let (x, y) = (sampling::polygon_point(&mut rng, &poly), sampling::polygon_point(&mut rng, &poly));
            let input = pair(x, y);
            let case = 40 * p + k;
            let f = |a, b| funk(&poly, a, b);
            rows.eq(id(s, "hilbert_eq_s_funk/polygon", case), input.clone(), s_symmetrize(f).distance(x, y)?, hilbert(&poly, x, y)?, 1e-12);
            rows.eq(id(s, "part_affine_eq_sigma_funk/polygon", case), input.clone(), sigma_symmetrize(f).distance(x, y)?, part_affine(&poly, x, y)?, 1e-12);
            if k < 8 {
                let d = |a, b| apollonian(&poly, a, b, cfg);
                let sigma = sigma_symmetrize(d).distance(x, y)?;
                rows.eq(id(s, "half_apollonian_eq_sigma/polygon", case), input, sigma, half_apollonian(&poly, x, y, cfg)?, 1e-8);
            }
        }
    }
    Ok(())
}

const EXTREMAL_PAIRS: usize = 200;
const EXTREMAL_GRID: usize = 2000;

fn extremals(seed: u64, rows: &mut Rows) -> Result<()> {
    let mut rng = sampling::rng(seed, Suite::Extremals.stream());
    let s = Suite::Extremals;
    let ratio = |x: Point2, y: Point2, a: Point2| (x - a).norm() / (y - a).norm();
    for k in 0..EXTREMAL_PAIRS {
        let (x, y) = (sampling::disk_point(&mut rng, 0.95), sampling::disk_point(&mut rng, 0.95));
        let input = pair(x, y);
        let e = extremal_points_disk(x, y)?;
        rows.eq(id(s, "a_plus_on_circle", k), input.clone(), 1.0, e.max.point.norm(), 1e-12);
        rows.eq(id(s, "a_minus_on_circle", k), input.clone(), 1.0, e.min.point.norm(), 1e-12);
        rows.eq(id(s, "max_value", k), input.clone(), e.max.achieved, ratio(x, y, e.max.point), 1e-10);
        rows.eq(id(s, "min_value", k), input.clone(), e.min.achieved, ratio(x, y, e.min.point), 1e-10);
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for j in 0..EXTREMAL_GRID {
            let v = ratio(x, y, Point2::from_polar(1.0, std::f64::consts::TAU * j as f64 / EXTREMAL_GRID as f64));
            hi = hi.max(v);
            lo = lo.min(v);
        }
        rows.le(id(s, "grid_below_max", k), input.clone(), e.max.achieved, hi, 1e-9);
        rows.le(id(s, "grid_above_min", k), input, lo, e.min.achieved, 1e-9);
    }
    for k in 0..50 {
        let lambda = sampling::disk_point(&mut rng, 3.0);
        let mu = sampling::disk_point(&mut rng, 3.0);
        let c = circle_affine_extrema(lambda, mu)?;
        let g = |z: Point2| (lambda * (mu * z + 1.0)).norm();
        let input = format!("lambda={} mu={}", fmt_point(lambda), fmt_point(mu));
        rows.eq(id(s, "affine_max_value", k), input.clone(), c.vmax, g(c.zmax), 1e-12 * (1.0 + c.vmax));
        rows.eq(id(s, "affine_min_value", k), input.clone(), c.vmin, g(c.zmin), 1e-12 * (1.0 + c.vmax));
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for j in 0..EXTREMAL_GRID {
            let v = g(Point2::from_polar(1.0, std::f64::consts::TAU * j as f64 / EXTREMAL_GRID as f64));
            hi = hi.max(v);
            lo = lo.min(v);
        }
        rows.le(id(s, "affine_grid_below_max", k), input.clone(), c.vmax, hi, 1e-9);
        rows.le(id(s, "affine_grid_above_min", k), input, lo, c.vmin, 1e-9);
    }
    Ok(())
}

const GEODESIC_PAIRS: usize = 50;

fn geodesics(seed: u64, rows: &mut Rows) -> Result<()> {
    let mut rng = sampling::rng(seed, Suite::Geodesics.stream());
    let s = Suite::Geodesics;
    for k in 0..GEODESIC_PAIRS {
        let (x, y) = (sampling::disk_point(&mut rng, 0.95), sampling::disk_point(&mut rng, 0.95));
        let input = pair(x, y);
        let arc = geodesic_arc_disk(x, y)?;
        let report = verify_geodesic(&sample_arc(&arc, 8), &apollonian_disk, 1e-9)?;
        rows.le(id(s, "arc_aligned", k), input.clone(), 0.0, report.max_defect, 1e-9);
        rows.le(id(s, "arc_orthogonal", k), input.clone(), 0.0, arc.support.unit_orthogonality_defect(), 1e-10);
        let a = extremal_points_disk(x, y)?.max.point;
        rows.le(id(s, "exit_is_a_plus", k), input.clone(), 0.0, (arc.exit - a).norm(), 1e-8);
        let cr = cross_ratio(x, y, a, invert_unit_circle(y)?)?;
        let expected = 1.0 + (x - y).norm() / (x * y.conj() - 1.0).norm();
        let err = (cr - expected).norm();
        rows.push(id(s, "cross_ratio", k), input.clone(), expected, cr.re, err, err <= 1e-10 && in_order(cr, 1e-9));
    }
    Ok(())
}

const SEPARATION_PAIRS: usize = 1000;

fn separation(seed: u64, rows: &mut Rows) -> Result<()> {
    let mut rng = sampling::rng(seed, Suite::Separation.stream());
    let s = Suite::Separation;
    let disk = Domain::UnitDisk;
    let poly = sampling::convex_polygon(&mut rng);
    for k in 0..SEPARATION_PAIRS {
        let (x, y) = (sampling::disk_point(&mut rng, 0.98), sampling::disk_point(&mut rng, 0.98));
        rows.gt(id(s, "funk_positive/disk", k), pair(x, y), 0.0, funk(&disk, x, y)?);
        rows.gt(id(s, "sigma_apollonian_positive/disk", k), pair(x, y), 0.0, sigma_symmetrize(apollonian_disk).distance(x, y)?);
        let (x, y) = (sampling::polygon_point(&mut rng, &poly), sampling::polygon_point(&mut rng, &poly));
        rows.gt(id(s, "funk_positive/polygon", k), pair(x, y), 0.0, funk(&poly, x, y)?);
    }
    // Two distinct points at Apollonian distance 0 in one direction.
    let (x, y) = (pt(0.0, 2.0), pt(0.0, 1.0));
    let v = apollonian_halfplane(x, y)?.min(apollonian_halfplane(y, x)?);
    rows.push(id(s, "half_plane_zero_witness", 0), pair(x, y), 0.0, v, v, v == 0.0 && x != y);
    Ok(())
}

const SIMILARITY_POLYGONS: usize = 5;
const SIMILARITY_PAIRS: usize = 20;

fn invariance(seed: u64, cfg: &Config, rows: &mut Rows) -> Result<()> {
    let mut rng = sampling::rng(seed, Suite::Invariance.stream());
    let s = Suite::Invariance;
    for p in 0..SIMILARITY_POLYGONS {
        let poly = sampling::convex_polygon(&mut rng);
        let sim = Similarity::from_angle(
            rng.gen_range(0.2..5.0),
            rng.gen_range(0.0..std::f64::consts::TAU),
            pt(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)),
            rng.gen_bool(0.5),
        )?;
        let image = poly.transformed(&sim).ok_or_else(|| Error::InvalidDomain("similarity image".into()))?;
        for k in 0..SIMILARITY_PAIRS {
            let (x, y) = (sampling::polygon_point(&mut rng, &poly), sampling::polygon_point(&mut rng, &poly));
            let before = apollonian_oracle_with(&poly, x, y, cfg)?.value;
            let after = apollonian_oracle_with(&image, sim.apply(x), sim.apply(y), cfg)?.value;
            rows.eq(id(s, "similarity", SIMILARITY_PAIRS * p + k), pair(x, y), before, after, 1e-8);
        }
    }
    let w = mobius_invariance_witness(seed)?;
    rows.gt(id(s, "mobius_witness", 0), pair(w.x, w.y), 0.1, w.defect);
    let (x, y) = (pt(0.0, 0.0), pt(0.5, 0.0));
    let swap = MobiusMap::disk_exchange(x, y)?;
    let expected = std::f64::consts::LN_2 - 1.5f64.ln();
    rows.eq(id(s, "mobius_analytic_witness", 0), pair(x, y), expected, mobius_defect(&swap, x, y)?, 1e-12);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn rows_are_sorted_and_deterministic() {
        let cfg = Config::default();
        let a = run_suite(Suite::Geodesics, 7, &cfg).unwrap();
        let b = run_suite(Suite::Geodesics, 7, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.cases.windows(2).all(|w| w[0].case_id <= w[1].case_id));
        assert_ne!(a.cases, run_suite(Suite::Geodesics, 8, &cfg).unwrap().cases);
    }

    #[test]
    fn every_suite_passes() {
        let cfg = Config::default();
        for s in Suite::ALL {
            let r = run_suite(s, 7, &cfg).unwrap();
            let bad: Vec<_> = r.failures().take(5).collect();
            assert!(bad.is_empty(), "{s}: {bad:#?}");
        }
    }

    #[test]
    fn separation_reports_the_half_plane_witness() {
        let r = run_suite(Suite::Separation, 0, &Config::default()).unwrap();
        let w = r.cases.iter().find(|c| c.case_id.contains("half_plane_zero_witness")).unwrap();
        assert!(w.pass && w.actual == 0.0);
    }
}
