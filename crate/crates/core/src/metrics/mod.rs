//! Weak metrics on planar domains, their symmetrizations, and the
//! brute-force oracles used to validate the closed forms.
//!
//! Every weak metric here is directed: `δ(x, y)` and `δ(y, x)` may differ.
//! The Apollonian weak metric is `δ_A(x, y) = sup_{a ∈ ∂A} log(|x − a| / |y − a|)`;
//! it has closed forms on the unit disk and the upper half-plane and is
//! computed by [`apollonian_oracle`] elsewhere.

mod classic;
mod closed_form;
mod oracle;
mod symmetrize;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::geom::{MobiusMap, Point2};

pub use classic::{funk, hilbert, i_weak, j_tilde, j_vuorinen, part_affine, part_harmonic_disk};
pub use closed_form::{
    apollonian_disk, apollonian_halfplane, circle_affine_extrema, extremal_points_disk, poincare_disk,
    poincare_halfplane, CircleExtrema, DiskExtremals,
};
pub use oracle::{apollonian_oracle, apollonian_oracle_with, scan_boundary, BoundaryPeak, BoundaryScan, OracleResult};
pub use symmetrize::{s_symmetrize, sigma_symmetrize, MaxSymmetrization, MeanSymmetrization};

pub(crate) use oracle::initial_window;

pub(crate) fn clamp(v: f64) -> f64 {
    Config::default().clamp(v)
}

/// A weak-metric value with its direction made explicit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectedDistance {
    pub from: Point2,
    pub to: Point2,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalKind {
    Max,
    Min,
}

/// A boundary point together with the value of `|x − a| / |y − a|` it achieves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalBoundaryPoint {
    pub point: Point2,
    pub achieved: f64,
    pub kind: ExtremalKind,
}

/// A nonnegative function with `δ(x, x) = 0` and the triangle inequality.
pub trait WeakMetric {
    fn distance(&self, x: Point2, y: Point2) -> Result<f64>;

    fn directed(&self, x: Point2, y: Point2) -> Result<DirectedDistance> {
        Ok(DirectedDistance { from: x, to: y, value: self.distance(x, y)? })
    }
}

impl<F> WeakMetric for F
where
    F: Fn(Point2, Point2) -> Result<f64>,
{
    fn distance(&self, x: Point2, y: Point2) -> Result<f64> {
        self(x, y)
    }
}

/// Apollonian weak metric on any eligible domain: closed form on the disk and
/// the half-plane, the boundary oracle elsewhere.
pub fn apollonian(domain: &Domain, x: Point2, y: Point2, cfg: &Config) -> Result<f64> {
    match domain {
        Domain::UnitDisk => apollonian_disk(x, y),
        Domain::UpperHalfPlane => apollonian_halfplane(x, y),
        _ => Ok(apollonian_oracle_with(domain, x, y, cfg)?.value),
    }
}

/// Half-Apollonian semi-metric `η_A(x, y) = sup_a |log(|x − a| / |y − a|)|`.
///
/// On the disk this uses both boundary extrema of the ratio; elsewhere the
/// supremum of the absolute log-ratio is taken directly over the boundary.
pub fn half_apollonian(domain: &Domain, x: Point2, y: Point2, cfg: &Config) -> Result<f64> {
    if (x - y).norm() <= crate::geom::COINCIDENCE_EPS {
        domain.check_apollonian_eligible()?;
        domain.ensure_contains(x)?;
        return Ok(0.0);
    }
    match domain {
        Domain::UnitDisk => {
            let e = extremal_points_disk(x, y)?;
            Ok(clamp(e.max.achieved.ln().max(-e.min.achieved.ln())))
        }
        _ => oracle::abs_log_ratio_oracle(domain, x, y, cfg),
    }
}

/// Apollonian semi-metric as the sum of two suprema,
/// `sup_a log(|x − a|/|y − a|) + sup_b log(|y − b|/|x − b|)`.
///
/// Note the absence of a ½: this equals `2·Sδ_A`.
pub fn apollonian_semimetric(domain: &Domain, x: Point2, y: Point2, cfg: &Config) -> Result<f64> {
    match domain {
        Domain::UnitDisk if (x - y).norm() > crate::geom::COINCIDENCE_EPS => {
            let e = extremal_points_disk(x, y)?;
            Ok(clamp((e.max.achieved / e.min.achieved).ln()))
        }
        _ => Ok(clamp(apollonian(domain, x, y, cfg)? + apollonian(domain, y, x, cfg)?)),
    }
}

/// Names of the metrics that can be evaluated through [`Metric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Apollonian,
    ApollonianOracle,
    HalfApollonian,
    ApollonianSemimetric,
    Funk,
    Hilbert,
    PartAffine,
    PartHarmonic,
    IWeak,
    JTilde,
    JVuorinen,
    Poincare,
}

impl MetricKind {
    pub const ALL: [MetricKind; 12] = [
        MetricKind::Apollonian,
        MetricKind::ApollonianOracle,
        MetricKind::HalfApollonian,
        MetricKind::ApollonianSemimetric,
        MetricKind::Funk,
        MetricKind::Hilbert,
        MetricKind::PartAffine,
        MetricKind::PartHarmonic,
        MetricKind::IWeak,
        MetricKind::JTilde,
        MetricKind::JVuorinen,
        MetricKind::Poincare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Apollonian => "apollonian",
            MetricKind::ApollonianOracle => "apollonian_oracle",
            MetricKind::HalfApollonian => "half_apollonian",
            MetricKind::ApollonianSemimetric => "apollonian_semimetric",
            MetricKind::Funk => "funk",
            MetricKind::Hilbert => "hilbert",
            MetricKind::PartAffine => "part_affine",
            MetricKind::PartHarmonic => "part_harmonic",
            MetricKind::IWeak => "i_weak",
            MetricKind::JTilde => "j_tilde",
            MetricKind::JVuorinen => "j_vuorinen",
            MetricKind::Poincare => "poincare",
        }
    }

    pub fn is_symmetric(self) -> bool {
        !matches!(self, MetricKind::Apollonian | MetricKind::ApollonianOracle | MetricKind::Funk | MetricKind::IWeak)
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        MetricKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

/// A named metric bound to a domain and configuration.
#[derive(Debug, Clone)]
pub struct Metric {
    pub kind: MetricKind,
    pub domain: Domain,
    pub config: Config,
}

impl Metric {
    pub fn new(kind: MetricKind, domain: Domain) -> Self {
        Self { kind, domain, config: Config::default() }
    }

    pub fn with_config(mut self, config: Config) -> Self {
        self.config = config;
        self
    }

    /// Check that the metric is defined on the domain, without evaluating it.
    pub fn check_applicable(&self) -> Result<()> {
        let d = &self.domain;
        match self.kind {
            MetricKind::Apollonian
            | MetricKind::ApollonianOracle
            | MetricKind::HalfApollonian
            | MetricKind::ApollonianSemimetric => d.check_apollonian_eligible(),
            MetricKind::Funk | MetricKind::Hilbert | MetricKind::PartAffine => {
                if !d.is_bounded() {
                    Err(Error::UnboundedDomain)
                } else if !d.is_bounded_convex() {
                    Err(Error::UnsupportedDomain(format!("{} requires a bounded convex domain", self.kind)))
                } else {
                    Ok(())
                }
            }
            MetricKind::PartHarmonic => match d {
                Domain::UnitDisk => Ok(()),
                _ => Err(Error::UnsupportedDomain("part_harmonic is implemented on the unit disk only".into())),
            },
            MetricKind::Poincare => match d {
                Domain::UnitDisk | Domain::UpperHalfPlane => Ok(()),
                _ => Err(Error::UnsupportedDomain("poincare needs the unit disk or the upper half-plane".into())),
            },
            MetricKind::IWeak | MetricKind::JTilde | MetricKind::JVuorinen => Ok(()),
        }
    }

    /// Boundary point realizing the directed Apollonian supremum, when one exists.
    pub fn extremal(&self, x: Point2, y: Point2) -> Result<Option<ExtremalBoundaryPoint>> {
        match (self.kind, &self.domain) {
            (MetricKind::Apollonian, Domain::UnitDisk) if (x - y).norm() > crate::geom::COINCIDENCE_EPS => {
                Ok(Some(extremal_points_disk(x, y)?.max))
            }
            (MetricKind::Apollonian | MetricKind::ApollonianOracle, _) => {
                Ok(apollonian_oracle_with(&self.domain, x, y, &self.config)?.argmax)
            }
            _ => Ok(None),
        }
    }
}

impl WeakMetric for Metric {
    fn distance(&self, x: Point2, y: Point2) -> Result<f64> {
        self.check_applicable()?;
        let (d, cfg) = (&self.domain, &self.config);
        match self.kind {
            MetricKind::Apollonian => apollonian(d, x, y, cfg),
            MetricKind::ApollonianOracle => Ok(apollonian_oracle_with(d, x, y, cfg)?.value),
            MetricKind::HalfApollonian => half_apollonian(d, x, y, cfg),
            MetricKind::ApollonianSemimetric => apollonian_semimetric(d, x, y, cfg),
            MetricKind::Funk => funk(d, x, y),
            MetricKind::Hilbert => hilbert(d, x, y),
            MetricKind::PartAffine => part_affine(d, x, y),
            MetricKind::PartHarmonic => part_harmonic_disk(x, y, cfg.oracle_resolution),
            MetricKind::IWeak => i_weak(d, x, y),
            MetricKind::JTilde => j_tilde(d, x, y),
            MetricKind::JVuorinen => j_vuorinen(d, x, y),
            MetricKind::Poincare => match d {
                Domain::UnitDisk => poincare_disk(x, y),
                _ => poincare_halfplane(x, y),
            },
        }
    }
}

/// A pair and a disk automorphism under which the disk Apollonian metric moves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusWitness {
    pub x: Point2,
    pub y: Point2,
    pub map: MobiusMap,
    /// `|δ(x, y) − δ(m(x), m(y))|`
    pub defect: f64,
    pub trials: usize,
}

const WITNESS_THRESHOLD: f64 = 0.1;
const WITNESS_TRIALS: usize = 1000;

/// `|δ(x, y) − δ(m(x), m(y))|` for the disk Apollonian weak metric.
pub fn mobius_defect(m: &MobiusMap, x: Point2, y: Point2) -> Result<f64> {
    let mx = m.apply_finite(x)?;
    let my = m.apply_finite(y)?;
    Ok((apollonian_disk(x, y)? - apollonian_disk(mx, my)?).abs())
}

/// Search seeded random disk automorphisms and pairs for one that changes the
/// disk Apollonian metric by more than 0.1.
pub fn mobius_invariance_witness(seed: u64) -> Result<MobiusWitness> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let disk_point = |rng: &mut ChaCha8Rng, r: f64| {
        Point2::from_polar(r * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU))
    };
    for trial in 1..=WITNESS_TRIALS {
        let x = disk_point(&mut rng, 0.9);
        let y = disk_point(&mut rng, 0.9);
        let base = disk_point(&mut rng, 0.9);
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let map = MobiusMap::disk_automorphism(base, theta)?;
        let Ok(defect) = mobius_defect(&map, x, y) else { continue };
        if defect > WITNESS_THRESHOLD {
            return Ok(MobiusWitness { x, y, map, defect, trials: trial });
        }
    }
    Err(Error::SearchFailed(WITNESS_TRIALS))
}
