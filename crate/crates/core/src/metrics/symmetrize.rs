use crate::error::Result;
use crate::geom::Point2;

use super::{clamp, WeakMetric};

/// `σδ(x, y) = max{δ(x, y), δ(y, x)}`.
#[derive(Debug, Clone)]
pub struct MaxSymmetrization<M>(pub M);

/// `Sδ(x, y) = ½(δ(x, y) + δ(y, x))`.
#[derive(Debug, Clone)]
pub struct MeanSymmetrization<M>(pub M);

impl<M: WeakMetric> WeakMetric for MaxSymmetrization<M> {
    fn distance(&self, x: Point2, y: Point2) -> Result<f64> {
        Ok(clamp(self.0.distance(x, y)?.max(self.0.distance(y, x)?)))
    }
}

impl<M: WeakMetric> WeakMetric for MeanSymmetrization<M> {
    fn distance(&self, x: Point2, y: Point2) -> Result<f64> {
        Ok(clamp(0.5 * (self.0.distance(x, y)? + self.0.distance(y, x)?)))
    }
}

pub fn sigma_symmetrize<M: WeakMetric>(d: M) -> MaxSymmetrization<M> {
    MaxSymmetrization(d)
}

pub fn s_symmetrize<M: WeakMetric>(d: M) -> MeanSymmetrization<M> {
    MeanSymmetrization(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Domain;
    use crate::geom::pt;
    use crate::metrics::{apollonian_disk, hilbert, Metric, MetricKind};

    #[test]
    fn symmetrized_disk_apollonian() {
        let (x, y) = (pt(0.0, 0.0), pt(0.5, 0.0));
        let sigma = sigma_symmetrize(apollonian_disk);
        let mean = s_symmetrize(apollonian_disk);
        assert!((sigma.distance(x, y).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((mean.distance(x, y).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-15);
        assert_eq!(sigma.distance(y, x).unwrap(), sigma.distance(x, y).unwrap());
        assert_eq!(mean.distance(y, x).unwrap(), mean.distance(x, y).unwrap());
    }

    #[test]
    fn symmetric_input_is_a_fixed_point() {
        let h = |x, y| hilbert(&Domain::UnitDisk, x, y);
        let (x, y) = (pt(0.1, -0.3), pt(-0.4, 0.6));
        let v = h(x, y).unwrap();
        assert!((sigma_symmetrize(h).distance(x, y).unwrap() - v).abs() < 1e-15);
        assert!((s_symmetrize(h).distance(x, y).unwrap() - v).abs() < 1e-15);
    }

    #[test]
    fn sandwich_on_a_directed_metric() {
        let m = Metric::new(MetricKind::Funk, Domain::unit_square());
        let (x, y) = (pt(0.1, 0.2), pt(0.8, 0.5));
        let s = s_symmetrize(m.clone()).distance(x, y).unwrap();
        let sig = sigma_symmetrize(m).distance(x, y).unwrap();
        assert!(s <= sig + 1e-12 && sig <= 2.0 * s + 1e-12);
    }
}
