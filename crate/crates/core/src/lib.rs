//! Apollonian, Funk, Hilbert and related weak metrics on planar domains.
//!
//! The crate is organized bottom-up:
//!
//! - [`geom`]: complex-number primitives, generalized circles, similarities, Möbius maps.
//! - [`domain`]: the unit disk, the upper half-plane, convex polygons and sampled boundaries.
//! - [`metrics`]: the weak metrics, their symmetrizations, closed forms and boundary oracles.
//! - [`geodesics`]: aligned triples, argmax sets and the disk's geodesic arcs.
//! - [`suites`]: seeded property suites shared by the CLI.

pub mod config;
pub mod domain;
pub mod error;
pub mod geodesics;
pub mod geom;
pub mod metrics;
pub mod sampling;
pub mod suites;

pub use config::Config;
pub use domain::Domain;
pub use error::{Error, Result};
pub use geom::{pt, Point2};
pub use metrics::{Metric, MetricKind, WeakMetric};
