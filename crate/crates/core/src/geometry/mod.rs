//! Planar convex domains and the geometric functionals of their boundary.

mod boundary;
mod capacity;
mod circular;
mod curvature;
pub mod curve;
mod domain;
mod projection;
mod support;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use boundary::{
    check_subdifferential, tangent_angle_profile, AngleSample, BoundaryPoint, BoundarySamples,
    SubdifferentialCheck, SUBDIFF_REL_TOL,
};
pub use capacity::{
    boundary_integral_capacity, regular_polygon_capacity, transfinite_diameter, CapacityMethod,
    TransfiniteDiameter, CAPACITY_PANELS,
};
pub use circular::{
    circularity_radius, pointwise_turan_constant, pointwise_turan_constant_sampled, r_needed,
    r_needed_sampled, Circularity, TangentRadius, FLAT_COS, INCONSISTENT_COS,
};
pub use curvature::{curvature_min, lp_curvature};
pub use domain::{make_domain, ConvexDomain, DomainKind};
pub use projection::{contains, distance, project};
pub use support::{diameter, min_width, Support, Width};

/// A point of the plane, identified with ℂ.
pub type Point = Complex64;

/// Euclidean inner product of two plane vectors.
#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a.re * b.re + a.im * b.im
}

/// Sampling budgets and tolerances for the boundary scans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    /// Uniform parameter samples per boundary scan.
    pub samples: usize,
    /// Candidate tangency points `z` scanned by [`circularity_radius`].
    pub z_samples: usize,
    /// Local extrema polished by golden section after each scan.
    pub refine_keep: usize,
    /// Golden-section bracket tolerance, relative to the parameter period.
    pub param_tol: f64,
    /// Arc-length window around `z` (fraction of the perimeter) replaced by
    /// the curvature limit in tangent-disk scans.
    pub diag_window: f64,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            samples: 4096,
            z_samples: 1024,
            refine_keep: 4,
            param_tol: 1e-12,
            diag_window: 1e-3,
        }
    }
}
