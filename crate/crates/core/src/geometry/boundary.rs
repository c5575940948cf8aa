use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use super::{ConvexDomain, Point};
use crate::error::Result;

/// Evaluated boundary datum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    /// Native boundary parameter.
    pub t: f64,
    pub position: Point,
    /// Arc length from the start of the traversal.
    pub s: f64,
    /// Left and right tangent angles; equal away from vertices.
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    /// `(α₋ + α₊) / 2`.
    pub alpha: f64,
    /// Outward unit normal, `e^{i(α − π/2)}`.
    pub normal: Point,
    /// Curvature, absent at vertices.
    pub kappa: Option<f64>,
}

impl BoundaryPoint {
    /// Radius of curvature `1/κ`; `0` at vertices and infinite-curvature
    /// points, `+∞` on flat pieces.
    pub fn curvature_radius(&self) -> f64 {
        match self.kappa {
            None => 0.0,
            Some(k) if k <= 0.0 => f64::INFINITY,
            Some(k) => 1.0 / k,
        }
    }
}

impl ConvexDomain {
    /// Boundary datum at parameter `t`.
    ///
    /// At a polygon vertex the curvature is absent and `α` is the mean of the
    /// one-sided tangent angles. For generic domains the tangent and curvature
    /// come from the curve's derivatives (numerical unless the curve supplies
    /// them, see [`super::curve::FD_STEP_FRACTION`]).
    pub fn boundary_point(&self, t: f64) -> Result<BoundaryPoint> {
        self.require_interior("boundary_point")?;
        let s = self.arc_length(0.0, t.rem_euclid(self.period()));
        Ok(self.point_with_arc(t, s))
    }

    pub(crate) fn point_with_arc(&self, t: f64, s: f64) -> BoundaryPoint {
        let f = self.frame(t);
        let alpha_plus = self.unwrap_angle(f.raw_angle);
        let alpha_minus = alpha_plus - f.jump;
        let alpha = 0.5 * (alpha_plus + alpha_minus);
        BoundaryPoint {
            t,
            position: f.position,
            s,
            alpha_minus,
            alpha_plus,
            alpha,
            normal: Complex64::from_polar(1.0, alpha - FRAC_PI_2),
            kappa: f.kappa,
        }
    }
}

/// Boundary data at `m` uniformly spaced parameters.
#[derive(Debug, Clone)]
pub struct BoundarySamples {
    pub params: Vec<f64>,
    pub step: f64,
    pub points: Vec<BoundaryPoint>,
    pub perimeter: f64,
}

impl BoundarySamples {
    pub fn new(k: &ConvexDomain, m: usize) -> Result<Self> {
        k.require_interior("boundary sampling")?;
        let m = m.max(8);
        let step = k.period() / m as f64;
        let params: Vec<f64> = (0..m).map(|i| step * i as f64).collect();
        let mut points = Vec::with_capacity(m);
        let mut s = 0.0;
        for (i, &t) in params.iter().enumerate() {
            if i > 0 {
                s += k.arc_length(params[i - 1], t);
            }
            points.push(k.point_with_arc(t, s));
        }
        let perimeter = s + k.arc_length(params[m - 1], k.period());
        Ok(Self {
            params,
            step,
            points,
            perimeter,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Arc-length distance along the closed boundary.
    pub fn arc_gap(&self, s1: f64, s2: f64) -> f64 {
        let d = (s1 - s2).abs() % self.perimeter;
        d.min(self.perimeter - d)
    }
}

/// One sample of the tangent-angle profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleSample {
    pub s: f64,
    pub alpha_minus: f64,
    pub alpha_plus: f64,
}

/// Samples `(s, α₋, α₊)` at `m` uniform parameters plus every polygon vertex,
/// sorted by arc length.
pub fn tangent_angle_profile(k: &ConvexDomain, m: usize) -> Result<Vec<AngleSample>> {
    let samples = BoundarySamples::new(k, m)?;
    let mut out: Vec<AngleSample> = samples
        .points
        .iter()
        .map(|b| AngleSample {
            s: b.s,
            alpha_minus: b.alpha_minus,
            alpha_plus: b.alpha_plus,
        })
        .collect();
    for &t in k.vertex_params() {
        let b = k.point_with_arc(t, t);
        if !out.iter().any(|a| (a.s - b.s).abs() <= 1e-12 * samples.perimeter) {
            out.push(AngleSample {
                s: b.s,
                alpha_minus: b.alpha_minus,
                alpha_plus: b.alpha_plus,
            });
        }
    }
    out.sort_by(|a, b| a.s.total_cmp(&b.s));
    Ok(out)
}

/// Outcome of the subdifferential (Lipschitz-type angle increase) check.
#[derive(Debug, Clone, Serialize)]
pub struct SubdifferentialCheck {
    pub lambda: f64,
    pub holds: bool,
    /// Smallest difference quotient `(α(y) − α(x)) / (y − x)` found.
    pub min_quotient: f64,
    /// Boundary points bracketing the worst quotient.
    pub worst_pair: (Point, Point),
}

/// Relative slack granted to `λ` in [`check_subdifferential`].
pub const SUBDIFF_REL_TOL: f64 = 1e-9;

/// Checks `α±(y) − α±(x) ≥ λ (y − x)` over all sampled arc-length pairs.
///
/// The minimum of the difference quotient over all pairs is attained by
/// consecutive samples (a quotient over a longer arc is a weighted mean of
/// the consecutive ones), so only the `m` cyclically adjacent pairs are
/// evaluated. At a vertex the jump `α₊ − α₋` adds to the left-hand side.
pub fn check_subdifferential(k: &ConvexDomain, lambda: f64, m: usize) -> Result<SubdifferentialCheck> {
    assert!(lambda > 0.0, "λ must be positive");
    let profile = tangent_angle_profile(k, m)?;
    let perimeter = k.perimeter();
    let n = profile.len();
    let mut best = (f64::INFINITY, 0usize);
    for i in 0..n {
        let a = profile[i];
        let (b, wrap) = if i + 1 < n {
            (profile[i + 1], 0.0)
        } else {
            (profile[0], std::f64::consts::TAU)
        };
        let ds = if i + 1 < n { b.s - a.s } else { perimeter - a.s + b.s };
        if ds <= 0.0 {
            continue;
        }
        // α₋ at the right end against α₊ at the left end: the increase over
        // the open arc between the samples.
        let q = (b.alpha_minus + wrap - a.alpha_plus) / ds;
        if q < best.0 {
            best = (q, i);
        }
    }
    let i = best.1;
    let j = (i + 1) % n;
    let at = |s: f64| position_at_arc(k, s, perimeter);
    Ok(SubdifferentialCheck {
        lambda,
        holds: best.0 >= lambda * (1.0 - SUBDIFF_REL_TOL),
        min_quotient: best.0,
        worst_pair: (at(profile[i].s), at(profile[j].s)),
    })
}

/// Boundary position at arc length `s` (bisection on the parameter).
pub(crate) fn position_at_arc(k: &ConvexDomain, s: f64, perimeter: f64) -> Point {
    let target = s.rem_euclid(perimeter);
    let (mut lo, mut hi) = (0.0, k.period());
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if k.arc_length(0.0, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    k.position(0.5 * (lo + hi))
}
