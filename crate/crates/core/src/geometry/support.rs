use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{dot, ConvexDomain, DomainKind, GeometryConfig, Point};
use crate::optimize::{scan_refine_max, scan_refine_min};

/// Support function `h(θ) = max_{w∈K} ⟨w, e^{iθ}⟩`.
pub struct Support<'a> {
    domain: &'a ConvexDomain,
    sampled: Option<SampledBoundary>,
}

struct SampledBoundary {
    params: Vec<f64>,
    step: f64,
    points: Vec<Point>,
}

impl<'a> Support<'a> {
    pub fn new(domain: &'a ConvexDomain, samples: usize) -> Self {
        let sampled = matches!(domain.kind(), DomainKind::Generic(_)).then(|| {
            let m = samples.max(64);
            let step = domain.period() / m as f64;
            let params: Vec<f64> = (0..m).map(|i| step * i as f64).collect();
            let points = params.iter().map(|&t| domain.position(t)).collect();
            SampledBoundary {
                params,
                step,
                points,
            }
        });
        Self { domain, sampled }
    }

    /// Exact for catalogue shapes; sample maximum plus golden refinement
    /// for generic curves.
    pub fn eval(&self, theta: f64) -> f64 {
        let u = Complex64::from_polar(1.0, theta);
        match self.domain.kind() {
            DomainKind::Disk { r } => *r,
            DomainKind::Ellipse { b } => u.re.hypot(b * u.im),
            DomainKind::LpBall { p, b } => {
                let q = p / (p - 1.0);
                (u.re.abs().powf(q) + (b * u.im).abs().powf(q)).powf(1.0 / q)
            }
            DomainKind::Square | DomainKind::RegularPolygon { .. } => self
                .domain
                .vertices()
                .iter()
                .map(|&v| dot(v, u))
                .fold(f64::NEG_INFINITY, f64::max),
            DomainKind::Interval { length } => 0.5 * length * u.re.abs(),
            DomainKind::Generic(_) => {
                let s = self.sampled.as_ref().expect("generic support samples");
                let vals: Vec<f64> = s.points.iter().map(|&w| dot(w, u)).collect();
                scan_refine_max(&s.params, &vals, s.step, true, 2, 1e-13 * self.domain.period(), |t| {
                    dot(self.domain.position(t), u)
                })
                .value
            }
        }
    }

    /// Width in direction `θ`: `h(θ) + h(θ + π)`.
    pub fn width(&self, theta: f64) -> f64 {
        self.eval(theta) + self.eval(theta + PI)
    }
}

/// Extremal width and the direction (angle of the normal) attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Width {
    pub value: f64,
    pub direction: f64,
    /// Set for the interval (width 0).
    pub degenerate: bool,
}

fn width_extremum(k: &ConvexDomain, cfg: &GeometryConfig, maximize: bool) -> Width {
    let support = Support::new(k, cfg.samples);
    let m = cfg.samples.max(64);
    let step = PI / m as f64;
    let params: Vec<f64> = (0..m).map(|i| step * i as f64).collect();
    // Refined grid values for sampled curves: the coarse ones are biased by
    // up to a grid-dependent amount, enough to pick the wrong bracket.
    let vals: Vec<f64> = params.iter().map(|&th| support.width(th)).collect();
    let tol = 1e-13;
    let e = if maximize {
        scan_refine_max(&params, &vals, step, true, cfg.refine_keep, tol, |th| support.width(th))
    } else {
        scan_refine_min(&params, &vals, step, true, cfg.refine_keep, tol, |th| support.width(th))
    };
    Width {
        value: e.value,
        direction: e.param.rem_euclid(PI),
        degenerate: k.is_degenerate(),
    }
}

/// Diameter as the maximal width over directions.
pub fn diameter(k: &ConvexDomain, cfg: &GeometryConfig) -> f64 {
    match k.kind() {
        DomainKind::Disk { r } => 2.0 * r,
        DomainKind::Interval { length } => *length,
        _ => width_extremum(k, cfg, true).value,
    }
}

/// Minimal width over directions (0 and flagged for the interval).
pub fn min_width(k: &ConvexDomain, cfg: &GeometryConfig) -> Width {
    match k.kind() {
        DomainKind::Interval { .. } => Width {
            value: 0.0,
            direction: 0.5 * PI,
            degenerate: true,
        },
        DomainKind::Disk { r } => Width {
            value: 2.0 * r,
            direction: 0.0,
            degenerate: false,
        },
        _ => width_extremum(k, cfg, false),
    }
}
