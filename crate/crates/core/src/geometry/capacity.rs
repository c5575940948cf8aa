//! Transfinite diameter (logarithmic capacity).
//!
//! Closed forms for the disk, interval, ellipse and regular polygons. Other
//! domains solve the first-kind boundary integral equation for the
//! equilibrium density `σ`:
//!
//! `∫_{∂K} log|z − w| σ(w) ds(w) = log Δ(K)` for `z ∈ ∂K`, `∫ σ ds = 1`,
//!
//! discretised with piecewise-constant density on parameter-uniform panels,
//! Gauss–Legendre quadrature off the diagonal and collocation at panel
//! midpoints.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use statrs::function::gamma::gamma;

use super::{ConvexDomain, DomainKind};
use crate::optimize::GL8;

/// How a transfinite diameter value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityMethod {
    ClosedForm,
    /// Closed form that is standard but not one of this crate's sourced
    /// formulas (the ellipse `(a + b)/2`).
    ExternalClosedForm,
    BoundaryIntegral { panels: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransfiniteDiameter {
    pub value: f64,
    pub method: CapacityMethod,
}

/// Default panel count for the numeric route.
pub const CAPACITY_PANELS: usize = 600;

/// `Γ(1/m) / (√π · 2^{1 + 2/m} · Γ(1/2 + 1/m)) · h` for the regular
/// `m`-gon with side `h`.
pub fn regular_polygon_capacity(m: usize, h: f64) -> f64 {
    let x = 1.0 / m as f64;
    gamma(x) / (PI.sqrt() * 2f64.powf(1.0 + 2.0 * x) * gamma(0.5 + x)) * h
}

pub fn transfinite_diameter(k: &ConvexDomain) -> TransfiniteDiameter {
    let closed = |value| TransfiniteDiameter {
        value,
        method: CapacityMethod::ClosedForm,
    };
    match k.kind() {
        DomainKind::Disk { r } => closed(*r),
        DomainKind::Interval { length } => closed(length / 4.0),
        DomainKind::Square => closed(regular_polygon_capacity(4, 2f64.sqrt())),
        DomainKind::RegularPolygon { m, h } => closed(regular_polygon_capacity(*m, *h)),
        DomainKind::Ellipse { b } => TransfiniteDiameter {
            value: 0.5 * (1.0 + b),
            method: CapacityMethod::ExternalClosedForm,
        },
        DomainKind::LpBall { .. } | DomainKind::Generic(_) => TransfiniteDiameter {
            value: boundary_integral_capacity(k, CAPACITY_PANELS),
            method: CapacityMethod::BoundaryIntegral {
                panels: CAPACITY_PANELS,
            },
        },
    }
}

/// Numeric capacity from the boundary integral equation with `panels`
/// panels. Works for any nondegenerate domain; used as an independent check
/// of the closed forms.
pub fn boundary_integral_capacity(k: &ConvexDomain, panels: usize) -> f64 {
    let n = panels.max(16);
    let h = k.period() / n as f64;
    let mid: Vec<_> = (0..n).map(|j| k.position(h * (j as f64 + 0.5))).collect();
    // Quadrature nodes (position, weight·speed) per panel.
    let nodes: Vec<Vec<_>> = (0..n)
        .map(|j| {
            let a = h * j as f64;
            GL8.iter()
                .map(|&(x, w)| {
                    let t = a + 0.5 * h * (x + 1.0);
                    (k.position(t), 0.5 * h * w * k.speed(t))
                })
                .collect()
        })
        .collect();
    let lengths: Vec<f64> = nodes.iter().map(|q| q.iter().map(|&(_, w)| w).sum()).collect();

    let mut a = DMatrix::<f64>::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = if i == j {
                // ∫ log|s| ds over a straight panel of length ℓ centred at 0.
                let l = lengths[j];
                l * ((0.5 * l).ln() - 1.0)
            } else {
                nodes[j].iter().map(|&(w, wt)| wt * (mid[i] - w).norm().ln()).sum()
            };
        }
        a[(i, n)] = -1.0;
    }
    for j in 0..n {
        a[(n, j)] = lengths[j];
    }
    let mut rhs = DVector::<f64>::zeros(n + 1);
    rhs[n] = 1.0;
    let sol = a
        .lu()
        .solve(&rhs)
        .expect("capacity system is nonsingular for nondegenerate domains");
    sol[n].exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_domain;

    #[test]
    fn square_constant() {
        let v = regular_polygon_capacity(4, 1.0);
        assert!((v - 0.59017).abs() < 1e-5, "{v}");
    }

    #[test]
    fn erod_polygon_threshold() {
        assert!(regular_polygon_capacity(26, 1.0) > 4.0);
        assert!(regular_polygon_capacity(25, 1.0) < 4.0);
    }

    #[test]
    fn large_polygon_tends_to_circumradius() {
        let m = 2000;
        let rc = 1.0 / (2.0 * (PI / m as f64).sin());
        assert!((regular_polygon_capacity(m, 1.0) / rc - 1.0).abs() < 1e-3);
    }

    #[test]
    fn numeric_route_matches_closed_forms() {
        let disk = make_domain("disk:r=1.5").unwrap();
        assert!((boundary_integral_capacity(&disk, 400) - 1.5).abs() < 1e-8);
        let e = make_domain("ellipse:b=0.4").unwrap();
        assert!((boundary_integral_capacity(&e, 400) - 0.7).abs() < 1e-8);
        let q = make_domain("polygon:m=4,h=1").unwrap();
        let v = boundary_integral_capacity(&q, 800);
        assert!((v - regular_polygon_capacity(4, 1.0)).abs() < 1e-4, "{v}");
    }
}
