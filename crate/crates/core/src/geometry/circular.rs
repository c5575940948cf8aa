//! Enclosing tangent disks.
//!
//! For a boundary point `z` with outward normal `n`, the disk of radius `R`
//! tangent at `z` (centre `z − R n`) contains `w` iff
//! `R ≥ |z − w|² / (2⟨z − w, n⟩)`. The supremum of that ratio over the
//! boundary is the smallest enclosing tangent radius at `z`; its diagonal
//! limit `w → z` is the curvature radius `ρ(z)`. The pointwise Turán
//! constant `inf cos α / |z − w|` is the same extremum, inverted and halved.

use rayon::prelude::*;
use serde::Serialize;

use super::{dot, BoundaryPoint, BoundarySamples, ConvexDomain, GeometryConfig, Point};
use crate::error::{Error, Result};
use crate::optimize::{scan_refine_max, scan_refine_min};

/// `cos α` below this counts as a supporting segment through `z` (flat).
pub const FLAT_COS: f64 = 1e-10;
/// `cos α` below minus this means the normal does not support the domain.
pub const INCONSISTENT_COS: f64 = 1e-8;

/// Smallest radius of a disk tangent at `z` that contains the domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentRadius {
    /// `+∞` when `z` lies on a flat piece of the boundary.
    pub radius: f64,
    pub flat: bool,
    /// Curvature radius at `z` (the diagonal contribution).
    pub local: f64,
    /// Boundary point realising the far-field supremum.
    pub witness: Option<Point>,
}

struct DiagonalScan<'a> {
    k: &'a ConvexDomain,
    samples: &'a BoundarySamples,
    z: BoundaryPoint,
    window: f64,
}

enum PairValue {
    Value(f64),
    Flat,
    Excluded,
}

impl<'a> DiagonalScan<'a> {
    fn new(k: &'a ConvexDomain, samples: &'a BoundarySamples, z: &BoundaryPoint, cfg: &GeometryConfig) -> Self {
        Self {
            k,
            samples,
            z: *z,
            window: cfg.diag_window * samples.perimeter,
        }
    }

    /// Arc length at parameter `t`, interpolated between samples.
    fn arc_at(&self, t: f64) -> f64 {
        let period = self.k.period();
        let t = t.rem_euclid(period);
        let step = self.samples.step;
        let i = ((t / step) as usize).min(self.samples.len() - 1);
        let s0 = self.samples.points[i].s;
        let s1 = if i + 1 < self.samples.len() {
            self.samples.points[i + 1].s
        } else {
            self.samples.perimeter
        };
        s0 + (s1 - s0) * (t - self.samples.params[i]) / step
    }

    fn near_diagonal(&self, s: f64) -> bool {
        self.samples.arc_gap(s, self.z.s) < self.window
    }

    fn check(&self, w: Point, cos: f64) -> Result<()> {
        if cos < -INCONSISTENT_COS {
            return Err(Error::Geometry {
                at: self.z.position,
                offset: dot(self.z.position - w, self.z.normal),
            });
        }
        Ok(())
    }

    /// `|z − w|² / (2⟨z − w, n⟩)`.
    fn radius_term(&self, w: Point, s: f64) -> Result<PairValue> {
        if self.near_diagonal(s) {
            return Ok(PairValue::Excluded);
        }
        let v = self.z.position - w;
        let len = v.norm();
        let d = dot(v, self.z.normal);
        self.check(w, d / len)?;
        if d <= FLAT_COS * len {
            return Ok(PairValue::Flat);
        }
        Ok(PairValue::Value(v.norm_sqr() / (2.0 * d)))
    }

    /// `cos α / |z − w|` with `α = φ − arg(z − w)`.
    fn turan_term(&self, w: Point, s: f64) -> Result<PairValue> {
        if self.near_diagonal(s) {
            return Ok(PairValue::Excluded);
        }
        let v = self.z.position - w;
        let alpha = self.z.normal.arg() - v.arg();
        let cos = alpha.cos();
        self.check(w, cos)?;
        if cos <= FLAT_COS {
            return Ok(PairValue::Flat);
        }
        Ok(PairValue::Value(cos / v.norm()))
    }
}

fn sentinel(v: PairValue, excluded: f64) -> f64 {
    match v {
        PairValue::Value(x) => x,
        PairValue::Flat => f64::NAN,
        PairValue::Excluded => excluded,
    }
}

/// Minimal radius `R` such that the disk of radius `R` tangent at `z`
/// contains `K`.
///
/// Boundary samples within `cfg.diag_window` of `z` (in arc length) are
/// replaced by the curvature limit `ρ(z)`.
pub fn r_needed(k: &ConvexDomain, z: &BoundaryPoint, cfg: &GeometryConfig) -> Result<TangentRadius> {
    let samples = BoundarySamples::new(k, cfg.samples)?;
    r_needed_sampled(k, &samples, z, cfg)
}

pub fn r_needed_sampled(
    k: &ConvexDomain,
    samples: &BoundarySamples,
    z: &BoundaryPoint,
    cfg: &GeometryConfig,
) -> Result<TangentRadius> {
    let scan = DiagonalScan::new(k, samples, z, cfg);
    let local = z.curvature_radius();
    let mut vals = Vec::with_capacity(samples.len());
    let mut flat = local.is_infinite();
    for p in &samples.points {
        let v = sentinel(scan.radius_term(p.position, p.s)?, f64::NEG_INFINITY);
        flat |= v.is_nan();
        vals.push(v);
    }
    if flat {
        return Ok(TangentRadius {
            radius: f64::INFINITY,
            flat: true,
            local,
            witness: None,
        });
    }
    let f = |t: f64| match scan.radius_term(k.position(t), scan.arc_at(t)) {
        Ok(v) => sentinel(v, f64::NEG_INFINITY),
        Err(_) => f64::NEG_INFINITY,
    };
    let e = scan_refine_max(&samples.params, &vals, samples.step, true, cfg.refine_keep, cfg.param_tol * k.period(), f);
    if e.value.is_nan() || e.value == f64::INFINITY {
        return Ok(TangentRadius {
            radius: f64::INFINITY,
            flat: true,
            local,
            witness: None,
        });
    }
    let (radius, witness) = if e.value >= local {
        (e.value, Some(k.position(e.param)))
    } else {
        (local, None)
    };
    Ok(TangentRadius {
        radius,
        flat: false,
        local,
        witness,
    })
}

/// `c(z) = inf_{w ∈ ∂K∖{z}} cos α / |z − w|`, with diagonal value
/// `κ(z)/2`; `0` on flat pieces.
pub fn pointwise_turan_constant(k: &ConvexDomain, z: &BoundaryPoint, cfg: &GeometryConfig) -> Result<f64> {
    let samples = BoundarySamples::new(k, cfg.samples)?;
    pointwise_turan_constant_sampled(k, &samples, z, cfg)
}

pub fn pointwise_turan_constant_sampled(
    k: &ConvexDomain,
    samples: &BoundarySamples,
    z: &BoundaryPoint,
    cfg: &GeometryConfig,
) -> Result<f64> {
    let scan = DiagonalScan::new(k, samples, z, cfg);
    let local = match z.kappa {
        None => f64::INFINITY,
        Some(kappa) => 0.5 * kappa.max(0.0),
    };
    if local == 0.0 {
        return Ok(0.0);
    }
    let mut vals = Vec::with_capacity(samples.len());
    for p in &samples.points {
        let v = sentinel(scan.turan_term(p.position, p.s)?, f64::INFINITY);
        if v.is_nan() {
            return Ok(0.0);
        }
        vals.push(v);
    }
    let f = |t: f64| match scan.turan_term(k.position(t), scan.arc_at(t)) {
        Ok(v) => sentinel(v, f64::INFINITY),
        Err(_) => f64::INFINITY,
    };
    let e = scan_refine_min(
        &samples.params,
        &vals,
        samples.step,
        true,
        cfg.refine_keep,
        cfg.param_tol * k.period(),
        f,
    );
    if e.value.is_nan() || e.value <= 0.0 {
        return Ok(0.0);
    }
    Ok(e.value.min(local))
}

/// Smallest `R` for which the domain is `R`-circular.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Circularity {
    /// `+∞` for flat domains.
    pub radius: f64,
    pub flat: bool,
    /// Boundary point where the enclosing tangent disk is largest.
    pub argmax: Option<Point>,
}

/// `sup_z r_needed(z)` over boundary samples, refined around the largest
/// values.
pub fn circularity_radius(k: &ConvexDomain, cfg: &GeometryConfig) -> Result<Circularity> {
    if k.is_degenerate() || k.is_polygon() {
        return Ok(Circularity {
            radius: f64::INFINITY,
            flat: true,
            argmax: None,
        });
    }
    let samples = BoundarySamples::new(k, cfg.samples)?;
    let mz = cfg.z_samples.max(8);
    let zstep = k.period() / mz as f64;
    let zparams: Vec<f64> = (0..mz).map(|i| zstep * i as f64).collect();
    let arc_of = |t: f64| -> f64 {
        let i = ((t / samples.step) as usize).min(samples.len() - 1);
        samples.points[i].s + k.arc_length(samples.params[i], t)
    };
    let radius_at = |t: f64| -> Result<f64> {
        let z = k.point_with_arc(t, arc_of(t));
        Ok(r_needed_sampled(k, &samples, &z, cfg)?.radius)
    };
    let vals: Vec<f64> = zparams
        .par_iter()
        .map(|&t| radius_at(t))
        .collect::<Result<Vec<f64>>>()?;
    if vals.iter().any(|v| v.is_infinite()) {
        return Ok(Circularity {
            radius: f64::INFINITY,
            flat: true,
            argmax: None,
        });
    }
    let e = scan_refine_max(&zparams, &vals, zstep, true, cfg.refine_keep, cfg.param_tol * k.period(), |t| {
        radius_at(t).unwrap_or(f64::NEG_INFINITY)
    });
    if e.value.is_infinite() {
        return Ok(Circularity {
            radius: f64::INFINITY,
            flat: true,
            argmax: None,
        });
    }
    Ok(Circularity {
        radius: e.value,
        flat: false,
        argmax: Some(k.position(e.param)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_domain;
    use std::f64::consts::FRAC_PI_2;

    fn cfg() -> GeometryConfig {
        GeometryConfig::default()
    }

    #[test]
    fn disk_tangent_radius_is_the_radius() {
        let k = make_domain("disk:r=1").unwrap();
        for t in [0.0, 0.4, 2.0, 5.5] {
            let z = k.boundary_point(t).unwrap();
            let r = r_needed(&k, &z, &cfg()).unwrap();
            assert!((r.radius - 1.0).abs() < 1e-10, "{r:?}");
            let c = pointwise_turan_constant(&k, &z, &cfg()).unwrap();
            assert!((c - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn ellipse_minor_vertex() {
        let k = make_domain("ellipse:b=0.5").unwrap();
        let z = k.boundary_point(FRAC_PI_2).unwrap();
        let r = r_needed(&k, &z, &cfg()).unwrap();
        assert!((r.radius - 2.0).abs() < 1e-12);
        // Oracle: dense sup scan of the same ratio without the diagonal splice.
        let m = 100_000;
        let scan = (1..m)
            .map(|i| {
                let w = k.position(FRAC_PI_2 + std::f64::consts::TAU * i as f64 / m as f64);
                let v = z.position - w;
                v.norm_sqr() / (2.0 * dot(v, z.normal))
            })
            .fold(0.0, f64::max);
        assert!((scan - 2.0).abs() < 1e-6, "{scan}");
        let c = pointwise_turan_constant(&k, &z, &cfg()).unwrap();
        assert!((c - 0.25).abs() < 1e-12);
    }

    #[test]
    fn square_side_is_flat() {
        let q = make_domain("square").unwrap();
        let z = q.boundary_point(0.5 * 2f64.sqrt()).unwrap();
        let r = r_needed(&q, &z, &cfg()).unwrap();
        assert!(r.flat && r.radius.is_infinite());
        assert_eq!(pointwise_turan_constant(&q, &z, &cfg()).unwrap(), 0.0);
        // A vertex sees the circumscribed circle.
        let v = q.boundary_point(0.0).unwrap();
        assert!((r_needed(&q, &v, &cfg()).unwrap().radius - 1.0).abs() < 1e-9);
    }

    #[test]
    fn inconsistent_normal_is_reported() {
        let k = make_domain("disk:r=1").unwrap();
        let mut z = k.boundary_point(0.0).unwrap();
        z.normal = -z.normal;
        assert!(matches!(r_needed(&k, &z, &cfg()), Err(Error::Geometry { .. })));
    }

    #[test]
    fn identity_between_the_two_extrema() {
        let k = make_domain("ellipse:b=0.3").unwrap();
        let c = cfg();
        let samples = BoundarySamples::new(&k, c.samples).unwrap();
        for i in 0..32 {
            let z = k.boundary_point(0.19 * i as f64).unwrap();
            let r = r_needed_sampled(&k, &samples, &z, &c).unwrap().radius;
            let t = pointwise_turan_constant_sampled(&k, &samples, &z, &c).unwrap();
            assert!((2.0 * r * t - 1.0).abs() < 1e-9, "z={} r={r} c={t}", z.position);
        }
    }

    #[test]
    fn circularity_examples() {
        let c = cfg();
        let d = make_domain("disk:r=2.5").unwrap();
        assert!((circularity_radius(&d, &c).unwrap().radius - 2.5).abs() < 1e-9);
        let e = make_domain("ellipse:b=0.5").unwrap();
        let ce = circularity_radius(&e, &c).unwrap();
        assert!((ce.radius - 2.0).abs() < 1e-9, "{ce:?}");
        let p = make_domain("polygon:m=7,h=1").unwrap();
        assert!(circularity_radius(&p, &c).unwrap().flat);
    }
}
