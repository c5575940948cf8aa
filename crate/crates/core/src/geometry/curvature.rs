use super::{ConvexDomain, DomainKind, GeometryConfig};
use crate::error::{Error, Result};
use crate::optimize::scan_refine_min;

/// Curvature of the first-quadrant arc `y = b(1 − x^p)^{1/p}` of the
/// `ℓ_p`-ellipse at abscissa `x ∈ [0, 1]`, endpoints by their limits.
pub fn lp_curvature(p: f64, b: f64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::ParameterRange {
            name: "x",
            value: x,
            expected: "0 ≤ x ≤ 1",
        });
    }
    let endpoint = |at_one: bool| -> f64 {
        if p < 2.0 {
            f64::INFINITY
        } else if p > 2.0 {
            0.0
        } else if at_one {
            1.0 / (b * b)
        } else {
            b
        }
    };
    if x == 0.0 {
        return Ok(endpoint(false));
    }
    let xp = x.powf(p);
    let rest = 1.0 - xp;
    if rest <= 0.0 {
        return Ok(endpoint(true));
    }
    let num = (p - 1.0) * b * x.powf(p - 2.0) * rest.powf(1.0 / p - 2.0);
    let slope2 = b * b * x.powf(2.0 * p - 2.0) * rest.powf(2.0 / p - 2.0);
    Ok(num / (1.0 + slope2).powf(1.5))
}

/// Essential infimum of the boundary curvature.
///
/// Closed forms for the disk, ellipse, polygons and `ℓ_p` balls with
/// `p ≥ 2`; for `1 < p < 2` the `ℓ_p` curvature formula is minimised over
/// the first-quadrant arc; generic curves are scanned and refined. Vertices
/// (curvature undefined) are ignored.
pub fn curvature_min(k: &ConvexDomain, cfg: &GeometryConfig) -> f64 {
    match k.kind() {
        DomainKind::Disk { r } => 1.0 / r,
        DomainKind::Ellipse { b } => *b,
        DomainKind::Square | DomainKind::RegularPolygon { .. } | DomainKind::Interval { .. } => 0.0,
        DomainKind::LpBall { p, b } => {
            if *p > 2.0 {
                0.0
            } else if *p == 2.0 {
                *b
            } else {
                lp_curvature_min(*p, *b, cfg)
            }
        }
        DomainKind::Generic(_) => {
            let m = cfg.samples.max(64);
            let step = k.period() / m as f64;
            let params: Vec<f64> = (0..m).map(|i| step * i as f64).collect();
            let kappa = |t: f64| k.frame(t).kappa.unwrap_or(f64::INFINITY);
            let vals: Vec<f64> = params.iter().map(|&t| kappa(t)).collect();
            scan_refine_min(&params, &vals, step, true, cfg.refine_keep, 1e-12 * k.period(), kappa)
                .value
                .max(0.0)
        }
    }
}

fn lp_curvature_min(p: f64, b: f64, cfg: &GeometryConfig) -> f64 {
    let m = cfg.samples.max(64);
    let step = 1.0 / m as f64;
    let params: Vec<f64> = (1..m).map(|i| step * i as f64).collect();
    let f = |x: f64| lp_curvature(p, b, x.clamp(0.0, 1.0)).unwrap_or(f64::INFINITY);
    let vals: Vec<f64> = params.iter().map(|&x| f(x)).collect();
    scan_refine_min(&params, &vals, step, false, cfg.refine_keep, 1e-14, f).value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_domain;

    #[test]
    fn unit_circle_curvature_is_one() {
        for x in [0.0, 0.1, 0.5, 0.9, 0.999, 1.0] {
            assert!((lp_curvature(2.0, 1.0, x).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_point_values() {
        let p: f64 = 1.5;
        let x0 = 2f64.powf(-1.0 / p);
        let k = lp_curvature(p, 1.0, x0).unwrap();
        assert!((k - (p - 1.0) * 2f64.powf(1.0 / p - 0.5)).abs() < 1e-12);
        assert!((k - 0.5 * 2f64.powf(1.0 / 6.0)).abs() < 1e-12);
        let b: f64 = 0.25;
        let kb = lp_curvature(p, b, x0).unwrap();
        let expect = (p - 1.0) * b * 2f64.powf(1.0 + 1.0 / p) / (1.0 + b * b).powf(1.5);
        assert!((kb - expect).abs() < 1e-12);
    }

    #[test]
    fn out_of_range_abscissa() {
        assert!(lp_curvature(1.5, 1.0, 1.1).is_err());
        assert!(lp_curvature(1.5, 1.0, -0.1).is_err());
    }

    #[test]
    fn endpoint_limits() {
        assert_eq!(lp_curvature(1.5, 1.0, 0.0).unwrap(), f64::INFINITY);
        assert_eq!(lp_curvature(1.5, 1.0, 1.0).unwrap(), f64::INFINITY);
        assert_eq!(lp_curvature(3.0, 1.0, 0.0).unwrap(), 0.0);
        assert!((lp_curvature(2.0, 0.5, 1.0).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn catalogue_minima() {
        let cfg = GeometryConfig::default();
        let e = make_domain("ellipse:b=0.3").unwrap();
        assert_eq!(curvature_min(&e, &cfg), 0.3);
        let lp = make_domain("lp:p=1.5,b=1").unwrap();
        assert!((curvature_min(&lp, &cfg) - 0.5 * 2f64.powf(1.0 / 6.0)).abs() < 1e-10);
        let lp3 = make_domain("lp:p=3,b=0.5").unwrap();
        assert_eq!(curvature_min(&lp3, &cfg), 0.0);
        assert_eq!(curvature_min(&make_domain("square").unwrap(), &cfg), 0.0);
    }

    #[test]
    fn lp_minimum_agrees_with_boundary_scan() {
        // Independent route: minimum of the polar-form curvature along the
        // whole boundary.
        let cfg = GeometryConfig::default();
        let k = make_domain("lp:p=1.4,b=0.4").unwrap();
        let scan = (0..20000)
            .map(|i| k.frame(std::f64::consts::TAU * i as f64 / 20000.0).kappa.unwrap())
            .fold(f64::INFINITY, f64::min);
        let closed = curvature_min(&k, &cfg);
        assert!(closed <= scan + 1e-12);
        assert!((closed - scan).abs() < 1e-6 * closed);
    }
}
