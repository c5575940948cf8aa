use num_complex::Complex64;

use super::{dot, ConvexDomain, DomainKind, Point};
use crate::optimize::golden_min;

/// Nearest point of `K` to `w` (`w` itself when inside).
///
/// Exact for the disk, ellipse, polygons and interval. For `ℓ_p` balls and
/// generic curves the nearest boundary point is located by a 256-sample
/// scan and golden-section refinement of the distance.
pub fn project(k: &ConvexDomain, w: Point) -> Point {
    match k.kind() {
        DomainKind::Disk { r } => {
            let d = w.norm();
            if d <= *r {
                w
            } else {
                w * (r / d)
            }
        }
        DomainKind::Ellipse { b } => {
            if w.re * w.re + (w.im / b) * (w.im / b) <= 1.0 {
                w
            } else {
                ellipse_nearest(*b, w)
            }
        }
        DomainKind::LpBall { p, b } => {
            if w.re.abs().powf(*p) + (w.im / b).abs().powf(*p) <= 1.0 {
                w
            } else {
                nearest_on_curve(k, w).1
            }
        }
        DomainKind::Square | DomainKind::RegularPolygon { .. } => polygon_project(k.vertices(), w),
        DomainKind::Interval { length } => {
            let h = 0.5 * length;
            Complex64::new(w.re.clamp(-h, h), 0.0)
        }
        DomainKind::Generic(_) => {
            let (t, q) = nearest_on_curve(k, w);
            let n = k.point_with_arc(t, 0.0).normal;
            if dot(w - q, n) <= 0.0 {
                w
            } else {
                q
            }
        }
    }
}

/// Distance from `w` to `K`; for `w ∉ K` this equals the support-function
/// gap `max_θ (⟨w, e^{iθ}⟩ − h_K(θ))`.
pub fn distance(k: &ConvexDomain, w: Point) -> f64 {
    (w - project(k, w)).norm()
}

/// Membership up to tolerance `tol` (absolute, in plane units).
pub fn contains(k: &ConvexDomain, w: Point, tol: f64) -> bool {
    distance(k, w) <= tol
}

fn nearest_on_curve(k: &ConvexDomain, w: Point) -> (f64, Point) {
    let m = 256;
    let step = k.period() / m as f64;
    let (mut best_t, mut best_d) = (0.0, f64::INFINITY);
    for i in 0..m {
        let t = step * i as f64;
        let d = (k.position(t) - w).norm_sqr();
        if d < best_d {
            best_d = d;
            best_t = t;
        }
    }
    let (t, _) = golden_min(
        |t| (k.position(t) - w).norm_sqr(),
        best_t - step,
        best_t + step,
        1e-14 * k.period(),
    );
    (t, k.position(t))
}

/// Nearest point on the ellipse `x² + (y/b)² = 1` to an exterior point.
fn ellipse_nearest(b: f64, w: Point) -> Point {
    let (y0, y1) = (w.re.abs(), w.im.abs());
    let b2 = b * b;
    // F(t) = (y0/(t+1))² + (b y1/(t+b²))² − 1 decreases on t ≥ 0 with F(0) > 0.
    let f = |t: f64| (y0 / (t + 1.0)).powi(2) + (b * y1 / (t + b2)).powi(2) - 1.0;
    let (mut lo, mut hi) = (0.0, (y0 * y0 + b2 * y1 * y1).sqrt() + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-17 * hi {
            break;
        }
    }
    let t = 0.5 * (lo + hi);
    let x0 = y0 / (t + 1.0);
    let x1 = b2 * y1 / (t + b2);
    Complex64::new(x0.copysign(w.re), x1.copysign(w.im))
}

fn polygon_project(vertices: &[Point], w: Point) -> Point {
    let n = vertices.len();
    let inside = (0..n).all(|i| {
        let a = vertices[i];
        let e = vertices[(i + 1) % n] - a;
        (e.conj() * (w - a)).im >= 0.0
    });
    if inside {
        return w;
    }
    (0..n)
        .map(|i| {
            let a = vertices[i];
            let e = vertices[(i + 1) % n] - a;
            let u = (dot(w - a, e) / e.norm_sqr()).clamp(0.0, 1.0);
            a + e * u
        })
        .min_by(|p, q| (p - w).norm_sqr().total_cmp(&(q - w).norm_sqr()))
        .expect("polygon has vertices")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_domain;

    fn c(x: f64, y: f64) -> Point {
        Complex64::new(x, y)
    }

    #[test]
    fn catalogue_examples() {
        let d = make_domain("disk:r=1").unwrap();
        assert!((project(&d, c(2.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-15);
        let q = make_domain("square").unwrap();
        assert_eq!(project(&q, c(0.0, 0.0)), c(0.0, 0.0));
        let e = make_domain("ellipse:b=0.5").unwrap();
        assert!((project(&e, c(0.0, 1.0)) - c(0.0, 0.5)).norm() < 1e-12);
    }

    #[test]
    fn ellipse_projection_matches_dense_scan() {
        let e = make_domain("ellipse:b=0.5").unwrap();
        for &w in &[c(0.0, 1.0), c(1.3, 0.9), c(-2.0, 0.1), c(0.2, -0.7)] {
            let p = project(&e, w);
            let m = 200_000;
            let best = (0..m)
                .map(|i| e.position(std::f64::consts::TAU * i as f64 / m as f64))
                .min_by(|a, b| (a - w).norm().total_cmp(&(b - w).norm()))
                .unwrap();
            assert!(((p - w).norm() - (best - w).norm()).abs() < 1e-9, "{w}");
        }
    }

    #[test]
    fn containment() {
        let q = make_domain("square").unwrap();
        assert!(contains(&q, c(0.5, 0.5), 0.0));
        assert!(!contains(&q, c(0.6, 0.6), 1e-9));
        let lp = make_domain("lp:p=1.5,b=1").unwrap();
        assert!(contains(&lp, c(0.5, 0.5), 0.0));
        let out = c(0.7, 0.7);
        let p = project(&lp, out);
        assert!((p.re.abs().powf(1.5) + p.im.abs().powf(1.5) - 1.0).abs() < 1e-9);
        let i = make_domain("interval:L=2").unwrap();
        assert!(contains(&i, c(0.3, 0.0), 1e-12));
        assert!(!contains(&i, c(0.3, 0.1), 1e-3));
    }
}
