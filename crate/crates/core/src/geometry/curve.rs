//! User-supplied boundary curves: closures with numerically differentiated
//! derivatives, periodic cubic splines fitted to CSV samples, and similarity
//! images of either.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use super::Point;
use crate::error::{Error, Result};

/// A closed, counterclockwise, twice differentiable boundary curve.
pub trait ParametricCurve: Send + Sync {
    /// Length of one full parameter period.
    fn period(&self) -> f64;

    fn position(&self, t: f64) -> Point;

    /// First and second derivatives with respect to the parameter.
    ///
    /// The default is a 5-point central difference with step
    /// [`FD_STEP_FRACTION`]` * period`.
    fn derivatives(&self, t: f64) -> (Point, Point) {
        let h = FD_STEP_FRACTION * self.period();
        let f = |k: f64| self.position(t + k * h);
        let (m2, m1, z, p1, p2) = (f(-2.0), f(-1.0), f(0.0), f(1.0), f(2.0));
        let d1 = (m2 - p2 + (p1 - m1) * 8.0) / (12.0 * h);
        let d2 = (-m2 - p2 + (p1 + m1) * 16.0 - z * 30.0) / (12.0 * h * h);
        (d1, d2)
    }
}

/// Finite-difference step as a fraction of the period (about `1e-3` for a
/// `2π`-periodic curve). The 5-point stencils have `O(h⁴)` truncation error
/// and roughly `ε/h²` rounding error in the second derivative.
pub const FD_STEP_FRACTION: f64 = 1.6e-4;

/// A boundary given as a position callable; derivatives are numerical.
pub struct FnCurve {
    period: f64,
    f: Box<dyn Fn(f64) -> Point + Send + Sync>,
}

impl FnCurve {
    pub fn new(period: f64, f: impl Fn(f64) -> Point + Send + Sync + 'static) -> Self {
        Self {
            period,
            f: Box::new(f),
        }
    }
}

impl ParametricCurve for FnCurve {
    fn period(&self) -> f64 {
        self.period
    }

    fn position(&self, t: f64) -> Point {
        (self.f)(t)
    }
}

/// Interpolating periodic cubic spline through `(t, point)` knots.
#[derive(Debug, Clone)]
pub struct PeriodicSpline {
    knots: Vec<f64>,
    points: Vec<Point>,
    second: Vec<Point>,
    period: f64,
}

impl PeriodicSpline {
    /// Fits a spline to knots `t_0 < … < t_{N-1}` covering one period `T`
    /// (the closing segment runs from `t_{N-1}` to `t_0 + T`).
    pub fn fit(knots: Vec<f64>, points: Vec<Point>, period: f64) -> Result<Self> {
        let n = knots.len();
        if n < 4 || points.len() != n {
            return Err(Error::NotConvex(format!(
                "need at least 4 boundary samples, got {n}"
            )));
        }
        let h: Vec<f64> = (0..n)
            .map(|i| {
                if i + 1 < n {
                    knots[i + 1] - knots[i]
                } else {
                    knots[0] + period - knots[n - 1]
                }
            })
            .collect();
        if h.iter().any(|&d| !(d > 0.0)) {
            return Err(Error::NotConvex(
                "parameter values must be strictly increasing".into(),
            ));
        }
        // Cyclic tridiagonal system for the second derivatives:
        // h[i-1] M[i-1] + 2(h[i-1]+h[i]) M[i] + h[i] M[i+1] = rhs[i].
        let prev = |i: usize| (i + n - 1) % n;
        let next = |i: usize| (i + 1) % n;
        let sub: Vec<f64> = (0..n).map(|i| h[prev(i)]).collect();
        let diag: Vec<f64> = (0..n).map(|i| 2.0 * (h[prev(i)] + h[i])).collect();
        let sup: Vec<f64> = h.clone();
        let rhs: Vec<Point> = (0..n)
            .map(|i| {
                ((points[next(i)] - points[i]) / h[i] - (points[i] - points[prev(i)]) / h[prev(i)])
                    * 6.0
            })
            .collect();
        let second = solve_cyclic(&sub, &diag, &sup, &rhs);
        Ok(Self {
            knots,
            points,
            second,
            period,
        })
    }

    fn locate(&self, t: f64) -> (usize, f64, f64) {
        let t0 = self.knots[0];
        let u = t0 + (t - t0).rem_euclid(self.period);
        let i = match self
            .knots
            .binary_search_by(|k| k.partial_cmp(&u).unwrap_or(std::cmp::Ordering::Less))
        {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let n = self.knots.len();
        let right = if i + 1 < n {
            self.knots[i + 1]
        } else {
            t0 + self.period
        };
        (i, u, right - self.knots[i])
    }

    fn segment(&self, t: f64) -> (Point, Point, Point) {
        let (i, u, h) = self.locate(t);
        let j = (i + 1) % self.knots.len();
        let a = (self.knots[i] + h - u) / h;
        let b = 1.0 - a;
        let (p0, p1) = (self.points[i], self.points[j]);
        let (m0, m1) = (self.second[i], self.second[j]);
        let pos = p0 * a + p1 * b + (m0 * (a * a * a - a) + m1 * (b * b * b - b)) * (h * h / 6.0);
        let d1 = (p1 - p0) / h - m0 * ((3.0 * a * a - 1.0) * h / 6.0)
            + m1 * ((3.0 * b * b - 1.0) * h / 6.0);
        let d2 = m0 * a + m1 * b;
        (pos, d1, d2)
    }
}

impl ParametricCurve for PeriodicSpline {
    fn period(&self) -> f64 {
        self.period
    }

    fn position(&self, t: f64) -> Point {
        self.segment(t).0
    }

    fn derivatives(&self, t: f64) -> (Point, Point) {
        let (_, d1, d2) = self.segment(t);
        (d1, d2)
    }
}

/// Sherman–Morrison solve of a cyclic tridiagonal system with real
/// coefficients and complex right-hand side.
fn solve_cyclic(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[Point]) -> Vec<Point> {
    let n = diag.len();
    let alpha = sup[n - 1]; // bottom-left corner
    let beta = sub[0]; // top-right corner
    let gamma = -diag[0];
    let mut bb = diag.to_vec();
    bb[0] -= gamma;
    bb[n - 1] -= alpha * beta / gamma;
    let x = thomas(sub, &bb, sup, rhs);
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    u[0] = Complex64::new(gamma, 0.0);
    u[n - 1] = Complex64::new(alpha, 0.0);
    let z = thomas(sub, &bb, sup, &u);
    let fact = (x[0] + x[n - 1] * (beta / gamma)) / (z[0] + z[n - 1] * (beta / gamma) + 1.0);
    x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect()
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[Point]) -> Vec<Point> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        d[i] = (rhs[i] - d[i - 1] * sub[i]) / m;
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - x[i + 1] * c[i];
    }
    x
}

/// Image of a curve under `z ↦ map·z + shift`.
pub struct SimilarCurve {
    pub(crate) inner: Arc<dyn ParametricCurve>,
    pub(crate) map: Complex64,
    pub(crate) shift: Complex64,
}

impl ParametricCurve for SimilarCurve {
    fn period(&self) -> f64 {
        self.inner.period()
    }

    fn position(&self, t: f64) -> Point {
        self.map * self.inner.position(t) + self.shift
    }

    fn derivatives(&self, t: f64) -> (Point, Point) {
        let (d1, d2) = self.inner.derivatives(t);
        (self.map * d1, self.map * d2)
    }
}

/// Reads `(t, x, y)` rows (one header line) and fits a periodic spline.
///
/// The samples must trace one closed loop. If the last row repeats the first
/// position it closes the loop; otherwise the closing segment gets the mean
/// parameter spacing. Clockwise data is reversed.
pub fn spline_from_csv(path: &Path) -> Result<PeriodicSpline> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    spline_from_reader(file)
}

pub fn spline_from_reader<R: std::io::Read>(reader: R) -> Result<PeriodicSpline> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut ts = Vec::new();
    let mut pts = Vec::new();
    for row in rdr.deserialize::<(f64, f64, f64)>() {
        let (t, x, y) = row?;
        ts.push(t);
        pts.push(Complex64::new(x, y));
    }
    if ts.len() < 5 {
        return Err(Error::NotConvex(format!(
            "need at least 4 distinct boundary samples, got {}",
            ts.len()
        )));
    }
    let span = ts[ts.len() - 1] - ts[0];
    let scale = pts.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1e-300);
    let period = if (pts[pts.len() - 1] - pts[0]).norm() <= 1e-12 * scale {
        ts.pop();
        pts.pop();
        span
    } else {
        span * ts.len() as f64 / (ts.len() - 1) as f64
    };
    let t0 = ts[0];
    let mut knots: Vec<f64> = ts.iter().map(|t| t - t0).collect();
    let area: f64 = (0..pts.len())
        .map(|i| {
            let (a, b) = (pts[i], pts[(i + 1) % pts.len()]);
            a.re * b.im - a.im * b.re
        })
        .sum();
    if area < 0.0 {
        // t ↦ period - t; the original first sample becomes the first knot again.
        let first = pts[0];
        pts[1..].reverse();
        pts[0] = first;
        knots = std::iter::once(0.0)
            .chain(knots[1..].iter().rev().map(|k| period - k))
            .collect();
    }
    check_convex_polygon(&pts)?;
    PeriodicSpline::fit(knots, pts, period)
}

/// Left turns everywhere and total turning `2π`.
pub(crate) fn check_convex_polygon(pts: &[Point]) -> Result<()> {
    let n = pts.len();
    let mut turning = 0.0;
    for i in 0..n {
        let e0 = pts[i] - pts[(i + n - 1) % n];
        let e1 = pts[(i + 1) % n] - pts[i];
        let turn = (e1 * e0.conj()).arg();
        if turn < -1e-9 {
            return Err(Error::NotConvex(format!(
                "right turn of {turn:e} rad at sample {i}"
            )));
        }
        turning += turn;
    }
    if (turning - std::f64::consts::TAU).abs() > 1e-6 {
        return Err(Error::NotConvex(format!(
            "total turning {turning} differs from 2π (self-intersecting or multiply wound)"
        )));
    }
    Ok(())
}

impl fmt::Debug for dyn ParametricCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParametricCurve(period = {})", self.period())
    }
}
