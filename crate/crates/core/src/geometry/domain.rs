use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use super::curve::{spline_from_csv, ParametricCurve, SimilarCurve};
use super::Point;
use crate::error::{Error, Result};
use crate::optimize::gauss_legendre;

/// Catalogue shapes plus user-supplied smooth boundaries.
#[derive(Clone)]
pub enum DomainKind {
    /// Disk of radius `r` centred at the origin.
    Disk { r: f64 },
    /// Ellipse with axes `[-1, 1]` and `[-ib, ib]`, `0 < b ≤ 1`.
    Ellipse { b: f64 },
    /// `{|x|^p + |y/b|^p ≤ 1}` with `1 < p < ∞`, `0 < b ≤ 1`.
    LpBall { p: f64, b: f64 },
    /// Square with diagonal `[-1, 1]` (vertices `±1`, `±i`).
    Square,
    /// Regular `m`-gon with side `h`, centred at the origin, one vertex on
    /// the positive real axis.
    RegularPolygon { m: usize, h: f64 },
    /// Segment `[-L/2, L/2]` on the real axis. Degenerate (no interior).
    Interval { length: f64 },
    /// Smooth strictly convex boundary given as a curve.
    Generic(Arc<dyn ParametricCurve>),
}

impl std::fmt::Debug for DomainKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Disk { r } => write!(f, "Disk {{ r: {r} }}"),
            Self::Ellipse { b } => write!(f, "Ellipse {{ b: {b} }}"),
            Self::LpBall { p, b } => write!(f, "LpBall {{ p: {p}, b: {b} }}"),
            Self::Square => write!(f, "Square"),
            Self::RegularPolygon { m, h } => write!(f, "RegularPolygon {{ m: {m}, h: {h} }}"),
            Self::Interval { length } => write!(f, "Interval {{ length: {length} }}"),
            Self::Generic(c) => write!(f, "Generic({c:?})"),
        }
    }
}

/// Local first-order data at a boundary parameter.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Frame {
    pub position: Point,
    /// Raw argument of the right (outgoing) tangent, in `(-π, π]`.
    pub raw_angle: f64,
    /// `α₊ − α₋`; zero away from vertices.
    pub jump: f64,
    /// Curvature; `None` at a vertex, `+∞` at `ℓ_p` corner points with `p < 2`.
    pub kappa: Option<f64>,
}

/// A planar convex domain (or the degenerate interval).
#[derive(Clone, Debug)]
pub struct ConvexDomain {
    kind: DomainKind,
    descriptor: String,
    vertices: Vec<Point>,
    vertex_params: Vec<f64>,
    period: f64,
    alpha_ref: f64,
}

/// Relative tolerance for recognising a polygon vertex parameter.
const VERTEX_SNAP: f64 = 1e-12;

impl ConvexDomain {
    pub fn disk(r: f64) -> Result<Self> {
        positive("r", r)?;
        Ok(Self::build(DomainKind::Disk { r }, format!("disk:r={r}")))
    }

    pub fn ellipse(b: f64) -> Result<Self> {
        unit_range("b", b)?;
        Ok(Self::build(DomainKind::Ellipse { b }, format!("ellipse:b={b}")))
    }

    pub fn lp_ball(p: f64, b: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::ParameterRange {
                name: "p",
                value: p,
                expected: "1 < p < ∞",
            });
        }
        unit_range("b", b)?;
        Ok(Self::build(
            DomainKind::LpBall { p, b },
            format!("lp:p={p},b={b}"),
        ))
    }

    pub fn square() -> Self {
        Self::build(DomainKind::Square, "square".into())
    }

    pub fn regular_polygon(m: usize, h: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::ParameterRange {
                name: "m",
                value: m as f64,
                expected: "m ≥ 3",
            });
        }
        positive("h", h)?;
        Ok(Self::build(
            DomainKind::RegularPolygon { m, h },
            format!("polygon:m={m},h={h}"),
        ))
    }

    pub fn interval(length: f64) -> Result<Self> {
        positive("L", length)?;
        Ok(Self::build(
            DomainKind::Interval { length },
            format!("interval:L={length}"),
        ))
    }

    /// Wraps a user curve. The curve is sampled to confirm it is convex and
    /// counterclockwise.
    pub fn generic(curve: Arc<dyn ParametricCurve>, descriptor: impl Into<String>) -> Result<Self> {
        let period = curve.period();
        if !(period > 0.0 && period.is_finite()) {
            return Err(Error::NotConvex(format!("invalid period {period}")));
        }
        let pts: Vec<Point> = (0..512)
            .map(|i| curve.position(period * i as f64 / 512.0))
            .collect();
        super::curve::check_convex_polygon(&pts)?;
        Ok(Self::build(DomainKind::Generic(curve), descriptor.into()))
    }

    pub fn generic_from_csv(path: &Path) -> Result<Self> {
        let spline = spline_from_csv(path)?;
        Self::generic(Arc::new(spline), format!("generic:file={}", path.display()))
    }

    fn build(kind: DomainKind, descriptor: String) -> Self {
        let vertices = match &kind {
            DomainKind::Square => regular_vertices(4, 1.0),
            DomainKind::RegularPolygon { m, h } => {
                regular_vertices(*m, h / (2.0 * (PI / *m as f64).sin()))
            }
            _ => Vec::new(),
        };
        let mut vertex_params = Vec::with_capacity(vertices.len() + 1);
        let mut acc = 0.0;
        for i in 0..vertices.len() {
            vertex_params.push(acc);
            acc += (vertices[(i + 1) % vertices.len()] - vertices[i]).norm();
        }
        let period = match &kind {
            DomainKind::Square | DomainKind::RegularPolygon { .. } => acc,
            DomainKind::Generic(c) => c.period(),
            _ => TAU,
        };
        if !vertices.is_empty() {
            vertex_params.push(period);
        }
        let mut dom = Self {
            kind,
            descriptor,
            vertices,
            vertex_params,
            period,
            alpha_ref: 0.0,
        };
        if !dom.is_degenerate() {
            dom.alpha_ref = dom.frame(0.0).raw_angle;
        }
        dom
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    /// Canonical descriptor string (round-trips through [`make_domain`]
    /// for catalogue shapes).
    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    /// Parameter period of the boundary traversal. Arc length for polygons,
    /// `2π` for the other catalogue shapes.
    pub fn period(&self) -> f64 {
        self.period
    }

    /// True for the interval, which has empty interior.
    pub fn is_degenerate(&self) -> bool {
        matches!(self.kind, DomainKind::Interval { .. })
    }

    pub fn is_polygon(&self) -> bool {
        !self.vertices.is_empty()
    }

    /// Polygon vertices in counterclockwise order (empty for curved shapes).
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Parameters of the polygon vertices.
    pub fn vertex_params(&self) -> &[f64] {
        match self.vertex_params.split_last() {
            Some((_, head)) => head,
            None => &[],
        }
    }

    /// Returns an error naming `op` if the domain has no interior.
    pub fn require_interior(&self, op: &'static str) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::Degenerate(op))
        } else {
            Ok(())
        }
    }

    /// A point in the interior (the centre for catalogue shapes).
    pub fn anchor(&self) -> Point {
        match &self.kind {
            DomainKind::Generic(c) => {
                let n = 256;
                (0..n)
                    .map(|i| c.position(c.period() * i as f64 / n as f64))
                    .sum::<Point>()
                    / n as f64
            }
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Image of the domain under `z ↦ map·z + shift`, as a generic domain.
    pub fn similarity(&self, map: Complex64, shift: Complex64) -> Result<Self> {
        self.require_interior("similarity")?;
        let inner: Arc<dyn ParametricCurve> = match &self.kind {
            DomainKind::Generic(c) => c.clone(),
            _ => Arc::new(CatalogueCurve(self.clone())),
        };
        let curve = SimilarCurve { inner, map, shift };
        let desc = format!(
            "similar({};map={}{:+}i;shift={}{:+}i)",
            self.descriptor, map.re, map.im, shift.re, shift.im
        );
        Self::generic(Arc::new(curve), desc)
    }

    pub fn position(&self, t: f64) -> Point {
        match &self.kind {
            DomainKind::Disk { r } => Complex64::from_polar(*r, t),
            DomainKind::Ellipse { b } => Complex64::new(t.cos(), b * t.sin()),
            DomainKind::LpBall { p, b } => {
                let (r, _, _) = lp_polar(*p, *b, t);
                Complex64::from_polar(r, t)
            }
            DomainKind::Square | DomainKind::RegularPolygon { .. } => {
                let (k, u) = self.edge_at(t);
                let e = self.edge(k);
                self.vertices[k] + e * u
            }
            DomainKind::Interval { length } => Complex64::new(0.5 * length * t.cos(), 0.0),
            DomainKind::Generic(c) => c.position(t),
        }
    }

    /// Speed `|γ'(t)|` (used for arc length).
    pub(crate) fn speed(&self, t: f64) -> f64 {
        match &self.kind {
            DomainKind::Disk { r } => *r,
            DomainKind::Ellipse { b } => t.sin().hypot(b * t.cos()),
            DomainKind::LpBall { p, b } => {
                let (r, r1, _) = lp_polar(*p, *b, t);
                r.hypot(r1)
            }
            DomainKind::Square | DomainKind::RegularPolygon { .. } => 1.0,
            DomainKind::Interval { length } => 0.5 * length * t.sin().abs(),
            DomainKind::Generic(c) => c.derivatives(t).0.norm(),
        }
    }

    fn edge(&self, k: usize) -> Point {
        let n = self.vertices.len();
        let e = self.vertices[(k + 1) % n] - self.vertices[k];
        e / e.norm()
    }

    /// Edge index and offset along it for a polygon parameter.
    fn edge_at(&self, t: f64) -> (usize, f64) {
        let t = t.rem_euclid(self.period);
        let n = self.vertices.len();
        let k = match self
            .vertex_params
            .binary_search_by(|v| v.partial_cmp(&t).unwrap_or(std::cmp::Ordering::Less))
        {
            Ok(k) => k,
            Err(k) => k - 1,
        }
        .min(n - 1);
        (k, t - self.vertex_params[k])
    }

    /// Index of the polygon vertex at parameter `t`, if any.
    pub(crate) fn vertex_at(&self, t: f64) -> Option<usize> {
        if self.vertices.is_empty() {
            return None;
        }
        let t = t.rem_euclid(self.period);
        let tol = VERTEX_SNAP * self.period;
        let n = self.vertices.len();
        self.vertex_params
            .iter()
            .position(|&v| (v - t).abs() <= tol)
            .map(|k| k % n)
    }

    pub(crate) fn frame(&self, t: f64) -> Frame {
        match &self.kind {
            DomainKind::Disk { r } => Frame {
                position: Complex64::from_polar(*r, t),
                raw_angle: (Complex64::i() * Complex64::from_polar(1.0, t)).arg(),
                jump: 0.0,
                kappa: Some(1.0 / r),
            },
            DomainKind::Ellipse { b } => {
                let (s, c) = t.sin_cos();
                let d1 = Complex64::new(-s, b * c);
                Frame {
                    position: Complex64::new(c, b * s),
                    raw_angle: d1.arg(),
                    jump: 0.0,
                    kappa: Some(b / (s * s + b * b * c * c).powf(1.5)),
                }
            }
            DomainKind::LpBall { p, b } => {
                let (r, r1, r2) = lp_polar(*p, *b, t);
                let e = Complex64::from_polar(1.0, t);
                let d1 = Complex64::new(r1, r) * e;
                let kappa = if r2.is_finite() {
                    (r * r + 2.0 * r1 * r1 - r * r2) / (r * r + r1 * r1).powf(1.5)
                } else {
                    f64::INFINITY
                };
                Frame {
                    position: e * r,
                    raw_angle: d1.arg(),
                    jump: 0.0,
                    kappa: Some(kappa.max(0.0)),
                }
            }
            DomainKind::Square | DomainKind::RegularPolygon { .. } => {
                let n = self.vertices.len();
                if let Some(k) = self.vertex_at(t) {
                    let out = self.edge(k);
                    let inc = self.edge((k + n - 1) % n);
                    Frame {
                        position: self.vertices[k],
                        raw_angle: out.arg(),
                        jump: (out * inc.conj()).arg(),
                        kappa: None,
                    }
                } else {
                    let (k, u) = self.edge_at(t);
                    let e = self.edge(k);
                    Frame {
                        position: self.vertices[k] + e * u,
                        raw_angle: e.arg(),
                        jump: 0.0,
                        kappa: Some(0.0),
                    }
                }
            }
            DomainKind::Interval { length } => Frame {
                position: Complex64::new(0.5 * length * t.cos(), 0.0),
                raw_angle: if t.rem_euclid(TAU) < PI { PI } else { 0.0 },
                jump: 0.0,
                kappa: Some(0.0),
            },
            DomainKind::Generic(c) => {
                let (d1, d2) = c.derivatives(t);
                let kappa = (d1.conj() * d2).im / d1.norm().powi(3);
                Frame {
                    position: c.position(t),
                    raw_angle: d1.arg(),
                    jump: 0.0,
                    kappa: Some(kappa),
                }
            }
        }
    }

    /// Unwrapped right tangent angle `α₊(t)` in `[α₊(0), α₊(0) + 2π)`.
    pub(crate) fn unwrap_angle(&self, raw: f64) -> f64 {
        self.alpha_ref + (raw - self.alpha_ref).rem_euclid(TAU)
    }

    /// Arc length of the boundary between parameters `a ≤ b`.
    pub fn arc_length(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        match &self.kind {
            DomainKind::Disk { r } => r * (b - a),
            DomainKind::Square | DomainKind::RegularPolygon { .. } => b - a,
            _ => {
                let mut breaks = vec![a];
                if let DomainKind::LpBall { .. } = self.kind {
                    // |γ'| is only Hölder at the axis points; split there.
                    let mut k = (a / FRAC_PI_2).floor() + 1.0;
                    while k * FRAC_PI_2 < b {
                        breaks.push(k * FRAC_PI_2);
                        k += 1.0;
                    }
                }
                breaks.push(b);
                let panel = self.period / 512.0;
                breaks
                    .windows(2)
                    .map(|w| {
                        let pieces = ((w[1] - w[0]) / panel).ceil().max(1.0) as usize;
                        let h = (w[1] - w[0]) / pieces as f64;
                        (0..pieces)
                            .map(|i| {
                                let lo = w[0] + h * i as f64;
                                gauss_legendre(|t| self.speed(t), lo, lo + h)
                            })
                            .sum::<f64>()
                    })
                    .sum()
            }
        }
    }

    /// Length of the boundary (twice the length for the interval, which is
    /// traversed out and back).
    pub fn perimeter(&self) -> f64 {
        self.arc_length(0.0, self.period)
    }
}

/// A catalogue domain viewed as a [`ParametricCurve`] with analytic first
/// derivative and a second derivative consistent with its curvature.
struct CatalogueCurve(ConvexDomain);

impl ParametricCurve for CatalogueCurve {
    fn period(&self) -> f64 {
        self.0.period
    }

    fn position(&self, t: f64) -> Point {
        self.0.position(t)
    }

    fn derivatives(&self, t: f64) -> (Point, Point) {
        let f = self.0.frame(t);
        let speed = self.0.speed(t);
        let tangent = Complex64::from_polar(1.0, f.raw_angle);
        let kappa = f.kappa.unwrap_or(0.0);
        // Only the normal component of γ'' matters for curvature; supply it
        // exactly so that the similar image has the same curvature.
        let d2 = Complex64::i() * tangent * (kappa * speed * speed);
        (tangent * speed, d2)
    }
}

fn regular_vertices(m: usize, circumradius: f64) -> Vec<Point> {
    (0..m)
        .map(|k| Complex64::from_polar(circumradius, TAU * k as f64 / m as f64))
        .collect()
}

/// Polar radius of the `ℓ_p`-ellipse and its first two derivatives in the
/// polar angle.
pub(crate) fn lp_polar(p: f64, b: f64, th: f64) -> (f64, f64, f64) {
    let (s, c) = th.sin_cos();
    let u = s / b;
    let (ac, au) = (c.abs(), u.abs());
    let g = ac.powf(p) + au.powf(p);
    let g1 = -p * ac.powf(p - 1.0) * c.signum() * s + p * au.powf(p - 1.0) * u.signum() * c / b;
    let g2 = p * (p - 1.0) * (pow_times(ac, p - 2.0, s * s) + pow_times(au, p - 2.0, c * c / (b * b)))
        - p * g;
    let r = g.powf(-1.0 / p);
    let r1 = -g.powf(-1.0 / p - 1.0) * g1 / p;
    let r2 = -(-(1.0 / p + 1.0) * g.powf(-1.0 / p - 2.0) * g1 * g1 + g.powf(-1.0 / p - 1.0) * g2) / p;
    (r, r1, r2)
}

/// `x^e * w` with the convention `0^e * 0 = 0` for negative `e`.
fn pow_times(x: f64, e: f64, w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        x.powf(e) * w
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterRange {
            name,
            value: v,
            expected: "positive and finite",
        })
    }
}

fn unit_range(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterRange {
            name,
            value: v,
            expected: "0 < b ≤ 1",
        })
    }
}

/// Parses a domain descriptor:
/// `disk:r=<f>`, `ellipse:b=<f>`, `lp:p=<f>,b=<f>`, `square`,
/// `polygon:m=<int>,h=<f>`, `interval:L=<f>`, `generic:file=<path>`.
pub fn make_domain(descriptor: &str) -> Result<ConvexDomain> {
    let bad = |reason: String| Error::Descriptor {
        descriptor: descriptor.to_string(),
        reason,
    };
    let (name, rest) = match descriptor.split_once(':') {
        Some((n, r)) => (n.trim(), r.trim()),
        None => (descriptor.trim(), ""),
    };
    let mut params = BTreeMap::new();
    if !rest.is_empty() {
        for item in rest.split(',') {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got `{item}`")))?;
            if params.insert(k.trim(), v.trim()).is_some() {
                return Err(bad(format!("duplicate key `{}`", k.trim())));
            }
        }
    }
    let allowed: &[&str] = match name {
        "disk" => &["r"],
        "ellipse" => &["b"],
        "lp" => &["p", "b"],
        "square" => &[],
        "polygon" => &["m", "h"],
        "interval" => &["L"],
        "generic" => &["file"],
        other => return Err(bad(format!("unknown domain kind `{other}`"))),
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(k)) {
        return Err(bad(format!("unknown key `{k}` for `{name}`")));
    }
    if let Some(k) = allowed.iter().find(|k| !params.contains_key(*k)) {
        return Err(bad(format!("missing key `{k}` for `{name}`")));
    }
    let num = |k: &str| -> Result<f64> {
        params[k]
            .parse::<f64>()
            .map_err(|e| bad(format!("`{k}`: {e}")))
    };
    match name {
        "disk" => ConvexDomain::disk(num("r")?),
        "ellipse" => ConvexDomain::ellipse(num("b")?),
        "lp" => ConvexDomain::lp_ball(num("p")?, num("b")?),
        "square" => Ok(ConvexDomain::square()),
        "polygon" => {
            let m = params["m"]
                .parse::<usize>()
                .map_err(|e| bad(format!("`m`: {e}")))?;
            ConvexDomain::regular_polygon(m, num("h")?)
        }
        "interval" => ConvexDomain::interval(num("L")?),
        "generic" => ConvexDomain::generic_from_csv(Path::new(params["file"])),
        _ => unreachable!(),
    }
}
