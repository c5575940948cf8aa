//! Closed-form lower and upper bounds on `‖p'‖ / ‖p‖` for polynomials with
//! all roots in a convex domain, with applicability checks, plus the
//! Chebyshev min-max lemma and a brute-force oracle for it.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{
    circularity_radius, curvature_min, diameter, min_width, transfinite_diameter, Circularity,
    ConvexDomain, DomainKind, GeometryConfig, Width,
};
use crate::report::Real;

/// Provenance tag of a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Theorem {
    #[serde(rename = "T1_disk")]
    Disk,
    #[serde(rename = "T2_interval")]
    Interval,
    #[serde(rename = "T2_interval_LP")]
    IntervalLp,
    #[serde(rename = "T3_ellipse")]
    Ellipse,
    #[serde(rename = "T4_circular")]
    Circular,
    #[serde(rename = "T8_sqrt_general")]
    SqrtGeneral,
    #[serde(rename = "T9_width")]
    Width,
    #[serde(rename = "T10_curvature")]
    Curvature,
    #[serde(rename = "UPPER_existence")]
    UpperExistence,
}

impl Theorem {
    pub const ALL: [Theorem; 9] = [
        Theorem::Disk,
        Theorem::Interval,
        Theorem::IntervalLp,
        Theorem::Ellipse,
        Theorem::Circular,
        Theorem::SqrtGeneral,
        Theorem::Width,
        Theorem::Curvature,
        Theorem::UpperExistence,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Theorem::Disk => "T1_disk",
            Theorem::Interval => "T2_interval",
            Theorem::IntervalLp => "T2_interval_LP",
            Theorem::Ellipse => "T3_ellipse",
            Theorem::Circular => "T4_circular",
            Theorem::SqrtGeneral => "T8_sqrt_general",
            Theorem::Width => "T9_width",
            Theorem::Curvature => "T10_curvature",
            Theorem::UpperExistence => "UPPER_existence",
        }
    }

    pub fn kind(self) -> BoundKind {
        match self {
            Theorem::UpperExistence => BoundKind::Upper,
            _ => BoundKind::Lower,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    /// Bounds the extremal factor `M_n(K)` from above (some polynomial
    /// attains at most this), not every `M(p)`.
    Upper,
}

/// Named inputs of a bound, kept in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Inputs(pub Vec<(&'static str, f64)>);

impl Inputs {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }
}

impl Serialize for Inputs {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &Real(*v))?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub theorem: Theorem,
    pub kind: BoundKind,
    /// Bound value; 0 when not applicable.
    pub value: f64,
    pub applicable: bool,
    pub reason: String,
    pub inputs: Inputs,
}

impl BoundResult {
    fn new(theorem: Theorem, value: Option<f64>, reason: impl Into<String>, inputs: Vec<(&'static str, f64)>) -> Self {
        Self {
            theorem,
            kind: theorem.kind(),
            value: value.unwrap_or(0.0),
            applicable: value.is_some(),
            reason: reason.into(),
            inputs: Inputs(inputs),
        }
    }
}

/// `n/2` on the unit disk.
pub fn bound_disk(n: usize) -> f64 {
    n as f64 / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalVariant {
    /// Constant `1/6`.
    Turan,
    /// Constant `1/(2e)`.
    Lp,
}

impl FromStr for IntervalVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "turan" => Ok(Self::Turan),
            "lp" => Ok(Self::Lp),
            other => Err(Error::UnknownVariant(other.to_string())),
        }
    }
}

/// `√n/6` or `√n/(2e)` on `[−1, 1]`, rescaled by `2/L` for an interval of
/// length `L`.
pub fn bound_interval(n: usize, variant: IntervalVariant, length: f64) -> f64 {
    let c = match variant {
        IntervalVariant::Turan => 1.0 / 6.0,
        IntervalVariant::Lp => 1.0 / (2.0 * std::f64::consts::E),
    };
    c * (n as f64).sqrt() * 2.0 / length
}

/// `(b/2)·n` for the ellipse with semi-axes 1 and `b`.
pub fn bound_ellipse(n: usize, b: f64) -> f64 {
    b / 2.0 * n as f64
}

/// `n/(2R)` for an `R`-circular domain; `None` when `R` is not finite.
pub fn bound_circular(n: usize, r: f64) -> Option<f64> {
    (r.is_finite() && r > 0.0).then(|| n as f64 / (2.0 * r))
}

/// `κ·n/2` when the curvature is at least `κ > 0` almost everywhere.
pub fn bound_curvature(n: usize, kappa: f64) -> Option<f64> {
    (kappa > 0.0).then(|| kappa * n as f64 / 2.0)
}

/// `√n/(20·d)`.
pub fn bound_sqrt_general(n: usize, d: f64) -> f64 {
    (n as f64).sqrt() / (20.0 * d)
}

/// `0.0003·w·n/d²`; `None` for zero width.
pub fn bound_width(n: usize, w: f64, d: f64) -> Option<f64> {
    (w > 0.0).then(|| 0.0003 * w * n as f64 / (d * d))
}

/// `n₀ = 2(d/16w)²·ln(d/16w)`.
pub fn existence_threshold(w: f64, d: f64) -> f64 {
    let q = d / (16.0 * w);
    2.0 * q * q * q.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperExistence {
    pub value: f64,
    pub n0: f64,
}

/// `600·w·n/d²` when `n > n₀` (always when `n₀ ≤ 0`).
pub fn upper_existence(n: usize, w: f64, d: f64) -> Option<UpperExistence> {
    if w <= 0.0 {
        return None;
    }
    let n0 = existence_threshold(w, d);
    (n0 <= 0.0 || n as f64 > n0).then(|| UpperExistence {
        value: 600.0 * w * n as f64 / (d * d),
        n0,
    })
}

/// Geometric quantities consumed by the bounds, computed once per domain.
#[derive(Debug, Clone, Serialize)]
pub struct GeometrySummary {
    pub domain: String,
    pub diameter: f64,
    pub width: Width,
    pub kappa_min: f64,
    pub circularity: Circularity,
}

impl GeometrySummary {
    pub fn compute(k: &ConvexDomain, cfg: &GeometryConfig) -> Result<Self> {
        Ok(Self {
            domain: k.descriptor().to_string(),
            diameter: diameter(k, cfg),
            width: min_width(k, cfg),
            kappa_min: curvature_min(k, cfg),
            circularity: circularity_radius(k, cfg)?,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsReport {
    pub domain: String,
    pub n: usize,
    pub bounds: Vec<BoundResult>,
    pub best_lower: BoundResult,
    pub upper: Option<BoundResult>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

/// Every bound for `(K, n)`, in the fixed order of [`Theorem::ALL`].
pub fn all_bounds(k: &ConvexDomain, n: usize, g: &GeometrySummary) -> Vec<BoundResult> {
    let nf = n as f64;
    let d = g.diameter;
    let w = g.width.value;
    let mut out = Vec::with_capacity(9);

    out.push(match k.kind() {
        DomainKind::Disk { r } => BoundResult::new(
            Theorem::Disk,
            Some(bound_disk(n) / r),
            "disk (rescaled by 1/r)",
            vec![("n", nf), ("r", *r)],
        ),
        _ => BoundResult::new(Theorem::Disk, None, "domain is not a disk", vec![("n", nf)]),
    });

    for (theorem, variant) in [(Theorem::Interval, IntervalVariant::Turan), (Theorem::IntervalLp, IntervalVariant::Lp)] {
        out.push(match k.kind() {
            DomainKind::Interval { length } => BoundResult::new(
                theorem,
                Some(bound_interval(n, variant, *length)),
                "interval (rescaled by 2/L)",
                vec![("n", nf), ("L", *length)],
            ),
            _ => BoundResult::new(theorem, None, "domain is not an interval", vec![("n", nf)]),
        });
    }

    let ellipse_b = match k.kind() {
        DomainKind::Ellipse { b } => Some(*b),
        DomainKind::LpBall { p, b } if *p == 2.0 => Some(*b),
        _ => None,
    };
    out.push(match ellipse_b {
        Some(b) => BoundResult::new(
            Theorem::Ellipse,
            Some(bound_ellipse(n, b)),
            "ellipse with semi-axes 1 and b",
            vec![("n", nf), ("b", b)],
        ),
        None => BoundResult::new(Theorem::Ellipse, None, "domain is not an ellipse", vec![("n", nf)]),
    });

    let r = g.circularity.radius;
    out.push(BoundResult::new(
        Theorem::Circular,
        bound_circular(n, r),
        if r.is_finite() {
            "R-circular with R = circularity radius"
        } else {
            "flat domain (not R-circular for any finite R)"
        },
        vec![("n", nf), ("R", r)],
    ));

    out.push(BoundResult::new(
        Theorem::SqrtGeneral,
        Some(bound_sqrt_general(n, d)),
        "every compact convex set",
        vec![("n", nf), ("d", d)],
    ));

    out.push(BoundResult::new(
        Theorem::Width,
        bound_width(n, w, d),
        if w > 0.0 { "nonempty interior" } else { "zero width" },
        vec![("n", nf), ("w", w), ("d", d)],
    ));

    let kappa = g.kappa_min;
    let kappa_reason = match k.kind() {
        DomainKind::LpBall { p, .. } if *p < 2.0 => "curvature at least kappa_min almost everywhere",
        _ if kappa > 0.0 => "curvature at least kappa_min",
        _ => "curvature vanishes somewhere (flat or degenerate boundary)",
    };
    out.push(BoundResult::new(
        Theorem::Curvature,
        bound_curvature(n, kappa),
        kappa_reason,
        vec![("n", nf), ("kappa", kappa)],
    ));

    let n0 = if w > 0.0 { existence_threshold(w, d) } else { f64::NAN };
    let up = upper_existence(n, w, d);
    let up_reason = if w <= 0.0 {
        "zero width".to_string()
    } else if up.is_some() {
        if n0 <= 0.0 {
            "n0 <= 0, always in force".to_string()
        } else {
            format!("n > n0 = {n0}")
        }
    } else {
        format!("n <= n0 = {n0}")
    };
    out.push(BoundResult::new(
        Theorem::UpperExistence,
        up.map(|u| u.value),
        up_reason,
        vec![("n", nf), ("w", w), ("d", d), ("n0", n0)],
    ));
    out
}

/// The largest applicable lower bound; the first in [`Theorem::ALL`]
/// order wins ties.
pub fn best_lower(bounds: &[BoundResult]) -> BoundResult {
    let mut best: Option<&BoundResult> = None;
    for b in bounds.iter().filter(|b| b.applicable && b.kind == BoundKind::Lower) {
        if best.is_none_or(|x| b.value > x.value) {
            best = Some(b);
        }
    }
    best.cloned().expect("the diameter bound always applies")
}

/// Full bounds report for `(K, n)`.
pub fn bounds_report(k: &ConvexDomain, n: usize, g: &GeometrySummary) -> Result<BoundsReport> {
    if n == 0 {
        return Err(Error::ParameterRange {
            name: "n",
            value: 0.0,
            expected: "n >= 1",
        });
    }
    let bounds = all_bounds(k, n, g);
    let best = best_lower(&bounds);
    let upper = bounds
        .iter()
        .find(|b| b.theorem == Theorem::UpperExistence && b.applicable)
        .cloned();
    let mut warnings = Vec::new();
    if let Some(u) = &upper {
        if best.value > u.value {
            warnings.push(format!(
                "best lower bound {} ({}) exceeds the upper bound {}",
                best.value, best.theorem, u.value
            ));
        }
    }
    let mut notes = Vec::new();
    if matches!(k.kind(), DomainKind::Square) || matches!(k.kind(), DomainKind::RegularPolygon { m: 4, .. }) {
        notes.push(
            "the square admits an order-n lower bound with an unspecified constant; \
             the numeric value here comes from the general bounds"
                .to_string(),
        );
    }
    if matches!(k.kind(), DomainKind::Interval { .. }) {
        notes.push("both interval constants are reported; best_lower takes the larger (1/(2e))".to_string());
    }
    Ok(BoundsReport {
        domain: k.descriptor().to_string(),
        n,
        bounds,
        best_lower: best,
        upper,
        warnings,
        notes,
    })
}

/// Qualitative eligibility for the order-n bound on piecewise smooth
/// domains: convex vertices, every flat side shorter than `Δ(K)/4`, and
/// curvature bounded away from zero on curved arcs. No constant is given.
#[derive(Debug, Clone, Serialize)]
pub struct ErodReport {
    pub domain: String,
    pub vertex_angles_ok: bool,
    pub flat_sides_ok: bool,
    pub curved_arcs_ok: bool,
    pub eligible: bool,
    pub transfinite_diameter: f64,
    /// `Δ(K)/4`.
    pub flat_side_limit: f64,
    pub longest_flat_side: Option<f64>,
    pub min_arc_curvature: Option<f64>,
}

pub fn erod_eligible(k: &ConvexDomain, cfg: &GeometryConfig) -> ErodReport {
    let delta = transfinite_diameter(k).value;
    let limit = delta / 4.0;
    let longest = match k.kind() {
        DomainKind::Interval { length } => Some(*length),
        _ if k.is_polygon() => {
            let v = k.vertices();
            (0..v.len()).map(|i| (v[(i + 1) % v.len()] - v[i]).norm()).reduce(f64::max)
        }
        _ => None,
    };
    let arc_kappa = if k.is_polygon() || k.is_degenerate() {
        None
    } else {
        Some(curvature_min(k, cfg))
    };
    let flat_sides_ok = longest.is_none_or(|l| l < limit);
    let curved_arcs_ok = arc_kappa.is_none_or(|c| c > 0.0);
    ErodReport {
        domain: k.descriptor().to_string(),
        vertex_angles_ok: !k.is_degenerate(),
        flat_sides_ok,
        curved_arcs_ok,
        eligible: !k.is_degenerate() && flat_sides_ok && curved_arcs_ok,
        transfinite_diameter: delta,
        flat_side_limit: limit,
        longest_flat_side: longest,
        min_arc_curvature: arc_kappa,
    }
}

/// `2(|J|/4)^k`: lower bound for `max_J Π|x − w_j|` over real `w_j`.
pub fn chebyshev_lower(j_length: f64, k: usize) -> Result<f64> {
    if !(j_length > 0.0 && j_length.is_finite()) {
        return Err(Error::ParameterRange {
            name: "J_length",
            value: j_length,
            expected: "positive and finite",
        });
    }
    if k == 0 {
        return Err(Error::ParameterRange {
            name: "k",
            value: 0.0,
            expected: "k >= 1",
        });
    }
    Ok(2.0 * (j_length / 4.0).powi(k as i32))
}

/// Default tuple budget for [`chebyshev_minmax_bruteforce`].
pub const CHEBYSHEV_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebyshevMinMax {
    pub value: f64,
    /// Minimizing nodes (lexicographically smallest among ties).
    pub nodes: Vec<f64>,
    pub tuples: u64,
}

/// Uniform grid of `m ≥ 2` points on `[a, b]`, endpoints included.
pub fn uniform_grid(a: f64, b: f64, m: usize) -> Vec<f64> {
    let m = m.max(2);
    (0..m).map(|i| a + (b - a) * i as f64 / (m - 1) as f64).collect()
}

fn multiset_count(m: u64, k: u64) -> Option<u64> {
    let mut c: u64 = 1;
    for i in 0..k {
        c = c.checked_mul(m + i)? / (i + 1);
    }
    Some(c)
}

/// `min over k-multisets {w_j} ⊂ candidates of max over the J-grid of
/// Π|x − w_j|`, by exhaustive search with pruning.
pub fn chebyshev_minmax_bruteforce(
    j: (f64, f64),
    candidates: &[f64],
    k: usize,
    grid: usize,
    budget: u64,
) -> Result<ChebyshevMinMax> {
    let (a, b) = j;
    if !(b > a) {
        return Err(Error::ParameterRange {
            name: "J",
            value: b - a,
            expected: "nonempty interval u < v",
        });
    }
    if k == 0 || k > 3 {
        return Err(Error::Budget(format!("k = {k}; the exhaustive search supports 1 <= k <= 3")));
    }
    let mut cand: Vec<f64> = candidates.iter().copied().filter(|x| x.is_finite()).collect();
    cand.sort_by(f64::total_cmp);
    cand.dedup();
    if cand.is_empty() {
        return Err(Error::Budget("empty candidate set".into()));
    }
    let tuples = multiset_count(cand.len() as u64, k as u64).filter(|&t| t <= budget);
    let Some(tuples) = tuples else {
        return Err(Error::Budget(format!(
            "{} candidates with k = {k} exceed the tuple budget {budget}",
            cand.len()
        )));
    };

    let xs = uniform_grid(a, b, grid);
    let order = coarse_to_fine(xs.len());
    let xs: Vec<f64> = order.iter().map(|&i| xs[i]).collect();

    let eval = |ws: &[usize], bound: f64| -> Option<f64> {
        let mut worst = 0.0f64;
        for &x in &xs {
            let p = ws.iter().fold(1.0, |acc, &i| acc * (x - cand[i]).abs());
            if p > bound {
                return None;
            }
            worst = worst.max(p);
        }
        Some(worst)
    };

    // Start from the candidates nearest the Chebyshev nodes.
    let seed: Vec<usize> = {
        let mut s: Vec<usize> = (0..k)
            .map(|j| {
                let t = (std::f64::consts::PI * (2 * (k - j) - 1) as f64 / (2 * k) as f64).cos();
                let x = 0.5 * (a + b) + 0.5 * (b - a) * t;
                (0..cand.len())
                    .min_by(|&p, &q| (cand[p] - x).abs().total_cmp(&(cand[q] - x).abs()))
                    .unwrap()
            })
            .collect();
        s.sort_unstable();
        s
    };
    let start = eval(&seed, f64::INFINITY).unwrap();
    let shared = AtomicU64::new(start.to_bits());

    let best = (0..cand.len())
        .into_par_iter()
        .filter_map(|i0| {
            let mut local: Option<(f64, Vec<usize>)> = None;
            let mut ws = vec![i0; k];
            let mut visit = |ws: &[usize]| {
                let bound = f64::from_bits(shared.load(Ordering::Relaxed));
                if let Some(v) = eval(ws, bound) {
                    if local.as_ref().is_none_or(|(lv, _)| v < *lv) {
                        local = Some((v, ws.to_vec()));
                    }
                    shared.fetch_min(v.to_bits(), Ordering::Relaxed);
                }
            };
            match k {
                1 => visit(&ws),
                2 => {
                    for i1 in i0..cand.len() {
                        ws[1] = i1;
                        visit(&ws);
                    }
                }
                _ => {
                    for i1 in i0..cand.len() {
                        for i2 in i1..cand.len() {
                            ws[1] = i1;
                            ws[2] = i2;
                            visit(&ws);
                        }
                    }
                }
            }
            local
        })
        .collect::<Vec<_>>()
        .into_iter()
        .chain(std::iter::once((start, seed)))
        .min_by(|x, y| x.0.total_cmp(&y.0).then_with(|| x.1.cmp(&y.1)))
        .unwrap();

    Ok(ChebyshevMinMax {
        value: best.0,
        nodes: best.1.iter().map(|&i| cand[i]).collect(),
        tuples,
    })
}

/// Index order visiting endpoints first, then successively finer halvings,
/// so that bad tuples are rejected after few evaluations.
fn coarse_to_fine(m: usize) -> Vec<usize> {
    let mut seen = vec![false; m];
    let mut out = Vec::with_capacity(m);
    let mut step = m.saturating_sub(1).max(1).next_power_of_two();
    loop {
        for i in (0..m).step_by(step) {
            if !seen[i] {
                seen[i] = true;
                out.push(i);
            }
        }
        if !seen[m - 1] {
            seen[m - 1] = true;
            out.push(m - 1);
        }
        if step == 1 {
            break;
        }
        step /= 2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_domain;

    fn report(desc: &str, n: usize) -> BoundsReport {
        let k = make_domain(desc).unwrap();
        let g = GeometrySummary::compute(&k, &GeometryConfig::default()).unwrap();
        bounds_report(&k, n, &g).unwrap()
    }

    fn get(r: &BoundsReport, t: Theorem) -> &BoundResult {
        r.bounds.iter().find(|b| b.theorem == t).unwrap()
    }

    #[test]
    fn formula_values() {
        assert_eq!(bound_disk(4), 2.0);
        assert_eq!(bound_disk(1), 0.5);
        assert_eq!(bound_disk(100), 50.0);
        assert!((bound_interval(36, IntervalVariant::Turan, 2.0) - 1.0).abs() < 1e-15);
        assert!((bound_interval(36, IntervalVariant::Lp, 2.0) - 6.0 / (2.0 * std::f64::consts::E)).abs() < 1e-15);
        assert!((bound_interval(36, IntervalVariant::Lp, 4.0) - 0.5 * bound_interval(36, IntervalVariant::Lp, 2.0)).abs() < 1e-15);
        assert!("chebyshev".parse::<IntervalVariant>().is_err());
        assert_eq!(bound_circular(4, 1.0), Some(2.0));
        assert_eq!(bound_circular(10, 2.0), Some(2.5));
        assert_eq!(bound_circular(10, f64::INFINITY), None);
        assert_eq!(bound_curvature(10, 0.0), None);
        assert!((bound_sqrt_general(400, 2.0) - 0.5).abs() < 1e-15);
        assert!((bound_sqrt_general(1, 2.0) - 1.0 / 40.0).abs() < 1e-15);
        assert!((bound_width(10_000, 2.0, 2.0).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(bound_width(10, 0.0, 2.0), None);
    }

    #[test]
    fn existence_threshold_examples() {
        let disk = upper_existence(7, 2.0, 2.0).unwrap();
        assert!(disk.n0 < 0.0);
        assert!((disk.value - 300.0 * 7.0).abs() < 1e-9);
        let n0 = existence_threshold(1.0, 32.0);
        assert!((n0 - 8.0 * 2f64.ln()).abs() < 1e-12);
        assert!(upper_existence(5, 1.0, 32.0).is_none());
        assert!(upper_existence(6, 1.0, 32.0).is_some());
    }

    #[test]
    fn best_lower_examples() {
        let r = report("disk:r=1", 10);
        assert_eq!(r.best_lower.value, 5.0);
        assert_eq!(r.best_lower.theorem, Theorem::Disk);
        assert!((get(&r, Theorem::Circular).value - 5.0).abs() < 1e-9);

        let r = report("ellipse:b=0.5", 10);
        assert!((r.best_lower.value - 2.5).abs() < 1e-12);
        assert_eq!(r.best_lower.theorem, Theorem::Ellipse);
        assert!((get(&r, Theorem::Curvature).value - get(&r, Theorem::Circular).value).abs() < 1e-6);

        let r = report("ellipse:b=0.25", 8);
        assert!((r.best_lower.value - 1.0).abs() < 1e-12);

        let r = report("square", 10);
        let t8 = (10f64).sqrt() / 40.0;
        let t9 = 0.0003 * 2f64.sqrt() * 10.0 / 4.0;
        assert!((r.best_lower.value - t8.max(t9)).abs() < 1e-9);
        assert!(!get(&r, Theorem::Circular).applicable);
        assert!(!get(&r, Theorem::Curvature).applicable);
        assert!(!r.notes.is_empty());

        let r = report("interval:L=2", 36);
        assert!((get(&r, Theorem::Interval).value - 1.0).abs() < 1e-12);
        assert!((r.best_lower.value - 1.103_638_323_514_327).abs() < 1e-12);
        assert_eq!(r.best_lower.theorem, Theorem::IntervalLp);
        assert!(!get(&r, Theorem::Width).applicable);
        assert!(r.upper.is_none());
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn lp_width_bound_matches_quoted_floor() {
        // w > √2·b and d = 2 give at least 0.0001·b·n.
        for b in [0.25, 0.5, 1.0] {
            let r = report(&format!("lp:p=1.5,b={b}"), 1000);
            assert!(get(&r, Theorem::Width).value >= 0.0001 * b * 1000.0);
        }
        let r = report("lp:p=1.5,b=1", 10);
        let expect = 0.5 * 2f64.powf(1.0 / 1.5 - 1.5) * 10.0;
        assert!((get(&r, Theorem::Curvature).value - expect).abs() < 1e-6);
    }

    #[test]
    fn bounds_monotone_in_n() {
        for desc in ["disk:r=1", "ellipse:b=0.5", "square", "interval:L=2"] {
            let k = make_domain(desc).unwrap();
            let g = GeometrySummary::compute(&k, &GeometryConfig::default()).unwrap();
            let mut prev = all_bounds(&k, 1, &g);
            for n in 2..40 {
                let cur = all_bounds(&k, n, &g);
                for (a, b) in prev.iter().zip(&cur) {
                    if b.kind == BoundKind::Lower {
                        assert!(b.value >= a.value, "{desc} {} n={n}", b.theorem);
                    }
                }
                prev = cur;
            }
        }
    }

    #[test]
    fn erod_examples() {
        let cfg = GeometryConfig::default();
        assert!(erod_eligible(&make_domain("polygon:m=26,h=1").unwrap(), &cfg).eligible);
        assert!(!erod_eligible(&make_domain("polygon:m=25,h=1").unwrap(), &cfg).eligible);
        let sq = erod_eligible(&make_domain("square").unwrap(), &cfg);
        assert!(!sq.eligible && !sq.flat_sides_ok && sq.vertex_angles_ok);
        assert!(erod_eligible(&make_domain("disk:r=1").unwrap(), &cfg).eligible);
        assert!(!erod_eligible(&make_domain("lp:p=3,b=1").unwrap(), &cfg).curved_arcs_ok);
    }

    #[test]
    fn chebyshev_values() {
        assert_eq!(chebyshev_lower(2.0, 1).unwrap(), 1.0);
        assert_eq!(chebyshev_lower(4.0, 3).unwrap(), 2.0);
        assert_eq!(chebyshev_lower(2.0, 2).unwrap(), 0.5);
        assert_eq!(chebyshev_lower(2.0, 3).unwrap(), 0.25);
        assert!(chebyshev_lower(0.0, 1).is_err());
        assert!(chebyshev_lower(1.0, 0).is_err());
    }

    #[test]
    fn chebyshev_bruteforce_small_grid() {
        let g = uniform_grid(-1.0, 1.0, 81);
        let r1 = chebyshev_minmax_bruteforce((-1.0, 1.0), &g, 1, 81, CHEBYSHEV_BUDGET).unwrap();
        assert!((r1.value - 1.0).abs() < 1e-12);
        assert!(r1.nodes[0].abs() < 1e-12);
        let r2 = chebyshev_minmax_bruteforce((-1.0, 1.0), &g, 2, 81, CHEBYSHEV_BUDGET).unwrap();
        assert!((r2.value - 0.5).abs() < 0.02);
        // Exhaustive oracle without pruning.
        let mut best = f64::INFINITY;
        for i in 0..g.len() {
            for j in i..g.len() {
                let m = g.iter().map(|x| ((x - g[i]) * (x - g[j])).abs()).fold(0.0, f64::max);
                best = best.min(m);
            }
        }
        assert_eq!(r2.value, best);
        assert!(chebyshev_minmax_bruteforce((-1.0, 1.0), &g, 4, 81, CHEBYSHEV_BUDGET).is_err());
        assert!(chebyshev_minmax_bruteforce((-1.0, 1.0), &g, 3, 81, 1000).is_err());
    }

    #[test]
    fn coarse_to_fine_is_a_permutation() {
        for m in [2, 3, 10, 401] {
            let mut o = coarse_to_fine(m);
            assert_eq!(o[0], 0);
            o.sort_unstable();
            assert_eq!(o, (0..m).collect::<Vec<_>>());
        }
    }
}
