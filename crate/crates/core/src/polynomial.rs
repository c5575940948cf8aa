//! Root-form polynomials `p(z) = lead · Π (z − z_k)`, evaluated in log space.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{distance, ConvexDomain, Point};
use crate::optimize::scan_refine_max;

/// Relative root-proximity threshold: `|z − z_k| ≤ ROOT_EPS · diam(roots)`
/// switches `|p'|` to the direct term-sum path.
pub const ROOT_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RootPolynomial {
    lead: Complex64,
    roots: Vec<Complex64>,
    root_eps: f64,
}

/// On-disk form: `{"lead": [re, im], "roots": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialFile {
    lead: [f64; 2],
    roots: Vec<[f64; 2]>,
}

impl Serialize for RootPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialFile {
            lead: [self.lead.re, self.lead.im],
            roots: self.roots.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = PolynomialFile::deserialize(d)?;
        RootPolynomial::new(
            Complex64::new(f.lead[0], f.lead[1]),
            f.roots.iter().map(|r| Complex64::new(r[0], r[1])).collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

impl RootPolynomial {
    pub fn new(lead: Complex64, roots: Vec<Complex64>) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::Polynomial("degree must be at least 1".into()));
        }
        if lead == Complex64::new(0.0, 0.0) || !lead.is_finite() {
            return Err(Error::Polynomial(format!("invalid leading coefficient {lead}")));
        }
        if let Some(r) = roots.iter().find(|r| !r.is_finite()) {
            return Err(Error::Polynomial(format!("non-finite root {r}")));
        }
        let diam = roots
            .iter()
            .flat_map(|a| roots.iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max);
        Ok(Self {
            lead,
            roots,
            root_eps: ROOT_EPS * diam,
        })
    }

    /// Monic polynomial with the given roots.
    pub fn monic(roots: Vec<Complex64>) -> Result<Self> {
        Self::new(Complex64::new(1.0, 0.0), roots)
    }

    /// `(z − c)ⁿ`.
    pub fn power(center: Point, n: usize) -> Result<Self> {
        Self::monic(vec![center; n])
    }

    /// `rⁿ + zⁿ` (roots `r e^{iπ(2k+1)/n}`), the extremal polynomial of the
    /// disk of radius `r`.
    pub fn one_plus_power(r: f64, n: usize) -> Result<Self> {
        Self::monic(
            (0..n)
                .map(|k| Complex64::from_polar(r, PI * (2 * k + 1) as f64 / n as f64))
                .collect(),
        )
    }

    /// `(h² − x²)^m`: roots `±h`, each of multiplicity `m`.
    pub fn interval_witness(h: f64, m: usize) -> Result<Self> {
        let mut roots = vec![Complex64::new(h, 0.0); m];
        roots.extend(std::iter::repeat_n(Complex64::new(-h, 0.0), m));
        Self::new(Complex64::new(-1.0, 0.0).powi(m as i32), roots)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    pub fn lead(&self) -> Complex64 {
        self.lead
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    /// Image under `z ↦ map·z + shift`: roots are mapped, the leading
    /// coefficient is kept.
    pub fn mapped(&self, map: Complex64, shift: Complex64) -> Result<Self> {
        Self::new(self.lead, self.roots.iter().map(|r| map * r + shift).collect())
    }

    /// `log|p(z)|`; `−∞` exactly at roots.
    pub fn log_abs(&self, z: Point) -> f64 {
        let mut acc = LogProduct::default();
        for r in &self.roots {
            acc.push((z - r).norm_sqr());
        }
        self.lead.norm().ln() + 0.5 * acc.finish()
    }

    /// `S(z) = Σ 1/(z − z_k)`, or `None` when `z` is within the root
    /// threshold of some root.
    pub fn log_deriv_sum(&self, z: Point) -> Option<Complex64> {
        let mut s = Complex64::new(0.0, 0.0);
        for r in &self.roots {
            let v = z - r;
            let ns = v.norm_sqr();
            if ns.sqrt() <= self.root_eps || ns == 0.0 {
                return None;
            }
            s += v.conj() / ns;
        }
        Some(s)
    }

    /// `log|p'(z)|`.
    pub fn log_abs_derivative(&self, z: Point) -> f64 {
        self.eval_log(z).1
    }

    /// `|p'(z)|`.
    pub fn abs_derivative(&self, z: Point) -> f64 {
        self.log_abs_derivative(z).exp()
    }

    /// `(log|p(z)|, log|p'(z)|)` in one pass over the roots.
    pub fn eval_log(&self, z: Point) -> (f64, f64) {
        let mut acc = LogProduct::default();
        let mut s = Complex64::new(0.0, 0.0);
        let mut near = false;
        let eps2 = self.root_eps * self.root_eps;
        for r in &self.roots {
            let v = z - r;
            let ns = v.norm_sqr();
            near |= ns <= eps2;
            acc.push(ns);
            if !near {
                s += v.conj() / ns;
            }
        }
        let log_p = self.lead.norm().ln() + 0.5 * acc.finish();
        if near {
            (log_p, self.log_abs_derivative_direct(z))
        } else {
            (log_p, log_p + s.norm().ln())
        }
    }

    /// `log|p'(z)|` as the log-sum-exp of the `n` products
    /// `lead · Π_{k≠j} (z − z_k)`. Valid everywhere; used near roots.
    pub fn log_abs_derivative_direct(&self, z: Point) -> f64 {
        let n = self.roots.len();
        let logs: Vec<f64> = self.roots.iter().map(|r| (z - r).norm().ln()).collect();
        let args: Vec<f64> = self.roots.iter().map(|r| (z - r).arg()).collect();
        let terms: Vec<(f64, f64)> = (0..n)
            .map(|j| {
                let (mut l, mut a) = (0.0, 0.0);
                for k in (0..n).filter(|&k| k != j) {
                    l += logs[k];
                    a += args[k];
                }
                (l, a)
            })
            .collect();
        let top = terms.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
        if top == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let sum: Complex64 = terms
            .iter()
            .map(|&(l, a)| Complex64::from_polar((l - top).exp(), a))
            .sum();
        self.lead.norm().ln() + top + sum.norm().ln()
    }

    /// Distance threshold below which [`Self::log_deriv_sum`] declines.
    pub fn root_tolerance(&self) -> f64 {
        self.root_eps
    }
}

/// Sum of logs of many positive factors with few `ln` calls.
#[derive(Default)]
struct LogProduct {
    prod: Option<f64>,
    sum: f64,
}

impl LogProduct {
    #[inline]
    fn push(&mut self, x: f64) {
        let p = self.prod.unwrap_or(1.0) * x;
        if !(1e-250..=1e250).contains(&p) {
            self.sum += p.ln();
            self.prod = None;
        } else {
            self.prod = Some(p);
        }
    }

    #[inline]
    fn finish(self) -> f64 {
        self.sum + self.prod.map_or(0.0, f64::ln)
    }
}

/// Uniform boundary grid reused across evaluations.
#[derive(Debug, Clone)]
pub struct ScanGrid {
    domain: ConvexDomain,
    params: Vec<f64>,
    step: f64,
    positions: Vec<Point>,
    refine_keep: usize,
}

impl ScanGrid {
    /// `samples` uniform parameters over one traversal of `∂K` (the interval
    /// is swept out and back, so both halves cover it).
    pub fn new(k: &ConvexDomain, samples: usize) -> Self {
        let m = samples.max(16);
        let step = k.period() / m as f64;
        let params: Vec<f64> = (0..m).map(|i| step * i as f64).collect();
        let positions = params.iter().map(|&t| k.position(t)).collect();
        Self {
            domain: k.clone(),
            params,
            step,
            positions,
            refine_keep: 6,
        }
    }

    pub fn with_refine_keep(mut self, keep: usize) -> Self {
        self.refine_keep = keep.max(1);
        self
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn domain(&self) -> &ConvexDomain {
        &self.domain
    }

    fn refine(&self, vals: &[f64], f: impl FnMut(f64) -> f64) -> SupNorm {
        let e = scan_refine_max(
            &self.params,
            vals,
            self.step,
            true,
            self.refine_keep,
            1e-13 * self.domain.period(),
            f,
        );
        let i = argmax(vals);
        let m = vals.len();
        let second = (vals[(i + m - 1) % m] - 2.0 * vals[i] + vals[(i + 1) % m]).abs() / 8.0;
        let value = e.value.exp();
        SupNorm {
            log_value: e.value,
            value,
            overflow: value.is_infinite(),
            argmax: self.domain.position(e.param),
            param: e.param,
            grid_log_value: e.grid_value,
            scan_error: if second.is_finite() { second } else { 0.0 },
        }
    }

    /// Sup norms of `p` and `p'` over the boundary.
    pub fn sup_norms(&self, p: &RootPolynomial) -> (SupNorm, SupNorm) {
        let (lp, ldp): (Vec<f64>, Vec<f64>) = self.positions.iter().map(|&z| p.eval_log(z)).unzip();
        let k = &self.domain;
        let sp = self.refine(&lp, |t| p.log_abs(k.position(t)));
        let sdp = self.refine(&ldp, |t| p.log_abs_derivative(k.position(t)));
        (sp, sdp)
    }

    /// Sup norm of `p` alone.
    pub fn sup_norm(&self, p: &RootPolynomial) -> SupNorm {
        let lp: Vec<f64> = self.positions.iter().map(|&z| p.log_abs(z)).collect();
        let k = &self.domain;
        self.refine(&lp, |t| p.log_abs(k.position(t)))
    }

    /// `log M(p)` without containment checks (the search objective).
    pub fn log_markov(&self, p: &RootPolynomial) -> f64 {
        let (sp, sdp) = self.sup_norms(p);
        sdp.log_value - sp.log_value
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// Supremum of `|f|` over the boundary, in log and linear scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupNorm {
    pub log_value: f64,
    /// `exp(log_value)`; `+∞` when it overflows.
    pub value: f64,
    pub overflow: bool,
    pub argmax: Point,
    pub param: f64,
    /// Best raw grid value before refinement.
    pub grid_log_value: f64,
    /// Second-difference estimate (log units) of what the grid can miss
    /// around its best sample.
    pub scan_error: f64,
}

/// Sup norm of `p` on `∂K` (equal to the sup over `K` by the maximum
/// principle).
pub fn sup_norm(p: &RootPolynomial, k: &ConvexDomain, samples: usize) -> SupNorm {
    ScanGrid::new(k, samples).sup_norm(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkovOptions {
    pub samples: usize,
    /// Fail when a root lies outside `K` by more than `containment_tol`.
    /// When false, violations are only logged in the result.
    pub enforce_containment: bool,
    pub containment_tol: f64,
}

impl Default for MarkovOptions {
    fn default() -> Self {
        Self {
            samples: 8192,
            enforce_containment: true,
            containment_tol: 1e-9,
        }
    }
}

/// `M(p) = ‖p'‖ / ‖p‖` with diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct MarkovFactor {
    pub value: f64,
    pub log_value: f64,
    pub sup_p: SupNorm,
    pub sup_dp: SupNorm,
    /// Combined scan error estimate, relative.
    pub scan_error: f64,
    /// Roots outside `K` (only non-empty when containment is not enforced).
    pub outside_roots: Vec<usize>,
}

pub fn markov_factor(p: &RootPolynomial, k: &ConvexDomain, opts: &MarkovOptions) -> Result<MarkovFactor> {
    let mut outside = Vec::new();
    for (index, &root) in p.roots().iter().enumerate() {
        let d = distance(k, root);
        if d > opts.containment_tol {
            if opts.enforce_containment {
                return Err(Error::RootOutsideDomain {
                    index,
                    root,
                    distance: d,
                });
            }
            outside.push(index);
        }
    }
    let grid = ScanGrid::new(k, opts.samples);
    Ok(markov_from_grid(p, &grid, outside))
}

pub(crate) fn markov_from_grid(p: &RootPolynomial, grid: &ScanGrid, outside_roots: Vec<usize>) -> MarkovFactor {
    let (sup_p, sup_dp) = grid.sup_norms(p);
    let log_value = sup_dp.log_value - sup_p.log_value;
    MarkovFactor {
        value: log_value.exp(),
        log_value,
        scan_error: sup_p.scan_error.max(sup_dp.scan_error),
        sup_p,
        sup_dp,
        outside_roots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_domain;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    fn direct_product(p: &RootPolynomial, z: Complex64) -> Complex64 {
        p.roots().iter().fold(p.lead(), |acc, r| acc * (z - r))
    }

    #[test]
    fn one_plus_z4_values() {
        let p = RootPolynomial::one_plus_power(1.0, 4).unwrap();
        assert!((p.log_abs(c(1.0, 0.0)) - 2f64.ln()).abs() < 1e-15);
        assert!((p.abs_derivative(c(1.0, 0.0)) - 4.0).abs() < 1e-13);
        let root = p.roots()[1];
        assert_eq!(p.log_abs(root), f64::NEG_INFINITY);
        assert!((p.abs_derivative(root) - 4.0).abs() < 1e-12);
        assert!(p.log_deriv_sum(root).is_none());
    }

    #[test]
    fn log_deriv_sum_examples() {
        let p = RootPolynomial::monic(vec![c(0.0, 0.0)]).unwrap();
        assert!((p.log_deriv_sum(c(1.0, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let n = 7;
        let pile = RootPolynomial::power(c(0.0, 0.0), n).unwrap();
        assert!((pile.log_deriv_sum(c(2.0, 0.0)).unwrap() - c(n as f64 / 2.0, 0.0)).norm() < 1e-14);
        let q = RootPolynomial::one_plus_power(1.0, n).unwrap();
        let z = Complex64::from_polar(1.0, 0.123);
        let s = q.log_deriv_sum(z).unwrap();
        let exact = (z.powi(n as i32 - 1) * n as f64 / (z.powi(n as i32) + 1.0)).norm();
        assert!((s.norm() - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn linear_derivative_is_lead() {
        let p = RootPolynomial::new(c(0.0, 3.0), vec![c(0.4, -0.1)]).unwrap();
        for z in [c(0.0, 0.0), c(0.4, -0.1), c(5.0, 2.0)] {
            assert!((p.abs_derivative(z) - 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn near_root_paths_agree() {
        let p = RootPolynomial::monic(vec![c(0.3, 0.1), c(-0.5, 0.2), c(0.1, -0.7), c(0.8, 0.8)]).unwrap();
        for r in p.roots() {
            for off in [1e-3, 1e-5, 1e-7] {
                let z = r + c(off, -0.5 * off);
                let fast = p.eval_log(z).1;
                let direct = p.log_abs_derivative_direct(z);
                assert!((fast - direct).abs() < 1e-9, "{fast} vs {direct}");
            }
        }
    }

    #[test]
    fn sup_norm_examples() {
        let disk = make_domain("disk:r=1").unwrap();
        let p = RootPolynomial::one_plus_power(1.0, 4).unwrap();
        let s = sup_norm(&p, &disk, 8192);
        assert!((s.value - 2.0).abs() < 1e-12);
        assert!((s.argmax.powi(4) - 1.0).norm() < 1e-6);
        let i = make_domain("interval:L=2").unwrap();
        let q = RootPolynomial::interval_witness(1.0, 10).unwrap();
        let s = sup_norm(&q, &i, 8192);
        assert!((s.value - 1.0).abs() < 1e-12);
        assert!(s.argmax.norm() < 1e-6);
    }

    #[test]
    fn markov_factor_of_disk_extremal() {
        let disk = make_domain("disk:r=1").unwrap();
        let p = RootPolynomial::one_plus_power(1.0, 4).unwrap();
        let m = markov_factor(&p, &disk, &MarkovOptions::default()).unwrap();
        assert!((m.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn interval_witness_factor() {
        let i = make_domain("interval:L=2").unwrap();
        let p = RootPolynomial::interval_witness(1.0, 8).unwrap();
        let m = markov_factor(&p, &i, &MarkovOptions::default()).unwrap();
        // p' = -16 x (1 - x²)^7, maximal at x² = 1/15.
        let exact = 16.0 / 15f64.sqrt() * (14.0f64 / 15.0).powi(7);
        assert!((m.value - exact).abs() < 1e-10 * exact);
        assert!(m.value >= 4.0 / 6.0);
    }

    #[test]
    fn root_outside_is_named() {
        let disk = make_domain("disk:r=1").unwrap();
        let p = RootPolynomial::monic(vec![c(0.0, 0.0), c(1.5, 0.0)]).unwrap();
        match markov_factor(&p, &disk, &MarkovOptions::default()) {
            Err(Error::RootOutsideDomain { index, .. }) => assert_eq!(index, 1),
            other => panic!("{other:?}"),
        }
        let lax = MarkovOptions {
            enforce_containment: false,
            ..Default::default()
        };
        assert_eq!(markov_factor(&p, &disk, &lax).unwrap().outside_roots, vec![1]);
    }

    #[test]
    fn json_format() {
        let p = RootPolynomial::from_json(r#"{"lead": [2, 0], "roots": [[1, 0], [0, -1]]}"#).unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.lead(), c(2.0, 0.0));
        let back: RootPolynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
        assert!(RootPolynomial::from_json(r#"{"lead": [0, 0], "roots": [[1, 0]]}"#).is_err());
        assert!(RootPolynomial::from_json(r#"{"lead": [1, 0], "roots": []}"#).is_err());
        assert!(RootPolynomial::from_json(r#"{"lead": [1, 0], "roots": [[1, 0]], "x": 1}"#).is_err());
    }

    #[test]
    fn log_abs_matches_direct_product() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in 1..=20 {
            let roots = (0..n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let p = RootPolynomial::new(c(rng.gen_range(0.5..2.0), 0.3), roots).unwrap();
            let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let direct = direct_product(&p, z).norm();
            assert!((p.log_abs(z).exp() - direct).abs() <= 1e-12 * direct);
        }
    }
}
