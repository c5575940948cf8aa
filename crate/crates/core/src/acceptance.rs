//! The end-to-end acceptance checks, shared by the `acceptance` test target
//! and the CLI `verify` subcommand.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{
    bound_circular, bound_curvature, bounds_report, chebyshev_minmax_bruteforce, uniform_grid, BoundsReport,
    GeometrySummary, Theorem, CHEBYSHEV_BUDGET,
};
use crate::error::Result;
use crate::extremal::{self, SearchOptions};
use crate::geometry::{
    circularity_radius, curvature_min, make_domain, pointwise_turan_constant, r_needed, ConvexDomain, GeometryConfig,
    Point,
};
use crate::polynomial::{markov_factor, MarkovOptions, RootPolynomial};
use crate::report::to_json;

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    /// `PASS  3 lp curvature (0.01 s): detail`.
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {} ({:.2} s): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

/// Budgets for one run of the suite.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    /// Extremal budget for the ellipse chain.
    pub ellipse_budget: usize,
    /// Extremal budget for the square sandwich.
    pub square_budget: usize,
    /// Random polynomials per (domain, n) in the soundness sweep.
    pub sweep_per_case: usize,
}

impl SuiteConfig {
    pub fn full() -> Self {
        Self {
            ellipse_budget: 20_000,
            square_budget: 20_000,
            sweep_per_case: 200,
        }
    }

    pub fn quick() -> Self {
        Self {
            ellipse_budget: 2_000,
            square_budget: 2_000,
            sweep_per_case: 20,
        }
    }
}

fn timed(id: u8, name: &'static str, f: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let t = Instant::now();
    let (pass, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name,
        pass,
        detail,
        seconds: t.elapsed().as_secs_f64(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn summary(k: &ConvexDomain) -> Result<GeometrySummary> {
    GeometrySummary::compute(k, &GeometryConfig::default())
}

/// `M(1 + zⁿ)` on the unit disk equals `n/2`.
pub fn disk_sharpness() -> CriterionResult {
    timed(1, "disk sharpness", || {
        let disk = make_domain("disk:r=1")?;
        let mut ok = true;
        let mut parts = Vec::new();
        for n in [2, 4, 8, 16] {
            let t = Instant::now();
            let p = RootPolynomial::one_plus_power(1.0, n)?;
            let m = markov_factor(&p, &disk, &MarkovOptions::default())?.value;
            let secs = t.elapsed().as_secs_f64();
            let err = rel(m, n as f64 / 2.0);
            ok &= err <= 1e-6 && secs < 1.0;
            parts.push(format!("n={n} rel.err {err:.1e} in {secs:.3}s"));
        }
        Ok((ok, parts.join(", ")))
    })
}

/// Curvature, circularity and the two bounds agree on ellipses, and the
/// extremal search stays above `(b/2)·6`.
pub fn ellipse_chain(cfg: &SuiteConfig) -> CriterionResult {
    timed(2, "ellipse bound chain", || {
        let n = 6;
        let mut ok = true;
        let mut parts = Vec::new();
        for b in [0.25, 0.5, 0.9] {
            let t = Instant::now();
            let k = make_domain(&format!("ellipse:b={b}"))?;
            let gc = GeometryConfig::default();
            let kappa = curvature_min(&k, &gc);
            let r = circularity_radius(&k, &gc)?.radius;
            let target = b / 2.0 * n as f64;
            let bc = bound_curvature(n, kappa).unwrap_or(0.0);
            let br = bound_circular(n, r).unwrap_or(0.0);
            let g = summary(&k)?;
            let bounds = bounds_report(&k, n, &g)?;
            let opts = SearchOptions {
                budget: cfg.ellipse_budget,
                seed: 1,
                ..Default::default()
            };
            let (rep, _) = extremal::search(&k, n, &opts, &bounds)?;
            let secs = t.elapsed().as_secs_f64();
            let checks = [
                rel(kappa, b) <= 1e-8,
                rel(r, 1.0 / b) <= 1e-5,
                rel(bc, target) <= 1e-6,
                rel(br, target) <= 1e-6,
                rep.m_hat >= target * (1.0 - 1e-3),
                secs < 30.0,
            ];
            ok &= checks.iter().all(|c| *c);
            parts.push(format!(
                "b={b}: kappa {kappa:.10} R {r:.8} M^ {:.5} >= {target} in {secs:.1}s",
                rep.m_hat
            ));
        }
        Ok((ok, parts.join("; ")))
    })
}

/// Numeric `ℓ_p` minimum curvature against the closed forms.
pub fn lp_curvature() -> CriterionResult {
    timed(3, "lp curvature", || {
        let gc = GeometryConfig::default();
        let mut ok = true;
        let mut worst: f64 = 0.0;
        for p in [1.2, 1.5, 1.8] {
            let k = make_domain(&format!("lp:p={p},b=1"))?;
            let exact = (p - 1.0) * 2f64.powf(1.0 / p - 0.5);
            let err = (curvature_min(&k, &gc) - exact).abs();
            worst = worst.max(err);
            ok &= err <= 1e-4;
            for b in [0.25, 0.5] {
                let k = make_domain(&format!("lp:p={p},b={b}"))?;
                let kmin = curvature_min(&k, &gc);
                let lo = (p - 1.0) * b * 2f64.powf(1.0 / p - 0.5);
                let hi = (p - 1.0) * b * 2f64.powf(1.0 + 1.0 / p) / (1.0 + b * b).powf(1.5);
                ok &= kmin >= lo && kmin <= hi * (1.0 + 1e-4);
            }
        }
        Ok((ok, format!("b=1 max abs err {worst:.1e}; b<1 values inside the bracket: {ok}")))
    })
}

/// Brute-force Chebyshev min-max on a 401-point grid.
pub fn chebyshev() -> CriterionResult {
    timed(4, "chebyshev lemma", || {
        let t = Instant::now();
        let grid = uniform_grid(-1.0, 1.0, 401);
        let mut ok = true;
        let mut parts = Vec::new();
        for k in 1..=3 {
            let r = chebyshev_minmax_bruteforce((-1.0, 1.0), &grid, k, 401, CHEBYSHEV_BUDGET)?;
            let target = 2f64.powi(1 - k as i32);
            ok &= (r.value - target).abs() <= 0.02;
            parts.push(format!("k={k}: {:.6} vs {target}", r.value));
        }
        let secs = t.elapsed().as_secs_f64();
        ok &= secs < 10.0;
        Ok((ok, parts.join(", ")))
    })
}

/// Random roots in `K`: a quarter on the boundary, the rest spread inside
/// along rays from the anchor.
pub fn random_roots(k: &ConvexDomain, n: usize, rng: &mut impl Rng) -> Vec<Point> {
    let c = k.anchor();
    (0..n)
        .map(|_| {
            let t = rng.gen_range(0.0..k.period());
            let u: f64 = if rng.gen_bool(0.25) { 1.0 } else { rng.gen_range(0.0..1.0) };
            c + u.sqrt() * (k.position(t) - c)
        })
        .collect()
}

/// `best_lower ≤ M(p) + 1e−6` for random `p`.
pub fn soundness_sweep(cfg: &SuiteConfig) -> CriterionResult {
    timed(5, "soundness sweep", || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut worst = f64::INFINITY;
        let mut cases = 0;
        let mut violations = Vec::new();
        for desc in ["disk:r=1", "ellipse:b=0.5", "square", "lp:p=1.5,b=1"] {
            let k = make_domain(desc)?;
            let g = summary(&k)?;
            for n in 2..=12 {
                let lower = bounds_report(&k, n, &g)?.best_lower;
                for _ in 0..cfg.sweep_per_case {
                    let p = RootPolynomial::monic(random_roots(&k, n, &mut rng))?;
                    let m = markov_factor(&p, &k, &MarkovOptions::default())?.value;
                    let slack = m + 1e-6 - lower.value;
                    worst = worst.min(slack / lower.value);
                    cases += 1;
                    if slack < 0.0 && violations.len() < 3 {
                        violations.push(format!("{desc} n={n}: M={m} < {} ({})", lower.value, lower.theorem));
                    }
                }
            }
        }
        let ok = violations.is_empty();
        let detail = if ok {
            format!("{cases} cases, smallest relative slack {worst:.3e}")
        } else {
            violations.join("; ")
        };
        Ok((ok, detail))
    })
}

/// `(1 − x²)^{n/2}` sits between `√n/6` and `3√n`.
pub fn interval_regime() -> CriterionResult {
    timed(6, "interval sqrt(n) regime", || {
        let k = make_domain("interval:L=2")?;
        let mut ok = true;
        let mut parts = Vec::new();
        for n in [16, 36, 64] {
            let p = RootPolynomial::interval_witness(1.0, n / 2)?;
            let m = markov_factor(&p, &k, &MarkovOptions::default())?.value;
            let s = (n as f64).sqrt();
            ok &= m >= s / 6.0 && m / s <= 3.0;
            parts.push(format!("n={n}: M/sqrt(n) = {:.4}", m / s));
        }
        Ok((ok, parts.join(", ")))
    })
}

/// Square at `n = 64`: lower bound ≤ `M̂` ≤ existence upper bound.
pub fn square_sandwich(cfg: &SuiteConfig) -> CriterionResult {
    timed(7, "square sandwich", || {
        let n = 64;
        let k = make_domain("square")?;
        let g = summary(&k)?;
        let bounds: BoundsReport = bounds_report(&k, n, &g)?;
        let lower = bounds
            .bounds
            .iter()
            .filter(|b| matches!(b.theorem, Theorem::SqrtGeneral | Theorem::Width) && b.applicable)
            .map(|b| b.value)
            .fold(0.0, f64::max);
        let opts = SearchOptions {
            budget: cfg.square_budget,
            seed: 1,
            ..Default::default()
        };
        let (rep, _) = extremal::search(&k, n, &opts, &bounds)?;
        let cert = extremal::certify(&k, &rep)?;
        let Some(upper) = &bounds.upper else {
            return Ok((false, "upper bound not in force at n = 64".into()));
        };
        let n0 = upper.inputs.get("n0").unwrap_or(f64::NAN);
        let ok = lower <= rep.m_hat && rep.m_hat <= upper.value && (n as f64) > n0 && cert.pass && bounds.warnings.is_empty();
        Ok((
            ok,
            format!(
                "{lower:.4} <= M^ {:.4} <= {:.2} (n0 = {n0:.3}), certified {:.4}",
                rep.m_hat, upper.value, cert.m_recomputed
            ),
        ))
    })
}

/// Largest `|Δα/Δs − κ|/max(1, κ)` over `m` uniform parameters, with
/// central differences of half-width `rel_step · period`.
pub fn curvature_fd_deviation(k: &ConvexDomain, m: usize, rel_step: f64) -> Result<f64> {
    let h = rel_step * k.period();
    let mut worst: f64 = 0.0;
    for i in 0..m {
        let t = k.period() * (i as f64 + 0.5) / m as f64;
        let mid = k.boundary_point(t)?;
        let Some(kappa) = mid.kappa else { continue };
        let a = k.boundary_point(t - h)?.alpha;
        let mut b = k.boundary_point(t + h)?.alpha;
        // Keep the increment in (−π, π] across the angle unwrapping seam.
        while b - a > PI {
            b -= 2.0 * PI;
        }
        while b - a <= -PI {
            b += 2.0 * PI;
        }
        let ds = k.arc_length(t - h, t + h);
        worst = worst.max(((b - a) / ds - kappa).abs() / kappa.max(1.0));
    }
    Ok(worst)
}

/// `c(z)·2·r_needed(z) = 1` on the ellipse and tangent-angle slopes match
/// the curvature.
pub fn identities() -> CriterionResult {
    timed(8, "identity checks", || {
        let gc = GeometryConfig::default();
        let e = make_domain("ellipse:b=0.5")?;
        let mut worst_id: f64 = 0.0;
        for i in 0..256 {
            let z = e.boundary_point(2.0 * PI * i as f64 / 256.0)?;
            let c = pointwise_turan_constant(&e, &z, &gc)?;
            let r = r_needed(&e, &z, &gc)?.radius;
            worst_id = worst_id.max((c * 2.0 * r - 1.0).abs());
        }
        let mut worst_fd: f64 = 0.0;
        for desc in ["disk:r=1", "ellipse:b=0.25", "ellipse:b=0.5", "ellipse:b=0.9", "lp:p=3,b=1", "lp:p=4,b=0.5"] {
            worst_fd = worst_fd.max(curvature_fd_deviation(&make_domain(desc)?, 1000, 1e-5)?);
        }
        Ok((
            worst_id <= 1e-9 && worst_fd <= 1e-4,
            format!("max |2 c r - 1| = {worst_id:.1e}, max curvature FD deviation {worst_fd:.1e}"),
        ))
    })
}

/// Canonical JSON of `extremal disk:r=1 --n 4 --seed 7 --budget 5000`.
pub fn determinism_json() -> Result<String> {
    let k = make_domain("disk:r=1")?;
    let opts = SearchOptions {
        budget: 5000,
        seed: 7,
        ..Default::default()
    };
    let (run, _) = extremal::run(&k, 4, &opts, &GeometryConfig::default())?;
    to_json(&run)
}

pub fn determinism() -> CriterionResult {
    timed(9, "determinism", || {
        let a = determinism_json()?;
        let b = determinism_json()?;
        Ok((a == b, format!("{} bytes, identical: {}", a.len(), a == b)))
    })
}

/// All criteria in order, calling `each` as results arrive.
pub fn run_suite(cfg: &SuiteConfig, mut each: impl FnMut(&CriterionResult)) -> Vec<CriterionResult> {
    let steps: Vec<Box<dyn Fn() -> CriterionResult + '_>> = vec![
        Box::new(disk_sharpness),
        Box::new(|| ellipse_chain(cfg)),
        Box::new(lp_curvature),
        Box::new(chebyshev),
        Box::new(|| soundness_sweep(cfg)),
        Box::new(interval_regime),
        Box::new(|| square_sandwich(cfg)),
        Box::new(identities),
        Box::new(determinism),
    ];
    steps
        .iter()
        .map(|f| {
            let r = f();
            each(&r);
            r
        })
        .collect()
}
