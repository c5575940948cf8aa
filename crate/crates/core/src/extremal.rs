//! Multi-start projected Nelder–Mead search for root configurations with
//! small `M(p)`, and certification of the result against the bounds.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bounds_report, BoundResult, BoundsReport, GeometrySummary};
use crate::error::{Error, Result};
use crate::geometry::{project, ConvexDomain, DomainKind, GeometryConfig, Point};
use crate::polynomial::{markov_factor, MarkovOptions, RootPolynomial, ScanGrid};

/// Minimum total evaluation budget.
pub const MIN_BUDGET: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Total objective evaluations, split evenly over the starts.
    pub budget: usize,
    pub seed: u64,
    pub starts: usize,
    /// Boundary samples of the search objective.
    pub samples: usize,
    /// Relative slack allowed below the best lower bound.
    pub eps_cert: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: 20_000,
            seed: 0,
            starts: 20,
            samples: 2048,
            eps_cert: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    pub domain: String,
    pub n: usize,
    pub seed: u64,
    pub budget: usize,
    pub starts: usize,
    pub samples: usize,
    pub evaluations: usize,
    /// Smallest `M(p)` found.
    pub m_hat: f64,
    /// Roots of the best polynomial as `[re, im]`.
    pub roots: Vec<[f64; 2]>,
    pub best_start: usize,
    pub best_start_kind: String,
    pub best_lower: BoundResult,
    /// `m_hat / best_lower.value`.
    pub ratio: f64,
    pub eps_cert: f64,
    /// `ratio ≥ 1 − eps_cert`; false means a bug or a scan error.
    pub sound: bool,
    pub upper: Option<BoundResult>,
    pub witnesses: Vec<WitnessValue>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub evaluation: usize,
    pub best: f64,
}

/// A starting configuration.
#[derive(Debug, Clone)]
struct Start {
    kind: String,
    roots: Vec<Point>,
}

/// Coordinates: `2n` reals in the plane, `n` positions along the segment
/// for the interval.
#[derive(Clone, Copy)]
enum Coords {
    Plane,
    Segment { half: f64 },
}

struct Objective<'a> {
    k: &'a ConvexDomain,
    grid: &'a ScanGrid,
    coords: Coords,
    budget: usize,
    evals: usize,
    best: f64,
    best_x: Vec<f64>,
    trace: Vec<(usize, f64)>,
}

impl Objective<'_> {
    fn to_roots(&self, x: &[f64]) -> Vec<Point> {
        match self.coords {
            Coords::Plane => x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect(),
            Coords::Segment { .. } => x.iter().map(|&t| Complex64::new(t, 0.0)).collect(),
        }
    }

    fn encode(&self, roots: &[Point]) -> Vec<f64> {
        match self.coords {
            Coords::Plane => roots.iter().flat_map(|z| [z.re, z.im]).collect(),
            Coords::Segment { .. } => roots.iter().map(|z| z.re).collect(),
        }
    }

    fn project(&self, x: &mut [f64]) {
        match self.coords {
            Coords::Plane => {
                for c in x.chunks_mut(2) {
                    let z = project(self.k, Complex64::new(c[0], c[1]));
                    c[0] = z.re;
                    c[1] = z.im;
                }
            }
            Coords::Segment { half } => {
                for t in x.iter_mut() {
                    *t = t.clamp(-half, half);
                }
            }
        }
    }

    fn exhausted(&self) -> bool {
        self.evals >= self.budget
    }

    /// Projects `x` into `K` and returns `log M`; `None` once the budget is
    /// spent.
    fn eval(&mut self, x: &mut [f64]) -> Option<f64> {
        if self.exhausted() {
            return None;
        }
        self.project(x);
        let p = RootPolynomial::monic(self.to_roots(x)).expect("nonempty finite roots");
        let v = self.grid.log_markov(&p);
        self.evals += 1;
        if v < self.best {
            self.best = v;
            self.best_x = x.to_vec();
            self.trace.push((self.evals, v));
        }
        Some(v)
    }
}

const NM_ALPHA: f64 = 1.0;
const NM_GAMMA: f64 = 2.0;
const NM_RHO: f64 = 0.5;
const NM_SIGMA: f64 = 0.5;

/// Nelder–Mead from `x0` with restarts around the incumbent at halved step
/// until the budget runs out or the step falls below `min_step`.
fn nelder_mead(obj: &mut Objective, x0: Vec<f64>, step0: f64, min_step: f64) {
    let dim = x0.len();
    let mut center = x0;
    let mut step = step0;
    'restart: while step >= min_step {
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
        for i in 0..=dim {
            let mut x = center.clone();
            if i > 0 {
                // Step away from the nearer side so projection keeps the
                // simplex nondegenerate where possible.
                x[i - 1] += if i % 2 == 0 { step } else { -step };
            }
            let Some(f) = obj.eval(&mut x) else { return };
            simplex.push((x, f));
        }
        loop {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let spread = simplex[dim].1 - simplex[0].1;
            let size = simplex[1..]
                .iter()
                .map(|(x, _)| dist(x, &simplex[0].0))
                .fold(0.0, f64::max);
            if spread <= 1e-13 * (1.0 + simplex[0].1.abs()) || size < 0.01 * step {
                center = obj.best_x.clone();
                step *= 0.5;
                continue 'restart;
            }
            let mut c = vec![0.0; dim];
            for (x, _) in &simplex[..dim] {
                for (ci, xi) in c.iter_mut().zip(x) {
                    *ci += xi / dim as f64;
                }
            }
            let along = |t: f64, from: &[f64]| -> Vec<f64> { c.iter().zip(from).map(|(ci, fi)| ci + t * (ci - fi)).collect() };
            let worst = simplex[dim].0.clone();
            let mut xr = along(NM_ALPHA, &worst);
            let Some(fr) = obj.eval(&mut xr) else { return };
            if fr < simplex[0].1 {
                let mut xe = along(NM_ALPHA * NM_GAMMA, &worst);
                let Some(fe) = obj.eval(&mut xe) else { return };
                simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[dim - 1].1 {
                simplex[dim] = (xr, fr);
                continue;
            }
            let (mut xc, bound) = if fr < simplex[dim].1 {
                (along(NM_ALPHA * NM_RHO, &worst), fr)
            } else {
                (along(-NM_RHO, &worst), simplex[dim].1)
            };
            let Some(fc) = obj.eval(&mut xc) else { return };
            if fc < bound {
                simplex[dim] = (xc, fc);
                continue;
            }
            let best = simplex[0].0.clone();
            for (x, f) in simplex.iter_mut().skip(1) {
                let mut y: Vec<f64> = best.iter().zip(x.iter()).map(|(b, xi)| b + NM_SIGMA * (xi - b)).collect();
                let Some(fy) = obj.eval(&mut y) else { return };
                *x = y;
                *f = fy;
            }
        }
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Witness starts followed by ring and uniform random fills.
fn starting_configurations(k: &ConvexDomain, n: usize, starts: usize, seed: u64) -> Vec<Start> {
    let c = k.anchor();
    let mut out = vec![Start {
        kind: "witness:center_power".into(),
        roots: vec![c; n],
    }];
    match k.kind() {
        DomainKind::Disk { r } => out.push(Start {
            kind: "witness:disk".into(),
            roots: RootPolynomial::one_plus_power(*r, n).expect("n >= 1").roots().to_vec(),
        }),
        DomainKind::Interval { length } if n.is_multiple_of(2) => out.push(Start {
            kind: "witness:interval".into(),
            roots: RootPolynomial::interval_witness(length / 2.0, n / 2).expect("n >= 2").roots().to_vec(),
        }),
        _ => {}
    }
    let period = k.period();
    let mut i = out.len();
    while out.len() < starts.max(out.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let start = if i % 2 == 0 {
            let phase = rng.gen_range(0.0..1.0);
            let shrink = rng.gen_range(0.6..1.0);
            Start {
                kind: "ring".into(),
                roots: (0..n)
                    .map(|j| {
                        let t = period * ((j as f64 + phase) / n as f64);
                        c + shrink * (k.position(t) - c)
                    })
                    .collect(),
            }
        } else {
            Start {
                kind: "uniform".into(),
                roots: (0..n)
                    .map(|_| {
                        let t = rng.gen_range(0.0..period);
                        let u: f64 = rng.gen_range(0.0..1.0);
                        c + u.sqrt() * (k.position(t) - c)
                    })
                    .collect(),
            }
        };
        out.push(start);
        i += 1;
    }
    out
}

struct StartOutcome {
    best: f64,
    best_x: Vec<f64>,
    evals: usize,
    trace: Vec<(usize, f64)>,
}

/// Searches for small `M(p)` over degree-`n` polynomials with roots in
/// `K`. Deterministic given `(K, n, opts)`.
pub fn search(
    k: &ConvexDomain,
    n: usize,
    opts: &SearchOptions,
    bounds: &BoundsReport,
) -> Result<(ExtremalReport, Vec<TracePoint>)> {
    if n == 0 {
        return Err(Error::ParameterRange {
            name: "n",
            value: 0.0,
            expected: "n >= 1",
        });
    }
    if opts.budget < MIN_BUDGET {
        return Err(Error::Budget(format!(
            "{} evaluations requested, at least {MIN_BUDGET} required",
            opts.budget
        )));
    }
    let coords = match k.kind() {
        DomainKind::Interval { length } => Coords::Segment { half: length / 2.0 },
        _ => Coords::Plane,
    };
    let dim = match coords {
        Coords::Plane => 2 * n,
        Coords::Segment { .. } => n,
    };
    let starts = opts.starts.max(1).min(opts.budget / (dim + 2)).max(1);
    let per_start = opts.budget / starts;
    let grid = ScanGrid::new(k, opts.samples);
    let scale = bounds
        .bounds
        .iter()
        .find_map(|b| b.inputs.get("d"))
        .unwrap_or(1.0);
    let configs = starting_configurations(k, n, starts, opts.seed);

    let outcomes: Vec<StartOutcome> = configs
        .par_iter()
        .map(|s| {
            let mut obj = Objective {
                k,
                grid: &grid,
                coords,
                budget: per_start,
                evals: 0,
                best: f64::INFINITY,
                best_x: Vec::new(),
                trace: Vec::new(),
            };
            let x0 = obj.encode(&s.roots);
            nelder_mead(&mut obj, x0, 0.05 * scale, 1e-9 * scale);
            StartOutcome {
                best: obj.best,
                best_x: obj.best_x,
                evals: obj.evals,
                trace: obj.trace,
            }
        })
        .collect();

    let (best_start, best) = outcomes
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.best.total_cmp(&b.1.best).then(a.0.cmp(&b.0)))
        .expect("at least one start");

    let mut trace = Vec::new();
    let mut offset = 0;
    let mut running = f64::INFINITY;
    for o in &outcomes {
        for &(e, v) in &o.trace {
            if v < running {
                running = v;
                trace.push(TracePoint {
                    evaluation: offset + e,
                    best: v.exp(),
                });
            }
        }
        offset += o.evals;
    }

    let obj = Objective {
        k,
        grid: &grid,
        coords,
        budget: 0,
        evals: 0,
        best: f64::INFINITY,
        best_x: Vec::new(),
        trace: Vec::new(),
    };
    let roots = obj.to_roots(&best.best_x);
    let witnesses = configs
        .iter()
        .filter(|s| s.kind.starts_with("witness"))
        .map(|s| WitnessValue {
            name: s.kind.trim_start_matches("witness:").to_string(),
            value: grid
                .log_markov(&RootPolynomial::monic(s.roots.clone()).expect("witness roots"))
                .exp(),
        })
        .collect();

    let m_hat = best.best.exp();
    let lower = bounds.best_lower.clone();
    let ratio = m_hat / lower.value;
    let report = ExtremalReport {
        domain: k.descriptor().to_string(),
        n,
        seed: opts.seed,
        budget: opts.budget,
        starts,
        samples: opts.samples,
        evaluations: offset,
        m_hat,
        roots: roots.iter().map(|z| [z.re, z.im]).collect(),
        best_start,
        best_start_kind: configs[best_start].kind.clone(),
        best_lower: lower,
        ratio,
        eps_cert: opts.eps_cert,
        sound: ratio >= 1.0 - opts.eps_cert,
        upper: bounds.upper.clone(),
        witnesses,
    };
    Ok((report, trace))
}

#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub pass: bool,
    /// `M` of the reported roots at the doubled scan budget.
    pub m_recomputed: f64,
    pub samples: usize,
    pub lower: f64,
    pub lower_theorem: String,
    /// `m_recomputed − lower`.
    pub margin: f64,
    pub lower_ok: bool,
    pub upper: Option<f64>,
    pub upper_ok: bool,
}

/// Recomputes `M` of the reported roots at twice the search sampling and
/// checks it against the best lower bound (with relative slack `eps_cert`)
/// and the existence upper bound when it applies.
pub fn certify(k: &ConvexDomain, report: &ExtremalReport) -> Result<Certificate> {
    let p = RootPolynomial::monic(report.roots.iter().map(|r| Complex64::new(r[0], r[1])).collect())?;
    let samples = 2 * report.samples;
    let m = markov_factor(
        &p,
        k,
        &MarkovOptions {
            samples,
            ..Default::default()
        },
    )?;
    let lower = report.best_lower.value;
    let lower_ok = m.value >= lower * (1.0 - report.eps_cert);
    let upper = report.upper.as_ref().map(|u| u.value);
    let upper_ok = upper.is_none_or(|u| m.value <= u);
    Ok(Certificate {
        pass: lower_ok && upper_ok,
        m_recomputed: m.value,
        samples,
        lower,
        lower_theorem: report.best_lower.theorem.tag().to_string(),
        margin: m.value - lower,
        lower_ok,
        upper,
        upper_ok,
    })
}

/// Largest displacement of `roots` from the roots of `rⁿ + zⁿ`, minimized
/// over the `n` cyclic relabelings (greedy matching).
pub fn disk_pattern_distance(roots: &[Point], r: f64) -> f64 {
    let n = roots.len();
    (0..n)
        .map(|shift| {
            let target: Vec<Point> = (0..n)
                .map(|j| Complex64::from_polar(r, PI * (2 * ((j + shift) % n) + 1) as f64 / n as f64))
                .collect();
            let mut used = vec![false; n];
            roots
                .iter()
                .map(|z| {
                    let (i, d) = target
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| !used[*i])
                        .map(|(i, t)| (i, (z - t).norm()))
                        .min_by(|a, b| a.1.total_cmp(&b.1))
                        .unwrap();
                    used[i] = true;
                    d
                })
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Search plus certificate, as emitted by the CLI.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalRun {
    pub report: ExtremalReport,
    pub certificate: Certificate,
}

/// Geometry, bounds, search and certification for `(K, n)`.
pub fn run(
    k: &ConvexDomain,
    n: usize,
    opts: &SearchOptions,
    cfg: &GeometryConfig,
) -> Result<(ExtremalRun, Vec<TracePoint>)> {
    let g = GeometrySummary::compute(k, cfg)?;
    let bounds = bounds_report(k, n, &g)?;
    let (report, trace) = search(k, n, opts, &bounds)?;
    let certificate = certify(k, &report)?;
    Ok((ExtremalRun { report, certificate }, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_domain;

    fn run(desc: &str, n: usize, budget: usize, seed: u64) -> (ExtremalReport, Vec<TracePoint>) {
        let k = make_domain(desc).unwrap();
        let g = GeometrySummary::compute(&k, &GeometryConfig::default()).unwrap();
        let b = bounds_report(&k, n, &g).unwrap();
        let opts = SearchOptions {
            budget,
            seed,
            ..Default::default()
        };
        search(&k, n, &opts, &b).unwrap()
    }

    #[test]
    fn disk_n4_finds_extremal() {
        let (r, trace) = run("disk:r=1", 4, 5000, 7);
        assert!(r.m_hat >= 2.0 * (1.0 - 1e-9) && r.m_hat <= 2.01, "{}", r.m_hat);
        assert!(r.sound);
        assert!(!trace.is_empty());
        assert!(trace.windows(2).all(|w| w[1].best <= w[0].best && w[1].evaluation > w[0].evaluation));
        let roots: Vec<Point> = r.roots.iter().map(|x| Complex64::new(x[0], x[1])).collect();
        // Any configuration achieving 2 has its roots on the circle.
        assert!(roots.iter().all(|z| (z.norm() - 1.0).abs() < 1e-3));
        let c = certify(&make_domain("disk:r=1").unwrap(), &r).unwrap();
        assert!(c.pass && c.margin.abs() < 0.01);
    }

    #[test]
    fn deterministic() {
        let a = run("ellipse:b=0.5", 3, 600, 11).0;
        let b = run("ellipse:b=0.5", 3, 600, 11).0;
        assert_eq!(a.m_hat.to_bits(), b.m_hat.to_bits());
        assert_eq!(a.roots, b.roots);
    }

    #[test]
    fn witness_dominance_and_budget_errors() {
        let (r, _) = run("interval:L=2", 8, 800, 1);
        let witness = r.witnesses.iter().map(|w| w.value).fold(f64::INFINITY, f64::min);
        assert!(r.m_hat <= witness);
        assert!(r.roots.iter().all(|z| z[1] == 0.0 && z[0].abs() <= 1.0));
        let k = make_domain("disk:r=1").unwrap();
        let g = GeometrySummary::compute(&k, &GeometryConfig::default()).unwrap();
        let b = bounds_report(&k, 3, &g).unwrap();
        let opts = SearchOptions {
            budget: 50,
            ..Default::default()
        };
        assert!(matches!(search(&k, 3, &opts, &b), Err(Error::Budget(_))));
    }

    #[test]
    fn pattern_distance() {
        let p = RootPolynomial::one_plus_power(1.0, 5).unwrap();
        let mut roots = p.roots().to_vec();
        roots.rotate_left(2);
        assert!(disk_pattern_distance(&roots, 1.0) < 1e-12);
    }
}
