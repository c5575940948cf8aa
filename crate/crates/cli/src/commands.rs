use std::path::Path;

use anyhow::{Context, Result};
use serde::{Serialize, Serializer};
use serde_json::Value;
use turan_core::acceptance::{run_suite, SuiteConfig};
use turan_core::bounds::{
    bounds_report, chebyshev_lower, chebyshev_minmax_bruteforce, erod_eligible, uniform_grid, BoundResult,
    ErodReport, GeometrySummary,
};
use turan_core::extremal::{self, SearchOptions};
use turan_core::geometry::{check_subdifferential, make_domain, transfinite_diameter, CapacityMethod, GeometryConfig};
use turan_core::polynomial::{markov_factor, MarkovFactor, MarkovOptions, RootPolynomial};
use turan_core::report::{to_csv, to_json, to_text, Real};

use crate::{Command, Format};

/// Returns `Ok(false)` when the command ran but reports failure.
pub fn dispatch(cmd: Command, format: Format, out: Option<&Path>) -> Result<bool> {
    match cmd {
        Command::Geometry { domain, samples } => {
            let r = geometry(&domain, samples)?;
            emit(&r, vec![serde_json::to_value(&r)?], format, out)?;
        }
        Command::Bounds { domain, n } => {
            let k = make_domain(&domain)?;
            let g = GeometrySummary::compute(&k, &GeometryConfig::default())?;
            let r = bounds_report(&k, n, &g)?;
            let rows = r.bounds.iter().map(serde_json::to_value).collect::<Result<_, _>>()?;
            emit(&r, rows, format, out)?;
        }
        Command::Markov {
            domain,
            polynomial,
            samples,
            tol,
            allow_outside,
        } => {
            let r = markov(&domain, &polynomial, samples, tol, allow_outside)?;
            emit(&r, vec![serde_json::to_value(&r)?], format, out)?;
        }
        Command::Extremal {
            domain,
            n,
            seed,
            budget,
            samples,
            tol,
            starts,
            trace,
        } => {
            let k = make_domain(&domain)?;
            let opts = SearchOptions {
                budget,
                seed,
                starts,
                samples,
                eps_cert: tol,
            };
            let (run, points) = extremal::run(&k, n, &opts, &GeometryConfig::default())?;
            if let Some(path) = trace {
                let rows = points.iter().map(serde_json::to_value).collect::<Result<Vec<_>, _>>()?;
                write(Some(&path), &to_csv(&rows)?)?;
            }
            emit(&run, vec![serde_json::to_value(&run)?], format, out)?;
            return Ok(run.report.sound && run.certificate.pass);
        }
        Command::Chebyshev {
            k,
            u,
            v,
            samples,
            budget,
        } => {
            let r = chebyshev(k, u, v, samples, budget)?;
            let rows = r.rows.iter().map(serde_json::to_value).collect::<Result<_, _>>()?;
            emit(&r, rows, format, out)?;
        }
        Command::Verify { quick } => {
            let cfg = if quick { SuiteConfig::quick() } else { SuiteConfig::full() };
            let live = format == Format::Text && out.is_none();
            let results = run_suite(&cfg, |r| {
                if live {
                    println!("{}", r.line());
                }
            });
            let pass = results.iter().all(|r| r.pass);
            if !live {
                let report = VerifyReport {
                    quick,
                    pass,
                    criteria: results.clone(),
                };
                let rows = results.iter().map(serde_json::to_value).collect::<Result<_, _>>()?;
                emit(&report, rows, format, out)?;
            }
            return Ok(pass);
        }
    }
    Ok(true)
}

fn write(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit<T: Serialize>(report: &T, rows: Vec<Value>, format: Format, out: Option<&Path>) -> Result<()> {
    let text = match format {
        Format::Json => to_json(report)?,
        Format::Csv => to_csv(&rows)?,
        Format::Text => to_text(&serde_json::to_value(report)?),
    };
    write(out, &text)
}

/// Circularity radius, `"inf (flat)"` when infinite.
struct Radius(f64);

impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf (flat)")
        }
    }
}

#[derive(Serialize)]
struct SubdiffRow {
    lambda: f64,
    holds: bool,
    min_quotient: Real,
}

#[derive(Serialize)]
struct GeometryReport {
    domain: String,
    d: f64,
    w: f64,
    width_direction: f64,
    degenerate: bool,
    kappa_min: f64,
    #[serde(rename = "R")]
    r: Radius,
    circularity_argmax: Option<[f64; 2]>,
    transfinite_diameter: f64,
    transfinite_method: CapacityMethod,
    transfinite_note: Option<&'static str>,
    erod: ErodReport,
    subdifferential: Vec<SubdiffRow>,
}

fn geometry(desc: &str, samples: usize) -> Result<GeometryReport> {
    let k = make_domain(desc)?;
    let cfg = GeometryConfig {
        samples,
        ..Default::default()
    };
    let g = GeometrySummary::compute(&k, &cfg)?;
    let td = transfinite_diameter(&k);
    let subdifferential = if k.is_degenerate() {
        Vec::new()
    } else {
        let lambdas: Vec<f64> = if g.kappa_min > 0.0 {
            [0.5, 1.0, 1.5].iter().map(|f| f * g.kappa_min).collect()
        } else {
            vec![1e-3, 1e-2, 1e-1]
        };
        lambdas
            .into_iter()
            .map(|lambda| {
                let c = check_subdifferential(&k, lambda, samples)?;
                Ok(SubdiffRow {
                    lambda,
                    holds: c.holds,
                    min_quotient: Real(c.min_quotient),
                })
            })
            .collect::<Result<_>>()?
    };
    Ok(GeometryReport {
        domain: k.descriptor().to_string(),
        d: g.diameter,
        w: g.width.value,
        width_direction: g.width.direction,
        degenerate: g.width.degenerate,
        kappa_min: g.kappa_min,
        r: Radius(g.circularity.radius),
        circularity_argmax: g.circularity.argmax.map(|z| [z.re, z.im]),
        transfinite_diameter: td.value,
        transfinite_method: td.method,
        transfinite_note: matches!(td.method, CapacityMethod::ExternalClosedForm)
            .then_some("standard value (a + b)/2, not derived here"),
        erod: erod_eligible(&k, &cfg),
        subdifferential,
    })
}

#[derive(Serialize)]
struct MarkovReport {
    domain: String,
    n: usize,
    #[serde(flatten)]
    factor: MarkovFactor,
    best_lower: BoundResult,
}

fn markov(desc: &str, path: &Path, samples: usize, tol: f64, allow_outside: bool) -> Result<MarkovReport> {
    let k = make_domain(desc)?;
    let p = RootPolynomial::read(path)?;
    let opts = MarkovOptions {
        samples,
        enforce_containment: !allow_outside,
        containment_tol: tol,
    };
    let factor = markov_factor(&p, &k, &opts)?;
    for &i in &factor.outside_roots {
        eprintln!("warning: root #{i} = {} lies outside {desc}", p.roots()[i]);
    }
    let g = GeometrySummary::compute(&k, &GeometryConfig::default())?;
    let best_lower = bounds_report(&k, p.degree(), &g)?.best_lower;
    Ok(MarkovReport {
        domain: k.descriptor().to_string(),
        n: p.degree(),
        factor,
        best_lower,
    })
}

#[derive(Serialize)]
struct ChebyshevRow {
    k: usize,
    bruteforce: f64,
    bound: f64,
    nodes: Vec<f64>,
    tuples: u64,
}

#[derive(Serialize)]
struct ChebyshevReport {
    u: f64,
    v: f64,
    grid: usize,
    rows: Vec<ChebyshevRow>,
}

fn chebyshev(kmax: usize, u: f64, v: f64, samples: usize, budget: u64) -> Result<ChebyshevReport> {
    let grid = uniform_grid(u, v, samples);
    let rows = (1..=kmax)
        .map(|k| {
            let r = chebyshev_minmax_bruteforce((u, v), &grid, k, samples, budget)?;
            Ok(ChebyshevRow {
                k,
                bruteforce: r.value,
                bound: chebyshev_lower(v - u, k)?,
                nodes: r.nodes,
                tuples: r.tuples,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ChebyshevReport {
        u,
        v,
        grid: samples,
        rows,
    })
}

#[derive(Serialize)]
struct VerifyReport {
    quick: bool,
    pass: bool,
    criteria: Vec<turan_core::acceptance::CriterionResult>,
}
