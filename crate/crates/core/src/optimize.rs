//! One-dimensional scan-and-refine primitives shared by the geometry,
//! polynomial and bounds code.
//!
//! Every extremum in this crate is located the same way: evaluate on a
//! uniform grid, keep the best few local extrema, and polish each with a
//! golden-section search inside its grid bracket. Ties resolve to the
//! smallest parameter so reductions are deterministic.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[a, b]`.
///
/// Returns `(x, f(x))` for the best point seen, including the endpoints
/// of the final bracket.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iters = 0;
    while (b - a).abs() > tol && iters < 200 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_max(|x| -f(x), a, b, tol);
    (x, -v)
}

/// Result of a grid scan followed by local refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub param: f64,
    pub value: f64,
    /// Best raw grid value before refinement.
    pub grid_value: f64,
}

fn better(a: f64, b: f64) -> bool {
    // NaN never wins.
    a > b || (b.is_nan() && !a.is_nan())
}

/// Indices of local maxima of `vals`, best first (ties: smaller index).
fn local_maxima(vals: &[f64], periodic: bool, keep: usize) -> Vec<usize> {
    let m = vals.len();
    let mut idx: Vec<usize> = (0..m)
        .filter(|&i| {
            let left = if i > 0 {
                Some(vals[i - 1])
            } else if periodic {
                Some(vals[m - 1])
            } else {
                None
            };
            let right = if i + 1 < m {
                Some(vals[i + 1])
            } else if periodic {
                Some(vals[0])
            } else {
                None
            };
            left.is_none_or(|l| vals[i] >= l) && right.is_none_or(|r| vals[i] >= r)
        })
        .collect();
    if idx.is_empty() {
        // Constant or NaN-only data still yields a candidate.
        idx.push(0);
    }
    idx.sort_by(|&a, &b| {
        vals[b]
            .partial_cmp(&vals[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    idx.truncate(keep.max(1));
    idx
}

/// Maximize `f` over a uniform grid `params` (spacing `step`), refining the
/// `keep` best local maxima by golden section.
///
/// `periodic` wraps the grid around with period `step * params.len()`;
/// otherwise brackets are clamped to `[params[0], params[last]]`.
pub fn scan_refine_max<F: FnMut(f64) -> f64>(
    params: &[f64],
    vals: &[f64],
    step: f64,
    periodic: bool,
    keep: usize,
    tol: f64,
    mut f: F,
) -> Extremum {
    assert_eq!(params.len(), vals.len());
    assert!(!params.is_empty());
    let lo = params[0];
    let hi = params[params.len() - 1];
    let mut best = Extremum {
        param: f64::NAN,
        value: f64::NAN,
        grid_value: f64::NAN,
    };
    for i in local_maxima(vals, periodic, keep) {
        let (mut a, mut b) = (params[i] - step, params[i] + step);
        if !periodic {
            a = a.max(lo);
            b = b.min(hi);
        }
        let (mut x, mut v) = golden_max(&mut f, a, b, tol);
        if !better(v, vals[i]) {
            x = params[i];
            v = vals[i];
        }
        if better(v, best.value) || (v == best.value && x < best.param) {
            best.param = x;
            best.value = v;
        }
        if better(vals[i], best.grid_value) {
            best.grid_value = vals[i];
        }
    }
    best
}

/// Minimizing counterpart of [`scan_refine_max`].
pub fn scan_refine_min<F: FnMut(f64) -> f64>(
    params: &[f64],
    vals: &[f64],
    step: f64,
    periodic: bool,
    keep: usize,
    tol: f64,
    mut f: F,
) -> Extremum {
    let neg: Vec<f64> = vals.iter().map(|v| -v).collect();
    let e = scan_refine_max(params, &neg, step, periodic, keep, tol, |x| -f(x));
    Extremum {
        param: e.param,
        value: -e.value,
        grid_value: -e.grid_value,
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], 8 points.
pub(crate) const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];

/// Integral of `f` over `[a, b]` by 8-point Gauss–Legendre.
pub(crate) fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    GL8.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>() * half
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3).powi(2) + 2.0, -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn golden_handles_kink() {
        let (x, _) = golden_max(|x| -(x - 0.1).abs(), -1.0, 1.0, 1e-12);
        assert!((x - 0.1).abs() < 1e-10);
    }

    #[test]
    fn scan_refine_periodic_wraps() {
        let m = 64;
        let step = std::f64::consts::TAU / m as f64;
        let params: Vec<f64> = (0..m).map(|i| i as f64 * step).collect();
        let peak = -0.01;
        let f = |t: f64| (t - peak).cos();
        let vals: Vec<f64> = params.iter().map(|&t| f(t)).collect();
        let e = scan_refine_max(&params, &vals, step, true, 3, 1e-12, f);
        assert!((e.value - 1.0).abs() < 1e-12);
        assert!(((e.param - peak).rem_euclid(std::f64::consts::TAU)).min(
            (peak - e.param).rem_euclid(std::f64::consts::TAU)
        ) < 1e-5);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let v = gauss_legendre(|x| x.powi(7) - 3.0 * x * x + 1.0, 0.0, 2.0);
        let exact = 2f64.powi(8) / 8.0 - 8.0 + 2.0;
        assert!((v - exact).abs() < 1e-12);
    }
}
