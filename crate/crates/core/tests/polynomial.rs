use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use turan_core::acceptance::random_roots;
use turan_core::geometry::*;
use turan_core::polynomial::*;

fn c(x: f64, y: f64) -> Complex64 {
    Complex64::new(x, y)
}

fn opts() -> MarkovOptions {
    MarkovOptions::default()
}

fn roots_in(desc: &str, n: usize, seed: u64) -> (ConvexDomain, Vec<Complex64>) {
    let k = make_domain(desc).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = random_roots(&k, n, &mut rng);
    (k, r)
}

#[test]
fn sup_norm_matches_dense_scan_on_square() {
    let q = make_domain("square").unwrap();
    for (n, seed) in [(2, 1), (3, 2), (4, 3), (5, 4), (6, 5)] {
        let (_, roots) = roots_in("square", n, seed);
        let p = RootPolynomial::new(c(0.7, -0.2), roots).unwrap();
        let s = sup_norm(&p, &q, 8192);
        let m = 1_000_000;
        let dense = (0..m)
            .map(|i| p.log_abs(q.position(q.period() * i as f64 / m as f64)))
            .fold(f64::NEG_INFINITY, f64::max)
            .exp();
        // The refined value can only exceed the dense grid, and by little.
        assert!(s.value >= dense * (1.0 - 1e-12), "n={n}");
        assert!((s.value - dense).abs() <= 1e-8 * dense, "n={n}: {} vs {dense}", s.value);
    }
}

#[test]
fn center_power_closed_form() {
    let g = GeometryConfig::default();
    for (desc, center) in [("disk:r=1", c(0.3, -0.2)), ("ellipse:b=0.5", c(0.1, 0.2)), ("square", c(-0.2, 0.1))] {
        let k = make_domain(desc).unwrap();
        let n = 7;
        let p = RootPolynomial::power(center, n).unwrap();
        let m = markov_factor(&p, &k, &opts()).unwrap().value;
        // sup|p'|/sup|p| = n / max_{∂K}|z − c|.
        let far = (0..400_000)
            .map(|i| (k.position(k.period() * i as f64 / 400_000.0) - center).norm())
            .fold(0.0, f64::max);
        assert!((m - n as f64 / far).abs() <= 1e-8 * m, "{desc}");
        let r = circularity_radius(&k, &g).unwrap().radius;
        if r.is_finite() {
            assert!(m >= n as f64 / (2.0 * r));
        }
    }
}

#[test]
fn overflow_is_flagged_not_fatal() {
    let k = make_domain("disk:r=1").unwrap();
    let p = RootPolynomial::new(c(1e300, 0.0), vec![c(-0.5, 0.0); 60]).unwrap();
    let s = sup_norm(&p, &k, 1024);
    assert!(s.overflow && s.value.is_infinite() && s.log_value.is_finite());
    let m = markov_factor(&p, &k, &opts()).unwrap();
    assert!(m.value.is_finite() && m.value > 0.0);
}

#[test]
fn read_polynomial_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, r#"{"lead": [1, 0], "roots": [[0.5, 0.5], [-0.5, 0]]}"#).unwrap();
    let p = RootPolynomial::read(&path).unwrap();
    assert_eq!(p.degree(), 2);
    assert!(RootPolynomial::read(&dir.path().join("missing.json")).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, .. ProptestConfig::default() })]

    #[test]
    fn rotation_invariance(seed in 0u64..10_000, n in 1usize..10, theta in 0.0..TAU, b in 0.3f64..1.0) {
        let (k, roots) = roots_in(&format!("ellipse:b={b}"), n, seed);
        let rot = Complex64::from_polar(1.0, theta);
        let kr = k.similarity(rot, c(0.0, 0.0)).unwrap();
        let p = RootPolynomial::monic(roots).unwrap();
        let pr = p.mapped(rot, c(0.0, 0.0)).unwrap();
        let lax = MarkovOptions { enforce_containment: false, ..opts() };
        let m = markov_factor(&p, &k, &opts()).unwrap().value;
        let mr = markov_factor(&pr, &kr, &lax).unwrap().value;
        prop_assert!((m - mr).abs() <= 1e-9 * m, "{} vs {}", m, mr);
    }

    #[test]
    fn scaling_law(seed in 0u64..10_000, n in 1usize..10, t in 0.2f64..5.0) {
        let (_, roots) = roots_in("disk:r=1", n, seed);
        let k = make_domain("disk:r=1").unwrap();
        let kt = make_domain(&format!("disk:r={t}")).unwrap();
        let p = RootPolynomial::monic(roots).unwrap();
        let pt = p.mapped(c(t, 0.0), c(0.0, 0.0)).unwrap();
        let lax = MarkovOptions { enforce_containment: false, ..opts() };
        let m = markov_factor(&p, &k, &opts()).unwrap().value;
        let mt = markov_factor(&pt, &kt, &lax).unwrap().value;
        prop_assert!((mt - m / t).abs() <= 1e-9 * m / t);
    }

    #[test]
    fn pointwise_turan_bound(seed in 0u64..10_000, n in 1usize..12, pick in 0usize..2, s in 0.0..TAU) {
        let desc = ["disk:r=1", "ellipse:b=0.5"][pick];
        let (k, roots) = roots_in(desc, n, seed);
        let r = [1.0, 2.0][pick];
        let p = RootPolynomial::monic(roots).unwrap();
        let z = k.position(s);
        let (lp, ldp) = p.eval_log(z);
        if lp.is_finite() {
            // |p'(z)| ≥ n/(2R)·|p(z)| up to rounding.
            prop_assert!(ldp >= (n as f64 / (2.0 * r)).ln() + lp - 1e-9);
        }
    }

    #[test]
    fn log_linear_agreement(seed in 0u64..10_000, n in 1usize..30, scale in 0.1f64..50.0) {
        let (k, roots) = roots_in("lp:p=1.5,b=1", n, seed);
        let p = RootPolynomial::new(c(scale, 0.0), roots).unwrap();
        let s = sup_norm(&p, &k, 2048);
        prop_assert!(!s.overflow);
        prop_assert!((s.log_value.exp() - s.value).abs() <= 1e-10 * s.value);
    }

    #[test]
    fn near_root_switch_is_seamless(seed in 0u64..10_000, n in 2usize..12, off in -12.0f64..-3.0, dir in 0.0..TAU) {
        let (_, roots) = roots_in("ellipse:b=0.5", n, seed);
        let p = RootPolynomial::monic(roots.clone()).unwrap();
        let z = roots[0] + Complex64::from_polar(10f64.powf(off), dir);
        let fast = p.eval_log(z).1;
        let direct = p.log_abs_derivative_direct(z);
        prop_assert!((fast - direct).abs() <= 1e-9, "{} vs {}", fast, direct);
    }
}
