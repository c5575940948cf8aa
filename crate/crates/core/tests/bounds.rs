use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use turan_core::acceptance::random_roots;
use turan_core::bounds::*;
use turan_core::geometry::*;
use turan_core::polynomial::*;

fn summary(k: &ConvexDomain) -> GeometrySummary {
    GeometrySummary::compute(k, &GeometryConfig::default()).unwrap()
}

fn value(bounds: &[BoundResult], t: Theorem) -> f64 {
    bounds.iter().find(|b| b.theorem == t).unwrap().value
}

const DOMAINS: [&str; 8] = [
    "disk:r=1",
    "disk:r=0.4",
    "ellipse:b=0.5",
    "square",
    "lp:p=1.5,b=1",
    "lp:p=3,b=0.5",
    "polygon:m=6,h=0.8",
    "interval:L=2",
];

#[test]
fn every_lower_bound_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for desc in DOMAINS {
        let k = make_domain(desc).unwrap();
        let g = summary(&k);
        for n in 2..=12 {
            let bounds = all_bounds(&k, n, &g);
            for _ in 0..15 {
                let p = RootPolynomial::monic(random_roots(&k, n, &mut rng)).unwrap();
                let m = markov_factor(&p, &k, &MarkovOptions::default()).unwrap().value;
                for b in bounds.iter().filter(|b| b.applicable && b.kind == BoundKind::Lower) {
                    assert!(b.value <= m + 1e-6, "{desc} n={n} {}: {} > {m}", b.theorem, b.value);
                }
            }
        }
    }
}

#[test]
fn upper_bound_dominates_best_lower() {
    for desc in DOMAINS {
        let k = make_domain(desc).unwrap();
        let g = summary(&k);
        for n in [1, 5, 20, 100, 1000] {
            let r = bounds_report(&k, n, &g).unwrap();
            assert!(r.warnings.is_empty(), "{desc} n={n}: {:?}", r.warnings);
        }
    }
}

#[test]
fn curvature_bound_equals_circular_bound_on_smooth_domains() {
    for desc in ["disk:r=2", "ellipse:b=0.25", "ellipse:b=0.9", "lp:p=1.2,b=1", "lp:p=1.7,b=0.4", "lp:p=2,b=0.6"] {
        let k = make_domain(desc).unwrap();
        let b = all_bounds(&k, 10, &summary(&k));
        let (c, r) = (value(&b, Theorem::Curvature), value(&b, Theorem::Circular));
        assert!((c - r).abs() <= 1e-6 * c, "{desc}: {c} vs {r}");
    }
}

#[test]
fn circular_and_curvature_bounds_scale_inversely() {
    let k = make_domain("ellipse:b=0.4").unwrap();
    let base = all_bounds(&k, 9, &summary(&k));
    for t in [0.5, 3.0] {
        let kt = k.similarity(Complex64::new(0.0, t), Complex64::new(1.0, -2.0)).unwrap();
        let scaled = all_bounds(&kt, 9, &summary(&kt));
        for th in [Theorem::Circular, Theorem::Curvature] {
            let (a, b) = (value(&base, th), value(&scaled, th));
            assert!((b - a / t).abs() <= 1e-6 * a / t, "{th} t={t}: {b} vs {}", a / t);
        }
    }
}

#[test]
fn chebyshev_equality_on_length_four() {
    // Capacity of [−2, 2] is 1, so the bound is 2 for every k.
    let grid = uniform_grid(-2.0, 2.0, 201);
    for k in 1..=3 {
        let r = chebyshev_minmax_bruteforce((-2.0, 2.0), &grid, k, 201, CHEBYSHEV_BUDGET).unwrap();
        assert_eq!(chebyshev_lower(4.0, k).unwrap(), 2.0);
        assert!(r.value >= 2.0 - 1e-12 && r.value <= 2.0 * 1.02, "k={k}: {}", r.value);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, .. ProptestConfig::default() })]

    #[test]
    fn bruteforce_never_beats_the_lemma(u in -3.0f64..3.0, len in 0.1f64..5.0, k in 1usize..=2, extra in 0usize..3) {
        let v = u + len;
        // Candidates: the J-grid plus a few points outside J.
        let mut cand = uniform_grid(u, v, 61);
        cand.extend((0..extra).map(|i| v + 0.3 * (i + 1) as f64));
        let r = chebyshev_minmax_bruteforce((u, v), &cand, k, 61, CHEBYSHEV_BUDGET).unwrap();
        prop_assert!(r.value >= chebyshev_lower(len, k).unwrap() * (1.0 - 1e-12));
    }

    #[test]
    fn interval_bound_scaling(n in 1usize..500, len in 0.1f64..10.0) {
        for v in [IntervalVariant::Turan, IntervalVariant::Lp] {
            let unit = bound_interval(n, v, 2.0);
            prop_assert!((bound_interval(n, v, len) - unit * 2.0 / len).abs() <= 1e-12 * unit / len);
        }
    }
}
