use cara_core::basis::Basis;
use cara_core::cert::{motzkin, motzkin_basis};
use cara_core::fit::{estimate_cara, fit_measure, FitConfig, SerialFitter};
use cara_core::flow::{kernel_flow, FlowConfig};
use cara_core::geometry::moment_map_f64;
use cara_core::mass::{max_mass, MassConfig};
use cara_core::measure::{AtomicMeasure, MomentSeq};
use cara_core::poly::Poly;
use cara_core::ranklab::na_closed_form;
use cara_core::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn seq(basis: &Basis, w: &[f64], pts: &[Vec<f64>]) -> MomentSeq<f64> {
    MomentSeq::new(basis.clone(), moment_map_f64(basis, w, pts)).unwrap()
}

#[test]
fn flow_drift_stays_small_from_random_starts() {
    let basis = Basis::full_degree(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut runs = 0;
    while runs < 10 {
        let w: Vec<f64> = (0..2).map(|_| rng.random_range(0.5..2.0)).collect();
        let p: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..2).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let dist = ((p[0][0] - p[1][0]).powi(2) + (p[0][1] - p[1][1]).powi(2)).sqrt();
        if dist < 0.3 {
            continue;
        }
        let mu = AtomicMeasure::with_separation(2, w.clone(), p, false, 0.0).unwrap();
        let limit = 0.4 * w[0].min(w[1]);
        let cfg = FlowConfig {
            steps: 400,
            ..FlowConfig::default()
        };
        let tr = kernel_flow(&basis, &mu, -limit, limit, &cfg).unwrap();
        assert!(tr.max_drift <= 1e-6, "run {runs}: drift {}", tr.max_drift);
        assert_eq!(tr.states.len(), 401);
        runs += 1;
    }
}

#[test]
fn motzkin_sequence_needs_six_atoms() {
    let b = motzkin();
    let basis = motzkin_basis();
    let pts: Vec<Vec<f64>> = b
        .zeros
        .iter()
        .map(|z| z.iter().map(Scalar::to_f64).collect())
        .collect();
    let s = seq(&basis, &[1.0; 6], &pts);
    // M vanishes to sixth order along some directions, so fits on this
    // boundary sequence converge slowly
    let cfg = FitConfig {
        restarts: 64,
        tolerance: 1e-4,
    };
    let est = estimate_cara(&s, false, Some(6), &SerialFitter { seed: 3 }, &cfg).unwrap();
    assert_eq!(est.k_min, 6);
    assert_eq!(est.k_found, 6);
    assert!(est.witness.converged);
    // every representing measure lives on the zero set of M
    let m = &b.polynomial;
    for x in est.witness.measure.points() {
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let u: Vec<f64> = x.iter().map(|v| v / norm).collect();
        let val = m.terms().fold(0.0, |acc, (mono, c)| {
            acc + Scalar::to_f64(c)
                * mono
                    .exps()
                    .iter()
                    .zip(&u)
                    .map(|(&e, v)| v.powi(e as i32))
                    .product::<f64>()
        });
        assert!(val.abs() < 1e-3, "atom {x:?} has M = {val}");
    }
}

#[test]
fn max_mass_bracket_is_monotone() {
    let basis = Basis::full_degree(1, 2).unwrap();
    let s = MomentSeq::new(basis, vec![1.0, 0.0, 1.0]).unwrap();
    let e = Poly::parse("1 + x^2", Some(1)).unwrap();
    let r = max_mass(
        &s,
        &[0.3],
        &e,
        &SerialFitter { seed: 9 },
        &MassConfig::default(),
    )
    .unwrap();
    assert!(r.c_low <= r.c_high && r.c_high - r.c_low <= 1e-6);
    for p in &r.probes {
        if p.member {
            assert!(p.c <= r.c_low + 1e-15, "{p:?}");
        } else {
            assert!(p.c >= r.c_high - 1e-15, "{p:?}");
        }
    }
    assert!(r.c_star <= r.upper_bound);
    // the Hankel matrix of s − c·s(x) stays positive semidefinite iff c ≤ 1/(1 + x²)
    let x: f64 = 0.3;
    let exact = 1.0 / (1.0 + x * x);
    assert!((r.c_star - exact).abs() <= 1e-5, "{} vs {exact}", r.c_star);
}

#[test]
fn richter_bound_on_the_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 1..=3usize {
        let basis = Basis::full_degree(1, 2 * k as u32).unwrap();
        for _ in 0..4 {
            let atoms = k + 2;
            let w: Vec<f64> = (0..atoms).map(|_| rng.random_range(0.2..2.0)).collect();
            let p: Vec<Vec<f64>> = (0..atoms)
                .map(|i| {
                    vec![-1.0 + 2.0 * i as f64 / (atoms - 1) as f64 + rng.random_range(-0.1..0.1)]
                })
                .collect();
            let s = seq(&basis, &w, &p);
            let est = estimate_cara(
                &s,
                false,
                None,
                &SerialFitter { seed: 2 },
                &FitConfig::default(),
            )
            .unwrap();
            assert!(est.k_found <= k + 1, "k = {k}: found {}", est.k_found);
            assert!(est.k_found <= basis.len());
        }
    }
}

#[test]
fn signed_fit_respects_twice_generic_rank() {
    let basis = Basis::homogeneous(2, 4).unwrap();
    let bound = 2 * na_closed_form(2, 4, true).unwrap() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let w: Vec<f64> = (0..4)
            .map(|i| if i % 2 == 0 { 1.0 } else { -0.7 })
            .collect();
        let p: Vec<Vec<f64>> = (0..4)
            .map(|i| vec![1.0, -1.5 + i as f64 + rng.random_range(-0.2..0.2)])
            .collect();
        let s = seq(&basis, &w, &p);
        let est = estimate_cara(
            &s,
            true,
            None,
            &SerialFitter { seed: 8 },
            &FitConfig::default(),
        )
        .unwrap();
        assert!(est.k_found <= bound, "{} > {bound}", est.k_found);
    }
}

#[test]
fn fits_reproduce_their_moments() {
    let basis = Basis::full_degree(2, 2).unwrap();
    let s = seq(&basis, &[0.5, 2.0], &[vec![0.1, -0.4], vec![-0.8, 0.9]]);
    let r = fit_measure(&s, 2, false, &FitConfig::default(), 21).unwrap();
    assert!(r.converged);
    let back = moment_map_f64(&basis, r.measure.weights(), r.measure.points());
    for (a, b) in back.iter().zip(s.values()) {
        assert!((a - b).abs() <= 1e-9);
    }
    assert!(r.measure.weights().iter().all(|&c| c > 0.0));
}
