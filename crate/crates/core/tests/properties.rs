//! Randomized invariants across the pipeline.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use vop_recession::convproj::approximate_body;
use vop_recession::linalg::{distance_to_cone, min_eigenvalue};
use vop_recession::polycalc::{dual_cone, extreme_rays, project_cone};
use vop_recession::recession::recession_sdvp_lambda;
use vop_recession::scalarize::{lvop_w_system, sdvp_w_membership, sdvp_wc_support, Membership};
use vop_recession::testkit::{
    self, boundedness_oracle, cone_membership_residual, cones_equal, sample_dual_cone,
    verify_approximation, Boundedness, VerifyOptions,
};
use vop_recession::{
    io, lambda_interval, recession, recession_lvop, validate, ApproxFlag, ClarabelBackend, Error,
    PolyhedralCone, Problem, QuadraticObjective, QuadraticVop, RecessionOptions,
};

fn backend() -> ClarabelBackend {
    ClarabelBackend::default()
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn cones_have_unit_coherent_rays(seed in any::<u64>(), dim in 2usize..=4, count in 1usize..=7) {
        let mut rng = StdRng::seed_from_u64(seed);
        let hs: Vec<DVector<f64>> = (0..count)
            .map(|_| DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0)))
            .collect();
        let k = PolyhedralCone::from_halfspaces(dim, hs).unwrap();
        let d = dual_cone(&k).unwrap();
        for cone in [&k, &d] {
            for r in cone.rays() {
                prop_assert!((r.norm() - 1.0).abs() <= 1e-12);
            }
            prop_assert!(cone.coherence_slack() >= -1e-9);
        }
    }

    #[test]
    fn extreme_rays_are_irredundant(seed in any::<u64>(), dim in 2usize..=4, count in 1usize..=8) {
        let mut rng = StdRng::seed_from_u64(seed);
        let hs: Vec<DVector<f64>> = (0..count)
            .map(|_| DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0)))
            .collect();
        let rays = extreme_rays(dim, &hs).unwrap();
        let b = backend();
        for j in 0..rays.len() {
            let others: Vec<_> = rays.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, r)| r.clone()).collect();
            prop_assert!(cone_membership_residual(&others, &rays[j], &b).unwrap() > 1e-7);
        }
    }

    #[test]
    fn dual_is_an_involution(seed in any::<u64>(), dim in 2usize..=3, count in 1usize..=6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = testkit::random_polyhedral_cone(&mut rng, dim, count);
        let kk = dual_cone(&dual_cone(&k).unwrap()).unwrap();
        prop_assert!(cones_equal(k.rays(), kk.rays(), 1e-8, &backend()).unwrap());
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn c_convexity_matches_brute_force(seed in any::<u64>(), q in 2usize..=3, n in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let cone = testkit::random_ordering_cone(&mut rng, q);
        let objective: Vec<QuadraticObjective> = (0..q)
            .map(|_| {
                let l = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
                let shift = rng.random_range(-0.3..0.3) * DMatrix::identity(n, n);
                QuadraticObjective { p: &l * l.transpose() * 0.5 + shift, d: DVector::zeros(n) }
            })
            .collect();
        let ws = sample_dual_cone(&cone, 1000, seed);
        let brute = ws
            .iter()
            .map(|w| {
                let h = objective.iter().zip(w.iter()).fold(DMatrix::zeros(n, n), |acc, (o, &wi)| acc + &o.p * wi);
                min_eigenvalue(&h)
            })
            .fold(f64::INFINITY, f64::min);
        let built = QuadraticVop::new(objective, vec![], DMatrix::zeros(1, n), DVector::from_element(1, 1.0), cone);
        match built {
            Ok(_) => prop_assert!(brute >= -1e-8, "accepted but brute force found {brute}"),
            Err(Error::NotCConvex { min_eig, .. }) => {
                prop_assert!(min_eig < -1e-8);
                prop_assert!(brute < -1e-8, "rejected but brute force min is {brute}");
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn projection_equals_bounded_weights(seed in any::<u64>(), q in 2usize..=3, n in 1usize..=5, m in 1usize..=6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = testkit::random_lvop(&mut rng, q, n, m);
        let problem = Problem::Linear(p.clone());
        let b = backend();
        let rays = match project_cone(&lvop_w_system(&p)) {
            Ok(c) => c.rays().to_vec(),
            Err(Error::EmptyProjection) => vec![],
            Err(e) => panic!("{e}"),
        };
        for w in sample_dual_cone(problem.cone(), 60, seed) {
            let dist = distance_to_cone(&rays, &w);
            match boundedness_oracle(&problem, &w, &b).unwrap() {
                Boundedness::Bounded => prop_assert!(dist <= 1e-6, "bounded weight at distance {dist}"),
                Boundedness::Unbounded => prop_assert!(dist > 1e-9, "unbounded weight inside W"),
                Boundedness::Abstain => {}
            }
        }
    }

    #[test]
    fn lambda_interval_matches_projection(seed in any::<u64>(), n in 1usize..=5, m in 1usize..=6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = testkit::random_lvop(&mut rng, 2, n, m);
        let b = backend();
        match (lambda_interval(&p, &b), project_cone(&lvop_w_system(&p))) {
            (Ok(li), Ok(w)) => {
                let lc = li.weight_cone().unwrap();
                prop_assert!(cones_equal(lc.rays(), w.rays(), 1e-6, &b).unwrap());
            }
            (Err(Error::EmptyProjection), Err(Error::EmptyProjection)) => {}
            (a, b) => prop_assert!(false, "routes disagree: {:?} vs {:?}", a.map(|l| (l.min, l.max)), b.map(|c| c.rays().to_vec())),
        }
    }

    #[test]
    fn bounded_results_mean_bounded_scalarizations(seed in any::<u64>(), q in 2usize..=3, n in 1usize..=4, m in 1usize..=8) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = testkit::random_lvop(&mut rng, q, n, m);
        let approx = recession_lvop(&p).unwrap();
        let b = backend();
        if cones_equal(&approx.outer_rays(), p.cone.cone().rays(), 1e-8, &b).unwrap() {
            prop_assert!(approx.has_flag(ApproxFlag::Bounded));
            let problem = Problem::Linear(p);
            for w in sample_dual_cone(problem.cone(), 20, seed ^ 1) {
                prop_assert_eq!(boundedness_oracle(&problem, &w, &b).unwrap(), Boundedness::Bounded);
            }
        }
    }

    #[test]
    fn linear_results_verify(seed in any::<u64>(), q in 2usize..=3, n in 1usize..=5, m in 1usize..=6) {
        let mut rng = StdRng::seed_from_u64(seed);
        let problem = Problem::Linear(testkit::random_lvop(&mut rng, q, n, m));
        let b = backend();
        let approx = recession(&problem, RecessionOptions::default(), &b).unwrap();
        let report = verify_approximation(&problem, &approx, VerifyOptions { samples: 300, seed, ..Default::default() }, &b).unwrap();
        prop_assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn serialize_then_parse_is_identity(seed in any::<u64>(), q in 2usize..=3, n in 1usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let problems = [
            Problem::Linear(testkit::random_lvop(&mut rng, q, n, 3)),
            Problem::Semidefinite(testkit::random_sdvp(&mut rng, q, n, 2)),
            Problem::Quadratic(testkit::random_qvp(&mut rng, q, n.max(2), 2, 1)),
        ];
        for p in problems {
            let text = io::serialize_problem(&p);
            let back = io::parse_problem(&text).unwrap();
            prop_assert_eq!(io::serialize_problem(&back), text);
        }
    }
}

/// Convex hull of random points, given through its exact support function.
fn hull_support(points: &[DVector<f64>], d: &DVector<f64>) -> (f64, DVector<f64>) {
    points.iter().map(|p| (d.dot(p), p.clone())).fold(
        (f64::NEG_INFINITY, DVector::zeros(d.len())),
        |a, b| if b.0 > a.0 { b } else { a },
    )
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn cutting_loop_keeps_the_sandwich(seed in any::<u64>(), dim in 2usize..=3, count in 4usize..=9) {
        let mut rng = StdRng::seed_from_u64(seed);
        let points: Vec<DVector<f64>> = (0..count)
            .map(|_| DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0)))
            .collect();
        let mut outer = Vec::new();
        for i in 0..dim {
            for s in [1.0, -1.0] {
                let mut a = DVector::zeros(dim);
                a[i] = s;
                outer.push((a, 2.0));
            }
        }
        let b = backend();
        let mut e1 = DVector::zeros(dim);
        e1[0] = 1.0;
        let seed_point = hull_support(&points, &e1).1;
        let body = approximate_body(|d| Ok(hull_support(&points, d)), outer, vec![seed_point], 0.05, 200, &b).unwrap();
        prop_assert!(body.achieved_delta <= 0.05);
        prop_assert!(body.sandwich_slack() >= -1e-9);
        for w in body.history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12, "history {:?}", body.history);
        }
        for z in &body.inner {
            // inner points must come from the body; points are their own support points
            prop_assert!(points.iter().any(|p| (p - z).norm() < 1e-12));
        }
    }

    #[test]
    fn support_bounds_members(seed in any::<u64>(), q in 2usize..=3, n in 1usize..=3) {
        let mut rng = StdRng::seed_from_u64(seed);
        let p = testkit::random_sdvp(&mut rng, q, n, 2);
        let b = backend();
        let c = p.cone.c().clone();
        let d = DVector::from_fn(q, |_, _| rng.random_range(-1.0..1.0));
        let (value, _) = sdvp_wc_support(&p, &d, &b).unwrap();
        for w in sample_dual_cone(&p.cone, 40, seed) {
            let w = &w / c.dot(&w).max(1e-12);
            if sdvp_w_membership(&p, &w, &b).unwrap().0 == Membership::Member {
                prop_assert!(value >= d.dot(&w) - 1e-6, "support {value} below member value {}", d.dot(&w));
            }
        }
    }

    #[test]
    fn semidefinite_results_verify(seed in any::<u64>(), q in 2usize..=3, n in 1usize..=4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let problem = Problem::Semidefinite(testkit::random_sdvp(&mut rng, q, n, 2));
        let b = backend();
        prop_assume!(validate(&problem, &b).is_ok());
        let delta = 0.05;
        let approx = recession(&problem, RecessionOptions { delta, ..Default::default() }, &b).unwrap();
        prop_assert!(!approx.exact);
        prop_assert!(approx.achieved_delta <= delta);
        let report = verify_approximation(&problem, &approx, VerifyOptions { samples: 600, seed, ..Default::default() }, &b).unwrap();
        prop_assert!(report.violations.is_empty(), "{:?}", report.violations);
        prop_assert!(report.hausdorff_estimate <= delta + 0.02);
    }
}

#[test]
fn fixtures_round_trip() {
    for name in ["biobjective_lp.json", "sdp_p1.json", "sdp_p2.json"] {
        let p = io::read_problem(fixture(name)).unwrap();
        let text = io::serialize_problem(&p);
        let back = io::parse_problem(&text).unwrap();
        assert_eq!(back, p, "{name}");
        assert_eq!(io::serialize_problem(&back), text, "{name}");
    }
}

#[test]
fn lambda_route_is_also_an_outer_approximation() {
    let b = backend();
    for (name, delta) in [("sdp_p1.json", 0.01), ("sdp_p2.json", 0.005)] {
        let problem = io::read_problem(fixture(name)).unwrap();
        let Problem::Semidefinite(p) = &problem else {
            unreachable!()
        };
        let opts = RecessionOptions {
            delta,
            ..Default::default()
        };
        let wc = recession(&problem, opts, &b).unwrap();
        let lam = recession_sdvp_lambda(p, opts, &b).unwrap();
        let report = verify_approximation(
            &problem,
            &lam,
            VerifyOptions {
                samples: 2000,
                ..Default::default()
            },
            &b,
        )
        .unwrap();
        assert_eq!(
            report.count("recession"),
            0,
            "{name}: {:?}",
            report.violations
        );
        assert_eq!(report.count("inner"), 0, "{name}");
        let wc_rays = wc.outer_rays();
        for y in lam.outer_rays() {
            let r = cone_membership_residual(&wc_rays, &y, &b).unwrap();
            assert!(r <= delta, "{name}: residual {r}");
        }
    }
}

#[test]
fn zero_objective_semidefinite_gives_the_ordering_cone() {
    let b = backend();
    let problem = io::read_problem(fixture("sdp_p1.json")).unwrap();
    let Problem::Semidefinite(mut p) = problem else {
        unreachable!()
    };
    p.p = DMatrix::zeros(3, 3);
    let approx = recession(
        &Problem::Semidefinite(p.clone()),
        RecessionOptions::default(),
        &b,
    )
    .unwrap();
    assert!(cones_equal(&approx.outer_rays(), p.cone.cone().rays(), 1e-8, &b).unwrap());
}
