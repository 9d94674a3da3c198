//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use vop_recession::backend::{BlockKind, ConicProblem};
use vop_recession::linalg::{angle, distance_to_cone, rank, unit};
use vop_recession::model::LiftedFeasibilitySystem;
use vop_recession::polycalc::{
    dual_cone, extreme_rays, hausdorff_section_estimate, project_cone, SectionSet,
};
use vop_recession::scalarize::{lvop_w_system, Membership};
use vop_recession::testkit::{
    self, boundedness_oracle, cone_membership_residual, cones_equal, dual_membership,
    hausdorff_r2_exact, recession_direction, sample_dual_cone, Boundedness, VerifyOptions,
};
use vop_recession::{
    io, lambda_interval, recession, recession_lvop, validate, ClarabelBackend, ConicSolverBackend,
    Error, PolyhedralCone, Problem, QuadraticObjective, QuadraticVop, RecessionOptions,
};

type Outcome = Result<String, String>;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn v(xs: &[f64]) -> DVector<f64> {
    DVector::from_row_slice(xs)
}

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn e2s(e: Error) -> String {
    e.to_string()
}

fn run_cli(args: &[&str]) -> Result<(Value, Duration), String> {
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_vop-recession"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    let dt = t.elapsed();
    if !out.status.success() {
        return fail(format!(
            "{args:?} exited with {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    let doc = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok((doc, dt))
}

fn criterion_1() -> Outcome {
    let file = fixture("biobjective_lp.json");
    let (li, t1) = run_cli(&["lambda-interval", &file])?;
    let lo = li["lambda_min"].as_f64().ok_or("missing lambda_min")?;
    let hi = li["lambda_max"].as_f64().ok_or("missing lambda_max")?;
    if (lo - 0.2).abs() > 1e-6 || (hi - 0.8).abs() > 1e-6 {
        return fail(format!("interval ({lo}, {hi})"));
    }
    let (env, t2) = run_cli(&["recession", &file])?;
    let outer: Vec<DVector<f64>> = env["outer"]
        .as_array()
        .ok_or("missing outer")?
        .iter()
        .map(|r| {
            v(&r.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_f64().unwrap())
                .collect::<Vec<_>>())
        })
        .collect();
    if outer.len() != 2 {
        return fail(format!("{} outer rays", outer.len()));
    }
    if env["exact"] != Value::Bool(true) {
        return fail("result not flagged exact");
    }
    let mut worst = 0.0f64;
    for target in [v(&[-1.0, 4.0]), v(&[4.0, -1.0])] {
        let best = outer
            .iter()
            .map(|y| angle(y, &target))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    if worst > 1e-6 {
        return fail(format!("angular error {worst:.2e}"));
    }
    for (name, t) in [("lambda-interval", t1), ("recession", t2)] {
        if t >= Duration::from_secs(1) {
            return fail(format!("{name} took {t:.2?}"));
        }
    }
    Ok(format!(
        "lambda = ({lo:.9}, {hi:.9}), Y angular error {worst:.1e}, {t1:.2?} + {t2:.2?}"
    ))
}

fn criterion_2(backend: &dyn ConicSolverBackend) -> Outcome {
    let mut parts = Vec::new();
    for (file, delta) in [
        ("sdp_p1.json", 0.08),
        ("sdp_p1.json", 0.01),
        ("sdp_p2.json", 0.005),
    ] {
        let problem = io::read_problem(fixture(file)).map_err(e2s)?;
        let t = Instant::now();
        let approx = recession(
            &problem,
            RecessionOptions {
                delta,
                ..Default::default()
            },
            backend,
        )
        .map_err(e2s)?;
        let dt = t.elapsed();
        if dt > Duration::from_secs(60) {
            return fail(format!("{file} at {delta}: {dt:.2?}"));
        }
        if approx.exact {
            return fail(format!("{file}: semidefinite result flagged exact"));
        }
        let report = testkit::verify_approximation(
            &problem,
            &approx,
            VerifyOptions {
                samples: 10_000,
                ..Default::default()
            },
            backend,
        )
        .map_err(e2s)?;
        let inner = report.count("inner");
        if inner > 0 {
            return fail(format!("{file} at {delta}: {inner} inner violations"));
        }
        if report.hausdorff_estimate > delta + 0.02 {
            return fail(format!(
                "{file} at {delta}: Hausdorff {:.3e} > {:.3e}",
                report.hausdorff_estimate,
                delta + 0.02
            ));
        }
        parts.push(format!(
            "{}@{delta}: {:.2?}, H {:.2e}, {} other violations",
            file.trim_end_matches(".json"),
            dt,
            report.hausdorff_estimate,
            report.violations.len()
        ));
    }
    Ok(parts.join("; "))
}

/// Distance from `w` to the boundary of a polyhedral cone `W` (relative to `|w| = 1`).
fn polyhedral_boundary_distance(w_cone: &PolyhedralCone, w: &DVector<f64>) -> f64 {
    let q = w.len();
    if w_cone.rays().is_empty() {
        return w.norm();
    }
    let d = w_cone.distance(w);
    if d > 1e-12 {
        return d;
    }
    if rank(&DMatrix::from_columns(w_cone.rays()), 1e-9) < q {
        return 0.0;
    }
    w_cone
        .halfspace_form()
        .expect("H-form of a valid cone")
        .iter()
        .map(|n| n.dot(w) / n.norm())
        .fold(f64::INFINITY, f64::min)
}

/// Certificate that `w` is within `eps` of the boundary of `W`: a point at
/// distance `eps` on which the primal oracle gives the opposite verdict.
fn flips_nearby(
    problem: &Problem,
    w: &DVector<f64>,
    base: Boundedness,
    backend: &dyn ConicSolverBackend,
) -> bool {
    let eps = 1e-6 * w.norm();
    let q = w.len();
    let mut cands = Vec::new();
    for i in 0..q {
        for s in [1.0, -1.0] {
            let mut c = w.clone();
            c[i] += s * eps;
            cands.push(c);
        }
    }
    if let Ok(Some(d)) = recession_direction(problem, w, backend) {
        cands.push(w + &d * eps);
        cands.push(w - &d * eps);
    }
    cands
        .iter()
        .filter(|c| problem.cone().dual_margin(c) >= 0.0)
        .any(|c| {
            matches!(
                (base, boundedness_oracle(problem, c, backend)),
                (Boundedness::Bounded, Ok(Boundedness::Unbounded))
                    | (Boundedness::Unbounded, Ok(Boundedness::Bounded))
            )
        })
}

#[derive(Default)]
struct Agreement {
    instances: usize,
    decided: usize,
    disagreements: usize,
    out_of_band: usize,
    abstained: usize,
    bounded: usize,
    worst_rate: f64,
}

impl Agreement {
    fn summary(&self, label: &str) -> String {
        format!(
            "{label}: {} instances, {} decided ({} bounded), {} disagreements ({} outside band), {} abstained, min rate {:.4}",
            self.instances,
            self.decided,
            self.bounded,
            self.disagreements,
            self.out_of_band,
            self.abstained,
            self.worst_rate
        )
    }
}

fn agreement_on(
    problem: &Problem,
    seed: u64,
    band: impl Fn(&DVector<f64>, Boundedness) -> bool,
    acc: &mut Agreement,
    backend: &dyn ConicSolverBackend,
) -> Result<(), String> {
    let ws = sample_dual_cone(problem.cone(), 500, seed);
    let (mut decided, mut agree) = (0usize, 0usize);
    for w in &ws {
        let b = boundedness_oracle(problem, w, backend).map_err(e2s)?;
        let (m, _) = dual_membership(problem, w, backend).map_err(e2s)?;
        let ok = match (b, m) {
            (Boundedness::Abstain, _) | (_, Membership::Abstain) => {
                acc.abstained += 1;
                continue;
            }
            (Boundedness::Bounded, Membership::Member) => true,
            (Boundedness::Unbounded, Membership::NonMember) => true,
            _ => false,
        };
        decided += 1;
        if b == Boundedness::Bounded {
            acc.bounded += 1;
        }
        if ok {
            agree += 1;
        } else {
            acc.disagreements += 1;
            if !band(w, b) {
                acc.out_of_band += 1;
            }
        }
    }
    acc.instances += 1;
    acc.decided += decided;
    let rate = if decided == 0 {
        1.0
    } else {
        agree as f64 / decided as f64
    };
    if acc.instances == 1 || rate < acc.worst_rate {
        acc.worst_rate = rate;
    }
    Ok(())
}

fn criterion_3(backend: &dyn ConicSolverBackend) -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut lin = Agreement::default();
    let mut seed = 0u64;
    while lin.instances < 100 {
        seed += 1;
        let q = 2 + (lin.instances % 2);
        let n = rng.random_range(1..=8);
        let m = rng.random_range(1..=8);
        let p = testkit::random_lvop(&mut rng, q, n, m);
        let problem = Problem::Linear(p.clone());
        if validate(&problem, backend).is_err() {
            continue;
        }
        let w_cone = match project_cone(&lvop_w_system(&p)) {
            Ok(c) => c,
            Err(Error::EmptyProjection) => PolyhedralCone::from_rays(q, vec![]).map_err(e2s)?,
            Err(e) => return fail(e.to_string()),
        };
        agreement_on(
            &problem,
            seed,
            |w, _| polyhedral_boundary_distance(&w_cone, w) <= 1e-6,
            &mut lin,
            backend,
        )?;
    }
    let mut sd = Agreement::default();
    while sd.instances < 30 {
        seed += 1;
        let q = 2 + (sd.instances % 2);
        let n = rng.random_range(1..=4);
        let p = testkit::random_sdvp(&mut rng, q, n, 2);
        let problem = Problem::Semidefinite(p);
        if validate(&problem, backend).is_err() {
            continue;
        }
        agreement_on(
            &problem,
            seed,
            |w, b| flips_nearby(&problem, w, b, backend),
            &mut sd,
            backend,
        )?;
    }
    let msg = format!("{}; {}", lin.summary("LVOP"), sd.summary("SDVP"));
    if lin.worst_rate < 0.995 || sd.worst_rate < 0.995 || lin.out_of_band + sd.out_of_band > 0 {
        return fail(msg);
    }
    Ok(msg)
}

fn criterion_4(backend: &dyn ConicSolverBackend) -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut done = 0usize;
    let mut worst = [0.0f64; 2];
    let mut exact_checked = 0usize;
    while done < 50 {
        let dim = 2 + done % 2;
        let delta = if done % 4 < 2 { 0.05 } else { 0.01 };
        let r0 = rng.random_range(dim..dim + 4);
        let k = testkit::random_pointed_cone(&mut rng, dim, r0)
            .canonical()
            .map_err(e2s)?;
        // a unit interior direction with a_i . r >= gamma on every ray
        let c = unit(&k.rays().iter().sum::<DVector<f64>>(), 1e-12).ok_or("zero ray sum")?;
        let gamma = k
            .rays()
            .iter()
            .map(|r| r.dot(&c))
            .fold(f64::INFINITY, f64::min);
        if gamma < 0.05 {
            continue;
        }
        // pulling rays toward c by t moves each unit point of K by at most t (1 + 1/gamma)
        let t = rng.random_range(0.5..=1.0) * delta / (1.0 + 1.0 / gamma);
        let mut z: Vec<DVector<f64>> = k
            .rays()
            .iter()
            .map(|r| unit(&(r * (1.0 - t) + &c * t), 1e-12).unwrap())
            .collect();
        for _ in 0..rng.random_range(0..3) {
            let mix: DVector<f64> = z.iter().map(|zi| zi * rng.random_range(0.0..1.0)).sum();
            if let Some(u) = unit(&mix, 1e-9) {
                z.push(u);
            }
        }
        let z_cone = PolyhedralCone::from_rays(dim, z).map_err(e2s)?;
        if dim == 2 {
            let inner_err = hausdorff_r2_exact(k.rays(), z_cone.rays());
            if inner_err > delta + 1e-12 {
                return fail(format!("synthetic Z not delta-inner: {inner_err:.3e}"));
            }
        }
        let y = dual_cone(&z_cone).map_err(e2s)?;
        let k_plus = dual_cone(&k).map_err(e2s)?;
        for r in k_plus.rays() {
            let res = cone_membership_residual(y.rays(), r, backend).map_err(e2s)?;
            if res > 1e-8 {
                return fail(format!("dual of K not inside cone(Y): residual {res:.2e}"));
            }
        }
        let est = hausdorff_section_estimate(
            &SectionSet::Cone(k_plus.clone()),
            &SectionSet::Cone(y.clone()),
            2000,
            done as u64,
        );
        let slot = usize::from(delta < 0.03);
        worst[slot] = worst[slot].max(est / delta);
        if est > delta {
            return fail(format!(
                "instance {done}: estimate {est:.3e} > delta {delta}"
            ));
        }
        if dim == 2 {
            let exact = hausdorff_r2_exact(k_plus.rays(), y.rays());
            if exact > delta + 1e-12 || est > exact + 1e-12 {
                return fail(format!("R2 exact {exact:.3e}, estimate {est:.3e}"));
            }
            exact_checked += 1;
        }
        done += 1;
    }
    Ok(format!(
        "50 cones, max estimate/delta {:.3} (delta 0.05) and {:.3} (delta 0.01), {exact_checked} planar cases exact-checked",
        worst[0], worst[1]
    ))
}

fn sort_rays(mut rays: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    rays.sort_by(|a, b| a.partial_cmp(b).unwrap());
    rays
}

fn criterion_5(backend: &dyn ConicSolverBackend) -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let opts = RecessionOptions::default();
    let mut quad = 0;
    while quad < 20 {
        let q = rng.random_range(2..=3);
        let n = rng.random_range(2..=4);
        let m = rng.random_range(1..=4);
        let r0 = rng.random_range(1..=2);
        let p = testkit::random_qvp(&mut rng, q, n, m, r0);
        let problem = Problem::Quadratic(p.clone());
        if validate(&problem, backend).is_err() {
            continue;
        }
        let approx = recession(&problem, opts, backend).map_err(e2s)?;
        if !cones_equal(&approx.outer_rays(), p.cone.cone().rays(), 1e-8, backend).map_err(e2s)? {
            return fail(format!(
                "constrained instance {quad}: Y does not generate C"
            ));
        }
        quad += 1;
    }
    let mut orth = 0;
    while orth < 20 {
        let q = rng.random_range(2..=3);
        let n = rng.random_range(2..=4);
        let m = rng.random_range(1..=4);
        let p = testkit::random_qvp(&mut rng, q, n, m, 0);
        let problem = Problem::Quadratic(p);
        if validate(&problem, backend).is_err() {
            continue;
        }
        let approx = recession(&problem, opts, backend).map_err(e2s)?;
        let expect: Vec<Vec<f64>> = (0..q)
            .map(|i| (0..q).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let got = sort_rays(approx.outer.clone());
        let same = got.len() == q
            && got
                .iter()
                .zip(sort_rays(expect))
                .all(|(a, b)| a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-12));
        if !same || !approx.exact {
            return fail(format!("orthant instance {orth}: Y = {:?}", approx.outer));
        }
        orth += 1;
    }
    let mut delegated = 0;
    while delegated < 20 {
        let q = rng.random_range(2..=3);
        let r0 = rng.random_range(1..=5);
        let r1 = rng.random_range(1..=5);
        let lv = testkit::random_lvop(&mut rng, q, r0, r1);
        let objective = (0..q)
            .map(|i| QuadraticObjective {
                p: DMatrix::zeros(lv.n(), lv.n()),
                d: lv.p.column(i).into_owned(),
            })
            .collect();
        let qv = QuadraticVop::new(
            objective,
            vec![],
            lv.a.clone(),
            lv.b.clone(),
            lv.cone.clone(),
        )
        .map_err(e2s)?;
        let problem = Problem::Quadratic(qv);
        if validate(&problem, backend).is_err() {
            continue;
        }
        let a = recession(&problem, opts, backend).map_err(e2s)?;
        let b = recession_lvop(&lv).map_err(e2s)?;
        if a.inner != b.inner || a.outer != b.outer || a.exact != b.exact {
            return fail(format!("delegation mismatch on instance {delegated}"));
        }
        delegated += 1;
    }
    Ok(
        "20 constrained -> cl C, 20 orthant -> unit vectors, 20 zero-Hessian delegations identical"
            .into(),
    )
}

/// Residual of the lifted equalities at the LP solution of
/// `min t s.t. |E_w w + E_y y|_inf <= t, y >= 0` for a fixed `w`, relative to
/// the size of the terms.
fn lift_residual(
    sys: &LiftedFeasibilitySystem,
    w: &DVector<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<f64, String> {
    let q = sys.weight_dim;
    let mut lp = ConicProblem::new();
    let t = lp.add_block("t", BlockKind::Free(1));
    let y = lp.add_block("y", BlockKind::Nonneg(sys.nonneg_len()));
    lp.add_objective(t, 1.0);
    for i in 0..sys.equalities.nrows() {
        let row = sys.equalities.row(i);
        let rhs: f64 = (0..q).map(|j| row[j] * w[j]).sum();
        let coeffs: Vec<(usize, f64)> =
            (0..sys.nonneg_len()).map(|j| (y + j, row[q + j])).collect();
        let mut up = coeffs.clone();
        up.push((t, -1.0));
        let mut down: Vec<(usize, f64)> = coeffs.iter().map(|&(j, c)| (j, -c)).collect();
        down.push((t, -1.0));
        lp.add_inequality(up, -rhs);
        lp.add_inequality(down, rhs);
    }
    let (_, sol) = backend.solve(&lp).expect_optimal("lift LP").map_err(e2s)?;
    let mut lifted = w.clone().resize_vertically(q + sys.nonneg_len(), 0.0);
    for j in 0..sys.nonneg_len() {
        lifted[q + j] = sol[y + j].max(0.0);
    }
    let scale = (sys.equalities.abs() * lifted.abs()).amax().max(1.0);
    Ok((&sys.equalities * &lifted).amax() / scale)
}

/// A feasible lifted point from an LP with a random objective on `w` in a box.
fn sample_lifted(
    sys: &LiftedFeasibilitySystem,
    rng: &mut StdRng,
    backend: &dyn ConicSolverBackend,
) -> Result<DVector<f64>, String> {
    let q = sys.weight_dim;
    let mut lp = ConicProblem::new();
    let w = sys.embed(&mut lp);
    for j in 0..q {
        lp.add_objective(w + j, rng.random_range(-1.0..1.0));
        lp.add_inequality(vec![(w + j, 1.0)], 1.0);
        lp.add_inequality(vec![(w + j, -1.0)], 1.0);
    }
    let (_, x) = backend
        .solve(&lp)
        .expect_optimal("sampling LP")
        .map_err(e2s)?;
    Ok(x.rows(w, q).into_owned())
}

fn criterion_6(backend: &dyn ConicSolverBackend) -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);

    // double description: normalized, sound, complete, irredundant
    for inst in 0..200 {
        let dim = 2 + inst % 3;
        let hs: Vec<DVector<f64>> = (0..rng.random_range(1..=dim + 4))
            .map(|_| DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0)))
            .collect();
        let rays = extreme_rays(dim, &hs).map_err(e2s)?;
        for r in &rays {
            if (r.norm() - 1.0).abs() > 1e-12 {
                return fail(format!("DD instance {inst}: ray norm {}", r.norm()));
            }
            if hs.iter().any(|a| a.dot(r) < -1e-9 * a.norm()) {
                return fail(format!("DD instance {inst}: ray violates a halfspace"));
            }
        }
        for j in 0..rays.len() {
            let others: Vec<DVector<f64>> = rays
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, r)| r.clone())
                .collect();
            if cone_membership_residual(&others, &rays[j], backend).map_err(e2s)? < 1e-7 {
                return fail(format!("DD instance {inst}: ray {j} is redundant"));
            }
        }
        for _ in 0..5 {
            let mut lp = ConicProblem::new();
            let x = lp.add_block("x", BlockKind::Free(dim));
            for a in &hs {
                lp.add_inequality((0..dim).map(|i| (x + i, -a[i])).collect(), 0.0);
            }
            for i in 0..dim {
                lp.add_objective(x + i, rng.random_range(-1.0..1.0));
                lp.add_inequality(vec![(x + i, 1.0)], 1.0);
                lp.add_inequality(vec![(x + i, -1.0)], 1.0);
            }
            let (_, sol) = backend
                .solve(&lp)
                .expect_optimal("DD sampling LP")
                .map_err(e2s)?;
            let p = sol.rows(x, dim).into_owned();
            if distance_to_cone(&rays, &p) > 1e-6 * p.norm().max(1.0) {
                return fail(format!(
                    "DD instance {inst}: feasible point outside the ray cone"
                ));
            }
        }
    }

    // dual involution
    for inst in 0..200 {
        let dim = 2 + inst % 2;
        let r0 = rng.random_range(1..=5);
        let k = testkit::random_polyhedral_cone(&mut rng, dim, r0);
        let kk = dual_cone(&dual_cone(&k).map_err(e2s)?).map_err(e2s)?;
        if !cones_equal(k.rays(), kk.rays(), 1e-8, backend).map_err(e2s)? {
            return fail(format!("involution instance {inst} failed"));
        }
        if dim == 2 {
            let h = hausdorff_r2_exact(k.rays(), kk.rays());
            if h > 1e-8 {
                return fail(format!(
                    "involution instance {inst}: exact planar distance {h:.2e}"
                ));
            }
        }
    }

    // projection soundness and completeness
    let mut planar = 0;
    for inst in 0..200 {
        let q = 2 + inst % 2;
        let r0 = rng.random_range(1..=6);
        let r1 = rng.random_range(1..=6);
        let p = testkit::random_lvop(&mut rng, q, r0, r1);
        let sys = lvop_w_system(&p);
        let proj = match project_cone(&sys) {
            Ok(c) => Some(c),
            Err(Error::EmptyProjection) => None,
            Err(e) => return fail(e.to_string()),
        };
        let rays = proj.as_ref().map(|c| c.rays().to_vec()).unwrap_or_default();
        for r in &rays {
            if sys.member_cone.iter().any(|n| n.dot(r) < -1e-9) {
                return fail(format!("projection instance {inst}: ray outside C+"));
            }
            let res = lift_residual(&sys, r, backend)?;
            if res > 1e-7 {
                return fail(format!(
                    "projection instance {inst}: ray does not lift ({res:.2e})"
                ));
            }
        }
        for _ in 0..5 {
            let w = sample_lifted(&sys, &mut rng, backend)?;
            if distance_to_cone(&rays, &w) > 1e-6 * w.norm().max(1.0) {
                return fail(format!(
                    "projection instance {inst}: lifted point projects outside"
                ));
            }
        }
        if q == 2 {
            let li = match lambda_interval(&p, backend) {
                Ok(li) => Some(li.weight_cone().map_err(e2s)?),
                Err(Error::EmptyProjection) => None,
                Err(e) => return fail(e.to_string()),
            };
            let h = match (&proj, &li) {
                (Some(a), Some(b)) => hausdorff_r2_exact(a.rays(), b.rays()),
                (None, None) => 0.0,
                _ => 1.0,
            };
            if h > 1e-6 {
                return fail(format!(
                    "projection instance {inst}: planar exact distance to Lambda cone {h:.2e}"
                ));
            }
            planar += 1;
        }
    }

    // planar Hausdorff estimator against the exact routine
    for inst in 0..200 {
        let r0 = rng.random_range(1..=3);
        let k1 = testkit::random_polyhedral_cone(&mut rng, 2, r0);
        let r0 = rng.random_range(1..=3);
        let k2 = testkit::random_polyhedral_cone(&mut rng, 2, r0);
        let exact = hausdorff_r2_exact(k1.rays(), k2.rays());
        let s1 = SectionSet::Cone(k1);
        let s2 = SectionSet::Cone(k2);
        let e_small = hausdorff_section_estimate(&s1, &s2, 64, inst);
        let e_big = hausdorff_section_estimate(&s1, &s2, 512, inst);
        if e_small > e_big + 1e-15 || e_big > exact + 1e-9 {
            return fail(format!(
                "estimator instance {inst}: {e_small:.4} / {e_big:.4} vs exact {exact:.4}"
            ));
        }
    }
    Ok(format!(
        "200 DD, 200 involution, 200 projection ({planar} planar vs Lambda route), 200 planar estimator instances"
    ))
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let backend = ClarabelBackend::default();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("bi-objective linear reference", Box::new(criterion_1)),
        (
            "semidefinite reference problems",
            Box::new(|| criterion_2(&backend)),
        ),
        (
            "dual membership vs primal boundedness",
            Box::new(|| criterion_3(&backend)),
        ),
        (
            "inner-to-outer tolerance transfer",
            Box::new(|| criterion_4(&backend)),
        ),
        (
            "quadratic classification",
            Box::new(|| criterion_5(&backend)),
        ),
        (
            "polyhedral calculus oracles",
            Box::new(|| criterion_6(&backend)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let dt = t.elapsed();
        match out {
            Ok(msg) => println!("PASS criterion {}: {name} ({dt:.2?}) {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({dt:.2?}) {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
