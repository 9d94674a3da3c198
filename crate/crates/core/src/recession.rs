//! Recession cone of the upper image, per problem class.
//!
//! Everything goes through the dual cone: the weights `W` with a feasible
//! scalarization dual generate the dual of the recession cone, so the outer
//! generators `Y` are the rays of `(cone Z)+` for an inner generator set `Z`
//! of `W`.

use nalgebra::DVector;

use crate::backend::{BlockKind, ConicProblem, ConicSolverBackend, SolveStatus};
use crate::convproj::{approximate_body, capped_dual_cone, BodyApproximation, DEFAULT_MAX_ITER};
use crate::error::{Error, Result};
use crate::linalg::{dedup_directions, project_onto_cone, unit};
use crate::model::{
    validate, ApproxFlag, ConeApproximation, LinearVop, PolyhedralCone, Problem, QuadraticVop,
    SemidefiniteVop, INTERIOR_TOL,
};
use crate::polycalc::{self, dd::DEDUP_ANGLE};
use crate::scalarize::{
    lambda_support, lvop_w_system, qvp_classify, qvp_w1_w2, sdvp_w_membership, sdvp_w_system,
    sdvp_wc_support, LambdaParametrization, Membership, QvpClass,
};

/// Settings for the approximate (semidefinite) route.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RecessionOptions {
    pub delta: f64,
    pub max_iter: usize,
}

impl Default for RecessionOptions {
    fn default() -> Self {
        RecessionOptions {
            delta: 0.01,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Validates `problem` and computes its recession cone approximation.
pub fn recession(
    problem: &Problem,
    options: RecessionOptions,
    backend: &dyn ConicSolverBackend,
) -> Result<ConeApproximation> {
    validate(problem, backend)?;
    match problem {
        Problem::Linear(p) => recession_lvop(p),
        Problem::Semidefinite(p) => recession_sdvp(p, options, backend),
        Problem::Quadratic(p) => recession_qvp(p),
    }
}

fn zero_cone(q: usize) -> PolyhedralCone {
    PolyhedralCone::from_parts(
        q,
        vec![],
        Some(PolyhedralCone::whole_space(q).rays().to_vec()),
    )
}

/// Whether every ray of `target` lies in `k`.
fn covers(k: &PolyhedralCone, target: &PolyhedralCone) -> bool {
    target.rays().iter().all(|r| k.contains(r, 1e-9))
}

fn from_weight_cone(
    w: &PolyhedralCone,
    c_plus: &PolyhedralCone,
    delta: f64,
    achieved: f64,
    exact: bool,
    mut flags: Vec<ApproxFlag>,
) -> Result<ConeApproximation> {
    let y = polycalc::dual_cone(w)?;
    if covers(w, c_plus) {
        flags.push(ApproxFlag::Bounded);
    }
    Ok(ConeApproximation::new(w, &y, delta, achieved, exact, flags))
}

/// Exact recession cone of a linear vector program.
///
/// `W` is the projection of the dual system; `W = {0}` makes the recession
/// cone all of `R^q`.
pub fn recession_lvop(p: &LinearVop) -> Result<ConeApproximation> {
    let q = p.q();
    match polycalc::project_cone(&lvop_w_system(p)) {
        Ok(w) => from_weight_cone(&w, p.cone.dual(), 0.0, 0.0, true, vec![]),
        Err(Error::EmptyProjection) => Ok(ConeApproximation::new(
            &zero_cone(q),
            &PolyhedralCone::whole_space(q),
            0.0,
            0.0,
            true,
            vec![ApproxFlag::TotallyUnbounded],
        )),
        Err(e) => Err(e),
    }
}

/// `[lambda_min, lambda_max]` for a bi-objective LVOP on the base `c_hat' w = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaInterval {
    pub c_hat: DVector<f64>,
    pub min: f64,
    pub max: f64,
}

impl LambdaInterval {
    pub fn parametrization(&self) -> LambdaParametrization {
        LambdaParametrization::new(self.c_hat.clone()).expect("c_hat was accepted before")
    }

    /// `cone{w(lambda_min), w(lambda_max)}`.
    pub fn weight_cone(&self) -> Result<PolyhedralCone> {
        let par = self.parametrization();
        let lo = par.w(&DVector::from_element(1, self.min));
        let hi = par.w(&DVector::from_element(1, self.max));
        let rays = dedup_directions(
            [lo, hi].iter().filter_map(|r| unit(r, 1e-14)).collect(),
            DEDUP_ANGLE,
        );
        PolyhedralCone::from_rays(2, rays)
    }

    pub fn is_singleton(&self) -> bool {
        (self.max - self.min).abs() <= 1e-9
    }
}

/// Base normal for [`lambda_interval`]: `(1, 1)` when it is interior to `C`,
/// otherwise the cone's own `c`.
pub fn default_base_normal(p: &LinearVop) -> DVector<f64> {
    let ones = DVector::from_element(2, 1.0);
    let interior = p
        .cone
        .cone()
        .halfspaces()
        .unwrap_or_default()
        .iter()
        .all(|n| n.dot(&ones) > INTERIOR_TOL);
    if interior {
        ones
    } else {
        p.cone.c().clone()
    }
}

/// The two scalar LPs `min / max lambda` s.t. `w(lambda) in C+`, `-P w(lambda) = A' y`, `y >= 0`.
///
/// Fails with [`Error::EmptyProjection`] when both are infeasible (`W = {0}`).
pub fn lambda_interval(p: &LinearVop, backend: &dyn ConicSolverBackend) -> Result<LambdaInterval> {
    lambda_interval_with_base(p, default_base_normal(p), backend)
}

pub fn lambda_interval_with_base(
    p: &LinearVop,
    c_hat: DVector<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<LambdaInterval> {
    if p.q() != 2 {
        return Err(Error::InvalidInput(format!(
            "lambda interval needs q = 2, got q = {}",
            p.q()
        )));
    }
    let par = LambdaParametrization::new(c_hat.clone())?;
    let (w0, b) = par.affine();
    let b = b.column(0).into_owned();
    let (n, m) = (p.n(), p.m());
    let solve = |sign: f64| -> Result<Option<f64>> {
        let mut lp = ConicProblem::new();
        let lam = lp.add_block("lambda", BlockKind::Free(1));
        let y = lp.add_block("y", BlockKind::Nonneg(m));
        lp.add_objective(lam, sign);
        for r in p.cone.cone().rays() {
            // r . (w0 + b lambda) >= 0
            lp.add_inequality(vec![(lam, -r.dot(&b))], r.dot(&w0));
        }
        let pb = &p.p * &b;
        let pw0 = &p.p * &w0;
        for i in 0..n {
            let mut row = vec![(lam, pb[i])];
            row.extend((0..m).map(|j| (y + j, p.a[(j, i)])));
            lp.add_equality(row, -pw0[i]);
        }
        match backend.solve(&lp) {
            SolveStatus::Optimal { x, .. } => Ok(Some(x[lam])),
            SolveStatus::Infeasible => Ok(None),
            SolveStatus::Unbounded => Err(Error::backend(
                "lambda LP",
                "unbounded although Lambda is bounded",
            )),
            SolveStatus::NumericalFailure(msg) => Err(Error::backend("lambda LP", msg)),
        }
    };
    match (solve(1.0)?, solve(-1.0)?) {
        (Some(lo), Some(hi)) => Ok(LambdaInterval {
            c_hat,
            min: lo.min(hi),
            max: hi.max(lo),
        }),
        (None, None) => Err(Error::EmptyProjection),
        _ => Err(Error::backend(
            "lambda LP",
            "inconsistent feasibility between min and max",
        )),
    }
}

fn weight_rays(points: &[DVector<f64>]) -> Vec<DVector<f64>> {
    dedup_directions(
        points.iter().filter_map(|z| unit(z, 1e-9)).collect(),
        DEDUP_ANGLE,
    )
}

fn cone_approximation_from_points(
    q: usize,
    points: &[DVector<f64>],
    c_plus: &PolyhedralCone,
    delta: f64,
    achieved: f64,
) -> Result<ConeApproximation> {
    // solver output can sit a hair outside C+
    let snapped: Vec<DVector<f64>> = points
        .iter()
        .map(|w| {
            if c_plus.contains(w, 1e-12) {
                w.clone()
            } else {
                project_onto_cone(c_plus.rays(), w)
            }
        })
        .collect();
    let z = weight_rays(&snapped);
    if z.is_empty() {
        return Ok(ConeApproximation::new(
            &zero_cone(q),
            &PolyhedralCone::whole_space(q),
            delta,
            achieved,
            false,
            vec![ApproxFlag::DegenerateW],
        ));
    }
    let raw = PolyhedralCone::from_rays(q, z)?;
    let inner = raw.canonical().unwrap_or(raw);
    from_weight_cone(&inner, c_plus, delta, achieved, false, vec![])
}

/// Body approximation of `W_c` for an SDVP.
pub fn approximate_wc(
    p: &SemidefiniteVop,
    options: RecessionOptions,
    backend: &dyn ConicSolverBackend,
) -> Result<BodyApproximation> {
    let q = p.q();
    approximate_body(
        |d| sdvp_wc_support(p, d, backend),
        capped_dual_cone(p.cone.cone().rays(), p.cone.c()),
        vec![DVector::zeros(q)],
        options.delta,
        options.max_iter,
        backend,
    )
}

/// Finite outer approximation of the recession cone of an SDVP through `W_c`.
///
/// Never reports `exact`, since `W` need not be closed.
pub fn recession_sdvp(
    p: &SemidefiniteVop,
    options: RecessionOptions,
    backend: &dyn ConicSolverBackend,
) -> Result<ConeApproximation> {
    let body = approximate_wc(p, options, backend)?;
    let (points, dropped) = drop_apex_noise(p, &body.inner, backend)?;
    cone_approximation_from_points(
        p.q(),
        &points,
        p.cone.dual(),
        options.delta,
        body.achieved_delta + dropped,
    )
}

/// Inner points of `W_c` closer than this to the apex carry no reliable direction.
const APEX_NOISE: f64 = 1e-5;

/// Drops near-apex inner points whose direction fails the membership test.
///
/// Since `0` is itself an inner point, dropping `z` moves the inner hull by at
/// most `|z|`; the largest such norm is returned for the error budget.
fn drop_apex_noise(
    p: &SemidefiniteVop,
    points: &[DVector<f64>],
    backend: &dyn ConicSolverBackend,
) -> Result<(Vec<DVector<f64>>, f64)> {
    let mut kept = Vec::with_capacity(points.len());
    let mut dropped = 0.0f64;
    for z in points {
        let n = z.norm();
        if n == 0.0 {
            continue;
        }
        if n > APEX_NOISE || sdvp_w_membership(p, &(z / n), backend)?.0 == Membership::Member {
            kept.push(z.clone());
        } else {
            dropped = dropped.max(n);
        }
    }
    Ok((kept, dropped))
}

/// Same pipeline through the `(q-1)`-dimensional base set `Lambda`.
///
/// The tolerance applies to `Lambda`, not to the cone; no Hausdorff guarantee
/// on `W` follows from it.
pub fn recession_sdvp_lambda(
    p: &SemidefiniteVop,
    options: RecessionOptions,
    backend: &dyn ConicSolverBackend,
) -> Result<ConeApproximation> {
    let q = p.q();
    if q < 2 {
        return Err(Error::InvalidInput("the Lambda route needs q >= 2".into()));
    }
    let par = LambdaParametrization::new(p.cone.c().clone())?;
    let sys = sdvp_w_system(p);
    let (w0, b) = par.affine();
    // w(lambda) in C+  <=>  -(B' r) . lambda <= r . w0 for every ray r of C
    let outer: Vec<(DVector<f64>, f64)> = p
        .cone
        .cone()
        .rays()
        .iter()
        .map(|r| (-(b.transpose() * r), r.dot(&w0)))
        .collect();
    let mut seed_dir = DVector::zeros(par.dim());
    seed_dir[0] = 1.0;
    let Some((_, seed)) = lambda_support(&sys, &par, &seed_dir, backend)? else {
        return cone_approximation_from_points(q, &[], p.cone.dual(), options.delta, 0.0);
    };
    let body = approximate_body(
        |d| {
            lambda_support(&sys, &par, d, backend)?.ok_or_else(|| {
                Error::backend("Lambda support problem", "infeasible after a feasible call")
            })
        },
        outer,
        vec![seed],
        options.delta,
        options.max_iter,
        backend,
    )?;
    let points: Vec<DVector<f64>> = body.inner.iter().map(|l| par.w(l)).collect();
    cone_approximation_from_points(
        q,
        &points,
        p.cone.dual(),
        options.delta,
        body.achieved_delta,
    )
}

/// Recession cone of a quadratic vector program; exact in every case.
pub fn recession_qvp(p: &QuadraticVop) -> Result<ConeApproximation> {
    let c_plus = p.cone.dual();
    let bounded = |mut flags: Vec<ApproxFlag>| {
        flags.push(ApproxFlag::Bounded);
        ConeApproximation::new(c_plus, p.cone.cone(), 0.0, 0.0, true, flags)
    };
    match qvp_classify(p) {
        QvpClass::DualIsCPlusA | QvpClass::DualIsCPlusB => Ok(bounded(vec![])),
        QvpClass::OrthantNonlinear => Ok(bounded(vec![ApproxFlag::WMayBeSmaller])),
        QvpClass::GeneralCase { linear: true } => {
            let lin = p
                .as_linear()
                .ok_or_else(|| Error::InvalidInput("linear QVP has no LVOP form".into()))?;
            let mut r = recession_lvop(&lin)?;
            r.flags.push(ApproxFlag::LinearDelegate);
            Ok(r)
        }
        QvpClass::GeneralCase { linear: false } => {
            let (w1, _) = qvp_w1_w2(p)?;
            // W1 is a face of C+; meeting the interior would force every P_i = 0.
            let s = w1
                .rays()
                .iter()
                .fold(DVector::zeros(p.q()), |acc, r| acc + r);
            let interior =
                !w1.is_trivial() && p.cone.dual_margin(&s) > INTERIOR_TOL * s.norm().max(1.0);
            assert!(
                !interior,
                "W1 meets the interior of C+ although some objective Hessian is nonzero"
            );
            Ok(bounded(vec![]))
        }
    }
}
