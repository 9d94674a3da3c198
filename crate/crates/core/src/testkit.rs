//! Brute-force oracles, samplers and random instance generators.
//!
//! Nothing here is used by the recession pipeline itself; these routines exist
//! to check its answers independently (primal scalarizations instead of dual
//! systems, exact planar geometry instead of sampling).

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::backend::{BlockKind, ConicProblem, ConicSolverBackend, Gate, SolveStatus};
use crate::error::{Error, Result};
use crate::linalg::{self, distance_to_cone, unit};
use crate::model::{
    add_quadratic_constraint, ConeApproximation, LinearVop, OrderingCone, PolyhedralCone, Problem,
    QuadraticConstraint, QuadraticObjective, QuadraticVop, SemidefiniteVop,
};
use crate::polycalc::{hausdorff_section_estimate, sample_section, SectionSet};
use crate::scalarize::{
    qvp_classify, sdvp_w_membership, Membership, QvpClass, MEMBER_TOL, NON_MEMBER_TOL,
};

/// Verdict of the primal scalarization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundedness {
    Bounded,
    Unbounded,
    Abstain,
}

/// `min w' f(x)` over the feasible set, as a conic problem. Returns the problem
/// and the offset of `x`.
pub fn primal_scalarization(problem: &Problem, w: &DVector<f64>) -> (ConicProblem, usize) {
    let mut prob = ConicProblem::new();
    match problem {
        Problem::Linear(p) => {
            let n = p.n();
            let x = prob.add_block("x", BlockKind::Free(n));
            let pw = &p.p * w;
            for j in 0..n {
                prob.add_objective(x + j, pw[j]);
            }
            add_linear_rows(&mut prob, x, &p.a, &p.b);
            (prob, x)
        }
        Problem::Semidefinite(p) => {
            let (n, k) = (p.n(), p.k());
            let x = prob.add_block("x", BlockKind::Free(n));
            let s = prob.add_block("S", BlockKind::Psd(k));
            let pw = &p.p * w;
            for j in 0..n {
                prob.add_objective(x + j, pw[j]);
            }
            // S = -(sum x_i F_i + G)
            for c in 0..k {
                for r in 0..=c {
                    let mut row = vec![(s + linalg::tri_index(r, c), 1.0)];
                    row.extend(p.f.iter().enumerate().map(|(i, f)| (x + i, f[(r, c)])));
                    prob.add_equality(row, -p.g[(r, c)]);
                }
            }
            (prob, x)
        }
        Problem::Quadratic(p) => {
            let n = p.n();
            let x = prob.add_block("x", BlockKind::Free(n));
            let h = p.weighted_hessian(w);
            let d = p.weighted_linear(w);
            for i in 0..n {
                prob.add_objective(x + i, d[i]);
                for j in 0..=i {
                    // H = 2 sum w_i P_i
                    prob.add_quadratic(x + i, x + j, 2.0 * h[(i, j)]);
                }
            }
            add_linear_rows(&mut prob, x, &p.a, &p.b);
            for con in &p.constraints {
                add_quadratic_constraint(&mut prob, x, con);
            }
            (prob, x)
        }
    }
}

fn add_linear_rows(prob: &mut ConicProblem, x: usize, a: &DMatrix<f64>, b: &DVector<f64>) {
    for i in 0..a.nrows() {
        prob.add_inequality((0..a.ncols()).map(|j| (x + j, a[(i, j)])).collect(), b[i]);
    }
}

/// Primal solutions beyond this size are not trusted as optima.
pub const SUSPECT_NORM: f64 = 1e6;

/// Solves the primal scalarization: `Optimal -> Bounded`, `Unbounded -> Unbounded`,
/// anything else abstains. An optimum with `|x|_inf > SUSPECT_NORM` is rechecked
/// with [`recession_direction`].
pub fn boundedness_oracle(
    problem: &Problem,
    w: &DVector<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<Boundedness> {
    check_weight(problem, w)?;
    let (prob, _) = primal_scalarization(problem, w);
    Ok(match backend.solve(&prob) {
        // interior-point methods sometimes stop on a far point of an unbounded problem
        SolveStatus::Optimal { x, .. } if x.amax() > SUSPECT_NORM => {
            match recession_direction(problem, w, backend) {
                Ok(Some(_)) => Boundedness::Unbounded,
                _ => Boundedness::Abstain,
            }
        }
        SolveStatus::Optimal { .. } => Boundedness::Bounded,
        SolveStatus::Unbounded => Boundedness::Unbounded,
        SolveStatus::Infeasible | SolveStatus::NumericalFailure(_) => Boundedness::Abstain,
    })
}

fn check_weight(problem: &Problem, w: &DVector<f64>) -> Result<()> {
    let cone = problem.cone();
    if w.len() != cone.dim() {
        return Err(Error::dims("weight", cone.dim(), w.len()));
    }
    if cone.dual_margin(w) < -1e-9 * w.norm().max(1.0) {
        return Err(Error::WNotInDualCone);
    }
    Ok(())
}

/// Relative residual of `min t s.t. |r + A' y|_inf <= t, y >= 0, sum y <= M`.
fn linear_residual(
    r: &DVector<f64>,
    at: &DMatrix<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<f64> {
    let scale = r.amax().max(1.0);
    if r.amax() == 0.0 {
        return Ok(0.0);
    }
    let m = at.ncols();
    let mut lp = ConicProblem::new();
    let t = lp.add_block("t", BlockKind::Free(1));
    let y = lp.add_block("y", BlockKind::Nonneg(m));
    lp.add_objective(t, 1.0);
    for i in 0..r.len() {
        let coeffs: Vec<(usize, f64)> = (0..m).map(|j| (y + j, at[(i, j)])).collect();
        let mut up = coeffs.clone();
        up.push((t, -1.0));
        let mut down: Vec<(usize, f64)> = coeffs.iter().map(|&(j, v)| (j, -v)).collect();
        down.push((t, -1.0));
        lp.add_inequality(up, -r[i]);
        lp.add_inequality(down, r[i]);
    }
    if m > 0 {
        lp.add_inequality((0..m).map(|j| (y + j, 1.0)).collect(), 1e4 * scale);
    }
    let (value, _) = backend.solve(&lp).expect_optimal("dual residual LP")?;
    Ok(value.max(0.0) / scale)
}

fn classify_residual(rel: f64) -> Membership {
    if rel <= MEMBER_TOL {
        Membership::Member
    } else if rel >= NON_MEMBER_TOL {
        Membership::NonMember
    } else {
        Membership::Abstain
    }
}

/// Dual-side membership `w in W`, solved directly on the backend.
///
/// Returns the three-valued answer and the relative dual residual.
pub fn dual_membership(
    problem: &Problem,
    w: &DVector<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<(Membership, f64)> {
    if w.len() != problem.q() {
        return Err(Error::dims("weight", problem.q(), w.len()));
    }
    if problem.cone().dual_margin(w) < -1e-9 * w.norm().max(1.0) {
        return Ok((Membership::NonMember, f64::INFINITY));
    }
    match problem {
        Problem::Linear(p) => {
            let rel = linear_residual(&(&p.p * w), &p.a.transpose(), backend)?;
            Ok((classify_residual(rel), rel))
        }
        Problem::Semidefinite(p) => sdvp_w_membership(p, w, backend),
        Problem::Quadratic(p) => {
            if qvp_classify(p) == QvpClass::DualIsCPlusA {
                return Ok((Membership::Member, 0.0));
            }
            let h = p.weighted_hessian(w);
            let hn = h.abs().max();
            if hn > NON_MEMBER_TOL * w.norm().max(1.0) {
                return Ok((Membership::Member, 0.0));
            }
            let rel = linear_residual(&p.weighted_linear(w), &p.a.transpose(), backend)?;
            let rel = rel.max(hn / w.norm().max(1.0));
            Ok((classify_residual(rel), rel))
        }
    }
}

/// Direction in the recession cone of the upper image that decreases `w' f`,
/// from the homogeneous problem over the recession cone of the feasible set
/// (boxed to `|x'|_inf <= 1`). `None` when only `0` is found.
pub fn recession_direction(
    problem: &Problem,
    w: &DVector<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<Option<DVector<f64>>> {
    let mut prob = ConicProblem::new();
    let (n, objective): (usize, DVector<f64>) = match problem {
        Problem::Linear(p) => (p.n(), &p.p * w),
        Problem::Semidefinite(p) => (p.n(), &p.p * w),
        Problem::Quadratic(p) => (p.n(), p.weighted_linear(w)),
    };
    let x = prob.add_block("x", BlockKind::Free(n));
    for j in 0..n {
        prob.add_objective(x + j, objective[j]);
        prob.add_inequality(vec![(x + j, 1.0)], 1.0);
        prob.add_inequality(vec![(x + j, -1.0)], 1.0);
    }
    match problem {
        Problem::Linear(p) => add_linear_rows(&mut prob, x, &p.a, &DVector::zeros(p.m())),
        Problem::Semidefinite(p) => {
            let k = p.k();
            let s = prob.add_block("S", BlockKind::Psd(k));
            for c in 0..k {
                for r in 0..=c {
                    let mut row = vec![(s + linalg::tri_index(r, c), 1.0)];
                    row.extend(p.f.iter().enumerate().map(|(i, f)| (x + i, f[(r, c)])));
                    prob.add_equality(row, 0.0);
                }
            }
        }
        Problem::Quadratic(p) => {
            add_linear_rows(&mut prob, x, &p.a, &DVector::zeros(p.m()));
            let rows = p
                .objective
                .iter()
                .map(|o| &o.p)
                .chain(p.constraints.iter().map(|c| &c.q));
            for m in rows {
                for i in 0..n {
                    let row: Vec<(usize, f64)> = (0..n).map(|j| (x + j, m[(i, j)])).collect();
                    prob.add_equality(row, 0.0);
                }
            }
            for c in &p.constraints {
                prob.add_inequality((0..n).map(|j| (x + j, c.c[j])).collect(), 0.0);
            }
        }
    }
    let (value, sol) = backend
        .solve(&prob)
        .expect_optimal("recession direction problem")?;
    if value > -1e-7 {
        return Ok(None);
    }
    let xr = sol.rows(x, n).into_owned();
    let d = match problem {
        Problem::Linear(p) => p.p.transpose() * xr,
        Problem::Semidefinite(p) => p.p.transpose() * xr,
        Problem::Quadratic(p) => {
            DVector::from_iterator(p.q(), p.objective.iter().map(|o| o.d.dot(&xr)))
        }
    };
    Ok(unit(&d, 1e-9))
}

/// Unit weights of `C+`: its rays followed by seeded random directions.
pub fn sample_dual_cone(cone: &OrderingCone, count: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut s = sample_section(cone.dual().rays(), count, seed);
    s.truncate(count.max(1));
    s
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    /// Extra allowance on the sampled Hausdorff estimate.
    pub hausdorff_slack: f64,
    /// Numerical band added to `delta` in the outer check.
    pub band: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 10_000,
            seed: 0,
            hausdorff_slack: 0.02,
            band: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub check: &'static str,
    pub point: Vec<f64>,
    pub amount: f64,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct VerificationReport {
    pub inner_checked: usize,
    pub inner_abstained: usize,
    pub samples: usize,
    pub bounded: usize,
    pub unbounded: usize,
    pub abstained: usize,
    pub recession_directions: usize,
    pub duality_slack: f64,
    pub hausdorff_estimate: f64,
    pub hausdorff_limit: f64,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn count(&self, check: &str) -> usize {
        self.violations.iter().filter(|v| v.check == check).count()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.hausdorff_estimate <= self.hausdorff_limit
    }
}

fn par_map<T: Sync, R: Send>(
    gate: &Gate<'_>,
    items: &[T],
    f: impl Fn(&T) -> R + Sync + Send,
) -> Vec<R> {
    if gate.parallel() {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

/// Checks an approximation against independent oracles:
///
/// * `inner`: every generator of `Z` passes [`dual_membership`];
/// * `outer`: every sampled weight the primal oracle calls bounded lies within
///   `delta + band` of `cone(Z)`;
/// * `recession`: rays of `C` and recession directions found for unbounded
///   weights lie in `cone(Y)`;
/// * `duality`: `Y` lies in `(cone Z)+`;
/// * the section Hausdorff estimate between the bounded samples (plus the
///   certified generators) and `cone(Z)`
///   stays below `delta + hausdorff_slack`.
pub fn verify_approximation(
    problem: &Problem,
    approx: &ConeApproximation,
    options: VerifyOptions,
    backend: &dyn ConicSolverBackend,
) -> Result<VerificationReport> {
    let q = problem.q();
    if approx.dim != q {
        return Err(Error::dims("approximation dimension", q, approx.dim));
    }
    let gate = Gate::new(backend);
    let solver = GateBackend(&gate);
    let z = approx.inner_rays();
    let y = approx.outer_rays();
    let mut report = VerificationReport {
        samples: options.samples,
        duality_slack: if z.is_empty() || y.is_empty() {
            f64::INFINITY
        } else {
            approx.duality_slack()
        },
        hausdorff_limit: approx.delta + options.hausdorff_slack,
        ..Default::default()
    };
    let vec_of = |v: &DVector<f64>| v.iter().copied().collect::<Vec<f64>>();

    // certified generators are points of W too; a flat W is never hit by sampling
    let mut members = Vec::new();
    for r in par_map(&gate, &z, |zi| {
        dual_membership(problem, zi, &solver).map(|m| (zi.clone(), m))
    }) {
        let (zi, (m, rel)) = r?;
        report.inner_checked += 1;
        match m {
            Membership::Member => members.push(zi),
            Membership::Abstain => report.inner_abstained += 1,
            Membership::NonMember => report.violations.push(Violation {
                check: "inner",
                point: vec_of(&zi),
                amount: rel,
            }),
        }
    }
    if report.duality_slack < -1e-9 {
        report.violations.push(Violation {
            check: "duality",
            point: vec![],
            amount: -report.duality_slack,
        });
    }

    let weights = sample_dual_cone(problem.cone(), options.samples, options.seed);
    let verdicts = par_map(
        &gate,
        &weights,
        |w| -> Result<(Boundedness, Option<DVector<f64>>)> {
            let b = boundedness_oracle(problem, w, &solver)?;
            let d = if b == Boundedness::Unbounded {
                recession_direction(problem, w, &solver).unwrap_or(None)
            } else {
                None
            };
            Ok((b, d))
        },
    );

    let mut bounded_ws = Vec::new();
    let mut directions: Vec<DVector<f64>> = problem.cone().cone().rays().to_vec();
    for (w, v) in weights.iter().zip(verdicts) {
        let (b, d) = v?;
        match b {
            Boundedness::Bounded => {
                report.bounded += 1;
                let dist = distance_to_cone(&z, w);
                if dist > approx.delta + options.band {
                    report.violations.push(Violation {
                        check: "outer",
                        point: vec_of(w),
                        amount: dist,
                    });
                }
                bounded_ws.push(w.clone());
            }
            Boundedness::Unbounded => report.unbounded += 1,
            Boundedness::Abstain => report.abstained += 1,
        }
        if let Some(d) = d {
            directions.push(d);
        }
    }
    report.recession_directions = directions.len();
    for d in &directions {
        let dist = distance_to_cone(&y, d);
        if dist > options.band.max(1e-6) {
            report.violations.push(Violation {
                check: "recession",
                point: vec_of(d),
                amount: dist,
            });
        }
    }

    bounded_ws.extend(members);
    report.hausdorff_estimate = if bounded_ws.is_empty() && z.is_empty() {
        0.0
    } else {
        hausdorff_section_estimate(
            &SectionSet::Sampled(bounded_ws),
            &SectionSet::Sampled(z),
            options.samples.min(2000),
            options.seed,
        )
    };
    Ok(report)
}

struct GateBackend<'g, 'a>(&'g Gate<'a>);

impl ConicSolverBackend for GateBackend<'_, '_> {
    fn name(&self) -> &str {
        self.0.backend().name()
    }

    fn capabilities(&self) -> crate::backend::Capabilities {
        self.0.backend().capabilities()
    }

    fn reentrant(&self) -> bool {
        self.0.parallel()
    }

    fn solve(&self, problem: &ConicProblem) -> SolveStatus {
        self.0.solve(problem)
    }
}

/// Relative residual of `x in cone(generators)`: `min |G l - x|_inf` over
/// `l >= 0`, from the LP solution and an NNLS solution, whichever is smaller.
pub fn cone_membership_residual(
    generators: &[DVector<f64>],
    x: &DVector<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<f64> {
    let g = if generators.is_empty() {
        DMatrix::zeros(x.len(), 0)
    } else {
        DMatrix::from_columns(generators)
    };
    let mut lp = ConicProblem::new();
    let t = lp.add_block("t", BlockKind::Free(1));
    let l = lp.add_block("l", BlockKind::Nonneg(g.ncols()));
    lp.add_objective(t, 1.0);
    for i in 0..x.len() {
        let coeffs: Vec<(usize, f64)> = (0..g.ncols()).map(|j| (l + j, g[(i, j)])).collect();
        let mut up = coeffs.clone();
        up.push((t, -1.0));
        let mut down: Vec<(usize, f64)> = coeffs.iter().map(|&(j, v)| (j, -v)).collect();
        down.push((t, -1.0));
        lp.add_inequality(up, x[i]);
        lp.add_inequality(down, -x[i]);
    }
    let (_, sol) = backend.solve(&lp).expect_optimal("cone membership LP")?;
    // both candidates are feasible, so each exact residual is an upper bound
    let residual = |c: DVector<f64>| (&g * c - x).amax();
    let lp_coeffs = sol.rows(l, g.ncols()).map(|c| c.max(0.0));
    let best = residual(lp_coeffs).min(residual(linalg::nnls(&g, x)));
    Ok(best / x.amax().max(1.0))
}

/// Whether each cone's rays lie in the other, by feasibility LPs.
pub fn cones_equal(
    a: &[DVector<f64>],
    b: &[DVector<f64>],
    tol: f64,
    backend: &dyn ConicSolverBackend,
) -> Result<bool> {
    for x in a {
        if cone_membership_residual(b, x, backend)? > tol {
            return Ok(false);
        }
    }
    for x in b {
        if cone_membership_residual(a, x, backend)? > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Directions of a planar cone, as closed arcs `(start, width)` on the circle.
#[derive(Clone, Debug, PartialEq)]
enum Arcs {
    Empty,
    Full,
    Some(Vec<(f64, f64)>),
}

fn planar_arcs(rays: &[DVector<f64>]) -> Arcs {
    let mut ang: Vec<f64> = rays
        .iter()
        .filter(|r| r.norm() > 1e-14)
        .map(|r| r[1].atan2(r[0]).rem_euclid(TAU))
        .collect();
    if ang.is_empty() {
        return Arcs::Empty;
    }
    ang.sort_by(f64::total_cmp);
    ang.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    if ang.len() == 1 {
        return Arcs::Some(vec![(ang[0], 0.0)]);
    }
    let k = ang.len();
    let gaps: Vec<(f64, usize)> = (0..k)
        .map(|i| {
            let next = if i + 1 < k { ang[i + 1] } else { ang[0] + TAU };
            (next - ang[i], i)
        })
        .collect();
    let mut sorted = gaps.clone();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (g0, i0) = sorted[0];
    let tol = 1e-12;
    if g0 < PI - tol {
        return Arcs::Full;
    }
    if (g0 - PI).abs() <= tol && sorted.len() > 1 && (sorted[1].0 - PI).abs() <= tol {
        // two opposite directions: a line
        return Arcs::Some(vec![(ang[0], 0.0), (ang[1], 0.0)]);
    }
    let start = if i0 + 1 < k { ang[i0 + 1] } else { ang[0] };
    Arcs::Some(vec![(start, TAU - g0)])
}

fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn in_arc(theta: f64, (s, w): (f64, f64)) -> bool {
    (theta - s).rem_euclid(TAU) <= w + 1e-15
}

fn arc_distance(theta: f64, arcs: &[(f64, f64)]) -> f64 {
    arcs.iter()
        .map(|&(s, w)| {
            if in_arc(theta, (s, w)) {
                0.0
            } else {
                circ_dist(theta, s).min(circ_dist(theta, s + w))
            }
        })
        .fold(f64::INFINITY, f64::min)
}

fn one_sided_planar(a: &Arcs, b: &Arcs) -> f64 {
    let a = match a {
        Arcs::Empty => return 0.0,
        Arcs::Full => vec![(0.0, TAU)],
        Arcs::Some(v) => v.clone(),
    };
    let b = match b {
        Arcs::Empty => return 1.0,
        Arcs::Full => return 0.0,
        Arcs::Some(v) => v.clone(),
    };
    let mut candidates: Vec<f64> = Vec::new();
    for &(s, w) in &a {
        candidates.push(s);
        candidates.push(s + w);
    }
    // midpoints of the gaps between the arcs of b
    let mut ends: Vec<(f64, f64)> = b.iter().map(|&(s, w)| (s.rem_euclid(TAU), w)).collect();
    ends.sort_by(|x, y| x.0.total_cmp(&y.0));
    for i in 0..ends.len() {
        let (s, w) = ends[i];
        let next = if i + 1 < ends.len() {
            ends[i + 1].0
        } else {
            ends[0].0 + TAU
        };
        let mid = 0.5 * (s + w + next);
        if a.iter().any(|&arc| in_arc(mid, arc)) {
            candidates.push(mid);
        }
    }
    candidates
        .iter()
        .map(|&t| {
            let phi = arc_distance(t, &b);
            if phi >= FRAC_PI_2 {
                1.0
            } else {
                phi.sin()
            }
        })
        .fold(0.0, f64::max)
}

/// Exact Hausdorff distance between `cone(k1) ∩ B(0,1)` and `cone(k2) ∩ B(0,1)` in `R^2`.
pub fn hausdorff_r2_exact(k1: &[DVector<f64>], k2: &[DVector<f64>]) -> f64 {
    let a = planar_arcs(k1);
    let b = planar_arcs(k2);
    one_sided_planar(&a, &b).max(one_sided_planar(&b, &a))
}

fn normal_vec(rng: &mut StdRng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| StandardNormal.sample(rng))
}

fn normal_mat(rng: &mut StdRng, r: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| StandardNormal.sample(rng))
}

fn random_symmetric(rng: &mut StdRng, k: usize) -> DMatrix<f64> {
    let m = normal_mat(rng, k, k);
    (&m + m.transpose()) * 0.5
}

/// Random pointed solid cone in `R^q`: either the orthant or a perturbed one.
pub fn random_ordering_cone(rng: &mut StdRng, q: usize) -> OrderingCone {
    if rng.random_bool(0.5) {
        return OrderingCone::orthant(q);
    }
    let rays: Vec<DVector<f64>> = (0..q)
        .map(|i| {
            let mut r = DVector::from_fn(q, |_, _| rng.random_range(0.0..0.4));
            r[i] = 1.0;
            r
        })
        .collect();
    OrderingCone::new(rays, None).unwrap_or_else(|_| OrderingCone::orthant(q))
}

/// Random cone generated by `rays` Gaussian directions in `R^dim`.
pub fn random_polyhedral_cone(rng: &mut StdRng, dim: usize, rays: usize) -> PolyhedralCone {
    let rs = (0..rays).map(|_| normal_vec(rng, dim)).collect();
    PolyhedralCone::from_rays(dim, rs).expect("dimensions agree")
}

/// Random pointed cone inside the open half-space `{x | x_last > 0}`.
pub fn random_pointed_cone(rng: &mut StdRng, dim: usize, rays: usize) -> PolyhedralCone {
    let rs = (0..rays)
        .map(|_| {
            let mut r = normal_vec(rng, dim) * 0.8;
            r[dim - 1] = 1.0;
            r
        })
        .collect();
    PolyhedralCone::from_rays(dim, rs).expect("dimensions agree")
}

/// Random feasible LVOP; `b = A x0 + s` with `s >= 0`.
pub fn random_lvop(rng: &mut StdRng, q: usize, n: usize, m: usize) -> LinearVop {
    let p = normal_mat(rng, n, q);
    let a = normal_mat(rng, m, n);
    let x0 = normal_vec(rng, n);
    let s = DVector::from_fn(m, |_, _| rng.random_range(0.0..1.0));
    let b = &a * x0 + s;
    LinearVop::new(p, a, b, random_ordering_cone(rng, q)).expect("dimensions agree")
}

/// Random SDVP with `G` negative definite, so `x = 0` is a Slater point.
pub fn random_sdvp(rng: &mut StdRng, q: usize, n: usize, k: usize) -> SemidefiniteVop {
    let p = normal_mat(rng, n, q);
    let f = (0..n).map(|_| random_symmetric(rng, k)).collect();
    let m = normal_mat(rng, k, k) * 0.5;
    let g = -(&m * m.transpose() + DMatrix::identity(k, k));
    SemidefiniteVop::new(p, f, g, random_ordering_cone(rng, q)).expect("dimensions agree")
}

fn random_psd(rng: &mut StdRng, n: usize, rank: usize) -> DMatrix<f64> {
    let l = normal_mat(rng, n, rank);
    &l * l.transpose()
}

/// Random QVP on the orthant with PSD objective Hessians.
pub fn random_qvp(
    rng: &mut StdRng,
    q: usize,
    n: usize,
    m: usize,
    quad_constraints: usize,
) -> QuadraticVop {
    let objective = (0..q)
        .map(|i| QuadraticObjective {
            p: if i == 0 || rng.random_bool(0.5) {
                random_psd(rng, n, 1)
            } else {
                DMatrix::zeros(n, n)
            },
            d: normal_vec(rng, n),
        })
        .collect();
    let constraints = (0..quad_constraints)
        .map(|_| {
            let rank = rng.random_range(1..=n);
            QuadraticConstraint {
                q: random_psd(rng, n, rank),
                c: normal_vec(rng, n) * 0.3,
                r: -1.0,
            }
        })
        .collect();
    let a = normal_mat(rng, m, n);
    let s = DVector::from_fn(m, |_, _| rng.random_range(0.1..1.0));
    QuadraticVop::new(objective, constraints, a, s, OrderingCone::orthant(q))
        .expect("valid by construction")
}
