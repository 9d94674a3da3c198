//! Domain types: cones, problem classes, approximations and lifted systems.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::backend::{BlockKind, ConicProblem, ConicSolverBackend, SolveStatus};
use crate::error::{Error, Result};
use crate::linalg::{self, is_symmetric, min_eigenvalue, unit, PSD_TOL, SYMMETRY_TOL};
use crate::polycalc::{self, dd::ConeGenerators};

/// Margin required for `n_i . c > 0` to count as interior.
pub const INTERIOR_TOL: f64 = 1e-9;
/// Relative singular value below which a ray set is treated as lower dimensional.
pub const SPAN_TOL: f64 = 1e-7;

/// A finitely generated cone in `R^dim`.
///
/// `rays` always describes the cone (an empty list is `{0}`; lineality is
/// stored as `+/-` pairs). `halfspaces`, when present, is an equivalent
/// description `{w | n_i . w >= 0}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyhedralCone {
    dim: usize,
    rays: Vec<DVector<f64>>,
    halfspaces: Option<Vec<DVector<f64>>>,
}

impl PolyhedralCone {
    /// Cone generated by `rays`; zero vectors are dropped, the rest normalised.
    pub fn from_rays(dim: usize, rays: Vec<DVector<f64>>) -> Result<Self> {
        let rays = normalize_all(dim, rays, "ray")?;
        Ok(PolyhedralCone {
            dim,
            rays,
            halfspaces: None,
        })
    }

    /// Cone `{w | n . w >= 0 for n in halfspaces}`; rays are computed by double description.
    pub fn from_halfspaces(dim: usize, halfspaces: Vec<DVector<f64>>) -> Result<Self> {
        let halfspaces = normalize_all(dim, halfspaces, "halfspace normal")?;
        let rays = polycalc::extreme_rays(dim, &halfspaces)?;
        Ok(PolyhedralCone {
            dim,
            rays,
            halfspaces: Some(halfspaces),
        })
    }

    pub(crate) fn from_parts(
        dim: usize,
        rays: Vec<DVector<f64>>,
        halfspaces: Option<Vec<DVector<f64>>>,
    ) -> Self {
        PolyhedralCone {
            dim,
            rays,
            halfspaces,
        }
    }

    pub fn orthant(dim: usize) -> Self {
        let rays: Vec<DVector<f64>> = (0..dim).map(|i| basis(dim, i)).collect();
        PolyhedralCone {
            dim,
            halfspaces: Some(rays.clone()),
            rays,
        }
    }

    pub fn whole_space(dim: usize) -> Self {
        let mut rays = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            rays.push(basis(dim, i));
            rays.push(-basis(dim, i));
        }
        PolyhedralCone {
            dim,
            rays,
            halfspaces: Some(Vec::new()),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[DVector<f64>] {
        &self.rays
    }

    pub fn halfspaces(&self) -> Option<&[DVector<f64>]> {
        self.halfspaces.as_deref()
    }

    /// `{0}`.
    pub fn is_trivial(&self) -> bool {
        self.rays.is_empty()
    }

    /// Halfspace normals, computing them from the rays if absent.
    pub fn halfspace_form(&self) -> Result<Vec<DVector<f64>>> {
        match &self.halfspaces {
            Some(h) => Ok(h.clone()),
            None => polycalc::extreme_rays(self.dim, &linalg::snap_to_span(&self.rays, SPAN_TOL)),
        }
    }

    /// Irredundant generators plus an H-form, computed by a double round of double description.
    pub fn canonical(&self) -> Result<Self> {
        let hs = self.halfspace_form()?;
        let rays = polycalc::extreme_rays(self.dim, &hs)?;
        Ok(PolyhedralCone {
            dim: self.dim,
            rays,
            halfspaces: Some(hs),
        })
    }

    /// Lineality basis plus pointed extreme rays of the cone.
    pub fn generators(&self) -> Result<ConeGenerators> {
        let hs = self.halfspace_form()?;
        polycalc::dd::cone_generators(self.dim, &[], &hs)
    }

    /// Distance from `x` to the cone.
    pub fn distance(&self, x: &DVector<f64>) -> f64 {
        linalg::distance_to_cone(&self.rays, x)
    }

    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.distance(x) <= tol * x.norm().max(1.0)
    }

    /// Minimum slack `n . r` over stored rays and halfspaces (`+inf` without an H-form).
    pub fn coherence_slack(&self) -> f64 {
        let Some(hs) = &self.halfspaces else {
            return f64::INFINITY;
        };
        let mut m = f64::INFINITY;
        for n in hs {
            for r in &self.rays {
                m = m.min(n.dot(r));
            }
        }
        m
    }
}

fn basis(dim: usize, i: usize) -> DVector<f64> {
    let mut e = DVector::zeros(dim);
    e[i] = 1.0;
    e
}

fn normalize_all(dim: usize, vs: Vec<DVector<f64>>, what: &str) -> Result<Vec<DVector<f64>>> {
    let mut out = Vec::with_capacity(vs.len());
    for v in vs {
        if v.len() != dim {
            return Err(Error::dims(what, dim, v.len()));
        }
        if let Some(u) = unit(&v, 1e-14) {
            out.push(u);
        }
    }
    Ok(out)
}

/// Polyhedral ordering cone `C` with a fixed interior direction `c`, `|c| = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderingCone {
    cone: PolyhedralCone,
    dual: PolyhedralCone,
    c: DVector<f64>,
    /// Raw rays and `c` as supplied, kept for serialisation.
    rays_given: Vec<DVector<f64>>,
    c_given: Option<DVector<f64>>,
}

impl OrderingCone {
    /// Builds `C = cone(rays)` and checks it is nontrivial, pointed and solid.
    ///
    /// Without `c`, the normalised sum of the unit rays is used.
    pub fn new(rays: Vec<DVector<f64>>, c: Option<DVector<f64>>) -> Result<Self> {
        let dim = rays
            .first()
            .map(|r| r.len())
            .ok_or_else(|| Error::BadOrderingCone("no rays given".into()))?;
        let rays_given = rays.clone();
        let raw = PolyhedralCone::from_rays(dim, rays)?;
        if raw.is_trivial() {
            return Err(Error::BadOrderingCone("cone is {0}".into()));
        }
        let gens = raw.generators()?;
        if !gens.lineality.is_empty() {
            return Err(Error::BadOrderingCone(format!(
                "cone contains a line (lineality dimension {})",
                gens.lineality.len()
            )));
        }
        if linalg::rank(&DMatrix::from_columns(raw.rays()), 1e-9) < dim {
            return Err(Error::BadOrderingCone("cone has empty interior".into()));
        }
        let cone = raw.canonical()?;
        let normals = cone.halfspaces().unwrap_or_default().to_vec();

        let c_given = c.clone();
        let c = match c {
            Some(c) => {
                if c.len() != dim {
                    return Err(Error::dims("c", dim, c.len()));
                }
                unit(&c, 1e-14).ok_or(Error::CNotInterior { margin: 0.0 })?
            }
            None => {
                let s = cone
                    .rays()
                    .iter()
                    .fold(DVector::zeros(dim), |acc, r| acc + r);
                unit(&s, 1e-14).ok_or(Error::CNotInterior { margin: 0.0 })?
            }
        };
        let margin = normals
            .iter()
            .map(|n| n.dot(&c))
            .fold(f64::INFINITY, f64::min);
        if margin <= INTERIOR_TOL {
            return Err(Error::CNotInterior { margin });
        }

        // C+ has H-form given by the rays of C and rays given by the normals of C.
        let dual = PolyhedralCone::from_parts(dim, normals, Some(cone.rays().to_vec()));
        Ok(OrderingCone {
            cone,
            dual,
            c,
            rays_given,
            c_given,
        })
    }

    pub fn orthant(dim: usize) -> Self {
        OrderingCone::new(PolyhedralCone::orthant(dim).rays().to_vec(), None)
            .expect("orthant is a valid ordering cone")
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn cone(&self) -> &PolyhedralCone {
        &self.cone
    }

    /// `C+`, with rays and H-form.
    pub fn dual(&self) -> &PolyhedralCone {
        &self.dual
    }

    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }

    pub(crate) fn rays_given(&self) -> &[DVector<f64>] {
        &self.rays_given
    }

    pub(crate) fn c_given(&self) -> Option<&DVector<f64>> {
        self.c_given.as_ref()
    }

    /// `min_j r_j . w` over the rays of `C` (nonnegative iff `w` is in `C+`).
    pub fn dual_margin(&self, w: &DVector<f64>) -> f64 {
        self.cone
            .rays()
            .iter()
            .map(|r| r.dot(w))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether `C` is the nonnegative orthant.
    pub fn is_orthant(&self) -> bool {
        let q = self.dim();
        self.cone.rays().len() == q
            && (0..q).all(|i| {
                self.cone
                    .rays()
                    .iter()
                    .any(|r| (r - basis(q, i)).norm() <= 1e-12)
            })
    }
}

/// `minimize P' x` w.r.t. `C` subject to `A x <= b`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearVop {
    pub p: DMatrix<f64>,
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub cone: OrderingCone,
}

impl LinearVop {
    pub fn new(
        p: DMatrix<f64>,
        a: DMatrix<f64>,
        b: DVector<f64>,
        cone: OrderingCone,
    ) -> Result<Self> {
        let (n, q) = p.shape();
        if q != cone.dim() {
            return Err(Error::dims("P columns vs cone dimension", cone.dim(), q));
        }
        if a.ncols() != n {
            return Err(Error::dims("A columns", n, a.ncols()));
        }
        if b.len() != a.nrows() {
            return Err(Error::dims("b length", a.nrows(), b.len()));
        }
        Ok(LinearVop { p, a, b, cone })
    }

    pub fn q(&self) -> usize {
        self.p.ncols()
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }
}

/// `minimize P' x` w.r.t. `C` subject to `sum x_i F_i + G <= 0` (semidefinite order).
#[derive(Clone, Debug, PartialEq)]
pub struct SemidefiniteVop {
    pub p: DMatrix<f64>,
    pub f: Vec<DMatrix<f64>>,
    pub g: DMatrix<f64>,
    pub cone: OrderingCone,
}

impl SemidefiniteVop {
    pub fn new(
        p: DMatrix<f64>,
        f: Vec<DMatrix<f64>>,
        g: DMatrix<f64>,
        cone: OrderingCone,
    ) -> Result<Self> {
        let (n, q) = p.shape();
        if q != cone.dim() {
            return Err(Error::dims("P columns vs cone dimension", cone.dim(), q));
        }
        if f.len() != n {
            return Err(Error::dims("number of F_i", n, f.len()));
        }
        let k = g.nrows();
        if k < 2 {
            return Err(Error::InvalidInput(format!(
                "matrix order k = {k} must be >= 2"
            )));
        }
        if !is_symmetric(&g, SYMMETRY_TOL) {
            return Err(Error::InvalidInput("G is not symmetric".into()));
        }
        for (i, fi) in f.iter().enumerate() {
            if fi.shape() != (k, k) {
                return Err(Error::dims(format!("order of F_{}", i + 1), k, fi.nrows()));
            }
            if !is_symmetric(fi, SYMMETRY_TOL) {
                return Err(Error::InvalidInput(format!("F_{} is not symmetric", i + 1)));
            }
        }
        Ok(SemidefiniteVop { p, f, g, cone })
    }

    pub fn q(&self) -> usize {
        self.p.ncols()
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn k(&self) -> usize {
        self.g.nrows()
    }

    /// `sum x_i F_i + G`.
    pub fn constraint_matrix(&self, x: &DVector<f64>) -> DMatrix<f64> {
        self.f
            .iter()
            .zip(x.iter())
            .fold(self.g.clone(), |acc, (fi, &xi)| acc + fi * xi)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticObjective {
    pub p: DMatrix<f64>,
    pub d: DVector<f64>,
}

/// `x' Q x + c' x + r <= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticConstraint {
    pub q: DMatrix<f64>,
    pub c: DVector<f64>,
    pub r: f64,
}

/// Convex quadratic vector program with objectives `x' P_i x + d_i' x`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticVop {
    pub objective: Vec<QuadraticObjective>,
    pub constraints: Vec<QuadraticConstraint>,
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub cone: OrderingCone,
}

impl QuadraticVop {
    pub fn new(
        objective: Vec<QuadraticObjective>,
        constraints: Vec<QuadraticConstraint>,
        a: DMatrix<f64>,
        b: DVector<f64>,
        cone: OrderingCone,
    ) -> Result<Self> {
        let q = objective.len();
        if q != cone.dim() {
            return Err(Error::dims("objectives vs cone dimension", cone.dim(), q));
        }
        let n = a.ncols();
        if b.len() != a.nrows() {
            return Err(Error::dims("b length", a.nrows(), b.len()));
        }
        for (i, o) in objective.iter().enumerate() {
            if o.p.shape() != (n, n) || o.d.len() != n {
                return Err(Error::dims(format!("objective {}", i + 1), n, o.d.len()));
            }
            if !is_symmetric(&o.p, SYMMETRY_TOL) {
                return Err(Error::InvalidInput(format!("P_{} is not symmetric", i + 1)));
            }
        }
        for (j, c) in constraints.iter().enumerate() {
            if c.q.shape() != (n, n) || c.c.len() != n {
                return Err(Error::dims(
                    format!("quadratic constraint {}", j + 1),
                    n,
                    c.c.len(),
                ));
            }
            if !is_symmetric(&c.q, SYMMETRY_TOL) {
                return Err(Error::InvalidInput(format!("Q_{} is not symmetric", j + 1)));
            }
            if c.q.abs().max() == 0.0 {
                return Err(Error::InvalidInput(format!("Q_{} is zero", j + 1)));
            }
            if min_eigenvalue(&c.q) < PSD_TOL {
                return Err(Error::InvalidInput(format!("Q_{} is not PSD", j + 1)));
            }
        }
        let vop = QuadraticVop {
            objective,
            constraints,
            a,
            b,
            cone,
        };
        vop.check_c_convexity()?;
        Ok(vop)
    }

    pub fn q(&self) -> usize {
        self.objective.len()
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    /// `sum w_i P_i`.
    pub fn weighted_hessian(&self, w: &DVector<f64>) -> DMatrix<f64> {
        let n = self.n();
        self.objective
            .iter()
            .zip(w.iter())
            .fold(DMatrix::zeros(n, n), |acc, (o, &wi)| acc + &o.p * wi)
    }

    /// `sum w_i d_i`.
    pub fn weighted_linear(&self, w: &DVector<f64>) -> DVector<f64> {
        let n = self.n();
        self.objective
            .iter()
            .zip(w.iter())
            .fold(DVector::zeros(n), |acc, (o, &wi)| acc + &o.d * wi)
    }

    /// Smallest eigenvalue of `sum w_i P_i` over the extreme rays of `C+`.
    ///
    /// PSD matrices form a convex cone, so checking the rays covers all of `C+`.
    pub fn c_convexity_margin(&self) -> (f64, usize) {
        self.cone
            .dual()
            .rays()
            .iter()
            .enumerate()
            .map(|(i, w)| (min_eigenvalue(&self.weighted_hessian(w)), i))
            .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a })
    }

    fn check_c_convexity(&self) -> Result<()> {
        let (min_eig, ray) = self.c_convexity_margin();
        if min_eig < PSD_TOL {
            return Err(Error::NotCConvex { min_eig, ray });
        }
        Ok(())
    }

    pub fn is_linear(&self) -> bool {
        self.constraints.is_empty() && self.objective.iter().all(|o| o.p.abs().max() == 0.0)
    }

    /// The LVOP obtained when every `P_i` vanishes and there are no quadratic constraints.
    pub fn as_linear(&self) -> Option<LinearVop> {
        if !self.is_linear() {
            return None;
        }
        let n = self.n();
        let p = DMatrix::from_fn(n, self.q(), |r, c| self.objective[c].d[r]);
        LinearVop::new(p, self.a.clone(), self.b.clone(), self.cone.clone()).ok()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Linear(LinearVop),
    Semidefinite(SemidefiniteVop),
    Quadratic(QuadraticVop),
}

impl Problem {
    pub fn cone(&self) -> &OrderingCone {
        match self {
            Problem::Linear(p) => &p.cone,
            Problem::Semidefinite(p) => &p.cone,
            Problem::Quadratic(p) => &p.cone,
        }
    }

    pub fn q(&self) -> usize {
        self.cone().dim()
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Problem::Linear(_) => "lvop",
            Problem::Semidefinite(_) => "sdvp",
            Problem::Quadratic(_) => "qvp",
        }
    }
}

/// Outcome of [`validate`].
#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub kind: &'static str,
    /// `min_i n_i . c` over the H-form of `C`.
    pub c_margin: f64,
    /// A feasible point of the primal constraints.
    pub feasible_point: Vec<f64>,
    /// For SDVPs: optimal `t` of `min t s.t. sum x_i F_i + G <= t I`, `t >= -1`.
    pub slater_margin: Option<f64>,
    /// For QVPs: smallest eigenvalue of `sum w_i P_i` over the rays of `C+`.
    pub convexity_margin: Option<f64>,
}

/// Checks the standing assumptions: nonempty feasible set, Slater point for
/// SDVPs, `c` interior to `C`, and C-convexity for QVPs.
pub fn validate(problem: &Problem, backend: &dyn ConicSolverBackend) -> Result<ValidationReport> {
    let cone = problem.cone();
    let c_margin = cone
        .cone()
        .halfspaces()
        .unwrap_or_default()
        .iter()
        .map(|n| n.dot(cone.c()))
        .fold(f64::INFINITY, f64::min);
    if c_margin <= INTERIOR_TOL {
        return Err(Error::CNotInterior { margin: c_margin });
    }
    match problem {
        Problem::Linear(p) => {
            let x = linear_feasible_point(&p.a, &p.b, backend)?;
            Ok(ValidationReport {
                kind: "lvop",
                c_margin,
                feasible_point: x.iter().copied().collect(),
                slater_margin: None,
                convexity_margin: None,
            })
        }
        Problem::Semidefinite(p) => {
            let (t, x) = slater_margin(p, backend)?;
            if t >= -1e-7 {
                return Err(Error::SlaterViolated { margin: t });
            }
            Ok(ValidationReport {
                kind: "sdvp",
                c_margin,
                feasible_point: x.iter().copied().collect(),
                slater_margin: Some(t),
                convexity_margin: None,
            })
        }
        Problem::Quadratic(p) => {
            let x = quadratic_feasible_point(p, backend)?;
            let (eig, _) = p.c_convexity_margin();
            Ok(ValidationReport {
                kind: "qvp",
                c_margin,
                feasible_point: x.iter().copied().collect(),
                slater_margin: None,
                convexity_margin: Some(eig),
            })
        }
    }
}

fn linear_feasible_point(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<DVector<f64>> {
    let n = a.ncols();
    let mut lp = ConicProblem::new();
    let x = lp.add_block("x", BlockKind::Free(n));
    for i in 0..a.nrows() {
        lp.add_inequality((0..n).map(|j| (x + j, a[(i, j)])).collect(), b[i]);
    }
    match backend.solve(&lp) {
        SolveStatus::Optimal { x, .. } => Ok(x),
        SolveStatus::Infeasible => Err(Error::InfeasiblePrimal),
        SolveStatus::Unbounded => Err(Error::backend("feasibility LP", "unbounded zero objective")),
        SolveStatus::NumericalFailure(m) => Err(Error::backend("feasibility LP", m)),
    }
}

/// `min t s.t. sum x_i F_i + G <= t I, t >= -1`; strictly feasible iff `t* < 0`.
pub fn slater_margin(
    p: &SemidefiniteVop,
    backend: &dyn ConicSolverBackend,
) -> Result<(f64, DVector<f64>)> {
    let (n, k) = (p.n(), p.k());
    let mut sdp = ConicProblem::new();
    let x = sdp.add_block("x", BlockKind::Free(n));
    let t = sdp.add_block("t", BlockKind::Free(1));
    let s = sdp.add_block("S", BlockKind::Psd(k));
    sdp.add_objective(t, 1.0);
    sdp.add_inequality(vec![(t, -1.0)], 1.0);
    // S = t I - sum x_i F_i - G
    for c in 0..k {
        for r in 0..=c {
            let mut row = vec![(s + linalg::tri_index(r, c), 1.0)];
            if r == c {
                row.push((t, -1.0));
            }
            for (i, fi) in p.f.iter().enumerate() {
                row.push((x + i, fi[(r, c)]));
            }
            sdp.add_equality(row, -p.g[(r, c)]);
        }
    }
    let (value, sol) = backend
        .solve(&sdp)
        .expect_optimal("strict feasibility SDP")?;
    Ok((value, sol.rows(x, n).into_owned()))
}

fn quadratic_feasible_point(
    p: &QuadraticVop,
    backend: &dyn ConicSolverBackend,
) -> Result<DVector<f64>> {
    let n = p.n();
    let mut prob = ConicProblem::new();
    let x = prob.add_block("x", BlockKind::Free(n));
    for i in 0..p.m() {
        prob.add_inequality((0..n).map(|j| (x + j, p.a[(i, j)])).collect(), p.b[i]);
    }
    for con in &p.constraints {
        add_quadratic_constraint(&mut prob, x, con);
    }
    match backend.solve(&prob) {
        SolveStatus::Optimal { x: sol, .. } => Ok(sol.rows(x, n).into_owned()),
        SolveStatus::Infeasible => Err(Error::InfeasiblePrimal),
        SolveStatus::Unbounded => Err(Error::backend(
            "QCQP feasibility",
            "unbounded zero objective",
        )),
        SolveStatus::NumericalFailure(m) => Err(Error::backend("QCQP feasibility", m)),
    }
}

/// Encodes `x' Q x + c' x + r <= 0` with the Schur complement
/// `[[I, L' x], [x' L, -c' x - r]] >= 0` where `Q = L L'`.
pub(crate) fn add_quadratic_constraint(
    prob: &mut ConicProblem,
    x: usize,
    con: &QuadraticConstraint,
) {
    let n = con.q.nrows();
    let eig = con.q.clone().symmetric_eigen();
    // Rows of Lt: sqrt(lambda_k) u_k' for the nonzero eigenpairs.
    let lt: Vec<DVector<f64>> = (0..n)
        .filter(|&k| eig.eigenvalues[k] > 1e-12)
        .map(|k| eig.eigenvectors.column(k) * eig.eigenvalues[k].sqrt())
        .collect();
    let r = lt.len();
    let s = prob.add_block("schur", BlockKind::Psd(r + 1));
    for c in 0..=r {
        for rr in 0..=c {
            let idx = s + linalg::tri_index(rr, c);
            if c < r {
                prob.add_equality(vec![(idx, 1.0)], if rr == c { 1.0 } else { 0.0 });
            } else if rr < r {
                let mut row = vec![(idx, 1.0)];
                for j in 0..n {
                    row.push((x + j, -lt[rr][j]));
                }
                prob.add_equality(row, 0.0);
            } else {
                let mut row = vec![(idx, 1.0)];
                for j in 0..n {
                    row.push((x + j, con.c[j]));
                }
                prob.add_equality(row, -con.r);
            }
        }
    }
}

/// Flags attached to a [`ConeApproximation`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproxFlag {
    /// `W = {0}` so the recession cone is all of `R^q`.
    TotallyUnbounded,
    /// The inner approximation collapsed to `{0}`.
    DegenerateW,
    /// The body approximation stopped before reaching the requested tolerance.
    IterationBudgetExceeded,
    /// `Y` generates `cl C`: the problem is bounded.
    Bounded,
    /// `cl W = R^q_+` although `W` itself may be smaller.
    WMayBeSmaller,
    /// All objective Hessians vanish; the QVP was solved as an LVOP.
    LinearDelegate,
}

/// Paired finite generator sets: `inner` (Z) generates an inner approximation of
/// the dual recession cone and `outer` (Y) generates `(cone Z)+`, an outer
/// approximation of the recession cone of the upper image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeApproximation {
    pub dim: usize,
    pub inner: Vec<Vec<f64>>,
    pub outer: Vec<Vec<f64>>,
    pub delta: f64,
    pub achieved_delta: f64,
    pub exact: bool,
    pub flags: Vec<ApproxFlag>,
}

impl ConeApproximation {
    pub fn new(
        inner: &PolyhedralCone,
        outer: &PolyhedralCone,
        delta: f64,
        achieved_delta: f64,
        exact: bool,
        flags: Vec<ApproxFlag>,
    ) -> Self {
        let to_vecs = |c: &PolyhedralCone| {
            c.rays()
                .iter()
                .map(|r| r.iter().copied().collect())
                .collect()
        };
        ConeApproximation {
            dim: inner.dim(),
            inner: to_vecs(inner),
            outer: to_vecs(outer),
            delta,
            achieved_delta,
            exact,
            flags,
        }
    }

    pub fn inner_rays(&self) -> Vec<DVector<f64>> {
        self.inner
            .iter()
            .map(|r| DVector::from_row_slice(r))
            .collect()
    }

    pub fn outer_rays(&self) -> Vec<DVector<f64>> {
        self.outer
            .iter()
            .map(|r| DVector::from_row_slice(r))
            .collect()
    }

    pub fn inner_cone(&self) -> PolyhedralCone {
        PolyhedralCone::from_parts(self.dim, self.inner_rays(), None)
    }

    pub fn outer_cone(&self) -> PolyhedralCone {
        PolyhedralCone::from_parts(self.dim, self.outer_rays(), None)
    }

    pub fn has_flag(&self, f: ApproxFlag) -> bool {
        self.flags.contains(&f)
    }

    /// Smallest `y . z` over the generator pairs (nonnegative when `Y` lies in `(cone Z)+`).
    pub fn duality_slack(&self) -> f64 {
        let mut m = f64::INFINITY;
        for y in self.outer_rays() {
            for z in self.inner_rays() {
                m = m.min(y.dot(&z));
            }
        }
        m
    }
}

/// Variable block of a [`LiftedFeasibilitySystem`].
#[derive(Clone, Debug, PartialEq)]
pub struct SystemBlock {
    pub name: String,
    /// Length for nonnegative blocks, matrix order for PSD blocks.
    pub size: usize,
}

/// Constraint system on `(w, dual variables)` whose `w`-projection is `W` (or `W_c`).
///
/// Variables are laid out as `[w | nonneg blocks | packed PSD blocks]` and the
/// equalities are homogeneous: `equalities * vars = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedFeasibilitySystem {
    pub weight_dim: usize,
    pub nonneg_blocks: Vec<SystemBlock>,
    pub psd_blocks: Vec<SystemBlock>,
    pub equalities: DMatrix<f64>,
    /// Normals `n` with `n . w >= 0` describing `C+`.
    pub member_cone: Vec<DVector<f64>>,
    /// Optional cut `c . w <= tau`.
    pub base_cut: Option<(DVector<f64>, f64)>,
}

impl LiftedFeasibilitySystem {
    pub fn nonneg_len(&self) -> usize {
        self.nonneg_blocks.iter().map(|b| b.size).sum()
    }

    pub fn psd_len(&self) -> usize {
        self.psd_blocks
            .iter()
            .map(|b| linalg::tri_len(b.size))
            .sum()
    }

    pub fn num_vars(&self) -> usize {
        self.weight_dim + self.nonneg_len() + self.psd_len()
    }

    pub fn is_polyhedral(&self) -> bool {
        self.psd_blocks.is_empty()
    }

    /// Adds the system's variables and constraints to `prob`; returns the offset of `w`.
    pub fn embed(&self, prob: &mut ConicProblem) -> usize {
        let w = prob.add_block("w", BlockKind::Free(self.weight_dim));
        for b in &self.nonneg_blocks {
            prob.add_block(b.name.clone(), BlockKind::Nonneg(b.size));
        }
        for b in &self.psd_blocks {
            prob.add_block(b.name.clone(), BlockKind::Psd(b.size));
        }
        for i in 0..self.equalities.nrows() {
            let row: Vec<(usize, f64)> = (0..self.num_vars())
                .filter(|&j| self.equalities[(i, j)] != 0.0)
                .map(|j| (w + j, self.equalities[(i, j)]))
                .collect();
            prob.add_equality(row, 0.0);
        }
        for n in &self.member_cone {
            prob.add_inequality((0..self.weight_dim).map(|j| (w + j, -n[j])).collect(), 0.0);
        }
        if let Some((c, tau)) = &self.base_cut {
            prob.add_inequality((0..self.weight_dim).map(|j| (w + j, c[j])).collect(), *tau);
        }
        w
    }
}
