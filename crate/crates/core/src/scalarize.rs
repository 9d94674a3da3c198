//! Dual feasibility systems for the weighted-sum scalarizations.
//!
//! A weight `w` belongs to `W` exactly when the Lagrange dual of
//! `min w' f(x)` is feasible. For each problem class this module builds the
//! corresponding [`LiftedFeasibilitySystem`] and answers membership and
//! support queries on it through a [`ConicSolverBackend`].

use nalgebra::{DMatrix, DVector};

use crate::backend::{BlockKind, ConicProblem, ConicSolverBackend, SolveStatus};
use crate::error::{Error, Result};
use crate::linalg::{self, rank, svec, trace_coefficients};
use crate::model::{
    LiftedFeasibilitySystem, LinearVop, OrderingCone, PolyhedralCone, QuadraticVop,
    SemidefiniteVop, SystemBlock,
};
use crate::polycalc;

/// Affine chart `lambda -> w(lambda)` of the hyperplane `c' w = 1`.
///
/// The pivot coordinate `j` (the last one unless `c_q` is tiny) is solved for:
/// `w_j = (1 - sum_{i != j} lambda_i c_i) / c_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaParametrization {
    c: DVector<f64>,
    pivot: usize,
}

impl LambdaParametrization {
    pub fn new(c: DVector<f64>) -> Result<Self> {
        let q = c.len();
        if q == 0 {
            return Err(Error::InvalidInput("empty base normal".into()));
        }
        let scale = c.amax();
        if scale == 0.0 {
            return Err(Error::InvalidInput("base normal is zero".into()));
        }
        let pivot = if c[q - 1].abs() >= 1e-8 * scale {
            q - 1
        } else {
            c.iamax()
        };
        Ok(LambdaParametrization { c, pivot })
    }

    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    /// Dimension `q - 1` of the parameter space.
    pub fn dim(&self) -> usize {
        self.c.len() - 1
    }

    fn free_coords(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.c.len()).filter(move |&i| i != self.pivot)
    }

    /// `(w0, B)` with `w(lambda) = w0 + B lambda`.
    pub fn affine(&self) -> (DVector<f64>, DMatrix<f64>) {
        let q = self.c.len();
        let cj = self.c[self.pivot];
        let mut w0 = DVector::zeros(q);
        w0[self.pivot] = 1.0 / cj;
        let mut b = DMatrix::zeros(q, q - 1);
        for (col, i) in self.free_coords().enumerate() {
            b[(i, col)] = 1.0;
            b[(self.pivot, col)] = -self.c[i] / cj;
        }
        (w0, b)
    }

    pub fn w(&self, lambda: &DVector<f64>) -> DVector<f64> {
        let (w0, b) = self.affine();
        w0 + b * lambda
    }

    /// Parameter of the point where the ray through `w` meets the base, if it does.
    pub fn lambda(&self, w: &DVector<f64>) -> Option<DVector<f64>> {
        let s = self.c.dot(w);
        if s <= 1e-14 {
            return None;
        }
        Some(DVector::from_iterator(
            self.dim(),
            self.free_coords().map(|i| w[i] / s),
        ))
    }
}

/// `{(w, y) | w in C+, y >= 0, P w + A' y = 0}`.
pub fn lvop_w_system(p: &LinearVop) -> LiftedFeasibilitySystem {
    let (n, q, m) = (p.n(), p.q(), p.m());
    let mut eq = DMatrix::zeros(n, q + m);
    eq.view_mut((0, 0), (n, q)).copy_from(&p.p);
    eq.view_mut((0, q), (n, m)).copy_from(&p.a.transpose());
    LiftedFeasibilitySystem {
        weight_dim: q,
        nonneg_blocks: vec![SystemBlock {
            name: "y".into(),
            size: m,
        }],
        psd_blocks: vec![],
        equalities: eq,
        member_cone: member_cone(&p.cone),
        base_cut: None,
    }
}

fn member_cone(cone: &OrderingCone) -> Vec<DVector<f64>> {
    cone.dual().halfspaces().unwrap_or_default().to_vec()
}

/// `{(w, Z) | w in C+, Z >= 0, tr(F_i Z) + (P w)_i = 0}`.
pub fn sdvp_w_system(p: &SemidefiniteVop) -> LiftedFeasibilitySystem {
    let (n, q, k) = (p.n(), p.q(), p.k());
    let t = linalg::tri_len(k);
    let mut eq = DMatrix::zeros(n, q + t);
    eq.view_mut((0, 0), (n, q)).copy_from(&p.p);
    for (i, fi) in p.f.iter().enumerate() {
        for (j, a) in trace_coefficients(fi).into_iter().enumerate() {
            eq[(i, q + j)] = a;
        }
    }
    LiftedFeasibilitySystem {
        weight_dim: q,
        nonneg_blocks: vec![],
        psd_blocks: vec![SystemBlock {
            name: "Z".into(),
            size: k,
        }],
        equalities: eq,
        member_cone: member_cone(&p.cone),
        base_cut: None,
    }
}

/// [`sdvp_w_system`] with the cut `c' w <= 1`.
pub fn sdvp_wc_system(p: &SemidefiniteVop) -> LiftedFeasibilitySystem {
    with_base_cut(sdvp_w_system(p), p.cone.c())
}

pub fn with_base_cut(
    mut sys: LiftedFeasibilitySystem,
    c: &DVector<f64>,
) -> LiftedFeasibilitySystem {
    sys.base_cut = Some((c.clone(), 1.0));
    sys
}

/// Three-valued membership answer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Membership {
    Member,
    NonMember,
    /// Residual between the acceptance and rejection thresholds.
    Abstain,
}

/// Relative residual below which a weight is accepted.
pub const MEMBER_TOL: f64 = 1e-7;
/// Relative residual above which a weight is rejected.
pub const NON_MEMBER_TOL: f64 = 1e-6;

/// Decides `w in W` for an SDVP via the residual problem
/// `min t s.t. |tr(F_i Z) + (P w)_i| <= t, Z >= 0, tr Z <= M`.
///
/// Returns the answer and the optimal residual relative to `max(1, |P w|_inf)`.
pub fn sdvp_w_membership(
    p: &SemidefiniteVop,
    w: &DVector<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<(Membership, f64)> {
    if w.len() != p.q() {
        return Err(Error::dims("weight", p.q(), w.len()));
    }
    if p.cone.dual_margin(w) < -1e-9 * w.norm().max(1.0) {
        return Ok((Membership::NonMember, f64::INFINITY));
    }
    let pw = &p.p * w;
    let scale = pw.amax().max(1.0);
    if pw.amax() == 0.0 {
        return Ok((Membership::Member, 0.0));
    }
    let k = p.k();
    let mut prob = ConicProblem::new();
    let t = prob.add_block("t", BlockKind::Free(1));
    let z = prob.add_block("Z", BlockKind::Psd(k));
    prob.add_objective(t, 1.0);
    for (i, fi) in p.f.iter().enumerate() {
        let a = trace_coefficients(fi);
        let mut up: Vec<(usize, f64)> = a.iter().enumerate().map(|(j, &v)| (z + j, v)).collect();
        let mut down: Vec<(usize, f64)> = a.iter().enumerate().map(|(j, &v)| (z + j, -v)).collect();
        up.push((t, -1.0));
        down.push((t, -1.0));
        prob.add_inequality(up, -pw[i]);
        prob.add_inequality(down, pw[i]);
    }
    let bound = 1e4 * scale;
    prob.add_inequality(
        (0..k).map(|d| (z + linalg::tri_index(d, d), 1.0)).collect(),
        bound,
    );
    let (value, _) = backend
        .solve(&prob)
        .expect_optimal("SDVP membership residual")?;
    let rel = value.max(0.0) / scale;
    let ans = if rel <= MEMBER_TOL {
        Membership::Member
    } else if rel >= NON_MEMBER_TOL {
        Membership::NonMember
    } else {
        Membership::Abstain
    };
    Ok((ans, rel))
}

/// `w in W_c`, with abstentions resolved to `false`.
pub fn sdvp_wc_membership(
    p: &SemidefiniteVop,
    w: &DVector<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<bool> {
    if p.cone.c().dot(w) > 1.0 + 1e-9 {
        return Ok(false);
    }
    Ok(sdvp_w_membership(p, w, backend)?.0 == Membership::Member)
}

/// `max d' w` over the `w`-projection of a system with a base cut.
pub fn system_support(
    sys: &LiftedFeasibilitySystem,
    d: &DVector<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<(f64, DVector<f64>)> {
    let q = sys.weight_dim;
    if d.len() != q {
        return Err(Error::dims("support direction", q, d.len()));
    }
    if sys.base_cut.is_none() {
        return Err(Error::InvalidInput(
            "support query needs a bounded system (base cut)".into(),
        ));
    }
    let mut prob = ConicProblem::new();
    let w = sys.embed(&mut prob);
    for j in 0..q {
        prob.add_objective(w + j, -d[j]);
    }
    let (_, x) = backend.solve(&prob).expect_optimal("support problem")?;
    let ws = x.rows(w, q).into_owned();
    Ok((d.dot(&ws), ws))
}

/// Support function of `W_c` for an SDVP.
pub fn sdvp_wc_support(
    p: &SemidefiniteVop,
    d: &DVector<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<(f64, DVector<f64>)> {
    system_support(&sdvp_wc_system(p), d, backend)
}

/// `max d' lambda` over `Lambda = {lambda | w(lambda) in W}`.
///
/// `sys` must describe `W` without a base cut. Returns `None` when `Lambda` is empty.
pub fn lambda_support(
    sys: &LiftedFeasibilitySystem,
    param: &LambdaParametrization,
    d: &DVector<f64>,
    backend: &dyn ConicSolverBackend,
) -> Result<Option<(f64, DVector<f64>)>> {
    let q = sys.weight_dim;
    if param.c().len() != q {
        return Err(Error::dims("base normal", q, param.c().len()));
    }
    if d.len() != param.dim() {
        return Err(Error::dims("support direction", param.dim(), d.len()));
    }
    let unbounded = LiftedFeasibilitySystem {
        base_cut: None,
        ..sys.clone()
    };
    let mut prob = ConicProblem::new();
    let w = unbounded.embed(&mut prob);
    let lam = prob.add_block("lambda", BlockKind::Free(param.dim()));
    let (w0, b) = param.affine();
    for i in 0..q {
        let mut row = vec![(w + i, 1.0)];
        row.extend((0..param.dim()).map(|j| (lam + j, -b[(i, j)])));
        prob.add_equality(row, w0[i]);
    }
    for j in 0..param.dim() {
        prob.add_objective(lam + j, -d[j]);
    }
    match backend.solve(&prob) {
        SolveStatus::Optimal { x, .. } => {
            let l = x.rows(lam, param.dim()).into_owned();
            Ok(Some((d.dot(&l), l)))
        }
        SolveStatus::Infeasible => Ok(None),
        other => other.expect_optimal("Lambda support problem").map(|_| None),
    }
}

/// Case split for quadratic vector programs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QvpClass {
    /// At least one quadratic constraint: `W = C+`.
    DualIsCPlusA,
    /// Nonlinear objective with linearly independent `P_i`: `W = C+`.
    DualIsCPlusB,
    /// `C` is the orthant, only linear constraints, some `P_i != 0`: `cl W = R^q_+`.
    OrthantNonlinear,
    /// Everything else; `linear` marks the all-`P_i = 0` case.
    GeneralCase { linear: bool },
}

/// Matrix `M` with `M w = svec(sum w_i P_i)`.
pub fn hessian_map(p: &QuadraticVop) -> DMatrix<f64> {
    let cols: Vec<DVector<f64>> = p.objective.iter().map(|o| svec(&o.p)).collect();
    if cols.is_empty() {
        return DMatrix::zeros(0, 0);
    }
    DMatrix::from_columns(&cols)
}

pub fn qvp_classify(p: &QuadraticVop) -> QvpClass {
    if !p.constraints.is_empty() {
        return QvpClass::DualIsCPlusA;
    }
    let nonlinear = p.objective.iter().any(|o| o.p.abs().max() > 0.0);
    if nonlinear && rank(&hessian_map(p), 1e-8) == p.q() {
        return QvpClass::DualIsCPlusB;
    }
    if nonlinear && p.cone.is_orthant() {
        return QvpClass::OrthantNonlinear;
    }
    QvpClass::GeneralCase { linear: !nonlinear }
}

/// `W1 = {w in C+ | sum w_i P_i = 0}` and the lifted system of
/// `W2 = {w in C+ | exists mu >= 0: sum w_i P_i = 0, sum w_i d_i + A' mu = 0}`.
pub fn qvp_w1_w2(p: &QuadraticVop) -> Result<(PolyhedralCone, LiftedFeasibilitySystem)> {
    let (q, n, m) = (p.q(), p.n(), p.m());
    let hm = hessian_map(p);
    let hm_rows: Vec<usize> = (0..hm.nrows())
        .filter(|&r| hm.row(r).iter().any(|&v| v != 0.0))
        .collect();

    let mut w1_eq = DMatrix::zeros(hm_rows.len(), q);
    for (i, &r) in hm_rows.iter().enumerate() {
        w1_eq.row_mut(i).copy_from(&hm.row(r));
    }
    let w1_sys = LiftedFeasibilitySystem {
        weight_dim: q,
        nonneg_blocks: vec![],
        psd_blocks: vec![],
        equalities: w1_eq,
        member_cone: member_cone(&p.cone),
        base_cut: None,
    };
    let w1 = match polycalc::project_cone(&w1_sys) {
        Ok(c) => c,
        Err(Error::EmptyProjection) => PolyhedralCone::from_rays(q, vec![])?,
        Err(e) => return Err(e),
    };

    let mut eq = DMatrix::zeros(n + hm_rows.len(), q + m);
    for (i, o) in p.objective.iter().enumerate() {
        for r in 0..n {
            eq[(r, i)] = o.d[r];
        }
    }
    eq.view_mut((0, q), (n, m)).copy_from(&p.a.transpose());
    for (i, &r) in hm_rows.iter().enumerate() {
        for j in 0..q {
            eq[(n + i, j)] = hm[(r, j)];
        }
    }
    let w2 = LiftedFeasibilitySystem {
        weight_dim: q,
        nonneg_blocks: vec![SystemBlock {
            name: "mu".into(),
            size: m,
        }],
        psd_blocks: vec![],
        equalities: eq,
        member_cone: member_cone(&p.cone),
        base_cut: None,
    };
    Ok((w1, w2))
}
