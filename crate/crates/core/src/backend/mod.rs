//! Solver backend contract.
//!
//! Every scalar subproblem in the crate (feasibility LPs, support SDPs,
//! point-to-hull QPs, scalarized primal problems) is handed to a backend in a
//! self-contained conic form:
//!
//! ```text
//! minimize    0.5 x' H x + c' x
//! subject to  E x  = e
//!             G x <= g
//!             x = (x_1, ..., x_B),  each block free, nonnegative, or PSD
//! ```
//!
//! PSD blocks of order `k` occupy `k(k+1)/2` variables holding the upper
//! triangle of the symmetric matrix in column-major order, unscaled (see
//! [`crate::linalg::tri_index`]).

mod clarabel_backend;

use std::sync::Mutex;

use nalgebra::{DMatrix, DVector};

pub use clarabel_backend::ClarabelBackend;

use crate::error::{Error, Result};
use crate::linalg::tri_len;

/// Environment variable that selects the backend implementation.
pub const BACKEND_ENV: &str = "VOP_RECESSION_BACKEND";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    Free(usize),
    Nonneg(usize),
    /// Symmetric PSD matrix of the given order.
    Psd(usize),
}

impl BlockKind {
    pub fn len(self) -> usize {
        match self {
            BlockKind::Free(n) | BlockKind::Nonneg(n) => n,
            BlockKind::Psd(k) => tri_len(k),
        }
    }

    pub fn is_empty(self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug)]
pub struct VarBlock {
    pub name: String,
    pub kind: BlockKind,
    pub offset: usize,
}

/// Sparse affine row `coeffs . x (=|<=) rhs`.
#[derive(Clone, Debug, Default)]
pub struct AffineRow {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// A conic problem in the form described in the module docs.
#[derive(Clone, Debug, Default)]
pub struct ConicProblem {
    blocks: Vec<VarBlock>,
    num_vars: usize,
    objective: Vec<(usize, f64)>,
    quadratic: Vec<(usize, usize, f64)>,
    equalities: Vec<AffineRow>,
    inequalities: Vec<AffineRow>,
}

impl ConicProblem {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a variable block and returns its offset.
    pub fn add_block(&mut self, name: impl Into<String>, kind: BlockKind) -> usize {
        let offset = self.num_vars;
        self.blocks.push(VarBlock {
            name: name.into(),
            kind,
            offset,
        });
        self.num_vars += kind.len();
        offset
    }

    pub fn add_objective(&mut self, var: usize, coeff: f64) {
        if coeff != 0.0 {
            self.objective.push((var, coeff));
        }
    }

    /// Adds `coeff * x_i * x_j` to the Hessian `H` (both `(i,j)` and `(j,i)` when `i != j`).
    pub fn add_quadratic(&mut self, i: usize, j: usize, coeff: f64) {
        if coeff != 0.0 {
            self.quadratic.push((i, j, coeff));
            if i != j {
                self.quadratic.push((j, i, coeff));
            }
        }
    }

    pub fn add_equality(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        self.equalities.push(AffineRow { coeffs, rhs });
    }

    pub fn add_inequality(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        self.inequalities.push(AffineRow { coeffs, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn blocks(&self) -> &[VarBlock] {
        &self.blocks
    }

    pub fn equalities(&self) -> &[AffineRow] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[AffineRow] {
        &self.inequalities
    }

    pub fn objective_vector(&self) -> DVector<f64> {
        let mut c = DVector::zeros(self.num_vars);
        for &(i, v) in &self.objective {
            c[i] += v;
        }
        c
    }

    /// Dense Hessian, or `None` for a linear objective.
    pub fn hessian(&self) -> Option<DMatrix<f64>> {
        if self.quadratic.is_empty() {
            return None;
        }
        let mut h = DMatrix::zeros(self.num_vars, self.num_vars);
        for &(i, j, v) in &self.quadratic {
            h[(i, j)] += v;
        }
        Some(h)
    }

    pub fn has_psd(&self) -> bool {
        self.blocks
            .iter()
            .any(|b| matches!(b.kind, BlockKind::Psd(_)))
    }

    pub fn objective_value(&self, x: &DVector<f64>) -> f64 {
        let mut v = self.objective_vector().dot(x);
        if let Some(h) = self.hessian() {
            v += 0.5 * x.dot(&(h * x));
        }
        v
    }
}

/// Outcome of a backend solve.
#[derive(Clone, Debug)]
pub enum SolveStatus {
    Optimal { value: f64, x: DVector<f64> },
    Infeasible,
    Unbounded,
    NumericalFailure(String),
}

impl SolveStatus {
    pub fn is_optimal(&self) -> bool {
        matches!(self, SolveStatus::Optimal { .. })
    }

    /// Unwraps an optimal solution, mapping anything else to a backend error.
    pub fn expect_optimal(self, query: &str) -> Result<(f64, DVector<f64>)> {
        match self {
            SolveStatus::Optimal { value, x } => Ok((value, x)),
            SolveStatus::Infeasible => Err(Error::backend(query, "reported infeasible")),
            SolveStatus::Unbounded => Err(Error::backend(query, "reported unbounded")),
            SolveStatus::NumericalFailure(m) => Err(Error::backend(query, m)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Capabilities {
    pub lp: bool,
    pub qp: bool,
    pub sdp_feasibility: bool,
    pub sdp_support: bool,
}

impl Capabilities {
    pub const ALL: Capabilities = Capabilities {
        lp: true,
        qp: true,
        sdp_feasibility: true,
        sdp_support: true,
    };
}

/// Capability contract for the scalar subproblems.
///
/// Implementations must be deterministic for identical input and settings and
/// answer feasibility questions to about `1e-8`.
pub trait ConicSolverBackend: Send + Sync {
    fn name(&self) -> &str;

    fn capabilities(&self) -> Capabilities;

    /// Whether concurrent `solve` calls are allowed.
    fn reentrant(&self) -> bool {
        true
    }

    fn solve(&self, problem: &ConicProblem) -> SolveStatus;
}

/// Routes calls to a backend, serialising them when it is not reentrant.
pub struct Gate<'a> {
    backend: &'a dyn ConicSolverBackend,
    lock: Option<Mutex<()>>,
}

impl<'a> Gate<'a> {
    pub fn new(backend: &'a dyn ConicSolverBackend) -> Self {
        let lock = (!backend.reentrant()).then(|| Mutex::new(()));
        Gate { backend, lock }
    }

    pub fn solve(&self, problem: &ConicProblem) -> SolveStatus {
        match &self.lock {
            Some(m) => {
                let _guard = m.lock().unwrap_or_else(|e| e.into_inner());
                self.backend.solve(problem)
            }
            None => self.backend.solve(problem),
        }
    }

    pub fn backend(&self) -> &'a dyn ConicSolverBackend {
        self.backend
    }

    pub fn parallel(&self) -> bool {
        self.lock.is_none()
    }
}

/// Builds the backend named by [`BACKEND_ENV`] (`clarabel` when unset).
///
/// `clarabel-serial` is the same solver advertised as non-reentrant.
pub fn backend_from_env() -> Result<Box<dyn ConicSolverBackend>> {
    let name = std::env::var(BACKEND_ENV).unwrap_or_else(|_| "clarabel".to_string());
    backend_by_name(&name)
}

pub fn backend_by_name(name: &str) -> Result<Box<dyn ConicSolverBackend>> {
    match name {
        "clarabel" | "" => Ok(Box::new(ClarabelBackend::default())),
        "clarabel-serial" => Ok(Box::new(ClarabelBackend::default().serial())),
        other => Err(Error::InvalidInput(format!("unknown backend `{other}`"))),
    }
}
