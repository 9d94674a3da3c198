use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettings, DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
use nalgebra::DVector;
// Links the distribution OpenBLAS used by the PSD cone kernels.
use openblas_src as _;

use super::{BlockKind, Capabilities, ConicProblem, ConicSolverBackend, SolveStatus};

/// Interior-point backend built on Clarabel.
#[derive(Clone, Debug)]
pub struct ClarabelBackend {
    pub tol_feas: f64,
    pub tol_gap: f64,
    pub max_iter: u32,
    reentrant: bool,
}

impl Default for ClarabelBackend {
    fn default() -> Self {
        ClarabelBackend {
            tol_feas: 1e-8,
            tol_gap: 1e-8,
            max_iter: 200,
            reentrant: true,
        }
    }
}

impl ClarabelBackend {
    /// Same solver, advertised as non-reentrant so callers serialise it.
    pub fn serial(mut self) -> Self {
        self.reentrant = false;
        self
    }

    fn settings(&self) -> DefaultSettings<f64> {
        DefaultSettingsBuilder::default()
            .verbose(false)
            .max_iter(self.max_iter)
            .tol_feas(self.tol_feas)
            .tol_gap_abs(self.tol_gap)
            .tol_gap_rel(self.tol_gap)
            .tol_infeas_abs(self.tol_feas)
            .tol_infeas_rel(self.tol_feas)
            .max_threads(1)
            .build()
            .expect("static settings are valid")
    }
}

struct Triplets {
    rows: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Triplets {
    fn new() -> Self {
        Triplets {
            rows: Vec::new(),
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    fn push(&mut self, r: usize, c: usize, v: f64) {
        if v != 0.0 {
            self.rows.push(r);
            self.cols.push(c);
            self.vals.push(v);
        }
    }

    fn into_csc(self, m: usize, n: usize) -> CscMatrix<f64> {
        CscMatrix::new_from_triplets(m, n, self.rows, self.cols, self.vals)
    }
}

impl ConicSolverBackend for ClarabelBackend {
    fn name(&self) -> &str {
        "clarabel"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::ALL
    }

    fn reentrant(&self) -> bool {
        self.reentrant
    }

    fn solve(&self, problem: &ConicProblem) -> SolveStatus {
        let n = problem.num_vars();
        if n == 0 {
            return trivial_solve(problem);
        }

        // Row layout: equalities | (inequalities, nonneg vars) | PSD blocks.
        let mut a = Triplets::new();
        let mut b: Vec<f64> = Vec::new();
        let mut cones: Vec<SupportedConeT<f64>> = Vec::new();

        let mut row = 0;
        for eq in problem.equalities() {
            for &(j, v) in &eq.coeffs {
                a.push(row, j, v);
            }
            b.push(eq.rhs);
            row += 1;
        }
        if row > 0 {
            cones.push(SupportedConeT::ZeroConeT(row));
        }

        let nonneg_start = row;
        for ineq in problem.inequalities() {
            for &(j, v) in &ineq.coeffs {
                a.push(row, j, v);
            }
            b.push(ineq.rhs);
            row += 1;
        }
        for blk in problem.blocks() {
            if let BlockKind::Nonneg(len) = blk.kind {
                for t in 0..len {
                    a.push(row, blk.offset + t, -1.0);
                    b.push(0.0);
                    row += 1;
                }
            }
        }
        if row > nonneg_start {
            cones.push(SupportedConeT::NonnegativeConeT(row - nonneg_start));
        }

        for blk in problem.blocks() {
            if let BlockKind::Psd(k) = blk.kind {
                // Clarabel's triangle cone scales off-diagonal entries by sqrt 2.
                for c in 0..k {
                    for r in 0..=c {
                        let t = crate::linalg::tri_index(r, c);
                        let scale = if r == c {
                            1.0
                        } else {
                            std::f64::consts::SQRT_2
                        };
                        a.push(row, blk.offset + t, -scale);
                        b.push(0.0);
                        row += 1;
                    }
                }
                cones.push(SupportedConeT::PSDTriangleConeT(k));
            }
        }

        let m = row;
        let a = a.into_csc(m, n);
        let q: Vec<f64> = problem.objective_vector().iter().copied().collect();
        let mut p = Triplets::new();
        if let Some(h) = problem.hessian() {
            for j in 0..n {
                for i in 0..=j {
                    p.push(i, j, 0.5 * (h[(i, j)] + h[(j, i)]));
                }
            }
        }
        let p = p.into_csc(n, n);

        let mut solver = match DefaultSolver::new(&p, &q, &a, &b, &cones, self.settings()) {
            Ok(s) => s,
            Err(e) => return SolveStatus::NumericalFailure(format!("setup: {e}")),
        };
        solver.solve();
        let sol = &solver.solution;
        match sol.status {
            SolverStatus::Solved | SolverStatus::AlmostSolved => SolveStatus::Optimal {
                value: sol.obj_val,
                x: DVector::from_vec(sol.x.clone()),
            },
            SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
                SolveStatus::Infeasible
            }
            SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => {
                SolveStatus::Unbounded
            }
            other => SolveStatus::NumericalFailure(format!("{other:?}")),
        }
    }
}

/// Problems without variables: check the constant rows directly.
fn trivial_solve(problem: &ConicProblem) -> SolveStatus {
    let ok = problem.equalities().iter().all(|r| r.rhs.abs() <= 1e-12)
        && problem.inequalities().iter().all(|r| r.rhs >= -1e-12);
    if ok {
        SolveStatus::Optimal {
            value: 0.0,
            x: DVector::zeros(0),
        }
    } else {
        SolveStatus::Infeasible
    }
}
