//! Plugging in a solver backend.
//!
//! Any type implementing `ConicSolverBackend` can drive the pipeline. This one
//! wraps Clarabel and tallies the subproblems it is asked to solve, which also
//! shows how the backend can be picked at run time via `VOP_RECESSION_BACKEND`.

use std::sync::atomic::{AtomicUsize, Ordering};

use vop_recession::backend::{Capabilities, ConicProblem, SolveStatus};
use vop_recession::{backend_from_env, io, recession, ConicSolverBackend, RecessionOptions};

struct Counting {
    inner: Box<dyn ConicSolverBackend>,
    lp: AtomicUsize,
    qp: AtomicUsize,
    sdp: AtomicUsize,
}

impl ConicSolverBackend for Counting {
    fn name(&self) -> &str {
        "counting"
    }

    fn capabilities(&self) -> Capabilities {
        self.inner.capabilities()
    }

    fn reentrant(&self) -> bool {
        self.inner.reentrant()
    }

    fn solve(&self, problem: &ConicProblem) -> SolveStatus {
        let slot = if problem.has_psd() {
            &self.sdp
        } else if problem.hessian().is_some() {
            &self.qp
        } else {
            &self.lp
        };
        slot.fetch_add(1, Ordering::Relaxed);
        self.inner.solve(problem)
    }
}

fn main() -> vop_recession::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/sdp_p1.json").into());
    let problem = io::read_problem(&path)?;
    let inner = backend_from_env()?;
    println!("delegating to {}", inner.name());
    let backend = Counting {
        inner,
        lp: 0.into(),
        qp: 0.into(),
        sdp: 0.into(),
    };

    let approx = recession(
        &problem,
        RecessionOptions {
            delta: 0.01,
            ..Default::default()
        },
        &backend,
    )?;
    println!(
        "{} outer generators from {} LPs, {} QPs and {} SDPs",
        approx.outer.len(),
        backend.lp.load(Ordering::Relaxed),
        backend.qp.load(Ordering::Relaxed),
        backend.sdp.load(Ordering::Relaxed)
    );
    Ok(())
}
