//! Recession cones of convex vector optimization problems.
//!
//! For a vector program `min f(x)` ordered by a polyhedral cone `C`, the dual
//! of the recession cone of the upper image is the closure of
//! `W = {w in C+ | the dual of min w' f(x) is feasible}`. This crate builds
//! the dual feasibility systems for linear, semidefinite and quadratic
//! problems and turns them into finite generator sets:
//!
//! * linear problems: `W` is a polyhedral projection and the result is exact;
//! * semidefinite problems: `W ∩ {c' w <= 1}` is approximated by a cutting
//!   loop, giving an outer approximation of the recession cone with a
//!   certified Hausdorff tolerance;
//! * quadratic problems: a case split decides the answer exactly.
//!
//! ```no_run
//! use vop_recession::{io, recession, ClarabelBackend, RecessionOptions};
//!
//! let problem = io::read_problem("problem.json")?;
//! let approx = recession(&problem, RecessionOptions::default(), &ClarabelBackend::default())?;
//! for y in approx.outer_rays() {
//!     println!("{}", y.transpose());
//! }
//! # Ok::<(), vop_recession::Error>(())
//! ```

pub mod backend;
pub mod convproj;
mod error;
pub mod io;
pub mod linalg;
pub mod model;
pub mod plot;
pub mod polycalc;
pub mod recession;
pub mod scalarize;
pub mod testkit;

pub use backend::{backend_from_env, ClarabelBackend, ConicSolverBackend};
pub use error::{Error, Result};
pub use model::{
    validate, ApproxFlag, ConeApproximation, LinearVop, OrderingCone, PolyhedralCone, Problem,
    QuadraticConstraint, QuadraticObjective, QuadraticVop, SemidefiniteVop,
};
pub use recession::{
    lambda_interval, recession, recession_lvop, recession_qvp, recession_sdvp, RecessionOptions,
};
