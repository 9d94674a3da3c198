//! Sandwich approximation of a compact convex body from its support function.
//!
//! The outer polytope starts from a given H-form and is cut down by
//! supporting halfspaces; every support maximizer joins the inner point set.
//! The loop stops once every outer vertex is within `delta` of the inner hull,
//! which bounds the Hausdorff distance between the two.

use std::collections::HashMap;

use nalgebra::DVector;
use rayon::prelude::*;

use crate::backend::{ConicSolverBackend, Gate};
use crate::error::{Error, Result};
use crate::linalg::{lex_cmp, unit};
use crate::polycalc::{point_to_hull_distance, polytope_vertices};

pub const DEFAULT_MAX_ITER: usize = 500;

/// Inner points, outer halfspaces `a . w <= b` and the certified gap between them.
#[derive(Clone, Debug, Default)]
pub struct BodyApproximation {
    pub inner: Vec<DVector<f64>>,
    pub outer: Vec<(DVector<f64>, f64)>,
    pub outer_vertices: Vec<DVector<f64>>,
    /// Max over outer vertices of the (upper-bounded) distance to `conv(inner)`.
    pub achieved_delta: f64,
    pub iterations: usize,
    /// `achieved_delta` after each vertex enumeration.
    pub history: Vec<f64>,
}

impl BodyApproximation {
    /// Smallest `b - a . z` over inner points and outer halfspaces.
    pub fn sandwich_slack(&self) -> f64 {
        let mut m = f64::INFINITY;
        for (a, b) in &self.outer {
            for z in &self.inner {
                m = m.min(b - a.dot(z));
            }
        }
        m
    }
}

fn vertex_key(v: &DVector<f64>) -> Vec<i64> {
    v.iter().map(|x| (x * 1e10).round() as i64).collect()
}

fn push_unique(points: &mut Vec<DVector<f64>>, p: DVector<f64>) {
    if !points.iter().any(|z| (z - &p).norm() <= 1e-10) {
        points.push(p);
    }
}

/// Runs the cutting loop.
///
/// `support(d)` must return `(max_{w in body} d . w, maximizer)`. The body has
/// to lie inside `init_outer`, which must be bounded, and `init_inner` must be
/// a nonempty subset of the body.
pub fn approximate_body<S>(
    support: S,
    init_outer: Vec<(DVector<f64>, f64)>,
    init_inner: Vec<DVector<f64>>,
    delta: f64,
    max_iter: usize,
    backend: &dyn ConicSolverBackend,
) -> Result<BodyApproximation>
where
    S: Fn(&DVector<f64>) -> Result<(f64, DVector<f64>)>,
{
    if !(delta > 0.0) {
        return Err(Error::InvalidInput(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let Some(first) = init_inner.first() else {
        return Err(Error::InvalidInput(
            "approximate_body needs an initial inner point".into(),
        ));
    };
    let dim = first.len();
    let mut inner = Vec::new();
    for z in init_inner {
        if z.len() != dim {
            return Err(Error::dims("inner point", dim, z.len()));
        }
        push_unique(&mut inner, z);
    }
    let mut outer = init_outer;
    let gate = Gate::new(backend);
    let mut cache: HashMap<Vec<i64>, f64> = HashMap::new();
    let mut history = Vec::new();

    for iter in 0.. {
        let vertices = polytope_vertices(dim, &outer)?;
        let dist = |v: &DVector<f64>| -> Result<(f64, DVector<f64>)> {
            point_to_hull_distance(v, &inner, &GateRef(&gate))
        };
        let measured: Vec<Result<Option<(f64, DVector<f64>)>>> = {
            let job = |v: &DVector<f64>| match cache.get(&vertex_key(v)) {
                Some(&d) if d <= delta => Ok(None),
                _ => dist(v).map(Some),
            };
            if gate.parallel() {
                vertices.par_iter().map(job).collect()
            } else {
                vertices.iter().map(job).collect()
            }
        };
        let mut scored: Vec<(f64, DVector<f64>, Option<DVector<f64>>)> =
            Vec::with_capacity(vertices.len());
        for (v, m) in vertices.iter().zip(measured) {
            match m? {
                Some((d, near)) => {
                    cache.insert(vertex_key(v), d);
                    scored.push((d, v.clone(), Some(near)));
                }
                None => scored.push((cache[&vertex_key(v)], v.clone(), None)),
            }
        }
        let achieved = scored.iter().map(|s| s.0).fold(0.0, f64::max);
        history.push(achieved);
        let snapshot = |iterations| BodyApproximation {
            inner: inner.clone(),
            outer: outer.clone(),
            outer_vertices: vertices.clone(),
            achieved_delta: achieved,
            iterations,
            history: history.clone(),
        };
        if achieved <= delta {
            return Ok(snapshot(iter));
        }
        if iter >= max_iter {
            return Err(Error::IterationBudgetExceeded {
                max_iter,
                achieved,
                partial: Box::new(snapshot(iter)),
            });
        }

        scored.retain(|s| s.0 > delta);
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| lex_cmp(&a.1, &b.1)));
        let mut new_cuts: Vec<(DVector<f64>, f64)> = Vec::new();
        for (_, v, near) in scored {
            if new_cuts.iter().any(|(a, b)| a.dot(&v) > b + 1e-12) {
                continue;
            }
            let Some(near) = near else { continue };
            let Some(d) = unit(&(&v - &near), 1e-14) else {
                continue;
            };
            let (value, w) = support(&d)?;
            let h = inner
                .iter()
                .map(|z| d.dot(z))
                .fold(value.max(d.dot(&w)), f64::max);
            push_unique(&mut inner, w);
            new_cuts.push((d, h));
        }
        if new_cuts.is_empty() {
            return Err(Error::NumericalDegeneracy(
                "no violating vertex produced a cut".into(),
            ));
        }
        outer.extend(new_cuts);
    }
    unreachable!()
}

/// Lets the gate stand in for a backend inside the hull queries.
struct GateRef<'g, 'a>(&'g Gate<'a>);

impl crate::backend::ConicSolverBackend for GateRef<'_, '_> {
    fn name(&self) -> &str {
        self.0.backend().name()
    }

    fn capabilities(&self) -> crate::backend::Capabilities {
        self.0.backend().capabilities()
    }

    fn reentrant(&self) -> bool {
        self.0.parallel()
    }

    fn solve(&self, problem: &crate::backend::ConicProblem) -> crate::backend::SolveStatus {
        self.0.solve(problem)
    }
}

/// `{a . w <= b}` for `w in C+` (given by the rays of `C`) and `c . w <= 1`.
pub fn capped_dual_cone(c_rays: &[DVector<f64>], c: &DVector<f64>) -> Vec<(DVector<f64>, f64)> {
    let mut out: Vec<(DVector<f64>, f64)> = c_rays.iter().map(|r| (-r, 0.0)).collect();
    out.push((c.clone(), 1.0));
    out
}
