use nalgebra::{DMatrix, DVector};

use crate::backend::{BlockKind, ConicProblem, ConicSolverBackend};
use crate::error::{Error, Result};

/// Euclidean distance from `x` to `conv(points)` and the nearest point.
///
/// Solves `min 0.5 |e|^2` subject to `e + sum l_j p_j = x`, `l` in the simplex.
/// The returned point is always a convex combination of `points`, so the
/// distance is an upper bound on the true value; an exact affine projection on
/// the active set usually makes it tight.
pub fn point_to_hull_distance(
    x: &DVector<f64>,
    points: &[DVector<f64>],
    backend: &dyn ConicSolverBackend,
) -> Result<(f64, DVector<f64>)> {
    let d = x.len();
    let Some(first) = points.first() else {
        return Err(Error::InvalidInput(
            "point_to_hull_distance needs at least one point".into(),
        ));
    };
    for p in points {
        if p.len() != d {
            return Err(Error::dims("hull point", d, p.len()));
        }
    }
    if points.len() == 1 {
        return Ok(((x - first).norm(), first.clone()));
    }
    if let Some(p) = points.iter().find(|p| *p == x) {
        return Ok((0.0, p.clone()));
    }

    let m = points.len();
    let mut qp = ConicProblem::new();
    let lam = qp.add_block("lambda", BlockKind::Nonneg(m));
    let e = qp.add_block("e", BlockKind::Free(d));
    for i in 0..d {
        qp.add_quadratic(e + i, e + i, 1.0);
        let mut row = vec![(e + i, 1.0)];
        row.extend(points.iter().enumerate().map(|(j, p)| (lam + j, p[i])));
        qp.add_equality(row, x[i]);
    }
    qp.add_equality((0..m).map(|j| (lam + j, 1.0)).collect(), 1.0);
    let (_, sol) = backend.solve(&qp).expect_optimal("point-to-hull QP")?;

    let mut l: Vec<f64> = (0..m).map(|j| sol[lam + j].max(0.0)).collect();
    let s: f64 = l.iter().sum();
    if s <= 0.0 {
        return Err(Error::backend("point-to-hull QP", "zero convex weights"));
    }
    l.iter_mut().for_each(|v| *v /= s);
    let mut best = combine(points, &l);
    let mut best_d = (x - &best).norm();

    let lmax = l.iter().cloned().fold(0.0, f64::max);
    let active: Vec<usize> = (0..m).filter(|&j| l[j] > 1e-6 * lmax).collect();
    if let Some((p, dist)) = affine_projection(x, points, &active) {
        if dist < best_d {
            best = p;
            best_d = dist;
        }
    }
    Ok((best_d, best))
}

fn combine(points: &[DVector<f64>], l: &[f64]) -> DVector<f64> {
    points
        .iter()
        .zip(l)
        .fold(DVector::zeros(points[0].len()), |acc, (p, &w)| acc + p * w)
}

/// Projection of `x` onto the affine hull of the active points, kept only when
/// its barycentric weights are nonnegative.
fn affine_projection(
    x: &DVector<f64>,
    points: &[DVector<f64>],
    active: &[usize],
) -> Option<(DVector<f64>, f64)> {
    let k = active.len();
    if k == 0 {
        return None;
    }
    let base = &points[active[0]];
    if k == 1 {
        return Some((base.clone(), (x - base).norm()));
    }
    let d = x.len();
    let basis = DMatrix::from_fn(d, k - 1, |r, c| points[active[c + 1]][r] - base[r]);
    let svd = basis.clone().svd(true, true);
    let coef = svd.solve(&(x - base), 1e-12).ok()?;
    let sum: f64 = coef.iter().sum();
    if coef.iter().any(|&t| t < -1e-12) || sum > 1.0 + 1e-12 {
        return None;
    }
    let p = base + &basis * &coef;
    Some((p.clone(), (x - p).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::ClarabelBackend;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(xs)
    }

    #[test]
    fn member_point() {
        let pts = vec![v(&[0.0, 0.0]), v(&[1.0, 0.0])];
        let (d, _) =
            point_to_hull_distance(&v(&[1.0, 0.0]), &pts, &ClarabelBackend::default()).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn collinear_points() {
        let pts = vec![v(&[0.0, 0.0]), v(&[1.0, 0.0])];
        let (d, p) =
            point_to_hull_distance(&v(&[2.0, 0.0]), &pts, &ClarabelBackend::default()).unwrap();
        assert!((d - 1.0).abs() < 1e-9);
        assert!((p - v(&[1.0, 0.0])).norm() < 1e-9);
    }

    #[test]
    fn interior_point_of_triangle() {
        let pts = vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        let (d, _) =
            point_to_hull_distance(&v(&[0.2, 0.3]), &pts, &ClarabelBackend::default()).unwrap();
        assert!(d < 1e-9, "{d}");
        let (d, _) =
            point_to_hull_distance(&v(&[1.0, 1.0]), &pts, &ClarabelBackend::default()).unwrap();
        assert!((d - 0.5f64.sqrt()).abs() < 1e-9);
    }
}
