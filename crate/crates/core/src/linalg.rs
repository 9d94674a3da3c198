//! Small dense helpers shared by the geometry and modelling code.

use nalgebra::{DMatrix, DVector};

/// Tolerance for symmetric-matrix checks.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Minimum-eigenvalue tolerance for PSD checks.
pub const PSD_TOL: f64 = -1e-8;

/// Returns `v / |v|`, or `None` when `|v|` is below `eps`.
pub fn unit(v: &DVector<f64>, eps: f64) -> Option<DVector<f64>> {
    let n = v.norm();
    if n <= eps {
        return None;
    }
    // Already-unit vectors are kept bit-for-bit so normalisation is idempotent.
    if (n * n - 1.0).abs() <= 4.0 * f64::EPSILON {
        return Some(v.clone());
    }
    Some(v / n)
}

/// Angle between two nonzero vectors, in radians.
pub fn angle(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let c = a.dot(b) / (a.norm() * b.norm());
    // acos is ill-conditioned near 0; use the chord instead.
    let chord = (a / a.norm() - b / b.norm()).norm();
    if c > 0.9 {
        2.0 * (0.5 * chord).asin()
    } else {
        c.clamp(-1.0, 1.0).acos()
    }
}

/// Removes vectors within `angle_tol` of an earlier one. Inputs are assumed unit.
pub fn dedup_directions(vs: Vec<DVector<f64>>, angle_tol: f64) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(vs.len());
    for v in vs {
        if !out.iter().any(|u| angle(u, &v) < angle_tol) {
            out.push(v);
        }
    }
    out
}

/// Lexicographic comparison of coordinate vectors.
pub fn lex_cmp(a: &DVector<f64>, b: &DVector<f64>) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub fn is_symmetric(m: &DMatrix<f64>, tol: f64) -> bool {
    m.is_square() && (m - m.transpose()).abs().max() <= tol
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues().min()
}

pub fn max_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let sym = (m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues().max()
}

/// Number of entries in the packed upper triangle of a `k x k` matrix.
pub fn tri_len(k: usize) -> usize {
    k * (k + 1) / 2
}

/// Position of entry `(i, j)` in the column-major packed upper triangle.
pub fn tri_index(i: usize, j: usize) -> usize {
    let (r, c) = if i <= j { (i, j) } else { (j, i) };
    c * (c + 1) / 2 + r
}

/// Coefficients `a` such that `tr(F Z) = a . packed(Z)` for symmetric `F`, `Z`.
pub fn trace_coefficients(f: &DMatrix<f64>) -> Vec<f64> {
    let k = f.nrows();
    let mut out = vec![0.0; tri_len(k)];
    for j in 0..k {
        for i in 0..=j {
            out[tri_index(i, j)] = if i == j {
                f[(i, i)]
            } else {
                f[(i, j)] + f[(j, i)]
            };
        }
    }
    out
}

/// Rebuilds a symmetric matrix from its packed upper triangle.
pub fn unpack_symmetric(packed: &[f64], k: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(k, k);
    for j in 0..k {
        for i in 0..=j {
            let v = packed[tri_index(i, j)];
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Norm-preserving vectorisation of a symmetric matrix (off-diagonals scaled by sqrt 2).
pub fn svec(m: &DMatrix<f64>) -> DVector<f64> {
    let k = m.nrows();
    let mut out = DVector::zeros(tri_len(k));
    for j in 0..k {
        for i in 0..=j {
            out[tri_index(i, j)] = if i == j {
                m[(i, i)]
            } else {
                std::f64::consts::SQRT_2 * 0.5 * (m[(i, j)] + m[(j, i)])
            };
        }
    }
    out
}

/// Numerical rank from singular values above `tol * max(1, sigma_max)`.
pub fn rank(m: &DMatrix<f64>, tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let scale = sv.max().max(1.0);
    sv.iter().filter(|&&s| s > tol * scale).count()
}

/// Projects `vs` onto their numerical span and renormalises.
///
/// Directions whose singular value falls below `rel_tol * sigma_max` are
/// treated as noise, so a nearly flat set becomes exactly flat.
pub fn snap_to_span(vs: &[DVector<f64>], rel_tol: f64) -> Vec<DVector<f64>> {
    let Some(first) = vs.first() else {
        return Vec::new();
    };
    let dim = first.len();
    let m = DMatrix::from_columns(vs);
    let svd = m.svd(true, false);
    let u = svd.u.as_ref().expect("requested U");
    let sv = &svd.singular_values;
    let top = sv.max();
    let kept: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > rel_tol * top).collect();
    if kept.len() >= dim {
        return vs.to_vec();
    }
    let basis = DMatrix::from_columns(
        &kept
            .iter()
            .map(|&i| u.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    vs.iter()
        .filter_map(|v| {
            let p = &basis * (basis.transpose() * v);
            unit(&p, 1e-12)
        })
        .collect()
}

/// Non-negative least squares `min |G x - b|, x >= 0` (Lawson-Hanson active set).
///
/// Columns of `g` are the generators. Returns the coefficient vector.
pub fn nnls(g: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = g.ncols();
    let mut x = DVector::zeros(n);
    if n == 0 {
        return x;
    }
    let tol = 1e-12 * (1.0 + g.abs().max()) * (1.0 + b.norm());
    let mut passive = vec![false; n];
    let gt = g.transpose();
    let max_outer = 3 * n + 30;

    for _ in 0..max_outer {
        let resid = b - g * &x;
        let grad = &gt * &resid;
        let mut best = None;
        let mut best_val = tol;
        for j in 0..n {
            if !passive[j] && grad[j] > best_val {
                best_val = grad[j];
                best = Some(j);
            }
        }
        let Some(j) = best else { break };
        passive[j] = true;

        for _ in 0..(3 * n + 30) {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let s_p = least_squares_subset(g, b, &idx);
            let mut s = DVector::zeros(n);
            for (k, &i) in idx.iter().enumerate() {
                s[i] = s_p[k];
            }
            if idx.iter().all(|&i| s[i] > 0.0) {
                x = s;
                break;
            }
            // Step back toward feasibility.
            let mut alpha = 1.0f64;
            for &i in &idx {
                if s[i] <= 0.0 {
                    let denom = x[i] - s[i];
                    if denom > 0.0 {
                        alpha = alpha.min(x[i] / denom);
                    }
                }
            }
            x = &x + (s - &x) * alpha;
            for &i in &idx {
                if x[i] <= tol {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    }
    x
}

fn least_squares_subset(g: &DMatrix<f64>, b: &DVector<f64>, idx: &[usize]) -> DVector<f64> {
    let sub = DMatrix::from_fn(g.nrows(), idx.len(), |r, c| g[(r, idx[c])]);
    let svd = sub.svd(true, true);
    svd.solve(b, 1e-13)
        .unwrap_or_else(|_| DVector::zeros(idx.len()))
}

/// Euclidean projection of `x` onto `cone(generators)`.
pub fn project_onto_cone(generators: &[DVector<f64>], x: &DVector<f64>) -> DVector<f64> {
    if generators.is_empty() {
        return DVector::zeros(x.len());
    }
    let g = DMatrix::from_columns(generators);
    let coef = nnls(&g, x);
    g * coef
}

/// Euclidean distance from `x` to `cone(generators)`.
pub fn distance_to_cone(generators: &[DVector<f64>], x: &DVector<f64>) -> f64 {
    (x - project_onto_cone(generators, x)).norm()
}

/// Projection onto `cone(generators) ∩ B(0, 1)`: the cone projection pulled back to the ball.
pub fn project_onto_cone_section(generators: &[DVector<f64>], x: &DVector<f64>) -> DVector<f64> {
    let p = project_onto_cone(generators, x);
    let n = p.norm();
    if n > 1.0 {
        p / n
    } else {
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_trace_matches_dense_trace() {
        let f = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, -1.0, 0.5, 3.0, 0.5, 4.0]);
        let z = DMatrix::from_row_slice(3, 3, &[2.0, 0.1, -0.3, 0.1, 1.0, 0.7, -0.3, 0.7, 3.0]);
        let dense = (&f * &z).trace();
        let mut packed = vec![0.0; tri_len(3)];
        for c in 0..3 {
            for r in 0..=c {
                packed[tri_index(r, c)] = z[(r, c)];
            }
        }
        let a = trace_coefficients(&f);
        let via: f64 = a.iter().zip(&packed).map(|(x, y)| x * y).sum();
        assert!((dense - via).abs() < 1e-12);
        assert_eq!(unpack_symmetric(&packed, 3), z);
    }

    #[test]
    fn nnls_projects_onto_orthant_cone() {
        let gens = vec![
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0]),
        ];
        let p = project_onto_cone(&gens, &DVector::from_vec(vec![2.0, -3.0]));
        assert!((p - DVector::from_vec(vec![2.0, 0.0])).norm() < 1e-12);
        let d = distance_to_cone(&gens, &DVector::from_vec(vec![-1.0, -1.0]));
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn nnls_handles_lineality_pairs() {
        let gens = vec![
            DVector::from_vec(vec![1.0, 0.0]),
            DVector::from_vec(vec![-1.0, 0.0]),
            DVector::from_vec(vec![0.0, 1.0]),
        ];
        let x = DVector::from_vec(vec![-5.0, -2.0]);
        let p = project_onto_cone(&gens, &x);
        assert!((p - DVector::from_vec(vec![-5.0, 0.0])).norm() < 1e-10);
    }

    #[test]
    fn section_projection_clips_to_ball() {
        let gens = vec![DVector::from_vec(vec![1.0, 1.0]) / 2f64.sqrt()];
        let p = project_onto_cone_section(&gens, &DVector::from_vec(vec![3.0, 3.0]));
        assert!((p.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_of_dependent_columns() {
        let m = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 0.0, 0.0, 1.0, 2.0]);
        assert_eq!(rank(&m, 1e-8), 1);
    }
}
