//! Polyhedral calculus in low dimension.
//!
//! Representation conversion is done by the double description engine in
//! [`dd`]; everything else (dual cones, projections of lifted cones, polytope
//! vertices) is phrased as a cone conversion.

pub mod dd;
mod hausdorff;
mod hull;

use nalgebra::DVector;

pub use hausdorff::{hausdorff_section_estimate, sample_section, SectionSet};
pub use hull::point_to_hull_distance;

use crate::error::{Error, Result};
use crate::linalg::{dedup_directions, unit};
use crate::model::{LiftedFeasibilitySystem, PolyhedralCone};

/// `conv(vertices) + cone(rays)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VPolyhedron {
    pub vertices: Vec<DVector<f64>>,
    pub rays: Vec<DVector<f64>>,
}

/// Unit generators of `{x | a . x >= 0}`; a lineality space comes back as `+/-` pairs.
pub fn extreme_rays(dim: usize, halfspaces: &[DVector<f64>]) -> Result<Vec<DVector<f64>>> {
    Ok(dd::cone_generators(dim, &[], halfspaces)?.into_ray_list())
}

/// `K+ = {w | w . k >= 0 for all k in K}`.
///
/// The rays of `K` are the H-form of `K+`; its rays come from double description.
pub fn dual_cone(k: &PolyhedralCone) -> Result<PolyhedralCone> {
    let rays = extreme_rays(
        k.dim(),
        &crate::linalg::snap_to_span(k.rays(), crate::model::SPAN_TOL),
    )?;
    Ok(PolyhedralCone::from_parts(
        k.dim(),
        rays,
        Some(k.rays().to_vec()),
    ))
}

/// Projection of a polyhedral lifted system onto its weight coordinates.
///
/// The lifted H-form cone is converted to generators, the auxiliary
/// coordinates are dropped, and the result is reduced to irredundant rays.
pub fn project_cone(system: &LiftedFeasibilitySystem) -> Result<PolyhedralCone> {
    if !system.is_polyhedral() {
        return Err(Error::InvalidInput(
            "project_cone needs a system without PSD blocks".into(),
        ));
    }
    if system.base_cut.is_some() {
        return Err(Error::InvalidInput(
            "project_cone needs a homogeneous system".into(),
        ));
    }
    let q = system.weight_dim;
    let dim = system.num_vars();
    if system.equalities.ncols() != dim {
        return Err(Error::dims(
            "lifted equality columns",
            dim,
            system.equalities.ncols(),
        ));
    }
    let equalities: Vec<DVector<f64>> = system
        .equalities
        .row_iter()
        .map(|r| r.transpose())
        .collect();
    let mut halfspaces = Vec::with_capacity(system.member_cone.len() + system.nonneg_len());
    for n in &system.member_cone {
        let mut h = DVector::zeros(dim);
        h.rows_mut(0, q).copy_from(n);
        halfspaces.push(h);
    }
    for j in q..dim {
        let mut h = DVector::zeros(dim);
        h[j] = 1.0;
        halfspaces.push(h);
    }
    let lifted = dd::cone_generators(dim, &equalities, &halfspaces)?.into_ray_list();
    let projected: Vec<DVector<f64>> = lifted
        .iter()
        .filter_map(|r| unit(&r.rows(0, q).into_owned(), 1e-10))
        .collect();
    let projected = dedup_directions(projected, dd::DEDUP_ANGLE);
    if projected.is_empty() {
        return Err(Error::EmptyProjection);
    }
    PolyhedralCone::from_rays(q, projected)?.canonical()
}

/// Vertices of the bounded polytope `{x | a_i . x <= b_i}`.
///
/// Works on the homogenisation `{(x, t) | t >= 0, b_i t - a_i . x >= 0}`.
pub fn polytope_vertices(dim: usize, cuts: &[(DVector<f64>, f64)]) -> Result<Vec<DVector<f64>>> {
    let mut halfspaces = Vec::with_capacity(cuts.len() + 1);
    let mut t = DVector::zeros(dim + 1);
    t[dim] = 1.0;
    halfspaces.push(t);
    for (a, b) in cuts {
        if a.len() != dim {
            return Err(Error::dims("cut normal", dim, a.len()));
        }
        let mut h = DVector::zeros(dim + 1);
        h.rows_mut(0, dim).copy_from(&(-a));
        h[dim] = *b;
        halfspaces.push(h);
    }
    let gens = dd::cone_generators(dim + 1, &[], &halfspaces)?;
    if !gens.lineality.is_empty() {
        return Err(Error::InvalidInput(
            "polytope is unbounded (lineality)".into(),
        ));
    }
    let mut vertices = Vec::with_capacity(gens.rays.len());
    for r in gens.rays {
        let tv = r[dim];
        if tv <= 1e-10 {
            return Err(Error::InvalidInput(
                "polytope is unbounded (recession ray)".into(),
            ));
        }
        vertices.push(r.rows(0, dim) / tv);
    }
    Ok(vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    use crate::model::SystemBlock;

    fn v(xs: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(xs)
    }

    fn parallel(a: &DVector<f64>, b: &DVector<f64>) -> bool {
        crate::linalg::angle(a, b) < 1e-6
    }

    #[test]
    fn dual_of_a_planar_weight_cone() {
        let k = PolyhedralCone::from_rays(2, vec![v(&[0.2, 0.8]), v(&[0.8, 0.2])]).unwrap();
        let d = dual_cone(&k).unwrap();
        assert_eq!(d.rays().len(), 2);
        for expect in [v(&[-1.0, 4.0]), v(&[4.0, -1.0])] {
            assert!(d.rays().iter().any(|r| parallel(r, &expect)));
        }
    }

    #[test]
    fn orthant_is_self_dual() {
        let d = dual_cone(&PolyhedralCone::orthant(2)).unwrap();
        assert_eq!(d.rays().len(), 2);
        assert!(d.rays().iter().any(|r| parallel(r, &v(&[1.0, 0.0]))));
        assert!(d.rays().iter().any(|r| parallel(r, &v(&[0.0, 1.0]))));
    }

    #[test]
    fn dual_of_trivial_and_whole_space() {
        let zero = PolyhedralCone::from_rays(3, vec![]).unwrap();
        assert_eq!(dual_cone(&zero).unwrap().rays().len(), 6);
        assert!(dual_cone(&PolyhedralCone::whole_space(3))
            .unwrap()
            .is_trivial());
    }

    #[test]
    fn bi_objective_projection() {
        let a = DMatrix::from_row_slice(
            5,
            2,
            &[-4.0, -1.0, -2.0, -1.0, -1.0, -1.0, -1.0, -2.0, -1.0, -4.0],
        );
        // P w + A' y = 0 with P = I
        let mut eq = DMatrix::zeros(2, 7);
        for i in 0..2 {
            eq[(i, i)] = 1.0;
            for j in 0..5 {
                eq[(i, 2 + j)] = a[(j, i)];
            }
        }
        let sys = LiftedFeasibilitySystem {
            weight_dim: 2,
            nonneg_blocks: vec![SystemBlock {
                name: "y".into(),
                size: 5,
            }],
            psd_blocks: vec![],
            equalities: eq,
            member_cone: vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])],
            base_cut: None,
        };
        let w = project_cone(&sys).unwrap();
        assert_eq!(w.rays().len(), 2);
        assert!(w.rays().iter().any(|r| parallel(r, &v(&[1.0, 4.0]))));
        assert!(w.rays().iter().any(|r| parallel(r, &v(&[4.0, 1.0]))));
    }

    #[test]
    fn projection_without_auxiliary_block() {
        let sys = LiftedFeasibilitySystem {
            weight_dim: 2,
            nonneg_blocks: vec![],
            psd_blocks: vec![],
            equalities: DMatrix::zeros(0, 2),
            member_cone: vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])],
            base_cut: None,
        };
        let w = project_cone(&sys).unwrap();
        assert_eq!(w.rays().len(), 2);
    }

    #[test]
    fn projection_to_zero_is_reported() {
        // w1 + w2 = 0 inside the orthant
        let sys = LiftedFeasibilitySystem {
            weight_dim: 2,
            nonneg_blocks: vec![],
            psd_blocks: vec![],
            equalities: DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            member_cone: vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])],
            base_cut: None,
        };
        assert!(matches!(project_cone(&sys), Err(Error::EmptyProjection)));
    }

    #[test]
    fn unit_square_vertices() {
        let cuts = vec![
            (v(&[1.0, 0.0]), 1.0),
            (v(&[-1.0, 0.0]), 0.0),
            (v(&[0.0, 1.0]), 1.0),
            (v(&[0.0, -1.0]), 0.0),
        ];
        let mut vs = polytope_vertices(2, &cuts).unwrap();
        vs.sort_by(crate::linalg::lex_cmp);
        let expect = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]];
        assert_eq!(vs.len(), 4);
        for (got, e) in vs.iter().zip(expect.iter()) {
            assert!((got - v(e)).norm() < 1e-12);
        }
    }

    #[test]
    fn unbounded_polytope_is_rejected() {
        let cuts = vec![(v(&[-1.0, 0.0]), 0.0), (v(&[0.0, -1.0]), 0.0)];
        assert!(polytope_vertices(2, &cuts).is_err());
    }
}
