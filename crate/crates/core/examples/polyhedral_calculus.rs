//! The polyhedral toolbox on small cones: extreme rays from halfspaces, dual
//! cones, projection of a lifted system, polytope vertices and the sampled
//! section Hausdorff distance checked against the exact planar value.

use nalgebra::DVector;
use vop_recession::model::{LiftedFeasibilitySystem, SystemBlock};
use vop_recession::polycalc::{
    dual_cone, extreme_rays, hausdorff_section_estimate, polytope_vertices, project_cone,
    SectionSet,
};
use vop_recession::testkit::hausdorff_r2_exact;
use vop_recession::PolyhedralCone;

fn v(xs: &[f64]) -> DVector<f64> {
    DVector::from_row_slice(xs)
}

fn show(label: &str, rays: &[DVector<f64>]) {
    println!("{label}:");
    for r in rays {
        println!(
            "    {:?}",
            r.iter()
                .map(|x| (x * 1e6).round() / 1e6)
                .collect::<Vec<_>>()
        );
    }
}

fn main() -> vop_recession::Result<()> {
    // square pyramid x3 >= |x1|, x3 >= |x2|
    let pyramid = [
        v(&[1.0, 0.0, 1.0]),
        v(&[-1.0, 0.0, 1.0]),
        v(&[0.0, 1.0, 1.0]),
        v(&[0.0, -1.0, 1.0]),
    ];
    show("pyramid rays", &extreme_rays(3, &pyramid)?);

    let k = PolyhedralCone::from_rays(3, pyramid.to_vec())?;
    let k_plus = dual_cone(&k)?;
    show("dual of the cone spanned by the normals", k_plus.rays());
    show("dual of the dual", dual_cone(&k_plus)?.rays());

    // {w | w = (y1 + y2, y2), y >= 0} is the cone spanned by (1,0) and (1,1)
    let system = LiftedFeasibilitySystem {
        weight_dim: 2,
        nonneg_blocks: vec![SystemBlock {
            name: "y".into(),
            size: 2,
        }],
        psd_blocks: vec![],
        equalities: nalgebra::DMatrix::from_row_slice(
            2,
            4,
            &[1.0, 0.0, -1.0, -1.0, 0.0, 1.0, 0.0, -1.0],
        ),
        member_cone: vec![],
        base_cut: None,
    };
    show("projection", project_cone(&system)?.rays());

    // unit square as {x | x_i <= 1, -x_i <= 0}
    let cuts = vec![
        (v(&[1.0, 0.0]), 1.0),
        (v(&[0.0, 1.0]), 1.0),
        (v(&[-1.0, 0.0]), 0.0),
        (v(&[0.0, -1.0]), 0.0),
    ];
    show("square vertices", &polytope_vertices(2, &cuts)?);

    let a = PolyhedralCone::orthant(2);
    let b = PolyhedralCone::from_rays(2, vec![v(&[1.0, 0.2]), v(&[0.1, 1.0])])?;
    let exact = hausdorff_r2_exact(a.rays(), b.rays());
    for n in [10, 100, 1000] {
        let est = hausdorff_section_estimate(
            &SectionSet::Cone(a.clone()),
            &SectionSet::Cone(b.clone()),
            n,
            7,
        );
        println!("hausdorff estimate with {n:>4} samples: {est:.6} (exact {exact:.6})");
    }
    Ok(())
}
