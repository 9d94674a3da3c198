//! Case split for convex quadratic vector programs.
//!
//! Builds one small problem per case and prints the detected class together
//! with the resulting recession generators.

use nalgebra::{DMatrix, DVector};
use vop_recession::scalarize::qvp_classify;
use vop_recession::{
    recession_qvp, OrderingCone, QuadraticConstraint, QuadraticObjective, QuadraticVop,
};

fn obj(p: &[f64], d: &[f64]) -> QuadraticObjective {
    let n = d.len();
    QuadraticObjective {
        p: DMatrix::from_row_slice(n, n, p),
        d: DVector::from_row_slice(d),
    }
}

fn show(name: &str, p: &QuadraticVop) -> vop_recession::Result<()> {
    let approx = recession_qvp(p)?;
    println!("{name}: {:?}, flags {:?}", qvp_classify(p), approx.flags);
    for y in approx.outer_rays() {
        println!(
            "    {:?}",
            y.iter()
                .map(|v| (v * 1e6).round() / 1e6)
                .collect::<Vec<_>>()
        );
    }
    Ok(())
}

fn main() -> vop_recession::Result<()> {
    // x1 + x2 >= -1, -x1 <= 1
    let a = DMatrix::from_row_slice(2, 2, &[-1.0, -1.0, -1.0, 0.0]);
    let b = DVector::from_row_slice(&[1.0, 1.0]);
    let wide = OrderingCone::new(
        vec![
            DVector::from_row_slice(&[1.0, -0.5]),
            DVector::from_row_slice(&[-0.5, 1.0]),
        ],
        None,
    )?;

    let ball = QuadraticConstraint {
        q: DMatrix::identity(2, 2),
        c: DVector::zeros(2),
        r: -4.0,
    };
    let with_ball = QuadraticVop::new(
        vec![obj(&[0.0; 4], &[1.0, 0.0]), obj(&[0.0; 4], &[0.0, 1.0])],
        vec![ball],
        a.clone(),
        b.clone(),
        OrderingCone::orthant(2),
    )?;
    show("quadratic constraint", &with_ball)?;

    let orthant = QuadraticVop::new(
        vec![
            obj(&[1.0, 0.0, 0.0, 0.0], &[0.0, -1.0]),
            obj(&[0.0; 4], &[1.0, 1.0]),
        ],
        vec![],
        a.clone(),
        b.clone(),
        OrderingCone::orthant(2),
    )?;
    show("orthant, nonlinear", &orthant)?;

    let independent = QuadraticVop::new(
        vec![
            obj(&[2.0, 0.0, 0.0, 1.0], &[1.0, 0.0]),
            obj(&[1.0, 0.0, 0.0, 2.0], &[0.0, 1.0]),
        ],
        vec![],
        a.clone(),
        b.clone(),
        wide.clone(),
    )?;
    show("independent Hessians", &independent)?;

    let linear = QuadraticVop::new(
        vec![obj(&[0.0; 4], &[1.0, 0.0]), obj(&[0.0; 4], &[0.0, 1.0])],
        vec![],
        a,
        b,
        wide,
    )?;
    show("zero Hessians", &linear)?;
    Ok(())
}
