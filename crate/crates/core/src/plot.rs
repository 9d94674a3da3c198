//! Section polylines of approximation cones for external plotting.
//!
//! In the plane each cone becomes the closed outline of `cone ∩ B(0,1)`. In
//! three dimensions each cone becomes the spherical polygon traced by its unit
//! generators, ordered by angle around their mean direction.

use std::f64::consts::TAU;

use nalgebra::Vector3;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ConeApproximation;

#[derive(Clone, Debug, Serialize)]
pub struct Series {
    pub name: String,
    pub points: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlotData {
    pub dim: usize,
    pub series: Vec<Series>,
}

/// Points per full turn on planar arcs.
const ARC_RESOLUTION: usize = 360;

fn planar_outline(rays: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut ang: Vec<f64> = rays
        .iter()
        .filter(|r| r[0].hypot(r[1]) > 1e-14)
        .map(|r| r[1].atan2(r[0]).rem_euclid(TAU))
        .collect();
    if ang.is_empty() {
        return vec![vec![0.0, 0.0]];
    }
    ang.sort_by(f64::total_cmp);
    let k = ang.len();
    let (gap, i) = (0..k)
        .map(|i| {
            let next = if i + 1 < k { ang[i + 1] } else { ang[0] + TAU };
            (next - ang[i], i)
        })
        .fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a });
    let (start, width, close) = if k == 1 {
        (ang[0], 0.0, true)
    } else if gap < std::f64::consts::PI - 1e-12 {
        (0.0, TAU, false)
    } else {
        let s = if i + 1 < k { ang[i + 1] } else { ang[0] };
        (s, TAU - gap, true)
    };
    let steps = ((width / TAU) * ARC_RESOLUTION as f64).ceil().max(1.0) as usize;
    let mut pts = Vec::with_capacity(steps + 3);
    if close {
        pts.push(vec![0.0, 0.0]);
    }
    for s in 0..=steps {
        let t = start + width * s as f64 / steps as f64;
        pts.push(vec![t.cos(), t.sin()]);
    }
    if close {
        pts.push(vec![0.0, 0.0]);
    }
    pts
}

fn spherical_polygon(rays: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let units: Vec<Vector3<f64>> = rays
        .iter()
        .map(|r| Vector3::new(r[0], r[1], r[2]))
        .filter(|v| v.norm() > 1e-14)
        .map(|v| v.normalize())
        .collect();
    if units.is_empty() {
        return vec![];
    }
    let mean = units.iter().sum::<Vector3<f64>>();
    let axis = if mean.norm() > 1e-9 {
        mean.normalize()
    } else {
        Vector3::z()
    };
    let helper = if axis.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let e1 = axis.cross(&helper).normalize();
    let e2 = axis.cross(&e1);
    let mut ordered: Vec<(f64, Vector3<f64>)> = units
        .into_iter()
        .map(|u| (u.dot(&e2).atan2(u.dot(&e1)), u))
        .collect();
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut pts: Vec<Vec<f64>> = ordered.iter().map(|(_, u)| vec![u.x, u.y, u.z]).collect();
    if let Some(first) = pts.first().cloned() {
        pts.push(first);
    }
    pts
}

/// Plot series for the inner and outer generator sets (`q` must be 2 or 3).
pub fn plot_data(approx: &ConeApproximation) -> Result<PlotData> {
    let f: fn(&[Vec<f64>]) -> Vec<Vec<f64>> = match approx.dim {
        2 => planar_outline,
        3 => spherical_polygon,
        q => {
            return Err(Error::InvalidInput(format!(
                "plots need q = 2 or 3, got {q}"
            )))
        }
    };
    Ok(PlotData {
        dim: approx.dim,
        series: vec![
            Series {
                name: "inner".into(),
                points: f(&approx.inner),
            },
            Series {
                name: "outer".into(),
                points: f(&approx.outer),
            },
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_plane_outline() {
        let pts = planar_outline(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(pts.first().unwrap(), &vec![0.0, 0.0]);
        assert_eq!(pts.last().unwrap(), &vec![0.0, 0.0]);
        for p in &pts[1..pts.len() - 1] {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-12);
            assert!(p[0] >= -1e-12 && p[1] >= -1e-12);
        }
    }

    #[test]
    fn triangle_on_sphere_is_closed() {
        let pts = spherical_polygon(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        assert_eq!(pts.len(), 4);
        assert_eq!(pts[0], pts[3]);
    }
}
