use nalgebra::DVector;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Exp1};

use crate::linalg::{project_onto_cone_section, unit};
use crate::model::PolyhedralCone;

/// A cone given either by a [`PolyhedralCone`] or by a finite sample of its
/// directions; both stand for `cone(generators) ∩ B(0, 1)`.
#[derive(Clone, Debug)]
pub enum SectionSet {
    Cone(PolyhedralCone),
    Sampled(Vec<DVector<f64>>),
}

impl SectionSet {
    pub fn generators(&self) -> Vec<DVector<f64>> {
        match self {
            SectionSet::Cone(k) => k.rays().to_vec(),
            SectionSet::Sampled(pts) => pts.iter().filter_map(|p| unit(p, 1e-14)).collect(),
        }
    }
}

impl From<PolyhedralCone> for SectionSet {
    fn from(k: PolyhedralCone) -> Self {
        SectionSet::Cone(k)
    }
}

/// Unit vectors of `cone(generators)`.
///
/// The generators come first, then alternating random points on 2-dimensional
/// arcs and random interior conic combinations. The sequence for `count` is a
/// prefix of the sequence for any larger count.
pub fn sample_section(generators: &[DVector<f64>], count: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut out: Vec<DVector<f64>> = generators.iter().filter_map(|g| unit(g, 1e-14)).collect();
    let gens = out.clone();
    let m = gens.len();
    if m < 2 {
        return out;
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut k = 0usize;
    while out.len() < count.max(m) {
        let v = if k % 2 == 0 {
            let i = rng.random_range(0..m);
            let mut j = rng.random_range(0..m - 1);
            if j >= i {
                j += 1;
            }
            let t: f64 = rng.random();
            &gens[i] * t + &gens[j] * (1.0 - t)
        } else {
            let mut acc = DVector::zeros(gens[0].len());
            for g in &gens {
                let e: f64 = Exp1.sample(&mut rng);
                acc += g * e;
            }
            acc
        };
        k += 1;
        if let Some(u) = unit(&v, 1e-12) {
            out.push(u);
        }
    }
    out
}

/// `sup` over the samples of `K1 ∩ B` of the distance to `K2 ∩ B`.
fn one_sided(samples: &[DVector<f64>], target: &[DVector<f64>]) -> f64 {
    samples
        .iter()
        .map(|x| (x - project_onto_cone_section(target, x)).norm())
        .fold(0.0, f64::max)
}

/// Sampled estimate of the Hausdorff distance of `K1 ∩ B(0,1)` and `K2 ∩ B(0,1)`.
///
/// Both one-sided suprema are attained on the unit sphere (or at the origin), so
/// only unit vectors are sampled. The estimate never exceeds the true distance
/// and is nondecreasing in `samples` for a fixed `seed`.
pub fn hausdorff_section_estimate(
    k1: &SectionSet,
    k2: &SectionSet,
    samples: usize,
    seed: u64,
) -> f64 {
    let g1 = k1.generators();
    let g2 = k2.generators();
    let s1 = sample_section(&g1, samples, seed);
    let s2 = sample_section(&g2, samples, seed ^ 0x9e37_79b9_7f4a_7c15);
    one_sided(&s1, &g2).max(one_sided(&s2, &g1))
}
