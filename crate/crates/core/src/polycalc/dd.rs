//! Double description method for cones `{x | A x >= 0}`.
//!
//! The engine starts from the whole space (lineality = identity basis) and
//! inserts one halfspace at a time. Lineality directions are consumed first;
//! once a constraint is orthogonal to the remaining lineality space the usual
//! ray split/combine step runs with the combinatorial adjacency test.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{dedup_directions, lex_cmp};

/// Classification tolerance for `a . r` with unit `a` and unit `r`.
pub const ADJACENCY_TOL: f64 = 1e-9;
/// Angular tolerance used when merging duplicate rays.
pub const DEDUP_ANGLE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn with_capacity(bits: usize) -> Self {
        ZeroSet(vec![0; bits.div_ceil(64).max(1)])
    }

    fn full(bits: usize) -> Self {
        let mut s = Self::with_capacity(bits);
        for i in 0..bits {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        let w = i / 64;
        if w >= self.0.len() {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (i % 64);
    }

    fn intersect(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        ZeroSet(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or(0) & other.0.get(i).copied().unwrap_or(0))
                .collect(),
        )
    }

    fn is_subset_of(&self, other: &Self) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(i, w)| w & !other.0.get(i).copied().unwrap_or(0) == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[derive(Clone, Debug)]
struct Ray {
    v: DVector<f64>,
    zero: ZeroSet,
}

/// Generators of a polyhedral cone: a lineality basis plus extreme rays of the pointed part.
#[derive(Clone, Debug, Default)]
pub struct ConeGenerators {
    pub lineality: Vec<DVector<f64>>,
    pub rays: Vec<DVector<f64>>,
}

impl ConeGenerators {
    /// All generators, lineality as `+/-` pairs.
    pub fn into_ray_list(self) -> Vec<DVector<f64>> {
        let mut out = self.rays;
        for l in self.lineality {
            out.push(-&l);
            out.push(l);
        }
        out
    }

    pub fn is_trivial(&self) -> bool {
        self.lineality.is_empty() && self.rays.is_empty()
    }
}

/// Incremental double description state.
#[derive(Clone, Debug)]
pub struct DoubleDescription {
    dim: usize,
    processed: usize,
    lineality: Vec<DVector<f64>>,
    rays: Vec<Ray>,
}

impl DoubleDescription {
    pub fn new(dim: usize) -> Self {
        let lineality = (0..dim)
            .map(|i| {
                let mut e = DVector::zeros(dim);
                e[i] = 1.0;
                e
            })
            .collect();
        DoubleDescription {
            dim,
            processed: 0,
            lineality,
            rays: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Intersects the current cone with `{x | a . x >= 0}`.
    pub fn add_halfspace(&mut self, a: &DVector<f64>) -> Result<()> {
        if a.len() != self.dim {
            return Err(Error::dims("halfspace normal", self.dim, a.len()));
        }
        let norm = a.norm();
        if norm <= 1e-14 {
            return Ok(());
        }
        let a = a / norm;
        let idx = self.processed;
        self.processed += 1;

        if self.absorb_lineality(&a, idx) {
            return Ok(());
        }

        let vals: Vec<f64> = self.rays.iter().map(|r| a.dot(&r.v)).collect();
        let (mut plus, mut zero, mut minus) = (Vec::new(), Vec::new(), Vec::new());
        for (i, &v) in vals.iter().enumerate() {
            if v > ADJACENCY_TOL {
                plus.push(i);
            } else if v < -ADJACENCY_TOL {
                minus.push(i);
            } else {
                zero.push(i);
            }
        }
        for &i in &zero {
            self.rays[i].zero.insert(idx);
        }
        if minus.is_empty() {
            return Ok(());
        }

        let pointed_dim = self.dim - self.lineality.len();
        let mut next: Vec<Ray> = Vec::with_capacity(plus.len() + zero.len());
        for &i in plus.iter().chain(zero.iter()) {
            next.push(self.rays[i].clone());
        }
        for &p in &plus {
            for &n in &minus {
                if !self.adjacent(p, n, pointed_dim) {
                    continue;
                }
                let (rp, rn) = (&self.rays[p], &self.rays[n]);
                let v = &rn.v * vals[p] - &rp.v * vals[n];
                let len = v.norm();
                // opposite rays of a numerically flat cone: the halfline is already kept
                if len <= 1e-12 {
                    continue;
                }
                let mut zs = rp.zero.intersect(&rn.zero);
                zs.insert(idx);
                next.push(Ray {
                    v: v / len,
                    zero: zs,
                });
            }
        }
        self.rays = next;
        Ok(())
    }

    /// Handles a constraint that is not orthogonal to the lineality space.
    fn absorb_lineality(&mut self, a: &DVector<f64>, idx: usize) -> bool {
        let best = self
            .lineality
            .iter()
            .enumerate()
            .map(|(i, l)| (i, a.dot(l)))
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()));
        let Some((j, alpha)) = best else { return false };
        if alpha.abs() <= ADJACENCY_TOL {
            return false;
        }
        let mut l = self.lineality.remove(j);
        let mut alpha = alpha;
        if alpha < 0.0 {
            l = -l;
            alpha = -alpha;
        }
        for other in self.lineality.iter_mut() {
            let s = a.dot(other) / alpha;
            *other -= &l * s;
        }
        orthonormalize(&mut self.lineality);
        for r in self.rays.iter_mut() {
            let s = a.dot(&r.v) / alpha;
            r.v -= &l * s;
            let n = r.v.norm();
            r.v /= n;
            r.zero.insert(idx);
        }
        let n = l.norm();
        self.rays.push(Ray {
            v: l / n,
            zero: ZeroSet::full(idx),
        });
        true
    }

    fn adjacent(&self, p: usize, n: usize, pointed_dim: usize) -> bool {
        let common = self.rays[p].zero.intersect(&self.rays[n].zero);
        if pointed_dim >= 2 && common.count() + 2 < pointed_dim {
            return false;
        }
        !self
            .rays
            .iter()
            .enumerate()
            .any(|(k, r)| k != p && k != n && common.is_subset_of(&r.zero))
    }

    pub fn generators(&self) -> ConeGenerators {
        let rays: Vec<DVector<f64>> = self.rays.iter().map(|r| r.v.clone()).collect();
        ConeGenerators {
            lineality: self.lineality.clone(),
            rays: dedup_directions(rays, DEDUP_ANGLE),
        }
    }
}

fn orthonormalize(basis: &mut Vec<DVector<f64>>) {
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(basis.len());
    for v in basis.drain(..) {
        let mut w = v;
        for u in &out {
            let s = u.dot(&w);
            w -= u * s;
        }
        let n = w.norm();
        if n > 1e-12 {
            out.push(w / n);
        }
    }
    *basis = out;
}

/// Generators of `{x | e . x = 0 for e in equalities, a . x >= 0 for a in halfspaces}`.
///
/// Equalities are inserted first as paired inequalities, then the halfspaces in
/// lexicographic order of their normals.
pub fn cone_generators(
    dim: usize,
    equalities: &[DVector<f64>],
    halfspaces: &[DVector<f64>],
) -> Result<ConeGenerators> {
    let mut dd = DoubleDescription::new(dim);
    for e in equalities {
        dd.add_halfspace(e)?;
        dd.add_halfspace(&(-e))?;
    }
    let mut order: Vec<&DVector<f64>> = halfspaces.iter().collect();
    order.sort_by(|a, b| lex_cmp(a, b));
    for a in order {
        dd.add_halfspace(a)?;
    }
    Ok(dd.generators())
}
