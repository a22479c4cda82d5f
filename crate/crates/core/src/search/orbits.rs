//! First-level orbits of the off-hyperplane points under the stabilizer of
//! a seed in the full collineation group of the ambient space.

use crate::caps::Cap;
use crate::equivalence::{stabilizer, Collineation};
use crate::geometry::GeometryTables;
use crate::linalg::Mat;
use crate::gf4::Gf4;

/// Union-find whose root is always the least element of its set.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// An orbit of off-hyperplane points: its least member and its size.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub rep: usize,
    pub size: usize,
}

/// Generators of the group fixing the hyperplane x_r = 0 pointwise:
/// elations `x_i += x_r` and the homology scaling `x_r` by ω.
fn kernel_generators(coords: usize) -> Vec<Collineation> {
    let last = coords - 1;
    let mut gens = Vec::new();
    for i in 0..last {
        let mut m = Mat::identity(coords);
        m.set(i, last, Gf4::ONE);
        gens.push(Collineation::new(m, false).expect("unipotent"));
        let mut m = Mat::identity(coords);
        m.set(i, last, Gf4::OMEGA);
        gens.push(Collineation::new(m, false).expect("unipotent"));
    }
    let mut h = Mat::identity(coords);
    h.set(last, last, Gf4::OMEGA);
    gens.push(Collineation::new(h, false).expect("diagonal"));
    gens
}

/// Lifts a collineation of the hyperplane to the ambient space, fixing the
/// last coordinate axis.
fn lift(sigma: &Collineation, coords: usize) -> Collineation {
    let small = sigma.matrix();
    let mut m = Mat::identity(coords);
    for i in 0..coords - 1 {
        for j in 0..coords - 1 {
            m.set(i, j, small.get(i, j));
        }
    }
    Collineation::new(m, sigma.frobenius()).expect("block diagonal of invertible blocks")
}

/// Orbits on the off-hyperplane points of `geom` of the stabilizer of the
/// embedded `seed`, ordered by representative. `seed` lives in the
/// geometry one dimension down.
pub fn first_level_orbits(geom: &GeometryTables, seed: &Cap) -> Vec<Orbit> {
    let coords = geom.coords();
    let mut gens = kernel_generators(coords);
    if let Some(stab) = stabilizer(seed) {
        gens.extend(stab.iter().map(|s| lift(s, coords)));
    }
    let h = geom.hyperplane_members(geom.distinguished_hyperplane());
    let off: Vec<usize> = (0..geom.num_points()).filter(|&p| !h.contains(p)).collect();
    let mut uf = UnionFind::new(geom.num_points());
    for g in &gens {
        let perm = g.point_permutation(geom);
        for &p in &off {
            uf.union(p, perm[p] as usize);
        }
    }
    let mut sizes = vec![0usize; geom.num_points()];
    for &p in &off {
        sizes[uf.find(p)] += 1;
    }
    off.iter().filter(|&&p| sizes[p] > 0).map(|&p| Orbit { rep: p, size: sizes[p] }).collect()
}
