#![allow(dead_code)]

use std::sync::Arc;

use quantum_caps::equivalence::Collineation;
use quantum_caps::caps::is_cap;
use quantum_caps::linalg::Mat;
use quantum_caps::{Cap, Gf4, GeometryTables};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn geom(r: usize) -> Arc<GeometryTables> {
    GeometryTables::shared(r).unwrap()
}

/// Random cap of the given size built by random greedy extension; `None`
/// if the greedy process got stuck.
pub fn random_cap(g: &Arc<GeometryTables>, size: usize, rng: &mut StdRng) -> Option<Cap> {
    let mut st = Cap::empty(g.clone()).extension_state();
    while st.cap().size() < size {
        let cands = st.candidates().to_vec();
        let &p = cands.choose(rng)?;
        st.add_point_mut(p).unwrap();
    }
    Some(st.cap().clone())
}

pub fn random_cap_retry(g: &Arc<GeometryTables>, size: usize, rng: &mut StdRng) -> Cap {
    loop {
        if let Some(c) = random_cap(g, size, rng) {
            return c;
        }
    }
}

pub fn random_collineation(dim: usize, rng: &mut StdRng) -> Collineation {
    loop {
        let rows: Vec<Vec<Gf4>> =
            (0..=dim).map(|_| (0..=dim).map(|_| Gf4::ELEMENTS[rng.gen_range(0..4)]).collect()).collect();
        let m = Mat::from_rows(&rows);
        if m.is_invertible() {
            return Collineation::new(m, rng.gen_bool(0.5)).unwrap();
        }
    }
}

/// The elliptic quadric x0·x1 + x2² + x2·x3 + ω·x3² = 0 of PG(3,4).
pub fn elliptic_quadric() -> Cap {
    let g = geom(3);
    let pts: Vec<usize> = (0..g.num_points())
        .filter(|&p| {
            let x = g.point_vector(p);
            let x = x.coords();
            (x[0] * x[1] + x[2] * x[2] + x[2] * x[3] + Gf4::OMEGA * x[3] * x[3]).is_zero()
        })
        .collect();
    Cap::new(g, &pts).unwrap()
}

/// Every collineation of PG(2,4), one matrix per projective class.
pub fn all_plane_collineations() -> Vec<Collineation> {
    let mut out = Vec::new();
    for bits in 0u32..(1 << 18) {
        let rows: Vec<Vec<Gf4>> =
            (0..3).map(|i| (0..3).map(|j| Gf4::ELEMENTS[((bits >> (2 * (3 * i + j))) & 3) as usize]).collect()).collect();
        // first nonzero entry of the first row normalised to 1
        let lead = rows[0].iter().find(|c| !c.is_zero());
        if lead != Some(&Gf4::ONE) {
            continue;
        }
        let m = Mat::from_rows(&rows);
        if m.is_invertible() {
            out.push(Collineation::new(m, false).unwrap());
            out.push(Collineation::new(m, true).unwrap());
        }
    }
    out
}

/// Caps `seed ∪ X` with X a set of `m` off-hyperplane points, by plain
/// recursion over increasing point sequences with a from-scratch cap test.
pub fn naive_count(g: &GeometryTables, seed: &[usize], m: usize) -> u64 {
    let h = g.hyperplane_members(g.distinguished_hyperplane());
    let off: Vec<usize> = (0..g.num_points()).filter(|&p| !h.contains(p)).collect();
    fn rec(g: &GeometryTables, off: &[usize], cur: &mut Vec<usize>, start: usize, left: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut n = 0;
        for i in start..off.len() {
            cur.push(off[i]);
            if is_cap(g, cur) {
                n += rec(g, off, cur, i + 1, left - 1);
            }
            cur.pop();
        }
        n
    }
    let mut cur = seed.to_vec();
    rec(g, &off, &mut cur, 0, m)
}

pub fn embed(seed: &Cap) -> Vec<usize> {
    let lower = seed.geometry();
    let up = geom(lower.dim() + 1);
    seed.points().iter().map(|&p| up.index_of_code(lower.point_code(p) << 2).unwrap()).collect()
}
