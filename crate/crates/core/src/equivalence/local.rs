//! Reduction of a non-spanning cap to coordinates on its own span.
//!
//! Two caps spanning subspaces of equal dimension are equivalent in PG(r,4)
//! exactly when they are equivalent as caps of PG(m−1,4), because every
//! semilinear bijection between subspaces extends to the whole space.

use std::sync::Arc;

use crate::geometry::GeometryTables;
use crate::gf4::{pack, packed_conj, packed_coord, packed_scale, unpack, Gf4};
use crate::linalg::{Echelon, Mat};
use crate::mask::Mask;

use super::collineation::Collineation;

pub(crate) struct LocalView {
    /// Basis of the span: codes of cap points in the ambient geometry.
    pub basis: Vec<u16>,
    pub local: Arc<GeometryTables>,
    pub members: Mask,
}

pub(crate) fn rank(geom: &GeometryTables, members: &Mask) -> usize {
    let mut e = Echelon::new(geom.coords());
    for p in members.iter() {
        e.insert(geom.point_code(p));
        if e.rank() == geom.coords() {
            break;
        }
    }
    e.rank()
}

pub(crate) fn local_view(geom: &GeometryTables, members: &Mask) -> LocalView {
    let d = geom.coords();
    let mut e = Echelon::new(d);
    let mut basis = Vec::new();
    for p in members.iter() {
        let c = geom.point_code(p);
        if e.insert(c) {
            basis.push(c);
        }
    }
    let m = basis.len();
    assert!(m >= 1, "empty caps have no span");
    let cols: Vec<Vec<Gf4>> = basis.iter().map(|&c| unpack(c, d)).collect();
    let rows = independent_rows(&cols, d, m);
    let sub = Mat::from_rows(&rows.iter().map(|&r| cols.iter().map(|col| col[r]).collect()).collect::<Vec<_>>());
    let sub_inv = sub.inverse().expect("independent rows");
    let local = GeometryTables::shared_any(m - 1);
    let members = members
        .iter()
        .map(|p| {
            let x = unpack(geom.point_code(p), d);
            let y = sub_inv.apply(&rows.iter().map(|&r| x[r]).collect::<Vec<_>>());
            local.index_of_code(pack(&y)).expect("cap points lie in their span")
        })
        .collect();
    LocalView { basis, local, members }
}

/// First `m` row indices (lexicographic) whose restriction is invertible.
fn independent_rows(cols: &[Vec<Gf4>], d: usize, m: usize) -> Vec<usize> {
    let mut chosen = Vec::with_capacity(m);
    fn rec(cols: &[Vec<Gf4>], d: usize, m: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == m {
            let rows: Vec<Vec<Gf4>> = chosen.iter().map(|&r| cols.iter().map(|c| c[r]).collect()).collect();
            return Mat::from_rows(&rows).is_invertible();
        }
        for r in start..d {
            chosen.push(r);
            if rec(cols, d, m, r + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    assert!(rec(cols, d, m, 0, &mut chosen));
    chosen
}

/// Extends a witness between two local views to the ambient geometry.
pub(crate) fn extend_witness(geom: &GeometryTables, a: &LocalView, b: &LocalView, local: &Collineation) -> Collineation {
    let d = geom.coords();
    let m = a.basis.len();
    let f = local.frobenius();
    let n = local.matrix();
    let src: Vec<u16> = a.basis.iter().map(|&c| if f { packed_conj(c) } else { c }).collect();
    let dst: Vec<u16> = (0..m)
        .map(|j| (0..m).fold(0u16, |acc, i| acc ^ packed_scale(b.basis[i], n.get(i, j))))
        .collect();
    let src_full = complete_basis(&src, d);
    let dst_full = complete_basis(&dst, d);
    let a_mat = Mat::from_column_codes(&src_full);
    let b_mat = Mat::from_column_codes(&dst_full);
    let matrix = b_mat.mul(&a_mat.inverse().expect("completed basis"));
    Collineation::new_unchecked(matrix, f)
}

fn complete_basis(cols: &[u16], d: usize) -> Vec<u16> {
    let mut e = Echelon::new(d);
    let mut out = Vec::with_capacity(d);
    for &c in cols {
        assert!(e.insert(c));
        out.push(c);
    }
    for k in 0..d {
        let unit = 1u16 << (2 * (d - 1 - k));
        if out.len() == d {
            break;
        }
        if e.insert(unit) {
            out.push(unit);
        }
    }
    debug_assert!(out.iter().all(|&c| (0..d).any(|i| !packed_coord(c, d, i).is_zero())));
    out
}

/// |GL(k, 4)|
pub(crate) fn gl_order(k: usize) -> u128 {
    let q: u128 = 4;
    (0..k as u32).map(|i| q.pow(k as u32) - q.pow(i)).product()
}

/// |PΓL(k, 4)| = 2 · |GL(k, 4)| / 3
pub fn semilinear_group_order(k: usize) -> u128 {
    gl_order(k) / 3 * 2
}
