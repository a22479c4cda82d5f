use std::fmt;

use crate::caps::Cap;
use crate::error::{Error, Result};
use crate::geometry::{GeometryTables, PointIndex};
use crate::gf4::{packed_conj, packed_coord, packed_scale, Gf4, Gf4Vector};
use crate::linalg::{Mat, MAX_DIM};
use crate::mask::Mask;

/// A semilinear collineation `x ↦ M · φ(x)` of PG(r,4), where `φ` is the
/// componentwise Frobenius map when `frobenius` is set and the identity
/// otherwise. Matrices are compared as given, so scalar multiples of the same
/// map are distinct values.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Collineation {
    matrix: Mat,
    frobenius: bool,
}

impl Collineation {
    pub fn new(matrix: Mat, frobenius: bool) -> Result<Collineation> {
        if !matrix.is_invertible() {
            return Err(Error::Contract(format!("singular collineation matrix {matrix:?}")));
        }
        Ok(Collineation { matrix, frobenius })
    }

    pub(crate) fn new_unchecked(matrix: Mat, frobenius: bool) -> Collineation {
        Collineation { matrix, frobenius }
    }

    pub fn identity(dim: usize) -> Collineation {
        Collineation { matrix: Mat::identity(dim + 1), frobenius: false }
    }

    /// The Frobenius map alone.
    pub fn frobenius_map(dim: usize) -> Collineation {
        Collineation { matrix: Mat::identity(dim + 1), frobenius: true }
    }

    pub fn dim(&self) -> usize {
        self.matrix.order() - 1
    }

    pub fn matrix(&self) -> &Mat {
        &self.matrix
    }

    pub fn frobenius(&self) -> bool {
        self.frobenius
    }

    #[inline]
    pub fn apply_code(&self, code: u16) -> u16 {
        PackedMap::new(&self.matrix, self.frobenius).image(code)
    }

    pub fn apply_vector(&self, v: &Gf4Vector) -> Gf4Vector {
        let x = if self.frobenius { v.conj() } else { v.clone() };
        Gf4Vector::new(self.matrix.apply(x.coords()))
    }

    pub fn apply_point(&self, geom: &GeometryTables, p: PointIndex) -> PointIndex {
        geom.index_of_code(self.apply_code(geom.point_code(p))).expect("invertible map")
    }

    /// Image of every point, indexed by point.
    pub fn point_permutation(&self, geom: &GeometryTables) -> Vec<u16> {
        let map = PackedMap::new(&self.matrix, self.frobenius);
        geom.point_codes()
            .iter()
            .map(|&c| geom.index_of_code(map.image(c)).expect("invertible map") as u16)
            .collect()
    }

    pub fn apply_mask(&self, geom: &GeometryTables, m: &Mask) -> Mask {
        let map = PackedMap::new(&self.matrix, self.frobenius);
        m.iter()
            .map(|p| geom.index_of_code(map.image(geom.point_code(p))).expect("invertible map"))
            .collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Collineation) -> Collineation {
        let inner = if self.frobenius { other.matrix.conj() } else { other.matrix };
        Collineation { matrix: self.matrix.mul(&inner), frobenius: self.frobenius ^ other.frobenius }
    }

    pub fn inverse(&self) -> Collineation {
        let inv = self.matrix.inverse().expect("collineation matrices are invertible");
        let matrix = if self.frobenius { inv.conj() } else { inv };
        Collineation { matrix, frobenius: self.frobenius }
    }

    /// True when both induce the same permutation of points.
    pub fn same_action(&self, other: &Collineation, geom: &GeometryTables) -> bool {
        self.point_permutation(geom) == other.point_permutation(geom)
    }
}

impl fmt::Debug for Collineation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Collineation({:?}{})", self.matrix, if self.frobenius { ", frob" } else { "" })
    }
}

/// Image of a cap under a collineation.
pub fn apply(sigma: &Collineation, cap: &Cap) -> Result<Cap> {
    let geom = cap.geometry();
    if sigma.dim() != geom.dim() {
        return Err(Error::Contract(format!(
            "collineation of PG({},4) applied to a cap in PG({},4)",
            sigma.dim(),
            geom.dim()
        )));
    }
    if !sigma.matrix.is_invertible() {
        return Err(Error::Contract("singular collineation matrix".into()));
    }
    Ok(Cap::from_mask_unchecked(geom.clone(), sigma.apply_mask(geom, cap.members())))
}

/// Column multiples of a matrix for branch-free application to packed
/// vectors.
#[derive(Clone, Copy)]
pub(crate) struct PackedMap {
    cols: [[u16; 4]; MAX_DIM],
    len: usize,
    frob: bool,
}

impl PackedMap {
    pub(crate) fn new(m: &Mat, frob: bool) -> PackedMap {
        let len = m.order();
        let mut cols = [[0u16; 4]; MAX_DIM];
        for (j, col) in cols.iter_mut().enumerate().take(len) {
            let c = m.column_code(j);
            for (s, slot) in col.iter_mut().enumerate() {
                *slot = packed_scale(c, Gf4::from_bits(s as u8));
            }
        }
        PackedMap { cols, len, frob }
    }

    #[inline]
    pub(crate) fn image(&self, code: u16) -> u16 {
        let x = if self.frob { packed_conj(code) } else { code };
        let mut out = 0;
        for j in 0..self.len {
            out ^= self.cols[j][packed_coord(x, self.len, j).code() as usize];
        }
        out
    }
}
