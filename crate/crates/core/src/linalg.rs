//! Small dense linear algebra over GF(4): square matrices up to 5×5 and an
//! incremental echelon basis over packed vectors.

use std::fmt;

use crate::gf4::{pack, packed_coord, packed_scale, unpack, Gf4};

pub const MAX_DIM: usize = 5;

/// Square matrix of order `n ≤ 5`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat {
    n: usize,
    a: [[Gf4; MAX_DIM]; MAX_DIM],
}

impl Mat {
    pub fn zero(n: usize) -> Mat {
        assert!(n <= MAX_DIM, "matrix order {n} too large");
        Mat { n, a: [[Gf4::ZERO; MAX_DIM]; MAX_DIM] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m.a[i][i] = Gf4::ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Gf4>]) -> Mat {
        let n = rows.len();
        let mut m = Mat::zero(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            m.a[i][..n].copy_from_slice(row);
        }
        m
    }

    /// Matrix whose column `j` is the packed vector `cols[j]`.
    pub fn from_column_codes(cols: &[u16]) -> Mat {
        let n = cols.len();
        let mut m = Mat::zero(n);
        for (j, &c) in cols.iter().enumerate() {
            for i in 0..n {
                m.a[i][j] = packed_coord(c, n, i);
            }
        }
        m
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Gf4 {
        self.a[i][j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Gf4) {
        self.a[i][j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Gf4>> {
        (0..self.n).map(|i| self.a[i][..self.n].to_vec()).collect()
    }

    pub fn column_code(&self, j: usize) -> u16 {
        let col: Vec<Gf4> = (0..self.n).map(|i| self.a[i][j]).collect();
        pack(&col)
    }

    pub fn column_codes(&self) -> Vec<u16> {
        (0..self.n).map(|j| self.column_code(j)).collect()
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        debug_assert_eq!(self.n, o.n);
        let mut r = Mat::zero(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let x = self.a[i][k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    r.a[i][j] += x * o.a[k][j];
                }
            }
        }
        r
    }

    /// Multiplies column `j` by `d[j]`.
    pub fn scale_columns(&self, d: &[Gf4]) -> Mat {
        let mut r = *self;
        for row in r.a.iter_mut().take(self.n) {
            for (x, &c) in row.iter_mut().zip(&d[..self.n]) {
                *x *= c;
            }
        }
        r
    }

    pub fn conj(&self) -> Mat {
        let mut r = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                r.a[i][j] = r.a[i][j].conj();
            }
        }
        r
    }

    pub fn apply(&self, v: &[Gf4]) -> Vec<Gf4> {
        (0..self.n)
            .map(|i| (0..self.n).fold(Gf4::ZERO, |acc, k| acc + self.a[i][k] * v[k]))
            .collect()
    }

    pub fn apply_code(&self, code: u16) -> u16 {
        pack(&self.apply(&unpack(code, self.n)))
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Mat> {
        let n = self.n;
        let mut m = *self;
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.a[r][col].is_zero())?;
            m.a.swap(col, pivot);
            inv.a.swap(col, pivot);
            let p = m.a[col][col].inv_nonzero();
            for j in 0..n {
                m.a[col][j] *= p;
                inv.a[col][j] *= p;
            }
            for r in 0..n {
                if r != col {
                    let f = m.a[r][col];
                    if !f.is_zero() {
                        for j in 0..n {
                            let (mv, iv) = (m.a[col][j], inv.a[col][j]);
                            m.a[r][j] += f * mv;
                            inv.a[r][j] += f * iv;
                        }
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_some()
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| self.a[i][..self.n].iter().map(|c| c.symbol()).collect())
            .collect();
        write!(f, "[{}]", rows.join(" "))
    }
}

/// Incremental row-echelon basis of packed vectors of a fixed length.
///
/// Row `k` is zero at the pivots of rows `0..k` and has coefficient 1 at its
/// own pivot, so sequential reduction clears every pivot coordinate.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    rows: Vec<(u16, usize)>,
}

impl Echelon {
    pub fn new(len: usize) -> Echelon {
        Echelon { len, rows: Vec::with_capacity(len) }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn reduce(&self, mut x: u16) -> u16 {
        for &(row, p) in &self.rows {
            let c = packed_coord(x, self.len, p);
            if !c.is_zero() {
                x ^= packed_scale(row, c);
            }
        }
        x
    }

    #[inline]
    pub fn contains(&self, x: u16) -> bool {
        self.reduce(x) == 0
    }

    /// Adds `x`; returns false (and leaves the basis unchanged) if dependent.
    pub fn insert(&mut self, x: u16) -> bool {
        let r = self.reduce(x);
        if r == 0 {
            return false;
        }
        let p = (0..self.len).find(|&i| !packed_coord(r, self.len, i).is_zero()).unwrap();
        let inv = packed_coord(r, self.len, p).inv_nonzero();
        self.rows.push((packed_scale(r, inv), p));
        true
    }

    pub fn pop(&mut self) {
        self.rows.pop();
    }
}

/// Rank of a list of packed vectors of length `len`.
pub fn rank_of(codes: &[u16], len: usize) -> usize {
    let mut e = Echelon::new(len);
    for &c in codes {
        e.insert(c);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = Mat::from_rows(&[
            vec![Gf4::ONE, Gf4::OMEGA, Gf4::ZERO],
            vec![Gf4::ZERO, Gf4::ONE, Gf4::OMEGA2],
            vec![Gf4::OMEGA, Gf4::ZERO, Gf4::ONE],
        ]);
        let inv = m.inverse().expect("invertible");
        assert_eq!(m.mul(&inv), Mat::identity(3));
        assert_eq!(inv.mul(&m), Mat::identity(3));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = Mat::from_rows(&[vec![Gf4::ONE, Gf4::OMEGA], vec![Gf4::OMEGA, Gf4::OMEGA2]]);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn echelon_rank() {
        // (1,0,0), (0,1,0), (1,ω,0) span a plane; (0,0,1) extends it.
        let v = |s: &str| s.parse::<crate::gf4::Gf4Vector>().unwrap().pack();
        let mut e = Echelon::new(3);
        assert!(e.insert(v("100")));
        assert!(e.insert(v("010")));
        assert!(!e.insert(v("1w0")));
        assert!(e.contains(v("WW0")));
        assert!(e.insert(v("001")));
        assert_eq!(e.rank(), 3);
        assert_eq!(rank_of(&[v("100"), v("w00"), v("W00")], 3), 1);
    }
}
