//! Incidence tables for PG(r,4).
//!
//! Points are the normalized nonzero vectors of GF(4)^(r+1) (first nonzero
//! coordinate equal to 1), indexed in increasing order of their packed codes,
//! which is lexicographic coordinate order. Hyperplanes reuse the same list as
//! dual vectors: hyperplane `h` is `{x : Σ hᵢxᵢ = 0}` where `h` is the
//! coordinate vector of point `h`.

use std::sync::{Arc, OnceLock};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gf4::{packed_conj, packed_coord, packed_scale, Gf4, Gf4Vector};
use crate::mask::Mask;

/// Index of a point in [`GeometryTables::points`] order.
pub type PointIndex = usize;

const NONE: u16 = u16::MAX;

pub struct GeometryTables {
    dim: usize,
    points: Vec<u16>,
    index_of_code: Vec<u16>,
    third: Vec<[u16; 3]>,
    hyp_members: Vec<Mask>,
    stars: Vec<Mask>,
    conj: Vec<u16>,
    all: Mask,
    digest: String,
}

impl std::fmt::Debug for GeometryTables {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PG({},4)", self.dim)
    }
}

/// Number of points of PG(r,4).
pub const fn point_count(r: usize) -> usize {
    (4usize.pow(r as u32 + 1) - 1) / 3
}

/// Scales a nonzero vector so that its first nonzero coordinate is 1.
pub fn normalize(v: &Gf4Vector) -> Result<Gf4Vector> {
    let lead = v
        .coords()
        .iter()
        .find(|c| !c.is_zero())
        .ok_or_else(|| Error::Domain("the zero vector is not a projective point".into()))?;
    Ok(v.scale(lead.inv_nonzero()))
}

#[inline]
fn normalize_code(code: u16, len: usize) -> u16 {
    for i in 0..len {
        let c = packed_coord(code, len, i);
        if !c.is_zero() {
            return packed_scale(code, c.inv_nonzero());
        }
    }
    0
}

fn packed_dot(a: u16, b: u16, len: usize) -> Gf4 {
    (0..len).fold(Gf4::ZERO, |acc, i| acc + packed_coord(a, len, i) * packed_coord(b, len, i))
}

/// Builds the tables for PG(r,4), `r ∈ {2,3,4}`.
pub fn build_tables(r: usize) -> Result<GeometryTables> {
    if !(2..=4).contains(&r) {
        return Err(Error::Config(format!("unsupported projective dimension {r}; expected 2, 3 or 4")));
    }
    Ok(GeometryTables::construct(r))
}

impl GeometryTables {
    /// Shared, lazily built tables for PG(r,4), `r ∈ {2,3,4}`.
    pub fn shared(r: usize) -> Result<Arc<GeometryTables>> {
        if !(2..=4).contains(&r) {
            return build_tables(r).map(Arc::new);
        }
        Ok(Self::shared_any(r))
    }

    /// Like [`shared`](Self::shared) but also serves the degenerate
    /// dimensions 0 and 1, which appear as spans of small caps.
    pub(crate) fn shared_any(r: usize) -> Arc<GeometryTables> {
        static CACHE: [OnceLock<Arc<GeometryTables>>; 5] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        CACHE[r].get_or_init(|| Arc::new(GeometryTables::construct(r))).clone()
    }

    fn construct(r: usize) -> GeometryTables {
        assert!(r <= 4);
        let len = r + 1;
        let ncodes = 1usize << (2 * len);
        let points: Vec<u16> =
            (1..ncodes as u16).filter(|&c| normalize_code(c, len) == c).collect();
        let n = points.len();
        debug_assert_eq!(n, point_count(r));

        let mut index_of_code = vec![NONE; ncodes];
        let mut pos = vec![NONE; ncodes];
        for (i, &c) in points.iter().enumerate() {
            pos[c as usize] = i as u16;
        }
        for code in 1..ncodes {
            index_of_code[code] = pos[normalize_code(code as u16, len) as usize];
        }

        let mut third = vec![[NONE; 3]; n * n];
        for p in 0..n {
            for q in (p + 1)..n {
                let (a, b) = (points[p], points[q]);
                let mut t = [NONE; 3];
                for (k, lam) in Gf4::NONZERO.iter().enumerate() {
                    t[k] = index_of_code[(a ^ packed_scale(b, *lam)) as usize];
                }
                t.sort_unstable();
                third[p * n + q] = t;
                third[q * n + p] = t;
            }
        }

        let mut hyp_members = vec![Mask::EMPTY; n];
        let mut stars = vec![Mask::EMPTY; n];
        for h in 0..n {
            for x in 0..n {
                if packed_dot(points[h], points[x], len).is_zero() {
                    hyp_members[h].insert(x);
                    stars[x].insert(h);
                }
            }
        }

        let conj = points.iter().map(|&c| index_of_code[packed_conj(c) as usize]).collect();

        let mut hasher = Sha256::new();
        hasher.update(format!("PG({r},4)").as_bytes());
        for c in &points {
            hasher.update(c.to_le_bytes());
        }
        let digest = hex::encode(hasher.finalize());

        GeometryTables {
            dim: r,
            points,
            index_of_code,
            third,
            hyp_members,
            stars,
            conj,
            all: Mask::full(n),
            digest,
        }
    }

    /// Projective dimension r.
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of homogeneous coordinates, r + 1.
    #[inline]
    pub fn coords(&self) -> usize {
        self.dim + 1
    }

    #[inline]
    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn num_hyperplanes(&self) -> usize {
        self.points.len()
    }

    /// Mask of every point.
    #[inline]
    pub fn all_points(&self) -> &Mask {
        &self.all
    }

    #[inline]
    pub fn point_code(&self, p: PointIndex) -> u16 {
        self.points[p]
    }

    pub fn point_codes(&self) -> &[u16] {
        &self.points
    }

    pub fn point_vector(&self, p: PointIndex) -> Gf4Vector {
        Gf4Vector::unpack(self.points[p], self.coords())
    }

    /// Coordinate string such as `01W00`.
    pub fn point_string(&self, p: PointIndex) -> String {
        self.point_vector(p).to_string()
    }

    /// Index of the projective point of a nonzero packed vector.
    #[inline]
    pub fn index_of_code(&self, code: u16) -> Option<PointIndex> {
        match self.index_of_code.get(code as usize) {
            Some(&i) if i != NONE => Some(i as usize),
            _ => None,
        }
    }

    /// Index of the point spanned by `v` (any nonzero representative).
    pub fn index_of_vector(&self, v: &Gf4Vector) -> Result<PointIndex> {
        if v.len() != self.coords() {
            return Err(Error::Contract(format!(
                "vector of length {} in PG({},4)",
                v.len(),
                self.dim
            )));
        }
        self.index_of_code(v.pack())
            .ok_or_else(|| Error::Domain("the zero vector is not a projective point".into()))
    }

    /// Parses a normalized coordinate string.
    pub fn parse_point(&self, s: &str) -> Result<PointIndex> {
        let v: Gf4Vector = s.parse()?;
        let p = self.index_of_vector(&v)?;
        if self.points[p] != v.pack() {
            return Err(Error::Parse(format!("point {s:?} is not normalized")));
        }
        Ok(p)
    }

    /// The three points of line(p, q) other than p and q, ascending.
    /// `p ≠ q` is assumed.
    #[inline]
    pub fn third_points(&self, p: PointIndex, q: PointIndex) -> [u16; 3] {
        self.third[p * self.points.len() + q]
    }

    pub fn residual_points(&self, p: PointIndex, q: PointIndex) -> Result<[PointIndex; 3]> {
        self.check_index(p)?;
        self.check_index(q)?;
        if p == q {
            return Err(Error::Domain(format!("residual_points needs two distinct points, got {p} twice")));
        }
        Ok(self.third_points(p, q).map(|x| x as usize))
    }

    pub fn is_collinear(&self, p: PointIndex, q: PointIndex, s: PointIndex) -> Result<bool> {
        self.check_index(p)?;
        self.check_index(q)?;
        self.check_index(s)?;
        if p == q || q == s || p == s {
            return Err(Error::Domain(format!("collinearity needs distinct points, got {p}, {q}, {s}")));
        }
        Ok(self.third_points(p, q).contains(&(s as u16)))
    }

    /// All q + 1 = 5 points of the line through p and q, ascending.
    pub fn line(&self, p: PointIndex, q: PointIndex) -> [PointIndex; 5] {
        let t = self.third_points(p, q);
        let mut l = [p, q, t[0] as usize, t[1] as usize, t[2] as usize];
        l.sort_unstable();
        l
    }

    #[inline]
    pub fn hyperplane_members(&self, h: usize) -> &Mask {
        &self.hyp_members[h]
    }

    /// Hyperplanes through point `p`.
    #[inline]
    pub fn star(&self, p: PointIndex) -> &Mask {
        &self.stars[p]
    }

    pub fn hyperplane_vector(&self, h: usize) -> Gf4Vector {
        self.point_vector(h)
    }

    /// Image of `p` under componentwise Frobenius conjugation.
    #[inline]
    pub fn conj_point(&self, p: PointIndex) -> PointIndex {
        self.conj[p] as usize
    }

    /// Hyperplane `x_r = 0`, used to embed PG(r−1,4).
    pub fn distinguished_hyperplane(&self) -> usize {
        // dual vector (0,…,0,1) has packed code 1, the smallest code
        0
    }

    /// Maps a point of PG(r−1,4) to `(x₀, …, x_{r−1}, 0)` in this geometry.
    pub fn embed_point(&self, lower: &GeometryTables, p: PointIndex) -> Result<PointIndex> {
        if lower.dim + 1 != self.dim {
            return Err(Error::Contract(format!(
                "cannot embed PG({},4) into PG({},4)",
                lower.dim, self.dim
            )));
        }
        lower.check_index(p)?;
        Ok(self.index_of_code((lower.points[p]) << 2).expect("nonzero"))
    }

    /// SHA-256 over the dimension and point list.
    pub fn digest(&self) -> &str {
        &self.digest
    }

    pub(crate) fn check_index(&self, p: PointIndex) -> Result<()> {
        if p >= self.points.len() {
            Err(Error::Domain(format!("point index {p} out of range for PG({},4)", self.dim)))
        } else {
            Ok(())
        }
    }
}

/// Embeds a PG(3,4) point into the hyperplane x₄ = 0 of PG(4,4).
pub fn embed_point(p: PointIndex) -> Result<PointIndex> {
    let g3 = GeometryTables::shared(3)?;
    let g4 = GeometryTables::shared(4)?;
    g4.embed_point(&g3, p)
}
