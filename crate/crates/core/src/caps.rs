//! Caps (point sets with no three collinear) and the incremental extension
//! state used by the searches.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{GeometryTables, PointIndex};
use crate::mask::Mask;

/// A set of points of PG(r,4), no three of them collinear.
#[derive(Clone)]
pub struct Cap {
    geom: Arc<GeometryTables>,
    members: Mask,
    size: usize,
}

impl Cap {
    pub fn empty(geom: Arc<GeometryTables>) -> Cap {
        Cap { geom, members: Mask::EMPTY, size: 0 }
    }

    /// Validates the points and the no-three-collinear condition.
    pub fn new(geom: Arc<GeometryTables>, points: &[PointIndex]) -> Result<Cap> {
        let mut members = Mask::EMPTY;
        for &p in points {
            geom.check_index(p)?;
            if members.contains(p) {
                return Err(Error::Domain(format!("point {} repeated", geom.point_string(p))));
            }
            members.insert(p);
        }
        Cap::from_mask(geom, members)
    }

    pub fn from_mask(geom: Arc<GeometryTables>, members: Mask) -> Result<Cap> {
        if !members.is_subset(geom.all_points()) {
            return Err(Error::Domain("mask has bits beyond the point range".into()));
        }
        if let Some((a, b, c)) = first_collinear_triple(&geom, &members) {
            return Err(Error::Domain(format!(
                "points {}, {}, {} are collinear",
                geom.point_string(a),
                geom.point_string(b),
                geom.point_string(c)
            )));
        }
        Ok(Cap::from_mask_unchecked(geom, members))
    }

    pub(crate) fn from_mask_unchecked(geom: Arc<GeometryTables>, members: Mask) -> Cap {
        let size = members.len();
        Cap { geom, members, size }
    }

    #[inline]
    pub fn geometry(&self) -> &Arc<GeometryTables> {
        &self.geom
    }

    #[inline]
    pub fn members(&self) -> &Mask {
        &self.members
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, p: PointIndex) -> bool {
        self.members.contains(p)
    }

    /// Member indices in ascending order.
    pub fn points(&self) -> Vec<PointIndex> {
        self.members.to_vec()
    }

    pub fn point_strings(&self) -> Vec<String> {
        self.members.iter().map(|p| self.geom.point_string(p)).collect()
    }

    /// The cap `self ∪ {p}`, validated.
    pub fn with_point(&self, p: PointIndex) -> Result<Cap> {
        self.geom.check_index(p)?;
        let mut m = self.members;
        m.insert(p);
        Cap::from_mask(self.geom.clone(), m)
    }

    pub fn is_complete(&self) -> bool {
        is_complete(self)
    }

    pub fn extension_state(&self) -> ExtensionState {
        build_state(self)
    }
}

impl PartialEq for Cap {
    fn eq(&self, other: &Self) -> bool {
        self.geom.dim() == other.geom.dim() && self.members == other.members
    }
}

impl Eq for Cap {}

impl Hash for Cap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.geom.dim().hash(state);
        self.members.to_bytes().hash(state);
    }
}

impl fmt::Debug for Cap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cap(PG({},4); {})", self.geom.dim(), self.point_strings().join(" "))
    }
}

/// First collinear triple `(p, q, s)` with `p < q` members and `s` on their
/// line, scanning pairs in ascending order.
pub fn first_collinear_triple(geom: &GeometryTables, members: &Mask) -> Option<(PointIndex, PointIndex, PointIndex)> {
    let pts = members.to_vec();
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            for &s in geom.third_points(p, q).iter() {
                if members.contains(s as usize) {
                    return Some((p, q, s as usize));
                }
            }
        }
    }
    None
}

/// True iff no three of `points` are collinear. The empty set and
/// singletons are caps.
pub fn is_cap(geom: &GeometryTables, points: &[PointIndex]) -> bool {
    let members: Mask = points.iter().copied().collect();
    members.len() == points.len() && first_collinear_triple(geom, &members).is_none()
}

/// Points on secants of the cap (excluding the cap) and the points that can
/// still be added.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtensionState {
    cap: Cap,
    excluded: Mask,
    candidates: Mask,
}

impl fmt::Debug for ExtensionState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtensionState")
            .field("size", &self.cap.size)
            .field("excluded", &self.excluded.len())
            .field("candidates", &self.candidates.len())
            .finish()
    }
}

/// Adds the three residual points of each new secant `(p, m)` to `excluded`.
#[inline]
pub(crate) fn add_secants(geom: &GeometryTables, members: &Mask, p: PointIndex, excluded: &mut Mask) {
    for m in members.iter() {
        for &t in geom.third_points(p, m).iter() {
            excluded.insert(t as usize);
        }
    }
}

pub fn build_state(cap: &Cap) -> ExtensionState {
    let geom = &cap.geom;
    let mut excluded = Mask::EMPTY;
    let mut seen = Mask::EMPTY;
    for p in cap.members.iter() {
        add_secants(geom, &seen, p, &mut excluded);
        seen.insert(p);
    }
    let excluded = excluded.and_not(&cap.members);
    let candidates = geom.all_points().and_not(&cap.members).and_not(&excluded);
    ExtensionState { cap: cap.clone(), excluded, candidates }
}

pub fn add_point(state: &ExtensionState, p: PointIndex) -> Result<ExtensionState> {
    let mut next = state.clone();
    next.add_point_mut(p)?;
    Ok(next)
}

pub fn is_complete(cap: &Cap) -> bool {
    build_state(cap).candidates.is_empty()
}

impl ExtensionState {
    pub fn cap(&self) -> &Cap {
        &self.cap
    }

    pub fn excluded(&self) -> &Mask {
        &self.excluded
    }

    pub fn candidates(&self) -> &Mask {
        &self.candidates
    }

    pub fn is_complete(&self) -> bool {
        self.candidates.is_empty()
    }

    pub fn add_point(&self, p: PointIndex) -> Result<ExtensionState> {
        add_point(self, p)
    }

    pub fn add_point_mut(&mut self, p: PointIndex) -> Result<()> {
        if p >= self.cap.geom.num_points() || !self.candidates.contains(p) {
            return Err(Error::Contract(format!("point {p} is not an extension candidate")));
        }
        add_secants(&self.cap.geom, &self.cap.members, p, &mut self.excluded);
        self.cap.members.insert(p);
        self.cap.size += 1;
        self.candidates = self.candidates.and_not(&self.excluded);
        self.candidates.remove(p);
        Ok(())
    }
}
