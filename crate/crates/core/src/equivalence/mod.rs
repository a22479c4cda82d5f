//! Collineation equivalence of caps.
//!
//! The group is PΓL(r+1,4): invertible matrices up to scalars, optionally
//! composed with the Frobenius automorphism. Equivalence is decided by
//! signature filtering followed by an exhaustive frame-mapping witness
//! search; caps that do not span the ambient space are first reduced to
//! coordinates on their span.

mod collineation;
mod invariants;
mod local;
mod witness;

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::Serialize;

pub use collineation::{apply, Collineation};
pub use invariants::{point_profiles, signature, InvariantSignature};
pub use local::semilinear_group_order;

use crate::caps::Cap;
use crate::error::{Error, Result};
use crate::geometry::GeometryTables;
use crate::mask::Mask;
use invariants::CapInvariants;

/// Outcome of an equivalence test.
#[derive(Clone, Debug)]
pub enum Verdict {
    Equivalent(Collineation),
    /// Rejected by an invariant; names the first differing one.
    SignatureMismatch(&'static str),
    NotEquivalent,
}

impl Verdict {
    pub fn witness(self) -> Option<Collineation> {
        match self {
            Verdict::Equivalent(w) => Some(w),
            _ => None,
        }
    }
}

fn mismatch(a: &InvariantSignature, b: &InvariantSignature) -> Option<&'static str> {
    if a.hyperplane_spectrum != b.hyperplane_spectrum {
        Some("hyperplane_spectrum")
    } else if a.point_degree_spectrum != b.point_degree_spectrum {
        Some("point_degree_spectrum")
    } else if a.secant_index_histogram != b.secant_index_histogram {
        Some("secant_index_histogram")
    } else if a.point_profiles != b.point_profiles {
        Some("point_profiles")
    } else {
        None
    }
}

/// Decides whether some collineation maps `a` onto `b`.
pub fn compare(a: &Cap, b: &Cap) -> Verdict {
    if a.geometry().dim() != b.geometry().dim() || a.size() != b.size() {
        return Verdict::NotEquivalent;
    }
    let geom = a.geometry();
    let ia = invariants::compute(geom, a.members());
    let ib = invariants::compute(geom, b.members());
    compare_prepared(geom, &ia, &ib)
}

fn compare_prepared(geom: &GeometryTables, ia: &CapInvariants, ib: &CapInvariants) -> Verdict {
    if let Some(what) = mismatch(&ia.signature, &ib.signature) {
        return Verdict::SignatureMismatch(what);
    }
    if ia.points.is_empty() {
        return Verdict::Equivalent(Collineation::identity(geom.dim()));
    }
    let ma: Mask = ia.points.iter().copied().collect();
    let mb: Mask = ib.points.iter().copied().collect();
    let ra = local::rank(geom, &ma);
    if ra != local::rank(geom, &mb) {
        return Verdict::NotEquivalent;
    }
    let found = if ra == geom.coords() {
        first_witness(geom, ia, ib)
    } else {
        let la = local::local_view(geom, &ma);
        let lb = local::local_view(geom, &mb);
        let lia = invariants::compute(&la.local, &la.members);
        let lib = invariants::compute(&lb.local, &lb.members);
        if mismatch(&lia.signature, &lib.signature).is_some() {
            None
        } else {
            first_witness(&la.local, &lia, &lib).map(|w| local::extend_witness(geom, &la, &lb, &w))
        }
    };
    match found {
        Some(w) => {
            assert_eq!(w.apply_mask(geom, &ma), mb, "witness search returned an invalid collineation");
            Verdict::Equivalent(w)
        }
        None => Verdict::NotEquivalent,
    }
}

fn first_witness(geom: &GeometryTables, a: &CapInvariants, b: &CapInvariants) -> Option<Collineation> {
    let mut out = None;
    let _ = witness::for_each_witness(geom, a, b, |w| {
        out = Some(w);
        ControlFlow::Break(())
    });
    out
}

/// A collineation mapping `a` onto `b`, if one exists.
pub fn are_equivalent(a: &Cap, b: &Cap) -> Option<Collineation> {
    compare(a, b).witness()
}

/// All collineations fixing a spanning cap setwise; `None` if the cap does
/// not span its geometry (the stabilizer then contains the large pointwise
/// stabilizer of the span).
pub fn stabilizer(cap: &Cap) -> Option<Vec<Collineation>> {
    let geom = cap.geometry();
    if cap.is_empty() || local::rank(geom, cap.members()) != geom.coords() {
        return None;
    }
    let inv = invariants::compute(geom, cap.members());
    let mut all = Vec::new();
    let _ = witness::for_each_witness(geom, &inv, &inv, |w| {
        all.push(w);
        ControlFlow::Continue(())
    });
    Some(all)
}

fn count_automorphisms(geom: &GeometryTables, members: &Mask) -> u128 {
    let inv = invariants::compute(geom, members);
    let mut count = 0u128;
    let _ = witness::for_each_witness(geom, &inv, &inv, |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

/// Order of the setwise stabilizer of `cap` in PΓL(r+1,4).
///
/// For a cap spanning a subspace of vector dimension `m < r+1` this is the
/// stabilizer order on the span times `4^(m(r+1−m)) · |GL(r+1−m, 4)|`, the
/// number of extensions of a map on the span.
pub fn stabilizer_order(cap: &Cap) -> u128 {
    let geom = cap.geometry();
    let d = geom.coords();
    if cap.is_empty() {
        return semilinear_group_order(d);
    }
    let m = local::rank(geom, cap.members());
    if m == d {
        return count_automorphisms(geom, cap.members());
    }
    let view = local::local_view(geom, cap.members());
    let on_span = count_automorphisms(&view.local, &view.members);
    on_span * 4u128.pow((m * (d - m)) as u32) * local::gl_order(d - m)
}

/// One equivalence class from [`classify`].
#[derive(Clone, Debug)]
pub struct CapClass {
    /// Member with the lexicographically least index list.
    pub representative: Cap,
    pub count: usize,
    pub stabilizer_order: u128,
    pub complete: bool,
    /// Positions of the members in the input list.
    pub members: Vec<usize>,
}

/// Partitions caps (same geometry and size) into collineation classes,
/// ordered by representative.
pub fn classify(caps: &[Cap]) -> Result<Vec<CapClass>> {
    let Some(first) = caps.first() else {
        return Ok(Vec::new());
    };
    let geom = first.geometry().clone();
    if caps.iter().any(|c| c.geometry().dim() != geom.dim() || c.size() != first.size()) {
        return Err(Error::Contract("classify needs caps of one geometry and one size".into()));
    }
    let invs: Vec<CapInvariants> = caps.par_iter().map(|c| invariants::compute(&geom, c.members())).collect();
    let parts = partition(&geom, &invs);
    let mut classes: Vec<CapClass> = parts
        .into_par_iter()
        .map(|members| {
            let rep = members.iter().map(|&i| &caps[i]).min_by(|a, b| a.members().cmp(b.members())).unwrap();
            CapClass {
                representative: rep.clone(),
                count: members.len(),
                stabilizer_order: stabilizer_order(rep),
                complete: rep.is_complete(),
                members,
            }
        })
        .collect();
    classes.sort_by(|a, b| a.representative.members().cmp(b.representative.members()));
    Ok(classes)
}

/// Partitions membership masks of caps in `geom` into classes.
pub(crate) fn partition_masks(geom: &GeometryTables, masks: &[Mask]) -> Vec<Vec<usize>> {
    let invs: Vec<CapInvariants> = masks.par_iter().map(|m| invariants::compute(geom, m)).collect();
    partition(geom, &invs)
}

/// Groups indices of `invs` into equivalence classes: signature buckets
/// first, then witness search against each class's first member.
fn partition(geom: &GeometryTables, invs: &[CapInvariants]) -> Vec<Vec<usize>> {
    let mut buckets: BTreeMap<&InvariantSignature, Vec<usize>> = BTreeMap::new();
    for (i, inv) in invs.iter().enumerate() {
        buckets.entry(&inv.signature).or_default().push(i);
    }
    let buckets: Vec<Vec<usize>> = buckets.into_values().collect();
    let mut parts: Vec<Vec<usize>> = buckets
        .into_par_iter()
        .flat_map_iter(|bucket| {
            let mut classes: Vec<Vec<usize>> = Vec::new();
            for i in bucket {
                let hit = classes
                    .iter()
                    .position(|cls| matches!(compare_prepared(geom, &invs[cls[0]], &invs[i]), Verdict::Equivalent(_)));
                match hit {
                    Some(k) => classes[k].push(i),
                    None => classes.push(vec![i]),
                }
            }
            classes
        })
        .collect();
    parts.sort();
    parts
}

/// JSON form of a class list.
#[derive(Serialize)]
pub struct ClassReport {
    pub size: usize,
    pub classes: Vec<ClassEntry>,
}

#[derive(Serialize)]
pub struct ClassEntry {
    pub class_id: String,
    pub representative: crate::capfile::CapRecord,
    pub count: usize,
    pub stabilizer_order: u128,
    pub complete: bool,
}

impl ClassReport {
    pub fn new(size: usize, classes: &[CapClass]) -> ClassReport {
        ClassReport {
            size,
            classes: classes
                .iter()
                .enumerate()
                .map(|(i, c)| ClassEntry {
                    class_id: format!("{size}-{i}"),
                    representative: crate::capfile::CapRecord::from_cap(&c.representative),
                    count: c.count,
                    stabilizer_order: c.stabilizer_order,
                    complete: c.complete,
                })
                .collect(),
        }
    }
}
