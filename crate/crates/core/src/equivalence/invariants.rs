use serde::Serialize;

use crate::caps::Cap;
use crate::geometry::GeometryTables;
use crate::mask::Mask;

/// Collineation-invariant data of a cap, used to reject inequivalent pairs
/// before any witness search.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct InvariantSignature {
    /// `|K ∩ H|` over all hyperplanes, ascending.
    pub hyperplane_spectrum: Vec<u16>,
    /// Secants through each cap point, ascending.
    pub point_degree_spectrum: Vec<u16>,
    /// Per-point profiles (see [`point_profiles`]), sorted.
    pub point_profiles: Vec<Vec<u32>>,
    /// `histogram[i]` = number of points off the cap on exactly `i` secants.
    pub secant_index_histogram: Vec<u32>,
}

/// Invariants of one cap, with profiles kept in the cap's point order.
#[derive(Clone, Debug)]
pub(crate) struct CapInvariants {
    pub points: Vec<usize>,
    pub profiles: Vec<Vec<u32>>,
    pub signature: InvariantSignature,
}

pub(crate) fn compute(geom: &GeometryTables, members: &Mask) -> CapInvariants {
    let points = members.to_vec();
    let n = points.len();
    let np = geom.num_points();

    let counts: Vec<u16> =
        (0..geom.num_hyperplanes()).map(|h| members.and_count(geom.hyperplane_members(h)) as u16).collect();
    let mut hyperplane_spectrum = counts.clone();
    hyperplane_spectrum.sort_unstable();

    let mut index = vec![0u32; np];
    for (i, &p) in points.iter().enumerate() {
        for &q in &points[i + 1..] {
            for &t in geom.third_points(p, q).iter() {
                index[t as usize] += 1;
            }
        }
    }
    let mut secant_index_histogram = vec![0u32; n * n / 2 + 2];
    for x in 0..np {
        if !members.contains(x) {
            secant_index_histogram[index[x] as usize] += 1;
        }
    }
    while secant_index_histogram.len() > 1 && *secant_index_histogram.last().unwrap() == 0 {
        secant_index_histogram.pop();
    }

    let profiles: Vec<Vec<u32>> = points
        .iter()
        .map(|&p| {
            // hyperplane sections through p, then secant indices of the points on secants through p
            let mut sections = vec![0u32; n + 1];
            for h in geom.star(p).iter() {
                sections[counts[h] as usize] += 1;
            }
            let mut on_secants: Vec<u32> = points
                .iter()
                .filter(|&&q| q != p)
                .flat_map(|&q| geom.third_points(p, q).map(|t| index[t as usize]))
                .collect();
            on_secants.sort_unstable();
            sections.push(u32::MAX);
            sections.extend(on_secants);
            sections
        })
        .collect();

    let mut sorted_profiles = profiles.clone();
    sorted_profiles.sort();

    CapInvariants {
        points,
        profiles,
        signature: InvariantSignature {
            hyperplane_spectrum,
            point_degree_spectrum: vec![n.saturating_sub(1) as u16; n],
            point_profiles: sorted_profiles,
            secant_index_histogram,
        },
    }
}

/// Deterministic invariant signature of a cap.
pub fn signature(cap: &Cap) -> InvariantSignature {
    compute(cap.geometry(), cap.members()).signature
}

/// Per-point profile: the distribution of hyperplane section sizes over
/// hyperplanes through the point, followed by the sorted secant indices of
/// the points on secants through it.
pub fn point_profiles(cap: &Cap) -> Vec<Vec<u32>> {
    compute(cap.geometry(), cap.members()).profiles
}
