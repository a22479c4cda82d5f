//! Backtracking search for collineations mapping one spanning cap onto
//! another.
//!
//! A projectivity is fixed by the images of an ordered basis together with
//! one scaling. The search picks `r + 1` independent points of the source cap
//! (rarest invariant colours first) and tries every colour-compatible ordered
//! independent image tuple in the target, pruning when the span of a partial
//! tuple holds a different number of cap points than the span of the
//! corresponding source prefix. The scaling comes from a "unit" source point
//! with all basis coordinates nonzero when one exists (its image is branched
//! on), and is enumerated over `(GF(4)*)^r` otherwise. Both settings of the
//! Frobenius flag are tried, so the search covers the full semilinear group.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use super::collineation::{Collineation, PackedMap};
use super::invariants::CapInvariants;
use crate::geometry::GeometryTables;
use crate::gf4::{packed_conj, unpack, Gf4};
use crate::linalg::{Echelon, Mat, MAX_DIM};
use crate::mask::Mask;

/// Calls `f` for every collineation mapping cap `a` onto cap `b`, until `f`
/// breaks. Both caps must span the geometry and have equal size.
pub(crate) fn for_each_witness<F>(geom: &GeometryTables, a: &CapInvariants, b: &CapInvariants, mut f: F) -> ControlFlow<()>
where
    F: FnMut(Collineation) -> ControlFlow<()>,
{
    let n = a.points.len();
    if n != b.points.len() {
        return ControlFlow::Continue(());
    }
    let mut ids: BTreeMap<&Vec<u32>, usize> = BTreeMap::new();
    for p in a.profiles.iter().chain(b.profiles.iter()) {
        let next = ids.len();
        ids.entry(p).or_insert(next);
    }
    let a_col: Vec<usize> = a.profiles.iter().map(|p| ids[p]).collect();
    let b_col: Vec<usize> = b.profiles.iter().map(|p| ids[p]).collect();
    let mut by_color = vec![Vec::new(); ids.len()];
    for (j, &c) in b_col.iter().enumerate() {
        by_color[c].push(j);
    }
    {
        let mut ca = vec![0usize; ids.len()];
        for &c in &a_col {
            ca[c] += 1;
        }
        if ca.iter().zip(&by_color).any(|(x, v)| *x != v.len()) {
            return ControlFlow::Continue(());
        }
    }
    let b_codes: Vec<u16> = b.points.iter().map(|&p| geom.point_code(p)).collect();
    let b_mask: Mask = b.points.iter().copied().collect();

    for frob in [false, true] {
        let src: Vec<u16> = a
            .points
            .iter()
            .map(|&p| {
                let c = geom.point_code(p);
                if frob {
                    packed_conj(c)
                } else {
                    c
                }
            })
            .collect();
        let mut s = Search::new(geom, frob, &src, &a_col, &b_codes, &b_mask, &by_color);
        s.run(&mut f)?;
    }
    ControlFlow::Continue(())
}

struct Search<'a> {
    geom: &'a GeometryTables,
    d: usize,
    frob: bool,
    b_codes: &'a [u16],
    b_mask: &'a Mask,
    by_color: &'a [Vec<usize>],
    basis_colors: Vec<usize>,
    pinv: Mat,
    /// Colour of the unit point and its coordinates in the source basis.
    unit: Option<(usize, [Gf4; MAX_DIM])>,
    span_counts: Vec<usize>,
    check: Vec<u16>,
    chosen: Vec<usize>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(
        geom: &'a GeometryTables,
        frob: bool,
        src: &'a [u16],
        a_col: &[usize],
        b_codes: &'a [u16],
        b_mask: &'a Mask,
        by_color: &'a [Vec<usize>],
    ) -> Search<'a> {
        let d = geom.coords();
        let n = src.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (by_color[a_col[i]].len(), i));

        let mut ech = Echelon::new(d);
        let mut basis = Vec::with_capacity(d);
        for &i in &order {
            if ech.insert(src[i]) {
                basis.push(i);
                if basis.len() == d {
                    break;
                }
            }
        }
        assert_eq!(basis.len(), d, "witness search needs spanning caps");
        let p = Mat::from_column_codes(&basis.iter().map(|&i| src[i]).collect::<Vec<_>>());
        let pinv = p.inverse().expect("basis is independent");

        let unit = order.iter().filter(|i| !basis.contains(i)).find_map(|&i| {
            let y = pinv.apply(&unpack(src[i], d));
            if y.iter().all(|c| !c.is_zero()) {
                let mut arr = [Gf4::ZERO; MAX_DIM];
                arr[..d].copy_from_slice(&y);
                Some((i, arr))
            } else {
                None
            }
        });

        // number of source points in the span of each basis prefix of length 3..d-1
        let mut span_counts = vec![0usize; d + 1];
        let mut pre = Echelon::new(d);
        for (j, &bi) in basis.iter().enumerate() {
            pre.insert(src[bi]);
            if j + 1 >= 3 && j + 1 < d {
                span_counts[j + 1] = src.iter().filter(|&&c| pre.contains(c)).count();
            }
        }

        let check: Vec<u16> = order
            .iter()
            .filter(|i| !basis.contains(i) && unit.is_none_or(|(u, _)| u != **i))
            .map(|&i| src[i])
            .collect();

        Search {
            geom,
            d,
            frob,
            b_codes,
            b_mask,
            by_color,
            basis_colors: basis.iter().map(|&i| a_col[i]).collect(),
            pinv,
            unit: unit.map(|(i, y)| (a_col[i], y)),
            span_counts,
            check,
            chosen: Vec::with_capacity(d),
            used: vec![false; b_codes.len()],
        }
    }

    fn run<F>(&mut self, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(Collineation) -> ControlFlow<()>,
    {
        let ech = Echelon::new(self.d);
        self.assign(ech, f)
    }

    fn assign<F>(&mut self, ech: Echelon, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(Collineation) -> ControlFlow<()>,
    {
        let depth = self.chosen.len();
        if depth == self.d {
            return self.complete(f);
        }
        let color = self.basis_colors[depth];
        for &j in &self.by_color[color] {
            if self.used[j] {
                continue;
            }
            let mut next = ech.clone();
            if !next.insert(self.b_codes[j]) {
                continue;
            }
            let k = depth + 1;
            if k >= 3 && k < self.d {
                let cnt = self.b_codes.iter().filter(|&&c| next.contains(c)).count();
                if cnt != self.span_counts[k] {
                    continue;
                }
            }
            self.used[j] = true;
            self.chosen.push(j);
            let r = self.assign(next, f);
            self.chosen.pop();
            self.used[j] = false;
            r?;
        }
        ControlFlow::Continue(())
    }

    fn complete<F>(&mut self, f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(Collineation) -> ControlFlow<()>,
    {
        let d = self.d;
        let q = Mat::from_column_codes(&self.chosen.iter().map(|&j| self.b_codes[j]).collect::<Vec<_>>());
        match self.unit {
            Some((unit_color, y)) => {
                let qinv = q.inverse().expect("independent images");
                for &j in &self.by_color[unit_color] {
                    if self.used[j] {
                        continue;
                    }
                    let z = qinv.apply(&unpack(self.b_codes[j], d));
                    if z.iter().any(|c| c.is_zero()) {
                        continue;
                    }
                    let mut lam = [Gf4::ZERO; MAX_DIM];
                    for i in 0..d {
                        lam[i] = z[i] * y[i].inv_nonzero();
                    }
                    self.try_matrix(&q, &lam[..d], f)?;
                }
            }
            None => {
                let mut lam = [Gf4::ONE; MAX_DIM];
                let combos = 3usize.pow(d as u32 - 1);
                for mut c in 0..combos {
                    for slot in lam.iter_mut().take(d).skip(1) {
                        *slot = Gf4::NONZERO[c % 3];
                        c /= 3;
                    }
                    self.try_matrix(&q, &lam[..d], f)?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn try_matrix<F>(&self, q: &Mat, lam: &[Gf4], f: &mut F) -> ControlFlow<()>
    where
        F: FnMut(Collineation) -> ControlFlow<()>,
    {
        let m = q.scale_columns(lam).mul(&self.pinv);
        let map = PackedMap::new(&m, false);
        for &c in &self.check {
            match self.geom.index_of_code(map.image(c)) {
                Some(p) if self.b_mask.contains(p) => {}
                _ => return ControlFlow::Continue(()),
            }
        }
        f(Collineation::new_unchecked(m, self.frob))
    }
}
