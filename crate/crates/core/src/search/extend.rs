//! Depth-first extension of an embedded seed by points off the
//! distinguished hyperplane.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::caps::Cap;
use crate::codes::quantum_check;
use crate::error::{Error, Result};
use crate::geometry::GeometryTables;
use crate::mask::Mask;

use super::orbits::first_level_orbits;

/// Pruning switches shared by every node of one seed's tree.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExtendOptions {
    pub orbit_reduction: bool,
    pub parity_prune: bool,
    pub max_section_prune: bool,
    pub checked: bool,
}

/// A partial cap during the search.
#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub members: Mask,
    pub size: usize,
    /// Points that may still be added below this node.
    pub cands: Mask,
    /// Hyperplanes whose section parity differs from the target's.
    pub wrong: Mask,
}

/// Immutable data for the tree rooted at one seed.
pub(crate) struct Tree {
    pub geom: Arc<GeometryTables>,
    pub target: usize,
    pub seed: Mask,
    pub seed_size: usize,
    pub opts: ExtendOptions,
    /// Off-hyperplane points.
    off: Mask,
    /// Point whose hyperplane star equals a given mask.
    star_index: HashMap<Mask, usize>,
    /// Size of the symmetric difference of the stars of 1, 2, 3 points in
    /// general position.
    star_xor_sizes: [usize; 4],
}

impl Tree {
    /// `seed` must lie in the distinguished hyperplane of `geom`.
    pub fn new(geom: Arc<GeometryTables>, seed: Mask, target: usize, opts: ExtendOptions) -> Tree {
        let h = geom.hyperplane_members(geom.distinguished_hyperplane());
        debug_assert!(seed.is_subset(h));
        let off = geom.all_points().and_not(h);
        let star_index = if opts.parity_prune {
            (0..geom.num_points()).map(|p| (*geom.star(p), p)).collect()
        } else {
            HashMap::new()
        };
        // stars of three non-collinear points
        let (a, b, c) = {
            let pts: Vec<usize> = [1u16, 4, 16].iter().map(|&c| geom.index_of_code(c).unwrap()).collect();
            let s = |i: usize| geom.star(pts[i]);
            (s(0).len(), s(0).and_count(s(1)), s(0).and(s(1)).and_count(s(2)))
        };
        Tree {
            seed_size: seed.len(),
            geom,
            target,
            seed,
            opts,
            off,
            star_index,
            star_xor_sizes: [0, a, 2 * a - 2 * b, 3 * a - 6 * b + 4 * c],
        }
    }

    pub fn seed_node(&self) -> Node {
        let parity = self.target % 2;
        let wrong = (0..self.geom.num_hyperplanes())
            .filter(|&h| self.seed.and_count(self.geom.hyperplane_members(h)) % 2 != parity)
            .collect();
        Node { members: self.seed, size: self.seed_size, cands: self.off, wrong }
    }

    /// Adds `p`. Ordered children only keep candidates above `p`.
    pub fn child(&self, node: &Node, p: usize, ordered: bool) -> Node {
        let mut cands = if ordered { node.cands.above(p) } else { node.cands };
        cands.remove(p);
        for x in node.members.iter() {
            for &t in self.geom.third_points(p, x).iter() {
                cands.remove(t as usize);
            }
        }
        let mut members = node.members;
        members.insert(p);
        Node { members, size: node.size + 1, cands, wrong: node.wrong.xor(self.geom.star(p)) }
    }
}

/// Per-walk counters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct WalkStats {
    pub nodes: u64,
    pub leaves: u64,
    /// Largest number of off-hyperplane points in a visited node.
    pub max_depth: usize,
    pub quantum: Vec<Mask>,
}

/// Receives each leaf and the orbit weight of the current subtree.
pub(crate) type Emit<'e> = &'e mut dyn FnMut(&Mask, usize);

/// Mutable depth-first walker over one tree.
pub(crate) struct Walker<'t, 'e> {
    tree: &'t Tree,
    /// Section sizes, maintained only with the max-section prune.
    sections: Vec<u8>,
    path: Vec<usize>,
    pub stats: WalkStats,
    budget: Option<u64>,
    /// Path (relative to the walk root) of the first node not visited
    /// because the budget ran out.
    pub stopped: Option<Vec<usize>>,
    pub error: Option<Error>,
    pub weight: usize,
    emit: Option<Emit<'e>>,
}

impl<'t, 'e> Walker<'t, 'e> {
    pub fn new(tree: &'t Tree, budget: Option<u64>, emit: Option<Emit<'e>>) -> Walker<'t, 'e> {
        let sections = if tree.opts.max_section_prune {
            (0..tree.geom.num_hyperplanes())
                .map(|h| tree.seed.and_count(tree.geom.hyperplane_members(h)) as u8)
                .collect()
        } else {
            Vec::new()
        };
        Walker { tree, sections, path: Vec::new(), stats: WalkStats::default(), budget, stopped: None, error: None, weight: 1, emit }
    }

    /// Adds `p` to `node`, or `None` when the max-section prune rejects the
    /// result. A successful call must be paired with [`Walker::undo`].
    pub fn child(&mut self, node: &Node, p: usize, ordered: bool) -> Option<Node> {
        let mut c = self.tree.child(node, p, ordered);
        if self.tree.opts.max_section_prune {
            let cap = self.tree.seed_size as u8;
            let geom = &self.tree.geom;
            if geom.star(p).iter().any(|h| self.sections[h] >= cap) {
                return None;
            }
            for h in geom.star(p).iter() {
                self.sections[h] += 1;
                if self.sections[h] == cap {
                    c.cands = c.cands.and_not(geom.hyperplane_members(h));
                }
            }
        }
        Some(c)
    }

    pub fn undo(&mut self, p: usize) {
        if self.tree.opts.max_section_prune {
            for h in self.tree.geom.star(p).iter() {
                self.sections[h] -= 1;
            }
        }
    }

    /// Counts `node` and returns the points to branch on, or `None` for
    /// leaves, pruned nodes and an exhausted budget.
    pub fn expand(&mut self, node: &Node) -> Option<Vec<usize>> {
        if self.budget.is_some_and(|b| self.stats.nodes >= b) {
            self.stopped = Some(self.path.clone());
            return None;
        }
        self.stats.nodes += 1;
        let depth = node.size - self.tree.seed_size;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if node.size == self.tree.target {
            self.leaf(node);
            return None;
        }
        self.branches(node)
    }

    /// Children of a non-leaf node that survive the prunes.
    fn branches(&self, node: &Node) -> Option<Vec<usize>> {
        let need = self.tree.target - node.size;
        if node.cands.len() < need {
            return None;
        }
        if self.tree.opts.parity_prune {
            if need <= 3 && node.wrong.len() != self.tree.star_xor_sizes[need] {
                return None;
            }
            if need == 1 {
                return match self.tree.star_index.get(&node.wrong) {
                    Some(&p) if node.cands.contains(p) => Some(vec![p]),
                    _ => None,
                };
            }
            let geom = &self.tree.geom;
            if node.wrong.iter().any(|h| !geom.hyperplane_members(h).intersects(&node.cands)) {
                return None;
            }
        }
        Some(node.cands.to_vec())
    }

    fn leaf(&mut self, node: &Node) {
        self.stats.leaves += 1;
        let parity_ok = node.wrong.is_empty();
        let tree = self.tree;
        if tree.opts.checked || parity_ok {
            if tree.opts.checked {
                let h = tree.geom.hyperplane_members(tree.geom.distinguished_hyperplane());
                if node.members.and(h) != tree.seed {
                    self.fail(format!("leaf {:?} meets the hyperplane outside its seed", node.members.to_vec()));
                    return;
                }
            }
            let cap = Cap::from_mask_unchecked(tree.geom.clone(), node.members);
            match quantum_check(&cap) {
                Ok(profile) => {
                    if profile.even != parity_ok {
                        self.fail(format!("incremental parity disagrees with quantum_check on {cap:?}"));
                        return;
                    }
                    if profile.quantum.is_some() {
                        self.stats.quantum.push(node.members);
                    }
                }
                Err(e) => {
                    self.error.get_or_insert(e);
                    return;
                }
            }
        }
        if let Some(emit) = self.emit.as_mut() {
            emit(&node.members, self.weight);
        }
    }

    fn fail(&mut self, msg: String) {
        self.error.get_or_insert(Error::CrossCheck(msg));
    }

    fn halted(&self) -> bool {
        self.stopped.is_some() || self.error.is_some()
    }

    /// Walks the ordered subtree below `node`. `resume` is the path to the
    /// first node still to visit; nodes strictly above it were counted by
    /// an earlier walk.
    pub fn walk(&mut self, node: &Node, resume: Option<&[usize]>) -> ControlFlow<()> {
        let kids = match resume {
            Some(r) if !r.is_empty() => self.branches(node),
            _ => self.expand(node),
        };
        if self.halted() {
            return ControlFlow::Break(());
        }
        let Some(kids) = kids else {
            return ControlFlow::Continue(());
        };
        let (start, mut rest) = match resume {
            Some([first, rest @ ..]) => (*first, Some(rest)),
            _ => (0, None),
        };
        for p in kids {
            if p < start {
                continue;
            }
            let Some(c) = self.child(node, p, true) else {
                continue;
            };
            self.path.push(p);
            let r = self.walk(&c, rest.take());
            self.path.pop();
            self.undo(p);
            r?;
        }
        ControlFlow::Continue(())
    }
}

/// Statistics of a full [`extend_exhaustive`] run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtendStats {
    pub nodes: u64,
    pub leaves: u64,
    /// Leaf count with every orbit-reduced subtree weighted by its orbit
    /// size and divided by the number of added points: the number of caps
    /// an unreduced search would emit.
    pub expanded_leaves: u128,
    pub quantum: usize,
}

/// Emits every cap of size `target` in PG(r,4) whose intersection with the
/// hyperplane x_r = 0 is the embedding of `seed` (a cap of PG(r−1,4)).
///
/// With orbit reduction the first added point runs over orbit
/// representatives only, and `f` receives the orbit size as a weight.
pub fn extend_exhaustive<F>(seed: &Cap, target: usize, opts: ExtendOptions, mut f: F) -> Result<ExtendStats>
where
    F: FnMut(&Cap, usize),
{
    let lower = seed.geometry();
    let geom = GeometryTables::shared(lower.dim() + 1)?;
    if target < seed.size() {
        return Err(Error::Config(format!("target {target} is below the seed size {}", seed.size())));
    }
    let embedded: Mask = seed.members().iter().map(|p| geom.index_of_code(lower.point_code(p) << 2).unwrap()).collect();
    let tree = Tree::new(geom.clone(), embedded, target, opts);
    let orbits = if opts.orbit_reduction {
        first_level_orbits(&geom, seed)
    } else {
        tree.seed_node().cands.iter().map(|p| super::Orbit { rep: p, size: 1 }).collect()
    };
    let m = (target - seed.size()) as u128;
    let mut stats = ExtendStats::default();
    let mut weighted = 0u128;
    let mut emit = |mask: &Mask, weight: usize| f(&Cap::from_mask_unchecked(geom.clone(), *mask), weight);

    let root = tree.seed_node();
    let mut w = Walker::new(&tree, None, Some(&mut emit));
    let first = w.expand(&root);
    collect(&mut stats, &mut w)?;
    drop(w);
    if target == seed.size() {
        stats.expanded_leaves = stats.leaves as u128;
        return Ok(stats);
    }
    if first.is_some() {
        for orbit in orbits {
            let mut w = Walker::new(&tree, None, Some(&mut emit));
            w.weight = orbit.size;
            let Some(c) = w.child(&root, orbit.rep, !opts.orbit_reduction) else {
                continue;
            };
            if let Some(kids) = w.expand(&c) {
                for q in kids {
                    let Some(cc) = w.child(&c, q, true) else {
                        continue;
                    };
                    let _ = w.walk(&cc, None);
                    w.undo(q);
                    if w.error.is_some() {
                        break;
                    }
                }
            }
            weighted += w.stats.leaves as u128 * orbit.size as u128;
            collect(&mut stats, &mut w)?;
        }
    }
    stats.expanded_leaves = if opts.orbit_reduction { expand_count(weighted, m)? } else { stats.leaves as u128 };
    Ok(stats)
}

/// Caps counted once per added point, each weighted by its orbit size,
/// divided back to a plain cap count.
pub(crate) fn expand_count(weighted: u128, added: u128) -> Result<u128> {
    if !weighted.is_multiple_of(added) {
        return Err(Error::CrossCheck(format!("weighted leaf count {weighted} is not divisible by {added}")));
    }
    Ok(weighted / added)
}

fn collect(stats: &mut ExtendStats, w: &mut Walker) -> Result<()> {
    if let Some(e) = w.error.take() {
        return Err(e);
    }
    stats.nodes += w.stats.nodes;
    stats.leaves += w.stats.leaves;
    stats.quantum += w.stats.quantum.len();
    Ok(())
}
