//! Isomorph-free generation of caps in a hyperplane, level by level.
//!
//! Each class representative of size `k` is extended by one point from each
//! orbit of its stabilizer on the extension candidates; the children are
//! then split into classes by the equivalence module. Every class of size
//! `k + 1` arises this way, since deleting any point of a cap gives a cap of
//! size `k` equivalent to some representative.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::orbits::UnionFind;
use crate::capfile::CapRecord;
use crate::caps::Cap;
use crate::equivalence::{self, stabilizer};
use crate::error::{Error, Result};
use crate::geometry::GeometryTables;
use crate::mask::Mask;

/// A classified seed cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedClass {
    pub cap: Cap,
    pub complete: bool,
    pub class_id: String,
    pub stabilizer_order: u128,
}

impl SeedClass {
    pub fn size(&self) -> usize {
        self.cap.size()
    }
}

/// Class representatives of every size up to the largest reached.
#[derive(Clone, Debug)]
pub struct SeedCatalog {
    geom: Arc<GeometryTables>,
    /// `levels[k]` holds the representatives of size `k`, in mask order.
    levels: Vec<Vec<Cap>>,
}

/// Options for [`generate_catalog`].
#[derive(Clone, Default)]
pub struct CatalogOptions<'a> {
    /// Largest size to generate; `None` runs until no caps remain.
    pub max_size: Option<usize>,
    /// Completed levels are saved here after each step and reloaded if the
    /// file already exists.
    pub checkpoint: Option<&'a Path>,
    /// Stop with [`Error::Budget`] after generating this many new levels.
    pub level_budget: Option<usize>,
    /// Called with (size, number of classes) after each level.
    pub progress: Option<&'a (dyn Fn(usize, usize) + Sync)>,
}

#[derive(Serialize, Deserialize)]
struct CatalogCheckpoint {
    version: u32,
    dim: usize,
    geometry_digest: String,
    levels: Vec<Vec<CapRecord>>,
}

const CATALOG_VERSION: u32 = 1;

impl SeedCatalog {
    pub fn geometry(&self) -> &Arc<GeometryTables> {
        &self.geom
    }

    pub fn max_size(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, size: usize) -> &[Cap] {
        self.levels.get(size).map_or(&[], |v| v.as_slice())
    }

    /// Class counts per size, starting at size 0.
    pub fn counts(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// The classes of the given size with their metadata.
    pub fn classes(&self, size: usize) -> Vec<SeedClass> {
        self.level(size)
            .par_iter()
            .enumerate()
            .map(|(i, cap)| SeedClass {
                cap: cap.clone(),
                complete: cap.is_complete(),
                class_id: format!("{size}-{i}"),
                stabilizer_order: equivalence::stabilizer_order(cap),
            })
            .collect()
    }

    fn save(&self, path: &Path) -> Result<()> {
        let ck = CatalogCheckpoint {
            version: CATALOG_VERSION,
            dim: self.geom.dim(),
            geometry_digest: self.geom.digest().to_string(),
            levels: self.levels.iter().map(|l| l.iter().map(CapRecord::from_cap).collect()).collect(),
        };
        super::checkpoint::write_atomic(path, &serde_json::to_vec(&ck)?)
    }

    fn load(geom: &Arc<GeometryTables>, path: &Path) -> Result<SeedCatalog> {
        let ck: CatalogCheckpoint = serde_json::from_slice(&std::fs::read(path)?)
            .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        if ck.version != CATALOG_VERSION || ck.dim != geom.dim() || ck.geometry_digest != geom.digest() {
            return Err(Error::Checkpoint(format!("{} was written for different tables", path.display())));
        }
        let levels = ck
            .levels
            .iter()
            .map(|l| l.iter().map(CapRecord::to_cap).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if levels.is_empty() {
            return Err(Error::Checkpoint("empty catalog".into()));
        }
        Ok(SeedCatalog { geom: geom.clone(), levels })
    }
}

/// Classifies all caps of `geom` up to the configured size.
pub fn generate_catalog(geom: &Arc<GeometryTables>, opts: &CatalogOptions) -> Result<SeedCatalog> {
    let mut cat = match opts.checkpoint {
        Some(p) if p.exists() => SeedCatalog::load(geom, p)?,
        _ => SeedCatalog { geom: geom.clone(), levels: vec![vec![Cap::empty(geom.clone())]] },
    };
    let mut generated = 0;
    loop {
        let top = cat.levels.last().unwrap();
        if top.is_empty() || opts.max_size.is_some_and(|m| cat.max_size() >= m) {
            break;
        }
        if opts.level_budget.is_some_and(|b| generated >= b) {
            return Err(Error::Budget(format!("stopped after size {}; resume from the checkpoint", cat.max_size())));
        }
        let next = next_level(geom, top);
        if let Some(f) = opts.progress {
            f(cat.max_size() + 1, next.len());
        }
        cat.levels.push(next);
        generated += 1;
        if let Some(p) = opts.checkpoint {
            cat.save(p)?;
        }
    }
    if cat.levels.last().is_some_and(Vec::is_empty) {
        cat.levels.pop();
    }
    if let Some(m) = opts.max_size {
        cat.levels.truncate(m + 1);
    }
    Ok(cat)
}

/// Orbit representatives of the extension candidates of `cap` under its
/// stabilizer. Caps that do not span are extended by every candidate.
pub(crate) fn candidate_orbit_reps(cap: &Cap) -> Vec<usize> {
    let geom = cap.geometry();
    let cands = cap.extension_state().candidates().to_vec();
    let Some(stab) = (cap.size() >= geom.coords()).then(|| stabilizer(cap)).flatten() else {
        return cands;
    };
    let mut uf = UnionFind::new(geom.num_points());
    for s in &stab {
        let perm = s.point_permutation(geom);
        for &p in &cands {
            uf.union(p, perm[p] as usize);
        }
    }
    cands.into_iter().filter(|&p| uf.find(p) == p).collect()
}

fn next_level(geom: &Arc<GeometryTables>, reps: &[Cap]) -> Vec<Cap> {
    let children: Vec<Mask> = reps
        .par_iter()
        .flat_map_iter(|rep| {
            let base = *rep.members();
            candidate_orbit_reps(rep).into_iter().map(move |p| {
                let mut m = base;
                m.insert(p);
                m
            })
        })
        .collect();
    let parts = equivalence::partition_masks(geom, &children);
    let mut out: Vec<Mask> = parts.iter().map(|cls| cls.iter().map(|&i| children[i]).min().unwrap()).collect();
    out.sort();
    out.into_iter().map(|m| Cap::from_mask(geom.clone(), m).expect("extensions of caps are caps")).collect()
}

/// Seed classes of the sizes used by the 37/39 search.
pub fn classify_seeds() -> Result<Vec<SeedClass>> {
    let geom = GeometryTables::shared(3)?;
    let cat = generate_catalog(&geom, &CatalogOptions { max_size: Some(17), ..Default::default() })?;
    Ok([13, 15, 17].iter().flat_map(|&s| cat.classes(s)).collect())
}

#[derive(Serialize, Deserialize)]
struct SeedLine {
    class_id: String,
    dim: usize,
    n: usize,
    points: Vec<String>,
    complete: bool,
    stabilizer_order: u128,
}

/// Writes seeds as cap-file lines with class metadata.
pub fn write_seed_file<W: Write>(mut w: W, seeds: &[SeedClass]) -> Result<()> {
    for s in seeds {
        let rec = CapRecord::from_cap(&s.cap);
        let line = SeedLine {
            dim: rec.dim,
            n: rec.n,
            points: rec.points,
            class_id: s.class_id.clone(),
            complete: s.complete,
            stabilizer_order: s.stabilizer_order,
        };
        serde_json::to_writer(&mut w, &line)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads and verifies a seed file: every line must be a cap with correct
/// completeness, and seeds of equal size must be pairwise inequivalent.
pub fn read_seed_file(path: &Path) -> Result<Vec<SeedClass>> {
    let f = BufReader::new(std::fs::File::open(path)?);
    let mut seeds = Vec::new();
    for (i, line) in f.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let at = |e: Error| Error::Parse(format!("{}:{}: {e}", path.display(), i + 1));
        let l: SeedLine = serde_json::from_str(&line).map_err(|e| at(e.into()))?;
        let cap = CapRecord { dim: l.dim, n: l.n, points: l.points }.to_cap().map_err(at)?;
        if cap.is_complete() != l.complete {
            return Err(at(Error::Domain(format!("completeness flag of {} is wrong", l.class_id))));
        }
        seeds.push(SeedClass { cap, complete: l.complete, class_id: l.class_id, stabilizer_order: l.stabilizer_order });
    }
    for (i, a) in seeds.iter().enumerate() {
        for b in &seeds[i + 1..] {
            if a.class_id == b.class_id {
                return Err(Error::Domain(format!("class id {} repeated", a.class_id)));
            }
            if a.cap.geometry().dim() == b.cap.geometry().dim()
                && a.size() == b.size()
                && equivalence::are_equivalent(&a.cap, &b.cap).is_some()
            {
                return Err(Error::Domain(format!("seeds {} and {} are equivalent", a.class_id, b.class_id)));
            }
        }
    }
    Ok(seeds)
}
