//! The full search: every selected seed, split into work units that run in
//! parallel and are checkpointed independently.

use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use super::checkpoint::{self, UnitRecord, UnitStatus};
use super::config::{admissible_seed_sizes, SearchConfig, SeedSelection};
use super::extend::{expand_count, ExtendOptions, Tree, Walker};
use super::orbits::{first_level_orbits, Orbit};
use super::report::{FoundCap, OrbitReport, SearchReport, SeedReport, Totals};
use super::seeds::SeedClass;
use crate::capfile::CapRecord;
use crate::caps::Cap;
use crate::codes::quantum_check;
use crate::error::{Error, Result};
use crate::geometry::GeometryTables;
use crate::mask::Mask;

/// The first two tree levels of one seed, computed up front.
struct SeedPlan<'s> {
    seed: &'s SeedClass,
    tree: Tree,
    /// Counters of the seed node itself.
    root: super::extend::WalkStats,
    orbits: Vec<OrbitPlan>,
}

struct OrbitPlan {
    orbit: Orbit,
    /// Counters of the orbit representative's node.
    node: super::extend::WalkStats,
    /// Second points, one work unit each.
    units: Vec<usize>,
}

fn select_seeds<'s>(cfg: &SearchConfig, seeds: &'s [SeedClass]) -> Result<Vec<&'s SeedClass>> {
    let sizes = admissible_seed_sizes(cfg.target, cfg.dim, cfg.exploratory)?;
    for s in seeds {
        if s.cap.geometry().dim() + 1 != cfg.dim {
            return Err(Error::Config(format!("seed {} is not a cap of PG({},4)", s.class_id, cfg.dim - 1)));
        }
    }
    match &cfg.seeds {
        SeedSelection::All => Ok(seeds.iter().filter(|s| sizes.contains(&s.size())).collect()),
        SeedSelection::Ids(ids) => ids
            .iter()
            .map(|id| {
                let s = seeds
                    .iter()
                    .find(|s| &s.class_id == id)
                    .ok_or_else(|| Error::Config(format!("no seed class {id}")))?;
                if !sizes.contains(&s.size()) {
                    return Err(Error::Config(format!(
                        "seed {id} has size {}, not admissible for target {} (sizes {sizes:?})",
                        s.size(),
                        cfg.target
                    )));
                }
                Ok(s)
            })
            .collect(),
    }
}

fn seeds_digest(seeds: &[&SeedClass]) -> String {
    let mut h = Sha256::new();
    for s in seeds {
        h.update(s.class_id.as_bytes());
        h.update(s.cap.members().to_bytes());
    }
    hex::encode(h.finalize())
}

fn plan_seed<'s>(geom: &std::sync::Arc<GeometryTables>, cfg: &SearchConfig, seed: &'s SeedClass) -> Result<SeedPlan<'s>> {
    let lower = seed.cap.geometry();
    let embedded: Mask =
        seed.cap.members().iter().map(|p| geom.index_of_code(lower.point_code(p) << 2).expect("embedding")).collect();
    let opts = ExtendOptions {
        orbit_reduction: cfg.orbit_reduction,
        parity_prune: cfg.parity_prune,
        max_section_prune: cfg.max_section_prune,
        checked: cfg.checked,
    };
    let tree = Tree::new(geom.clone(), embedded, cfg.target, opts);
    let root_node = tree.seed_node();
    let mut w = Walker::new(&tree, None, None);
    let first = w.expand(&root_node);
    if let Some(e) = w.error.take() {
        return Err(e);
    }
    let root = w.stats.clone();
    drop(w);
    let mut orbits = Vec::new();
    if first.is_some() {
        let list = if cfg.orbit_reduction {
            first_level_orbits(geom, &seed.cap)
        } else {
            root_node.cands.iter().map(|p| Orbit { rep: p, size: 1 }).collect()
        };
        for orbit in list {
            let mut w = Walker::new(&tree, None, None);
            let Some(c) = w.child(&root_node, orbit.rep, !cfg.orbit_reduction) else {
                continue;
            };
            let mut units = w.expand(&c).unwrap_or_default();
            if let Some(e) = w.error.take() {
                return Err(e);
            }
            if let Some(k) = cfg.unit_limit {
                units.truncate(k);
            }
            orbits.push(OrbitPlan { orbit, node: w.stats.clone(), units });
        }
    }
    Ok(SeedPlan { seed, tree, root, orbits })
}

fn run_unit(plan: &SeedPlan, cfg: &SearchConfig, orbit: &OrbitPlan, rec: &mut UnitRecord) -> Result<()> {
    let mut w = Walker::new(&plan.tree, cfg.max_nodes, None);
    let root = plan.tree.seed_node();
    let resume = rec.resume.take();
    let done = |rec: &mut UnitRecord| rec.status = UnitStatus::Done;
    let Some(c) = w.child(&root, orbit.orbit.rep, !cfg.orbit_reduction) else {
        done(rec);
        return Ok(());
    };
    let Some(cc) = w.child(&c, rec.second, true) else {
        done(rec);
        return Ok(());
    };
    let _ = w.walk(&cc, resume.as_deref());
    if let Some(e) = w.error.take() {
        return Err(e);
    }
    rec.nodes += w.stats.nodes;
    rec.leaves += w.stats.leaves;
    rec.max_depth = rec.max_depth.max(w.stats.max_depth);
    rec.quantum.extend(w.stats.quantum.iter().map(Mask::to_vec));
    match w.stopped.take() {
        Some(path) => {
            rec.status = UnitStatus::Partial;
            rec.resume = Some(path);
        }
        None => done(rec),
    }
    Ok(())
}

/// Runs the configured search over `seeds` (caps of the hyperplane
/// geometry, usually from [`super::classify_seeds`] or a seed file).
pub fn run_search(cfg: &SearchConfig, seeds: &[SeedClass]) -> Result<SearchReport> {
    cfg.validate()?;
    let start = Instant::now();
    let geom = GeometryTables::shared(cfg.dim)?;
    let selected = select_seeds(cfg, seeds)?;
    let config_digest = cfg.digest();
    let run_key = format!("{config_digest}:{}", seeds_digest(&selected));

    let plans: Vec<SeedPlan> = selected.iter().map(|s| plan_seed(&geom, cfg, s)).collect::<Result<_>>()?;

    let mut records: Vec<UnitRecord> = Vec::new();
    let mut index = Vec::new();
    for (si, plan) in plans.iter().enumerate() {
        for (oi, o) in plan.orbits.iter().enumerate() {
            for &q in &o.units {
                index.push((si, oi));
                records.push(UnitRecord::pending(&plan.seed.class_id, o.orbit.rep, q));
            }
        }
    }
    if cfg.resume {
        let path = cfg.checkpoint.as_deref().expect("validated");
        let saved = checkpoint::load(path, geom.digest(), &run_key)?;
        if saved.len() != records.len() || saved.iter().zip(&records).any(|(a, b)| a.key() != b.key()) {
            return Err(Error::Checkpoint(format!("{}: unit list differs; start a fresh run", path.display())));
        }
        records = saved;
    }

    let shared = Mutex::new(records.clone());
    let save = |rec: &UnitRecord, i: usize| -> Result<()> {
        let mut all = shared.lock().expect("checkpoint writer");
        all[i] = rec.clone();
        if let Some(p) = &cfg.checkpoint {
            checkpoint::save(p, geom.digest(), &run_key, &all)?;
        }
        Ok(())
    };
    if let Some(p) = &cfg.checkpoint {
        checkpoint::save(p, geom.digest(), &run_key, &records)?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<UnitRecord>> = pool.install(|| {
        records
            .into_par_iter()
            .enumerate()
            .map(|(i, mut rec)| {
                if rec.status != UnitStatus::Done {
                    let (si, oi) = index[i];
                    run_unit(&plans[si], cfg, &plans[si].orbits[oi], &mut rec)?;
                    save(&rec, i)?;
                }
                Ok(rec)
            })
            .collect()
    });
    let records: Vec<UnitRecord> = results.into_iter().collect::<Result<_>>()?;

    let mut report = SearchReport {
        target: cfg.target,
        dim: cfg.dim,
        config_digest,
        geometry_digest: geom.digest().to_string(),
        complete: true,
        seeds: Vec::new(),
        totals: Totals::default(),
        quantum_caps: Vec::new(),
        wall_time_secs: 0.0,
        report_digest: String::new(),
    };
    let mut at = 0;
    for plan in &plans {
        let added = (cfg.target - plan.seed.size()) as u128;
        let mut sr = SeedReport {
            class_id: plan.seed.class_id.clone(),
            seed_size: plan.seed.size(),
            seed_complete: plan.seed.complete,
            nodes_visited: plan.root.nodes,
            max_depth_reached: plan.root.max_depth,
            caps_found: plan.root.leaves,
            caps_found_expanded: None,
            quantum_caps_found: plan.root.quantum.len() as u64,
            orbits: Vec::new(),
        };
        let mut found: Vec<Mask> = plan.root.quantum.clone();
        let mut weighted = plan.root.leaves as u128;
        let mut seed_complete = true;
        for (oi, o) in plan.orbits.iter().enumerate() {
            let mut or = OrbitReport {
                index: oi,
                representative: geom.point_string(o.orbit.rep),
                size: o.orbit.size,
                nodes_visited: o.node.nodes,
                caps_found: o.node.leaves,
                quantum_caps_found: o.node.quantum.len() as u64,
                units: o.units.len(),
                units_done: 0,
            };
            found.extend(o.node.quantum.iter().copied());
            sr.max_depth_reached = sr.max_depth_reached.max(o.node.max_depth);
            for rec in &records[at..at + o.units.len()] {
                or.nodes_visited += rec.nodes;
                or.caps_found += rec.leaves;
                or.quantum_caps_found += rec.quantum.len() as u64;
                or.units_done += usize::from(rec.status == UnitStatus::Done);
                sr.max_depth_reached = sr.max_depth_reached.max(rec.max_depth);
                found.extend(rec.quantum.iter().map(|v| Mask::from_indices(v.iter().copied())));
            }
            at += o.units.len();
            if or.units_done < or.units {
                seed_complete = false;
            }
            weighted += or.caps_found as u128 * if cfg.orbit_reduction { o.orbit.size as u128 } else { 1 };
            sr.nodes_visited += or.nodes_visited;
            sr.caps_found += or.caps_found;
            sr.quantum_caps_found += or.quantum_caps_found;
            if cfg.progress {
                eprintln!(
                    "{} orbit {} nodes {} found {}",
                    plan.seed.class_id, oi, or.nodes_visited, or.quantum_caps_found
                );
            }
            sr.orbits.push(or);
        }
        if cfg.unit_limit.is_some() {
            seed_complete = false;
        }
        if seed_complete {
            sr.caps_found_expanded = Some(if added == 0 {
                sr.caps_found as u128
            } else if cfg.orbit_reduction {
                expand_count(weighted, added)?
            } else {
                weighted
            });
        }
        report.complete &= seed_complete;
        for m in found {
            let cap = Cap::from_mask_unchecked(geom.clone(), m);
            report.quantum_caps.push(FoundCap {
                class_id: plan.seed.class_id.clone(),
                cap: CapRecord::from_cap(&cap),
                profile: quantum_check(&cap)?,
            });
        }
        report.seeds.push(sr);
    }
    report.wall_time_secs = start.elapsed().as_secs_f64();
    report.finish();
    Ok(report)
}
