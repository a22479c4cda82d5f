mod common;

use std::collections::BTreeSet;

use quantum_caps::search::{generate_catalog, run_search, CatalogOptions, SearchConfig, SearchReport, SeedClass, SeedSelection};
use quantum_caps::Error;

fn plane_seeds() -> Vec<SeedClass> {
    let cat = generate_catalog(&common::geom(2), &CatalogOptions::default()).unwrap();
    (0..=cat.max_size()).flat_map(|s| cat.classes(s)).collect()
}

fn config(target: usize) -> SearchConfig {
    let mut c = SearchConfig::new(target);
    c.dim = 3;
    c.exploratory = true;
    c
}

fn quantum_set(r: &SearchReport) -> BTreeSet<Vec<String>> {
    r.quantum_caps.iter().map(|q| q.cap.points.clone()).collect()
}

#[test]
fn small_search_is_complete_and_verifies() {
    let seeds = plane_seeds();
    let r = run_search(&config(12), &seeds).unwrap();
    assert!(r.complete);
    assert!(r.verify());
    assert_eq!(r.seeds.iter().map(|s| s.seed_size).collect::<BTreeSet<_>>(), [4, 6].into());
    assert!(!r.quantum_caps.is_empty());
    for q in &r.quantum_caps {
        assert_eq!(q.profile.quantum, Some([12, 4, 4]));
        let cap = q.cap.to_cap().unwrap();
        let seed = seeds.iter().find(|s| s.class_id == q.class_id).unwrap();
        let in_plane = cap.members().iter().filter(|&p| cap.geometry().point_vector(p).coords()[3].is_zero()).count();
        assert_eq!(in_plane, seed.size());
    }
    // no quantum 10-caps span PG(3,4)
    let r = run_search(&config(10), &seeds).unwrap();
    assert!(r.complete && r.quantum_caps.is_empty());

    let mut tampered = r.clone();
    tampered.totals.nodes_visited += 1;
    assert!(!tampered.verify());
}

#[test]
fn resumed_run_matches_uninterrupted_run() {
    let seeds = plane_seeds();
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("run.ckpt");
    let full = run_search(&config(10), &seeds).unwrap();

    let mut cfg = config(10);
    cfg.checkpoint = Some(ck.clone());
    cfg.max_nodes = Some(40);
    let mut r = run_search(&cfg, &seeds).unwrap();
    assert!(!r.complete);
    cfg.resume = true;
    let mut rounds = 1;
    while !r.complete {
        r = run_search(&cfg, &seeds).unwrap();
        rounds += 1;
        assert!(rounds < 10_000);
    }
    assert!(rounds > 2);
    assert_eq!(r.report_digest, full.report_digest);
}

#[test]
fn worker_count_does_not_change_the_report() {
    let seeds = plane_seeds();
    let a = run_search(&config(9), &seeds).unwrap();
    let mut cfg = config(9);
    cfg.workers = 3;
    let b = run_search(&cfg, &seeds).unwrap();
    assert_eq!(a.report_digest, b.report_digest);
}

#[test]
fn checkpoint_from_other_config_is_rejected() {
    let seeds = plane_seeds();
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("run.ckpt");
    let mut cfg = config(10);
    cfg.checkpoint = Some(ck.clone());
    cfg.max_nodes = Some(40);
    run_search(&cfg, &seeds).unwrap();

    let mut other = cfg.clone();
    other.resume = true;
    other.parity_prune = true;
    assert!(matches!(run_search(&other, &seeds), Err(Error::Checkpoint(_))));

    let mut other = cfg.clone();
    other.resume = true;
    other.seeds = SeedSelection::Ids(vec!["4-0".into()]);
    assert!(matches!(run_search(&other, &seeds), Err(Error::Checkpoint(_))));

    // the original still resumes
    let mut same = cfg.clone();
    same.resume = true;
    run_search(&same, &seeds).unwrap();
}

#[test]
fn corrupted_checkpoint_is_rejected() {
    let seeds = plane_seeds();
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("run.ckpt");
    let mut cfg = config(10);
    cfg.checkpoint = Some(ck.clone());
    cfg.max_nodes = Some(40);
    run_search(&cfg, &seeds).unwrap();
    let text = std::fs::read_to_string(&ck).unwrap();
    let tampered = text.replacen("\"nodes\":", "\"nodes\":1", 1);
    assert_ne!(text, tampered);
    std::fs::write(&ck, tampered).unwrap();
    cfg.resume = true;
    assert!(matches!(run_search(&cfg, &seeds), Err(Error::Checkpoint(_))));
    std::fs::write(&ck, "{").unwrap();
    assert!(matches!(run_search(&cfg, &seeds), Err(Error::Checkpoint(_))));
}

#[test]
fn resume_without_checkpoint_file_fails() {
    let seeds = plane_seeds();
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(10);
    cfg.checkpoint = Some(dir.path().join("missing"));
    cfg.resume = true;
    assert!(run_search(&cfg, &seeds).is_err());
}

#[test]
fn prunes_keep_the_quantum_caps() {
    let seeds = plane_seeds();
    for target in [8, 9, 10, 12, 14] {
        let plain = run_search(&config(target), &seeds).unwrap();
        let mut cfg = config(target);
        cfg.parity_prune = true;
        let pruned = run_search(&cfg, &seeds).unwrap();
        assert_eq!(quantum_set(&plain), quantum_set(&pruned), "target {target}");
        assert!(pruned.totals.nodes_visited <= plain.totals.nodes_visited);

        // the max-section prune drops caps whose largest section exceeds
        // the seed, which are found again from the larger seed
        cfg.max_section_prune = true;
        let both = run_search(&cfg, &seeds).unwrap();
        assert!(quantum_set(&both).is_subset(&quantum_set(&plain)), "target {target}");
    }
}

#[test]
fn unknown_or_inadmissible_seed_is_a_config_error() {
    let seeds = plane_seeds();
    let mut cfg = config(10);
    cfg.seeds = SeedSelection::Ids(vec!["99-0".into()]);
    assert!(matches!(run_search(&cfg, &seeds), Err(Error::Config(_))));
    cfg.seeds = SeedSelection::Ids(vec!["5-0".into()]);
    assert!(matches!(run_search(&cfg, &seeds), Err(Error::Config(_))));
    let strict = SearchConfig::new(36);
    assert!(matches!(run_search(&strict, &[]), Err(Error::Config(_))));
}
