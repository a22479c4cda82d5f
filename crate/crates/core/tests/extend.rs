mod common;

use common::*;
use quantum_caps::caps::is_cap;
use quantum_caps::codes::quantum_check;
use quantum_caps::geometry::embed_point;
use quantum_caps::search::{extend_exhaustive, first_level_orbits, ExtendOptions};
use quantum_caps::{Cap, Mask};

fn check(seed: &Cap, target: usize) {
    let up = geom(seed.geometry().dim() + 1);
    let naive = naive_count(&up, &embed(seed), target - seed.size());
    let plain = extend_exhaustive(seed, target, ExtendOptions::default(), |_, w| {
        assert_eq!(w, 1)
    })
    .unwrap();
    assert_eq!(plain.leaves as u64, naive, "unreduced, seed {seed:?} target {target}");
    assert_eq!(plain.expanded_leaves, naive as u128);
    let mut weighted = 0u128;
    let reduced = extend_exhaustive(
        seed,
        target,
        ExtendOptions { orbit_reduction: true, checked: true, ..Default::default() },
        |_, w| weighted += w as u128,
    )
    .unwrap();
    assert_eq!(reduced.expanded_leaves, naive as u128, "reduced, seed {seed:?} target {target}");
    assert_eq!(reduced.quantum == 0, plain.quantum == 0);
}

#[test]
fn target_equal_to_seed_emits_seed() {
    let mut r = rng(1);
    let seed = random_cap_retry(&geom(3), 5, &mut r);
    let mut got = Vec::new();
    let st = extend_exhaustive(&seed, 5, ExtendOptions::default(), |c, _| got.push(c.clone())).unwrap();
    assert_eq!(st.leaves, 1);
    let want: Mask = seed.points().iter().map(|&p| embed_point(p).unwrap()).collect();
    assert_eq!(got[0].members(), &want);
}

#[test]
fn single_point_extensions_of_ovoid() {
    let q = elliptic_quadric();
    let up = geom(4);
    let seed = embed(&q);
    let brute = (0..up.num_points())
        .filter(|&p| !seed.contains(&p) && !up.hyperplane_members(0).contains(p))
        .filter(|&p| {
            let mut v = seed.clone();
            v.push(p);
            is_cap(&up, &v)
        })
        .count();
    let st = extend_exhaustive(&q, 18, ExtendOptions::default(), |_, _| {}).unwrap();
    assert_eq!(st.leaves as usize, brute);
    let red = extend_exhaustive(&q, 18, ExtendOptions { orbit_reduction: true, ..Default::default() }, |_, _| {})
        .unwrap();
    assert_eq!(red.expanded_leaves as usize, brute);
    let orbits = first_level_orbits(&up, &q);
    assert_eq!(orbits.iter().map(|o| o.size).sum::<usize>(), 256);
}

#[test]
fn leaf_counts_match_naive_enumeration_in_pg3() {
    let mut r = rng(2);
    let g = geom(2);
    for (size, target) in [(1, 5), (2, 6), (3, 7), (4, 8), (5, 8), (6, 8), (3, 6)] {
        let seed = random_cap_retry(&g, size, &mut r);
        check(&seed, target);
    }
}

#[test]
fn leaf_counts_match_naive_enumeration_in_pg4() {
    let mut r = rng(3);
    let g = geom(3);
    for (size, target) in [(1, 4), (3, 6), (4, 7), (5, 8), (6, 8)] {
        let seed = random_cap_retry(&g, size, &mut r);
        check(&seed, target);
    }
}

#[test]
fn parity_prune_finds_the_same_quantum_caps() {
    let mut r = rng(4);
    let g = geom(2);
    for (size, target) in [(4, 6), (4, 8), (6, 8), (5, 7), (6, 10)] {
        let seed = random_cap_retry(&g, size, &mut r);
        let mut a = Vec::new();
        let base = ExtendOptions { orbit_reduction: true, ..Default::default() };
        extend_exhaustive(&seed, target, base, |c, _| {
            if quantum_check(c).unwrap().even {
                a.push(*c.members())
            }
        })
        .unwrap();
        let mut b = Vec::new();
        extend_exhaustive(&seed, target, ExtendOptions { parity_prune: true, ..base }, |c, _| {
            if quantum_check(c).unwrap().even {
                b.push(*c.members())
            }
        })
        .unwrap();
        a.sort();
        b.sort();
        assert_eq!(a, b, "seed {seed:?} target {target}");
    }
}
