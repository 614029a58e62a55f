//! Invariant suites beyond the acceptance gate: structural palette
//! identities as property tests, the copy-search oracle comparison, the
//! random-construction freeness and concentration checks, and the chain on
//! larger star palettes and on random low-density palettes.

use proptest::collection::vec;
use proptest::prelude::*;

use palette_turan::admit::decide_admission;
use palette_turan::bounds::{chain_verify, star_palette, ChainOutcome, StepStatus};
use palette_turan::hypergraph::{
    contains_copy, rodl_construct, star, subset_density_profile, ThreeGraph,
};
use palette_turan::palette::{Palette, Role, Triple};
use palette_turan::rational::Rat;
use palette_turan::rng::SplitMix64;

// ---------------------------------------------------------------------------
// proptest strategies
// ---------------------------------------------------------------------------

fn palette_strategy(max_colors: usize) -> impl Strategy<Value = Palette> {
    (1..=max_colors).prop_flat_map(move |n| {
        vec(any::<bool>(), n * n * n).prop_map(move |mask| {
            let triples: Vec<Triple> = mask
                .iter()
                .enumerate()
                .filter(|(_, &keep)| keep)
                .map(|(i, _)| [(i / (n * n)) as u32, ((i / n) % n) as u32, (i % n) as u32])
                .collect();
            Palette::new(n, triples).expect("mask palette is valid")
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn removal_accounting_identity(p in palette_strategy(5), pick in 0usize..5) {
        let a = pick % p.colors();
        let removal = p.remove_color(a).unwrap();
        let containing = p.triples().filter(|t| t.contains(&(a as u32))).count();
        prop_assert_eq!(p.triple_count(), removal.palette.triple_count() + containing);
    }

    #[test]
    fn degree_codegree_partition(p in palette_strategy(5)) {
        let table = p.good_pairs();
        for role in Role::ALL {
            for a in 0..p.colors() {
                prop_assert_eq!(table.degree(role, a) + table.codegree(role, a), p.colors());
                prop_assert_eq!(table.e(role, a) + table.e_prime(role, a), Rat::one());
            }
        }
    }

    #[test]
    fn good_pair_role_swap(p in palette_strategy(4)) {
        let table = p.good_pairs();
        for role in Role::ALL {
            for a in 0..p.colors() {
                for b in 0..p.colors() {
                    prop_assert_eq!(table.is_good(role, a, b), table.is_good(role.swapped(), b, a));
                }
            }
        }
    }

    #[test]
    fn reduction_is_idempotent_and_never_loses_density(p in palette_strategy(5)) {
        let once = p.minimality_reduce().unwrap();
        if once.palette.colors() > 0 {
            prop_assert!(once.palette.density().unwrap() >= p.density().unwrap());
        }
        let twice = once.palette.minimality_reduce().unwrap();
        prop_assert_eq!(&once.palette, &twice.palette);
        prop_assert!(twice.removed_original_colors.is_empty());
    }

    #[test]
    fn density_bound_holds_on_arbitrary_palettes(p in palette_strategy(5)) {
        let report = palette_turan::bounds::verify_incl_excl_bound(&p).unwrap();
        prop_assert!(report.pass);
    }
}

// ---------------------------------------------------------------------------
// Copy search against a no-pruning oracle
// ---------------------------------------------------------------------------

/// Enumerates every injection outright and checks all pattern edges at the
/// end; no pruning anywhere, so it shares nothing with the real search.
fn naive_contains(host: &ThreeGraph, pattern: &ThreeGraph) -> bool {
    let hv = host.vertices();
    let pv = pattern.vertices();
    if pv > hv {
        return false;
    }
    fn rec(
        host: &ThreeGraph,
        pattern: &ThreeGraph,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if image.len() == pattern.vertices() {
            return pattern
                .edges()
                .all(|e| host.contains_edge(&[image[e[0]], image[e[1]], image[e[2]]]));
        }
        for candidate in 0..host.vertices() {
            if used[candidate] {
                continue;
            }
            used[candidate] = true;
            image.push(candidate);
            if rec(host, pattern, image, used) {
                return true;
            }
            image.pop();
            used[candidate] = false;
        }
        false
    }
    rec(host, pattern, &mut Vec::new(), &mut vec![false; hv])
}

fn random_graph(rng: &mut SplitMix64, vertices: usize, num: u64, den: u64) -> ThreeGraph {
    let mut edges = Vec::new();
    for a in 0..vertices {
        for b in a + 1..vertices {
            for c in b + 1..vertices {
                if rng.next_below(den) < num {
                    edges.push([a, b, c]);
                }
            }
        }
    }
    ThreeGraph::new(vertices, edges).unwrap()
}

#[test]
fn copy_search_agrees_with_naive_enumeration() {
    let mut rng = SplitMix64::new(1414);
    for i in 0..100 {
        let (hv, hnum) = (4 + rng.next_usize(6), 1 + rng.next_below(5));
        let host = random_graph(&mut rng, hv, hnum, 6);
        let (pv, pnum) = (3 + rng.next_usize(3), 1 + rng.next_below(4));
        let pattern = random_graph(&mut rng, pv, pnum, 6);
        let fast = contains_copy(&host, &pattern).unwrap();
        let slow = naive_contains(&host, &pattern);
        assert_eq!(fast.is_some(), slow, "instance {i}");
        if let Some(image) = fast {
            for e in pattern.edges() {
                assert!(host.contains_edge(&[image[e[0]], image[e[1]], image[e[2]]]));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Random construction invariants
// ---------------------------------------------------------------------------

#[test]
fn construction_avoids_both_small_stars() {
    // Freeness is order-independent: any copy would yield an admission.
    for (k, n, seeds) in [(3usize, 30usize, 1..=3u64), (4, 20, 1..=3u64)] {
        let p = star_palette(k).unwrap();
        let pattern = star(k).unwrap();
        for seed in seeds {
            let sample = rodl_construct(&p, n, seed).unwrap();
            assert!(
                contains_copy(&sample.graph, &pattern).unwrap().is_none(),
                "k={k} n={n} seed={seed}"
            );
        }
    }
}

#[test]
fn construction_density_concentrates() {
    // Statistical smoke test: the average edge density over 20 seeds at
    // n = 40 sits within 0.05 of the palette density.
    let p = star_palette(3).unwrap();
    let n = 40usize;
    let binom3 = n * (n - 1) * (n - 2) / 6;
    let seeds: Vec<u64> = (1..=20).collect();
    let mut total = Rat::zero();
    for &seed in &seeds {
        let sample = rodl_construct(&p, n, seed).unwrap();
        total += &(Rat::from(sample.graph.edge_count()) / Rat::from(binom3));
    }
    let mean = total / Rat::from(seeds.len());
    let gap = (mean.clone() - Rat::ratio(1, 4)).abs();
    println!(
        "[properties] construction mean density over seeds {seeds:?}: {} (gap {})",
        mean.decimal_string(6),
        gap.decimal_string(6)
    );
    assert!(gap < Rat::ratio(1, 20));
}

#[test]
fn subset_profile_is_observational() {
    // The profile is reported, not asserted: only structural sanity here.
    let p = star_palette(4).unwrap();
    let sample = rodl_construct(&p, 60, 9).unwrap();
    let profile = subset_density_profile(&sample.graph, 20, 11).unwrap();
    for s in &profile.per_size {
        assert!(s.min_density >= Rat::zero());
        assert!(s.mean_density <= Rat::one());
        assert!(s.min_density <= s.mean_density);
    }
    let large = profile.per_size.iter().filter(|s| s.size >= 30);
    for s in large {
        println!(
            "[properties] rodl(S_4 palette, 60) subsets of {}: mean density {}",
            s.size,
            s.mean_density.decimal_string(6)
        );
    }
}

// ---------------------------------------------------------------------------
// Admission monotonicity
// ---------------------------------------------------------------------------

#[test]
fn admission_is_monotone_in_the_triple_set() {
    let mut rng = SplitMix64::new(515);
    let f = star(3).unwrap();
    for _ in 0..50 {
        let n = 1 + rng.next_usize(2);
        let mut base: Vec<Triple> = Vec::new();
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                for c in 0..n as u32 {
                    if rng.next_below(3) == 0 {
                        base.push([a, b, c]);
                    }
                }
            }
        }
        let small = Palette::new(n, base.iter().copied()).unwrap();
        let mut extended = base.clone();
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                for c in 0..n as u32 {
                    if !extended.contains(&[a, b, c]) && rng.next_below(3) == 0 {
                        extended.push([a, b, c]);
                    }
                }
            }
        }
        let big = Palette::new(n, extended).unwrap();
        if decide_admission(&f, &small).unwrap().admits() {
            assert!(
                decide_admission(&f, &big).unwrap().admits(),
                "supersets keep admission"
            );
        }
    }
}

// ---------------------------------------------------------------------------
// Refined supremum certificate under dense random probing
// ---------------------------------------------------------------------------

#[test]
fn certified_supremum_at_48_survives_dense_probing() {
    // The certified verdict says no feasible one- or two-point profile at
    // k = 48 exceeds the target; hammer it with random mean-binding pairs,
    // concentrating near the touching point where the margin vanishes.
    let v = palette_turan::bounds::refined_verdict(48).unwrap();
    let (floor, target) = (v.floor.clone(), v.target.clone());
    let km1 = Rat::from_int(47);
    let mut rng = SplitMix64::new(4848);
    for _ in 0..2000 {
        // x in [floor, 47), denser near 47; y in (47, 47 + 47/2^j].
        let num = rng.next_below(1_000_000) as i64;
        let x = &floor + (&km1 - &floor) * Rat::ratio(num, 1_000_000);
        if x >= km1 {
            continue;
        }
        let j = 1 + rng.next_below(40) as i64;
        let offset_num = 1 + rng.next_below(1000) as i64;
        let y = &km1 + Rat::ratio(offset_num, 1000) * Rat::ratio(1, 2).pow(j as u32 % 20);
        let weight_x = (&y - &km1) / (&y - &x);
        let value = &weight_x * palette_turan::bounds::f_of_cap(48, &x)
            + (Rat::one() - &weight_x) * palette_turan::bounds::f_of_cap(48, &y);
        assert!(
            value <= target,
            "profile x={x} y={y} beats the certified supremum"
        );
    }
}

#[test]
fn exhaustive_best_is_invariant_under_vertex_relabeling() {
    // The objective only depends on the isomorphism type of the graph.
    let original = star(3).unwrap();
    let relabeled = ThreeGraph::new(
        4,
        original
            .edges()
            .map(|e| [3 - e[0], 3 - e[1], 3 - e[2]])
            .collect::<Vec<_>>(),
    )
    .unwrap();
    let a = palette_turan::search::exhaustive_best(&original, 2).unwrap();
    let b = palette_turan::search::exhaustive_best(&relabeled, 2).unwrap();
    assert_eq!(a.best_density, b.best_density);
    assert_eq!(a.non_admitting_count, b.non_admitting_count);
}

// ---------------------------------------------------------------------------
// Chain behavior across palettes and levels
// ---------------------------------------------------------------------------

#[test]
fn chain_meets_the_bound_exactly_at_60_and_100() {
    for k in [60usize, 100] {
        let reduced = star_palette(k).unwrap().minimality_reduce().unwrap();
        let report = chain_verify(&reduced.palette, k).unwrap();
        assert!(report.all_pass(), "k={k}: {:#?}", report.steps);
        match report.outcome {
            ChainOutcome::Completed { equality, .. } => assert!(equality, "k={k}"),
            ref other => panic!("unexpected outcome {other:?}"),
        }
    }
}

#[test]
fn chain_never_fails_on_random_reduced_palettes() {
    // Low-density palettes leave the tangent steps inapplicable; whatever
    // is applicable must pass.
    let mut rng = SplitMix64::new(717);
    let mut low_density_seen = 0usize;
    for _ in 0..100 {
        let n = 1 + rng.next_usize(5);
        let mut triples: Vec<Triple> = Vec::new();
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                for c in 0..n as u32 {
                    if rng.next_below(8) == 0 {
                        triples.push([a, b, c]);
                    }
                }
            }
        }
        let reduced = Palette::new(n, triples)
            .unwrap()
            .minimality_reduce()
            .unwrap();
        if reduced.palette.colors() == 0 {
            continue;
        }
        if reduced.palette.density().unwrap() <= Rat::ratio(1, 4) {
            low_density_seen += 1;
        }
        let report = chain_verify(&reduced.palette, 48).unwrap();
        assert!(
            report.steps.iter().all(|s| s.status != StepStatus::Fail),
            "steps: {:#?}",
            report.steps
        );
    }
    assert!(
        low_density_seen >= 20,
        "sampler drifted: {low_density_seen}"
    );
}
