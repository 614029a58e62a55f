//! Acceptance suite: one test per release criterion, each printing a
//! pass/fail line (`cargo test --test acceptance -- --nocapture` to see
//! them). Every tolerance is exact; timings are printed for the record, not
//! asserted, so a loaded CI box cannot flake the suite.

use std::time::Instant;

use palette_turan::admit::{
    check_certificate, decide_admission, decide_admission_full_orders, AdmissionOutcome,
};
use palette_turan::bounds::{
    assembly_identity, chain_verify, refined_threshold, star_palette, star_palette_density_formula,
    tangent_thresholds, verify_f_tangent, verify_g_tangent, ChainOutcome, RefinedOutcome,
};
use palette_turan::digraph::{
    max_transitive_tournament, star_admission, verify_caro_wei, Digraph, StarAdmission,
};
use palette_turan::hypergraph::{contains_copy, rodl_construct, star};
use palette_turan::palette::{Palette, Triple};
use palette_turan::rational::Rat;
use palette_turan::rng::SplitMix64;
use palette_turan::search::exhaustive_best;

fn report(number: u32, name: &str, started: Instant) {
    println!(
        "[acceptance] criterion {number:02} ({name}): PASS in {:.2?}",
        started.elapsed()
    );
}

fn random_palette(rng: &mut SplitMix64, max_colors: usize) -> Palette {
    let n = 1 + rng.next_usize(max_colors);
    let keep_in = 1 + rng.next_below(7); // triple kept with probability keep_in/8
    let mut triples: Vec<Triple> = Vec::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            for c in 0..n as u32 {
                if rng.next_below(8) < keep_in {
                    triples.push([a, b, c]);
                }
            }
        }
    }
    Palette::new(n, triples).expect("generated triples are valid")
}

#[test]
fn criterion_01_construction_density() {
    let t = Instant::now();
    for k in 3..=200 {
        assert_eq!(
            star_palette(k).unwrap().density().unwrap(),
            star_palette_density_formula(k).unwrap(),
            "construction density mismatch at k={k}"
        );
    }
    report(1, "construction density 3..=200", t);
}

#[test]
fn criterion_02_non_admission_of_the_construction() {
    let t = Instant::now();
    for k in 3..=10 {
        let p = star_palette(k).unwrap();
        match star_admission(&p, k).unwrap() {
            StarAdmission::NotAdmitted { max_tournament } => {
                assert_eq!(max_tournament, k - 1, "max tournament at k={k}")
            }
            StarAdmission::Admitted { .. } => panic!("S_{k} must not admit its palette"),
        }
    }
    for k in [3usize, 4] {
        let p = star_palette(k).unwrap();
        let outcome = decide_admission(&star(k).unwrap(), &p).unwrap();
        assert!(
            !outcome.admits(),
            "general decider disagrees at k={k}: {outcome:?}"
        );
    }
    report(2, "construction non-admission, both deciders", t);
}

#[test]
fn criterion_03_tightness_one_size_down() {
    let t = Instant::now();
    for k in 3..=10 {
        let p = star_palette(k).unwrap();
        match star_admission(&p, k - 1).unwrap() {
            StarAdmission::Admitted { certificate, .. } => {
                let f = star(k - 1).unwrap();
                assert!(check_certificate(&f, &p, &certificate).unwrap(), "k={k}");
            }
            StarAdmission::NotAdmitted { .. } => panic!("S_{} must admit", k - 1),
        }
    }
    report(3, "tightness: certificate one size down", t);
}

#[test]
fn criterion_04_two_color_optimum() {
    let t = Instant::now();
    let result = exhaustive_best(&star(3).unwrap(), 2).unwrap();
    assert_eq!(result.best_density, Some(Rat::ratio(1, 4)));
    let witness = result.witness_triples.clone().unwrap();
    let expected: Vec<Triple> = star_palette(3).unwrap().sorted_triples().to_vec();
    // The witness must match the construction up to the color swap; the
    // construction is swap-invariant, so up to the swap means exactly.
    let swapped: Vec<Triple> = {
        let mut v: Vec<Triple> = witness
            .iter()
            .map(|t| [1 - t[0], 1 - t[1], 1 - t[2]])
            .collect();
        v.sort_unstable();
        v
    };
    assert!(witness == expected || swapped == expected);
    report(
        4,
        "two-color optimum is 1/4 with the construction witness",
        t,
    );
}

#[test]
fn criterion_05_thresholds_and_identity() {
    let t = Instant::now();
    assert_eq!(tangent_thresholds(), (48, 30));
    for k in 2..=1001 {
        assert!(assembly_identity(k).unwrap(), "identity fails at k={k}");
    }
    report(5, "thresholds (48, 30) and 1000 identity values", t);
}

#[test]
fn criterion_06_theorem_backed_suites() {
    let t = Instant::now();

    // Density bound on 1000 random palettes.
    let mut rng = SplitMix64::new(601);
    for i in 0..1000 {
        let p = random_palette(&mut rng, 6);
        let report = palette_turan::bounds::verify_incl_excl_bound(&p).unwrap();
        assert!(report.pass, "density bound failed on palette {i}");
    }

    // Caro-Wei bound on 300 random loop-free digraphs at k = maxTT + 1.
    let mut rng = SplitMix64::new(602);
    for i in 0..300 {
        let n = 2 + rng.next_usize(13); // up to 14 vertices
        let d = Digraph::random(n, 1 + rng.next_below(9), 10, &mut rng);
        let (max_tt, _) = max_transitive_tournament(&d, n + 1).unwrap();
        let report = verify_caro_wei(&d, max_tt + 1).unwrap();
        assert!(
            report.applicable && report.pass,
            "digraph {i} on {n} vertices"
        );
    }

    // Degree bounds on 500 minimality-reduced random palettes.
    let mut rng = SplitMix64::new(603);
    for i in 0..500 {
        let p = random_palette(&mut rng, 6)
            .minimality_reduce()
            .unwrap()
            .palette;
        let report = p.verify_degree_bounds().unwrap();
        assert!(report.pass, "degree bound failed on reduced palette {i}");
    }

    // Tangent inequalities at 100 random in-range points per k.
    let mut rng = SplitMix64::new(604);
    for k in [31usize, 48, 100] {
        for _ in 0..100 {
            let jitter = Rat::ratio(rng.next_below(6000) as i64, 1 + rng.next_below(60) as i64);
            let fx = Rat::from_int(5) * Rat::from(k - 1) / Rat::from(k - 3) + &jitter;
            let rf = verify_f_tangent(k, &fx).unwrap();
            assert_eq!(rf.holds, Some(true), "f tangent k={k} x={fx}");
            assert!(rf.formulations_agree);
            let gx = Rat::from_int(3) * Rat::from(k - 1) / (Rat::from(2 * k) - Rat::from_int(6))
                + &jitter;
            let rg = verify_g_tangent(k, &gx).unwrap();
            assert_eq!(rg.holds, Some(true), "g tangent k={k} x={gx}");
            assert!(rg.formulations_agree);
        }
    }

    report(6, "theorem-backed randomized suites, zero failures", t);
}

#[test]
fn criterion_07_chain_reproduction_at_48() {
    let t = Instant::now();
    let reduced = star_palette(48).unwrap().minimality_reduce().unwrap();
    assert!(reduced.removed_original_colors.is_empty());
    let report = chain_verify(&reduced.palette, 48).unwrap();
    assert!(report.all_pass(), "chain steps: {:#?}", report.steps);
    match report.outcome {
        ChainOutcome::Completed {
            holds, equality, ..
        } => {
            assert!(holds);
            assert!(equality, "the construction must meet the bound exactly");
        }
        other => panic!("unexpected chain outcome {other:?}"),
    }
    self::report(7, "full chain at k=48 with equality", t);
}

#[test]
fn criterion_08_refined_threshold_scan() {
    let t = Instant::now();
    let scan = refined_threshold(31, 48).unwrap();
    let at_48 = scan.verdicts.iter().find(|v| v.k == 48).unwrap();
    assert_eq!(at_48.outcome, RefinedOutcome::Holds, "k=48 must hold");
    assert!(scan
        .verdicts
        .iter()
        .all(|v| v.outcome != RefinedOutcome::Unknown));
    assert_eq!(
        scan.verdicts.first().unwrap().outcome,
        RefinedOutcome::Fails,
        "k=31 must not hold"
    );
    // Full optimization trace for the record.
    for v in &scan.verdicts {
        println!(
            "[acceptance]   refined k={}: {:?}, sup in [{}, {}], grid best {}, witness value {}{}",
            v.k,
            v.outcome,
            v.sup_lower.decimal_string(9),
            v.sup_upper.decimal_string(9),
            v.grid_best.decimal_string(9),
            v.witness.value.decimal_string(9),
            v.witness
                .y
                .as_ref()
                .map(|y| format!(" (two points {} and {})", v.witness.x, y))
                .unwrap_or_default(),
        );
    }
    let boundary = scan.least_holds.expect("some verdict holds in range");
    if boundary != 40 {
        println!(
            "[acceptance]   NOTE: optimization over the stated constraint set \
             (floor (k-1)^2/(9(k-2)), mean <= k-1) yields boundary {boundary}, \
             not the soft target 40; the k={boundary} certificate and the \
             per-k witnesses above document the discrepancy"
        );
    }
    assert_eq!(boundary, 48);
    report(
        8,
        "refined scan: k=48 holds, boundary reported with trace",
        t,
    );
}

#[test]
fn criterion_09_oracle_equivalences() {
    let t = Instant::now();

    // Exact tournament solver vs subset dynamic programming.
    fn max_tt_subset_oracle(d: &Digraph) -> usize {
        let n = d.vertex_count();
        let full = 1usize << n;
        let out_mask: Vec<usize> = (0..n)
            .map(|v| {
                (0..n)
                    .filter(|&w| w != v && d.has_arc(v, w))
                    .fold(0usize, |m, w| m | (1 << w))
            })
            .collect();
        let mut feasible = vec![false; full];
        feasible[0] = true;
        let mut best = 0usize;
        for mask in 1..full {
            let mut bits = mask;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                let rest = mask & !(1 << v);
                if feasible[rest] && (out_mask[v] & rest) == rest {
                    feasible[mask] = true;
                    break;
                }
            }
            if feasible[mask] {
                best = best.max(mask.count_ones() as usize);
            }
        }
        best
    }
    let mut rng = SplitMix64::new(901);
    for i in 0..100 {
        let n = 2 + rng.next_usize(11); // up to 12 vertices
        let d = Digraph::random(n, 1 + rng.next_below(9), 10, &mut rng);
        let (size, witness) = max_transitive_tournament(&d, n + 1).unwrap();
        assert!(witness.is_valid(&d));
        assert_eq!(
            size,
            max_tt_subset_oracle(&d),
            "instance {i} on {n} vertices"
        );
    }

    // Star decider vs general decider.
    let mut rng = SplitMix64::new(902);
    for i in 0..200 {
        let p = random_palette(&mut rng, 3);
        let k = 2 + rng.next_usize(3); // k <= 4
        let fast = star_admission(&p, k).unwrap().admits();
        let slow = decide_admission(&star(k).unwrap(), &p).unwrap().admits();
        assert_eq!(fast, slow, "instance {i}: k={k}, palette {:?}", p);
    }

    // Quotiented vs full order enumeration.
    let mut rng = SplitMix64::new(903);
    for i in 0..50 {
        let vertices = 3 + rng.next_usize(3); // up to 5
        let mut edges = Vec::new();
        for a in 0..vertices {
            for b in a + 1..vertices {
                for c in b + 1..vertices {
                    if rng.next_bool() {
                        edges.push([a, b, c]);
                    }
                }
            }
        }
        let f = palette_turan::hypergraph::ThreeGraph::new(vertices, edges).unwrap();
        let p = random_palette(&mut rng, 2);
        let quotiented = decide_admission(&f, &p).unwrap().admits();
        let full = decide_admission_full_orders(&f, &p).unwrap().admits();
        assert_eq!(quotiented, full, "instance {i}");
    }

    report(9, "oracle equivalences, zero disagreements", t);
}

#[test]
fn criterion_10_random_construction_is_star_free() {
    let t = Instant::now();
    let p = star_palette(3).unwrap();
    let pattern = star(3).unwrap();
    for seed in 1..=5u64 {
        let sample = rodl_construct(&p, 25, seed).unwrap();
        let copy = contains_copy(&sample.graph, &pattern).unwrap();
        assert!(
            copy.is_none(),
            "seed {seed} produced a copy: {copy:?} in a graph with {} edges",
            sample.graph.edge_count()
        );
    }
    report(
        10,
        "random construction contains no star copy, seeds 1..=5",
        t,
    );
}

// Non-admission evidence shape used by the JSON surface: keep it stable.
#[test]
fn non_admission_evidence_shapes() {
    let p = star_palette(3).unwrap();
    let outcome = decide_admission(&star(3).unwrap(), &p).unwrap();
    match outcome {
        AdmissionOutcome::NotAdmitted { evidence } => {
            let json = serde_json::to_string(&evidence).unwrap();
            assert!(json.contains("OrderClassesRefuted"));
        }
        AdmissionOutcome::Admitted { .. } => panic!("expected refusal"),
    }
}
