//! Exploration of the largest palette density a given 3-graph fails to
//! admit: exhaustive maximization at tiny color counts and seeded
//! feasibility-preserving local search at moderate ones. Both return
//! witnesses re-verified by the exact deciders, so every reported density is
//! a sound lower bound.

use rayon::prelude::*;
use serde::Serialize;

use crate::admit::decide_admission;
use crate::digraph::star_admission;
use crate::error::{Error, Result};
use crate::hypergraph::ThreeGraph;
use crate::palette::{Palette, Triple};
use crate::rational::Rat;
use crate::rng::SplitMix64;

/// `n^3` cap for the exhaustive enumeration of all `2^(n^3)` palettes.
pub const EXHAUSTIVE_TRIPLE_BUDGET: usize = 12;

/// Admission oracle choosing the digraph path for stars and the general
/// order-enumeration decider otherwise.
fn admits(f: &ThreeGraph, p: &Palette) -> Result<bool> {
    match f.as_star() {
        Some(k) => Ok(star_admission(p, k)?.admits()),
        None => Ok(decide_admission(f, p)?.admits()),
    }
}

// ---------------------------------------------------------------------------
// Exhaustive search
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct ExhaustiveResult {
    pub colors: usize,
    pub palettes_checked: usize,
    pub non_admitting_count: usize,
    pub best_density: Option<Rat>,
    /// Lexicographically least witness among the maximum-density
    /// non-admitting palettes; `None` when every palette is admitted
    /// (an edgeless graph admits everything vacuously).
    pub witness_triples: Option<Vec<Triple>>,
}

impl ExhaustiveResult {
    pub fn witness(&self) -> Option<Palette> {
        self.witness_triples
            .as_ref()
            .map(|t| Palette::new(self.colors, t.iter().copied()).expect("witness is valid"))
    }
}

/// Enumerates every palette on `n` colors, filters by non-admission with the
/// exact decider, and returns the maximum density with a lexicographically
/// least witness.
pub fn exhaustive_best(f: &ThreeGraph, n: usize) -> Result<ExhaustiveResult> {
    if n == 0 {
        return Err(Error::InvalidPalette(
            "exhaustive search needs n >= 1".into(),
        ));
    }
    let universe = n * n * n;
    if universe > EXHAUSTIVE_TRIPLE_BUDGET {
        return Err(Error::Budget {
            what: "exhaustive palette enumeration triple universe",
            requested: universe,
            limit: EXHAUSTIVE_TRIPLE_BUDGET,
        });
    }
    let all_triples: Vec<Triple> = {
        let m = n as u32;
        let mut v = Vec::with_capacity(universe);
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    v.push([a, b, c]);
                }
            }
        }
        v
    };
    let mut best: Option<Vec<Triple>> = None;
    let mut non_admitting = 0usize;
    for mask in 0u32..(1u32 << universe) {
        let triples: Vec<Triple> = (0..universe)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| all_triples[i])
            .collect();
        let palette = Palette::new(n, triples.iter().copied())?;
        if admits(f, &palette)? {
            continue;
        }
        non_admitting += 1;
        let better = match &best {
            None => true,
            Some(current) => {
                triples.len() > current.len()
                    || (triples.len() == current.len() && triples < *current)
            }
        };
        if better {
            best = Some(triples);
        }
    }
    let best_density = best
        .as_ref()
        .map(|t| Rat::from(t.len()) / Rat::from(universe));
    Ok(ExhaustiveResult {
        colors: n,
        palettes_checked: 1usize << universe,
        non_admitting_count: non_admitting,
        best_density,
        witness_triples: best,
    })
}

// ---------------------------------------------------------------------------
// Local search
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct TraceEntry {
    pub restart: usize,
    pub iteration: usize,
    pub triples: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalSearchResult {
    pub colors: usize,
    pub iterations: usize,
    pub restarts: usize,
    /// Heuristic lower bound: the best non-admitting palette found.
    pub best_density: Option<Rat>,
    pub witness_triples: Option<Vec<Triple>>,
    /// Improvement log, one entry per new best within each restart.
    pub trace: Vec<TraceEntry>,
    /// The witness was re-checked non-admitting by the exact decider.
    pub verified: bool,
}

impl LocalSearchResult {
    pub fn witness(&self) -> Option<Palette> {
        self.witness_triples
            .as_ref()
            .map(|t| Palette::new(self.colors, t.iter().copied()).expect("witness is valid"))
    }
}

/// Structured seed palettes for `n` colors: the star lower-bound palette on
/// `n` colors and the empty palette. Infeasible seeds are skipped by the
/// caller.
fn structured_seeds(n: usize) -> Vec<Palette> {
    let mut seeds = Vec::new();
    if n >= 2 {
        if let Ok(p) = crate::bounds::star_palette(n + 1) {
            seeds.push(p);
        }
    }
    seeds.push(Palette::empty(n));
    seeds
}

struct RestartOutcome {
    best_triples: Vec<Triple>,
    trace: Vec<TraceEntry>,
}

fn run_restart(
    f: &ThreeGraph,
    n: usize,
    start: Palette,
    iterations: usize,
    restart_index: usize,
    seed: u64,
) -> Result<RestartOutcome> {
    let mut rng = SplitMix64::child(seed, restart_index as u64);
    let mut current: Vec<Triple> = start.triples().copied().collect();
    let mut best = current.clone();
    let mut trace = vec![TraceEntry {
        restart: restart_index,
        iteration: 0,
        triples: best.len(),
    }];
    let universe = n * n * n;
    let triple_of = |i: usize| [(i / (n * n)) as u32, ((i / n) % n) as u32, (i % n) as u32];
    let mut stall = 0usize;
    const STALL_LIMIT: usize = 40;
    for iteration in 1..=iterations {
        if stall >= STALL_LIMIT && !current.is_empty() {
            // Plateau kick: drop a random triple. Removals keep
            // non-admission (fewer triples never create an admission).
            let victim = rng.next_usize(current.len());
            current.remove(victim);
            stall = 0;
            continue;
        }
        let candidate = triple_of(rng.next_usize(universe));
        match current.binary_search(&candidate) {
            Ok(_) => stall += 1,
            Err(pos) => {
                current.insert(pos, candidate);
                let trial = Palette::new(n, current.iter().copied())?;
                if admits(f, &trial)? {
                    // Adds that cause admission are rejected outright.
                    current.remove(pos);
                    stall += 1;
                } else {
                    stall = 0;
                    if current.len() > best.len() {
                        best = current.clone();
                        trace.push(TraceEntry {
                            restart: restart_index,
                            iteration,
                            triples: best.len(),
                        });
                    }
                }
            }
        }
    }
    Ok(RestartOutcome {
        best_triples: best,
        trace,
    })
}

/// Seeded hill climbing over triple additions with non-admission as the
/// feasibility oracle, restarting from the structured seeds and random
/// palettes. Deterministic for a fixed `(seed, iterations)` pair regardless
/// of the worker count; the result is re-verified before being returned.
pub fn local_search(
    f: &ThreeGraph,
    n: usize,
    iterations: usize,
    seed: u64,
) -> Result<LocalSearchResult> {
    if n == 0 {
        return Err(Error::InvalidPalette("local search needs n >= 1".into()));
    }
    // The empty palette is admitted exactly when f has no edges; then no
    // non-admitting palette exists at all.
    if admits(f, &Palette::empty(n))? {
        return Ok(LocalSearchResult {
            colors: n,
            iterations,
            restarts: 0,
            best_density: None,
            witness_triples: None,
            trace: Vec::new(),
            verified: false,
        });
    }
    let mut starts: Vec<Palette> = Vec::new();
    for seed_palette in structured_seeds(n) {
        if !admits(f, &seed_palette)? {
            starts.push(seed_palette);
        }
    }
    // Random starts: random triple subsets repaired to feasibility by
    // removing triples.
    let random_starts = 2usize;
    for i in 0..random_starts {
        let mut rng = SplitMix64::child(seed ^ 0x5EED, i as u64);
        let mut triples: Vec<Triple> = Vec::new();
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                for c in 0..n as u32 {
                    if rng.next_below(4) == 0 {
                        triples.push([a, b, c]);
                    }
                }
            }
        }
        let mut palette = Palette::new(n, triples.iter().copied())?;
        while admits(f, &palette)? {
            let drop = rng.next_usize(triples.len());
            triples.remove(drop);
            palette = Palette::new(n, triples.iter().copied())?;
        }
        starts.push(palette);
    }
    let restarts = starts.len();
    let per_restart = (iterations / restarts.max(1)).max(1);
    let outcomes: Vec<RestartOutcome> = starts
        .into_par_iter()
        .enumerate()
        .map(|(i, start)| run_restart(f, n, start, per_restart, i, seed))
        .collect::<Result<_>>()?;
    // Deterministic best-of reduction: most triples, then lexicographically
    // least triple list, then lowest restart index (iteration order).
    let mut best: Option<&RestartOutcome> = None;
    for outcome in &outcomes {
        let better = match best {
            None => true,
            Some(current) => {
                outcome.best_triples.len() > current.best_triples.len()
                    || (outcome.best_triples.len() == current.best_triples.len()
                        && outcome.best_triples < current.best_triples)
            }
        };
        if better {
            best = Some(outcome);
        }
    }
    let best = best.expect("at least one restart ran");
    let witness = Palette::new(n, best.best_triples.iter().copied())?;
    if admits(f, &witness)? {
        return Err(Error::Internal(
            "local search produced an admitting witness".into(),
        ));
    }
    let trace: Vec<TraceEntry> = outcomes.iter().flat_map(|o| o.trace.clone()).collect();
    Ok(LocalSearchResult {
        colors: n,
        iterations,
        restarts,
        best_density: Some(witness.density()?),
        witness_triples: Some(best.best_triples.clone()),
        trace,
        verified: true,
    })
}
