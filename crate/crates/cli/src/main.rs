//! Command-line front end: palette inspection, admissibility decisions, the
//! digraph reduction, the verification suites, the bounds chain and the
//! search commands, with machine-readable `--json` output for CI.
//!
//! Exit codes separate mathematical content from tooling state: `0` means a
//! verdict was computed (whatever it says), `1` is a usage or input error,
//! `2` a refused search budget, `3` an internal invariant violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use palette_turan::admit::{check_certificate, decide_admission_with_budget, AdmissionOutcome};
use palette_turan::bounds::{
    chain_verify, refined_threshold, star_palette, star_palette_density_formula,
    tangent_thresholds, verify_f_tangent, verify_g_tangent, verify_incl_excl_bound,
};
use palette_turan::digraph::{
    build_digraph, max_transitive_tournament_with_budget, star_admission, verify_caro_wei, Digraph,
    DigraphBuild, StarAdmission, TT_VERTEX_BUDGET,
};
use palette_turan::error::Error;
use palette_turan::formats;
use palette_turan::hypergraph::{contains_copy, rodl_construct, star, subset_density_profile};
use palette_turan::palette::{Palette, Role};
use palette_turan::rational::Rat;
use palette_turan::rng::SplitMix64;
use palette_turan::search::{exhaustive_best, local_search};

const LONG_VERSION: &str = concat!(
    env!("CARGO_PKG_VERSION"),
    " (JSON format v1)" // keep in sync with palette_turan::FORMAT_VERSION
);

#[derive(Parser)]
#[command(name = "palette-turan", version, long_version = LONG_VERSION)]
#[command(about = "Exact palette toolkit for uniform Turán density lower bounds")]
struct Cli {
    /// Emit a single JSON document instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for parallel-capable operations (default: the
    /// PALETTE_TURAN_THREADS environment variable, else 1). Results are
    /// identical for every thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect and transform palettes.
    Palette {
        #[command(subcommand)]
        command: PaletteCmd,
    },
    /// Inspect and generate 3-graphs.
    Graph {
        #[command(subcommand)]
        command: GraphCmd,
    },
    /// Decide whether a graph admits a palette (general decider).
    Admit {
        #[arg(long)]
        palette: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        /// Raise the vertex budget of the order enumeration.
        #[arg(long, default_value_t = palette_turan::admit::ORDER_ENUMERATION_BUDGET)]
        max_vertices: usize,
    },
    /// The palette digraph and the star-specialized decision.
    Digraph {
        #[command(subcommand)]
        command: DigraphCmd,
    },
    /// Randomized and instance verification suites.
    Verify {
        #[command(subcommand)]
        command: VerifyCmd,
    },
    /// Density bound machinery: the palette family, thresholds, the chain.
    Bounds {
        #[command(subcommand)]
        command: BoundsCmd,
    },
    /// Search for dense non-admitted palettes.
    Search {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        colors: usize,
        /// Enumerate all palettes (tiny color counts only).
        #[arg(long, conflicts_with_all = ["iters", "seed"])]
        exhaustive: bool,
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write the witness palette here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a random graph from a palette by coloring vertex pairs.
    Construct {
        #[arg(long)]
        palette: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PaletteCmd {
    /// Density, good-pair degrees and minimality of a palette.
    Show {
        #[arg(long)]
        palette: PathBuf,
    },
    /// Remove colors until every removal strictly decreases density.
    Reduce {
        #[arg(long)]
        palette: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Remove one color and relabel.
    RemoveColor {
        #[arg(long)]
        palette: PathBuf,
        #[arg(long)]
        color: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Write the star S_k (apex 0, leaves 1..=k).
    Star {
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Vertex and edge counts, star detection.
    Show {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Exhaustive copy search: does the host contain the pattern?
    Contains {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Sampled induced-subgraph densities (diagnostic).
    Profile {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum DigraphCmd {
    /// Build the digraph on two copies of the color set.
    Build {
        #[arg(long)]
        palette: PathBuf,
        /// Write the arc list as JSON.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write a DOT rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Exact maximum transitive tournament in the palette digraph.
    MaxTt {
        #[arg(long)]
        palette: PathBuf,
        /// Early-exit size: stop as soon as a tournament this large exists.
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long, default_value_t = TT_VERTEX_BUDGET)]
        budget: usize,
    },
    /// Decide whether S_k admits the palette via loops and tournaments.
    StarAdmit {
        #[arg(long)]
        palette: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Degree lower bound e_{i,j}(a) >= 3 d(P) - 2 on a reduced palette.
    DegreeBounds {
        #[arg(long)]
        palette: PathBuf,
    },
    /// Inclusion-exclusion density bound, on a file or on random palettes.
    InclExcl {
        #[arg(long)]
        palette: Option<PathBuf>,
        #[arg(long, conflicts_with = "palette")]
        random: Option<usize>,
        #[arg(long, default_value_t = 6)]
        colors: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Caro-Wei inverse-degree bound on random loop-free digraphs at
    /// k = (max tournament) + 1.
    CaroWei {
        #[arg(long)]
        random: usize,
        #[arg(long, default_value_t = 14)]
        max_vertices: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Tangent-line inequalities at random in-range points.
    Tangents {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Write the lower-bound palette for S_k.
    StarPalette {
        #[arg(long)]
        k: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The closed-form density (k^2-5k+7)/(k-1)^2.
    Formula {
        #[arg(long)]
        k: usize,
    },
    /// Least k clearing the f- and g-side tangent ranges.
    Thresholds,
    /// Run the full verification chain on a reduced palette.
    Chain {
        #[arg(long)]
        palette: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Refined applicability scan of the f-side tangent sums.
    Refined {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own exit code conventions differ; usage problems are 1
            // here. Help and version requests still succeed.
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let threads = cli
        .threads
        .or_else(|| {
            std::env::var("PALETTE_TURAN_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1);
    // The global pool can only be set once; a failure means it exists.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    match dispatch(&cli) {
        Ok(doc) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&doc).expect("serializable")
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Budget { .. } => ExitCode::from(2),
                Error::Internal(_) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}

/// Runs one command. Human-readable lines are printed along the way; the
/// returned document is printed only in `--json` mode.
fn dispatch(cli: &Cli) -> Result<Value, Error> {
    let human = !cli.json;
    match &cli.command {
        Command::Palette { command } => palette_cmd(command, human),
        Command::Graph { command } => graph_cmd(command, human),
        Command::Admit {
            palette,
            graph,
            max_vertices,
        } => {
            let p = formats::read_palette(palette)?;
            let f = formats::read_graph(graph)?;
            let outcome = decide_admission_with_budget(&f, &p, *max_vertices)?;
            let doc = match &outcome {
                AdmissionOutcome::Admitted {
                    certificate,
                    order_classes_searched,
                } => {
                    if !check_certificate(&f, &p, certificate)? {
                        return Err(Error::Internal(
                            "emitted certificate fails validation".into(),
                        ));
                    }
                    json!({
                        "admits": true,
                        "certificate": certificate,
                        "orderClassesSearched": order_classes_searched,
                    })
                }
                AdmissionOutcome::NotAdmitted { evidence } => {
                    let classes = match evidence {
                        palette_turan::admit::NonAdmissionEvidence::OrderClassesRefuted(m) => {
                            Some(*m)
                        }
                        _ => None,
                    };
                    json!({
                        "admits": false,
                        "certificate": null,
                        "orderClassesSearched": classes,
                        "evidence": evidence,
                    })
                }
            };
            if human {
                match &outcome {
                    AdmissionOutcome::Admitted { certificate, .. } => {
                        println!("admits: yes");
                        println!("order: {:?}", certificate.order);
                        for (pair, color) in &certificate.coloring {
                            println!("  pair ({}, {}) -> color {}", pair.0, pair.1, color);
                        }
                    }
                    AdmissionOutcome::NotAdmitted { evidence } => {
                        println!("admits: no ({evidence:?})");
                    }
                }
            }
            Ok(doc)
        }
        Command::Digraph { command } => digraph_cmd(command, human),
        Command::Verify { command } => verify_cmd(command, human),
        Command::Bounds { command } => bounds_cmd(command, human),
        Command::Search {
            graph,
            colors,
            exhaustive,
            iters,
            seed,
            output,
        } => {
            let f = formats::read_graph(graph)?;
            if *exhaustive {
                let result = exhaustive_best(&f, *colors)?;
                if let (Some(path), Some(witness)) = (output, result.witness()) {
                    formats::write_palette(path, &witness)?;
                }
                if human {
                    match &result.best_density {
                        Some(d) => println!(
                            "best density {} over {} palettes ({} non-admitting)",
                            d.human_string(),
                            result.palettes_checked,
                            result.non_admitting_count
                        ),
                        None => println!("every palette is admitted (graph has no edges)"),
                    }
                }
                Ok(serde_json::to_value(&result)?)
            } else {
                let iters = iters.ok_or_else(|| {
                    Error::Precondition(
                        "--iters and --seed are required without --exhaustive".into(),
                    )
                })?;
                let seed = seed.ok_or_else(|| {
                    Error::Precondition("--seed is required (no wall-clock seeding)".into())
                })?;
                let result = local_search(&f, *colors, iters, seed)?;
                if let (Some(path), Some(witness)) = (output, result.witness()) {
                    formats::write_palette(path, &witness)?;
                }
                if human {
                    match &result.best_density {
                        Some(d) => println!(
                            "heuristic best density {} after {} iterations x {} restarts (verified non-admitting)",
                            d.human_string(),
                            result.iterations,
                            result.restarts
                        ),
                        None => println!("every palette is admitted (graph has no edges)"),
                    }
                }
                Ok(serde_json::to_value(&result)?)
            }
        }
        Command::Construct {
            palette,
            n,
            seed,
            output,
        } => {
            let p = formats::read_palette(palette)?;
            let sample = rodl_construct(&p, *n, *seed)?;
            if let Some(path) = output {
                formats::write_graph(path, &sample.graph)?;
            }
            if human {
                println!(
                    "graph on {} vertices with {} edges (palette density {})",
                    sample.graph.vertices(),
                    sample.graph.edge_count(),
                    p.density()?.human_string()
                );
            }
            Ok(json!({
                "vertices": sample.graph.vertices(),
                "edges": sample.graph.edge_count(),
                "seed": seed,
                "coloring": sample.coloring,
            }))
        }
    }
}

fn palette_cmd(command: &PaletteCmd, human: bool) -> Result<Value, Error> {
    match command {
        PaletteCmd::Show { palette } => {
            let p = formats::read_palette(palette)?;
            let density = p.density()?;
            let minimal = p.is_minimal()?;
            let table = p.good_pairs();
            if human {
                println!("colors: {}", p.colors());
                println!("triples: {}", p.triple_count());
                println!("density: {}", density.human_string());
                println!("minimality-reduced: {minimal}");
                for role in Role::ALL {
                    let degrees: Vec<usize> =
                        (0..p.colors()).map(|a| table.degree(role, a)).collect();
                    println!("degrees {role}: {degrees:?}");
                }
            }
            Ok(json!({
                "colors": p.colors(),
                "triples": p.triple_count(),
                "density": density,
                "minimal": minimal,
            }))
        }
        PaletteCmd::Reduce { palette, output } => {
            let p = formats::read_palette(palette)?;
            let reduction = p.minimality_reduce()?;
            if let Some(path) = output {
                formats::write_palette(path, &reduction.palette)?;
            }
            if human {
                println!(
                    "removed colors {:?}; {} colors remain, density {}",
                    reduction.removed_original_colors,
                    reduction.palette.colors(),
                    reduction.palette.density()?.human_string()
                );
            }
            Ok(json!({
                "removedColors": reduction.removed_original_colors,
                "colors": reduction.palette.colors(),
                "density": reduction.palette.density()?,
                "degenerate": reduction.degenerate,
            }))
        }
        PaletteCmd::RemoveColor {
            palette,
            color,
            output,
        } => {
            let p = formats::read_palette(palette)?;
            let removal = p.remove_color(*color)?;
            if let Some(path) = output {
                formats::write_palette(path, &removal.palette)?;
            }
            if human {
                println!(
                    "{} triples remain on {} colors (relabeling {:?})",
                    removal.palette.triple_count(),
                    removal.palette.colors(),
                    removal.old_to_new
                );
            }
            Ok(json!({
                "colors": removal.palette.colors(),
                "triples": removal.palette.triple_count(),
                "oldToNew": removal.old_to_new,
                "degenerate": removal.degenerate,
            }))
        }
    }
}

fn graph_cmd(command: &GraphCmd, human: bool) -> Result<Value, Error> {
    match command {
        GraphCmd::Star { k, output } => {
            let g = star(*k)?;
            if let Some(path) = output {
                formats::write_graph(path, &g)?;
            }
            if human {
                println!("S_{k}: {} vertices, {} edges", g.vertices(), g.edge_count());
            }
            Ok(json!({"vertices": g.vertices(), "edges": g.edge_count()}))
        }
        GraphCmd::Show { graph } => {
            let g = formats::read_graph(graph)?;
            let star_k = g.as_star();
            if human {
                println!("vertices: {}", g.vertices());
                println!("edges: {}", g.edge_count());
                match star_k {
                    Some(k) => println!("this is the star S_{k}"),
                    None => println!("not a star"),
                }
            }
            Ok(json!({
                "vertices": g.vertices(),
                "edges": g.edge_count(),
                "star": star_k,
            }))
        }
        GraphCmd::Contains { host, pattern } => {
            let h = formats::read_graph(host)?;
            let pat = formats::read_graph(pattern)?;
            let image = contains_copy(&h, &pat)?;
            if human {
                match &image {
                    Some(map) => println!("copy found: pattern vertex i -> host vertex {map:?}"),
                    None => println!("no copy"),
                }
            }
            Ok(json!({"contains": image.is_some(), "image": image}))
        }
        GraphCmd::Profile {
            graph,
            samples,
            seed,
        } => {
            let g = formats::read_graph(graph)?;
            let profile = subset_density_profile(&g, *samples, *seed)?;
            if human {
                println!("global density {}", profile.global_density.human_string());
                for s in &profile.per_size {
                    println!(
                        "size {:>4}: min {} mean {}",
                        s.size,
                        s.min_density.human_string(),
                        s.mean_density.human_string()
                    );
                }
            }
            Ok(serde_json::to_value(&profile)?)
        }
    }
}

fn digraph_cmd(command: &DigraphCmd, human: bool) -> Result<Value, Error> {
    match command {
        DigraphCmd::Build {
            palette,
            output,
            dot,
        } => {
            let p = formats::read_palette(palette)?;
            match build_digraph(&p)? {
                DigraphBuild::Built(cd) => {
                    if let Some(path) = output {
                        std::fs::write(path, formats::color_digraph_to_json(&cd))?;
                    }
                    if let Some(path) = dot {
                        std::fs::write(path, cd.digraph().to_dot())?;
                    }
                    if human {
                        println!(
                            "digraph on {} vertices (two copies of {} colors), {} arcs",
                            cd.digraph().vertex_count(),
                            cd.colors(),
                            cd.digraph().arc_count()
                        );
                    }
                    Ok(json!({
                        "loop": false,
                        "vertices": cd.digraph().vertex_count(),
                        "arcs": cd.digraph().arc_count(),
                    }))
                }
                DigraphBuild::Loop(l) => {
                    if human {
                        println!(
                            "no digraph: color {} is {}-self-good via ({}, {}, {}); the palette admits every star",
                            l.color,
                            l.role,
                            l.witness_triple[0],
                            l.witness_triple[1],
                            l.witness_triple[2]
                        );
                    }
                    Ok(json!({
                        "loop": true,
                        "color": l.color,
                        "role": format!("{}", l.role),
                        "witnessTriple": l.witness_triple,
                    }))
                }
            }
        }
        DigraphCmd::MaxTt {
            palette,
            cutoff,
            budget,
        } => {
            let p = formats::read_palette(palette)?;
            match build_digraph(&p)? {
                DigraphBuild::Loop(l) => {
                    if human {
                        println!("loop at color {}: the palette admits every star", l.color);
                    }
                    Ok(json!({
                        "loop": true,
                        "color": l.color,
                        "witnessTriple": l.witness_triple,
                    }))
                }
                DigraphBuild::Built(cd) => {
                    let d = cd.digraph();
                    let cutoff = cutoff.unwrap_or(d.vertex_count() + 1);
                    let (size, witness) =
                        max_transitive_tournament_with_budget(d, cutoff, *budget)?;
                    if human {
                        println!("maximum transitive tournament: {size}");
                        println!("witness vertices: {:?}", witness.vertices);
                    }
                    Ok(json!({
                        "loop": false,
                        "maxTournament": size,
                        "exact": size < cutoff,
                        "witness": witness.vertices,
                    }))
                }
            }
        }
        DigraphCmd::StarAdmit { palette, k } => {
            let p = formats::read_palette(palette)?;
            let outcome = star_admission(&p, *k)?;
            let doc = match &outcome {
                StarAdmission::Admitted {
                    certificate,
                    reason,
                } => json!({
                    "admits": true,
                    "certificate": certificate,
                    "reason": reason,
                }),
                StarAdmission::NotAdmitted { max_tournament } => json!({
                    "admits": false,
                    "certificate": null,
                    "maxTournament": max_tournament,
                }),
            };
            if human {
                match &outcome {
                    StarAdmission::Admitted { .. } => println!("S_{k} admits the palette"),
                    StarAdmission::NotAdmitted { max_tournament } => println!(
                        "S_{k} does not admit (maximum transitive tournament {max_tournament})"
                    ),
                }
            }
            Ok(doc)
        }
    }
}

fn verify_cmd(command: &VerifyCmd, human: bool) -> Result<Value, Error> {
    match command {
        VerifyCmd::DegreeBounds { palette } => {
            let p = formats::read_palette(palette)?;
            let report = p.verify_degree_bounds()?;
            if human {
                println!(
                    "degree bound 3d-2 = {}: {}",
                    report.bound.human_string(),
                    if report.pass { "pass" } else { "FAIL" }
                );
            }
            Ok(serde_json::to_value(&report)?)
        }
        VerifyCmd::InclExcl {
            palette,
            random,
            colors,
            seed,
        } => match (palette, random) {
            (Some(path), None) => {
                let p = formats::read_palette(path)?;
                let report = verify_incl_excl_bound(&p)?;
                if human {
                    println!(
                        "density {} <= bound {}: {}",
                        report.density.human_string(),
                        report.square_bound.human_string(),
                        if report.pass { "pass" } else { "FAIL" }
                    );
                }
                Ok(serde_json::to_value(&report)?)
            }
            (None, Some(count)) => {
                let seed = seed.ok_or_else(|| {
                    Error::Precondition("--seed is required (no wall-clock seeding)".into())
                })?;
                let mut rng = SplitMix64::new(seed);
                let mut failures = 0usize;
                for _ in 0..*count {
                    let p = random_palette(&mut rng, *colors);
                    if !verify_incl_excl_bound(&p)?.pass {
                        failures += 1;
                    }
                }
                if human {
                    println!("checked {count} random palettes: {failures} failures");
                }
                Ok(json!({"checked": count, "failures": failures}))
            }
            _ => Err(Error::Precondition(
                "give exactly one of --palette or --random".into(),
            )),
        },
        VerifyCmd::CaroWei {
            random,
            max_vertices,
            seed,
        } => {
            let mut rng = SplitMix64::new(*seed);
            let span = max_vertices.saturating_sub(1).max(1);
            let mut failures = 0usize;
            for _ in 0..*random {
                let n = 2 + rng.next_usize(span);
                let d = Digraph::random(n, 1 + rng.next_below(9), 10, &mut rng);
                let (max_tt, _) =
                    max_transitive_tournament_with_budget(&d, n + 1, TT_VERTEX_BUDGET)?;
                let report = verify_caro_wei(&d, max_tt + 1)?;
                if !(report.applicable && report.pass) {
                    failures += 1;
                }
            }
            if human {
                println!("checked {random} random digraphs: {failures} failures");
            }
            Ok(json!({"checked": random, "failures": failures}))
        }
        VerifyCmd::Tangents { k, points, seed } => {
            let mut rng = SplitMix64::new(*seed);
            let mut failures = 0usize;
            for _ in 0..*points {
                let jitter = Rat::ratio(rng.next_below(6000) as i64, 1 + rng.next_below(60) as i64);
                let fx = Rat::from_int(5) * Rat::from(*k - 1) / Rat::from(*k - 3) + &jitter;
                let rf = verify_f_tangent(*k, &fx)?;
                let gx = Rat::from_int(3) * Rat::from(*k - 1)
                    / (Rat::from(2 * *k) - Rat::from_int(6))
                    + &jitter;
                let rg = verify_g_tangent(*k, &gx)?;
                if rf.holds != Some(true)
                    || rg.holds != Some(true)
                    || !rf.formulations_agree
                    || !rg.formulations_agree
                {
                    failures += 1;
                }
            }
            if human {
                println!("checked {points} in-range points at k={k}: {failures} failures");
            }
            Ok(json!({"k": k, "checked": points, "failures": failures}))
        }
    }
}

fn bounds_cmd(command: &BoundsCmd, human: bool) -> Result<Value, Error> {
    match command {
        BoundsCmd::StarPalette { k, output } => {
            let p = star_palette(*k)?;
            if let Some(path) = output {
                formats::write_palette(path, &p)?;
            }
            if human {
                println!(
                    "palette on {} colors, {} triples, density {}",
                    p.colors(),
                    p.triple_count(),
                    p.density()?.human_string()
                );
            }
            Ok(json!({
                "colors": p.colors(),
                "triples": p.triple_count(),
                "density": p.density()?,
            }))
        }
        BoundsCmd::Formula { k } => {
            let d = star_palette_density_formula(*k)?;
            if human {
                println!("{}", d.human_string());
            }
            Ok(json!({"k": k, "density": d}))
        }
        BoundsCmd::Thresholds => {
            let (k_star, k_g) = tangent_thresholds();
            if human {
                println!("f-side threshold: {k_star}");
                println!("g-side threshold: {k_g}");
            }
            Ok(json!({"kStar": k_star, "kG": k_g}))
        }
        BoundsCmd::Chain { palette, k } => {
            let p = formats::read_palette(palette)?;
            let report = chain_verify(&p, *k)?;
            if human {
                for step in &report.steps {
                    let status = match &step.status {
                        palette_turan::bounds::StepStatus::Pass => "pass".to_string(),
                        palette_turan::bounds::StepStatus::Fail => "FAIL".to_string(),
                        palette_turan::bounds::StepStatus::Inapplicable { reason } => {
                            format!("inapplicable ({reason})")
                        }
                    };
                    match (&step.lhs, &step.rhs) {
                        (Some(l), Some(r)) => println!(
                            "{:24} {status}: {} vs {}",
                            step.id,
                            l.human_string(),
                            r.human_string()
                        ),
                        _ => println!("{:24} {status}", step.id),
                    }
                }
                println!(
                    "density {} against target {}",
                    report.density.human_string(),
                    report.target.human_string()
                );
            }
            Ok(serde_json::to_value(&report)?)
        }
        BoundsCmd::Refined { from, to } => {
            let scan = refined_threshold(*from, *to)?;
            if human {
                for v in &scan.verdicts {
                    println!(
                        "k={:3} {:?}: sup in [{}, {}]",
                        v.k,
                        v.outcome,
                        v.sup_lower.decimal_string(9),
                        v.sup_upper.decimal_string(9),
                    );
                }
                match scan.least_holds {
                    Some(k) => println!("least k with a certified supremum: {k}"),
                    None => println!("no k in range certified"),
                }
            }
            Ok(serde_json::to_value(&scan)?)
        }
    }
}

fn random_palette(rng: &mut SplitMix64, max_colors: usize) -> Palette {
    let n = 1 + rng.next_usize(max_colors.max(1));
    let keep_in = 1 + rng.next_below(7);
    let mut triples = Vec::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            for c in 0..n as u32 {
                if rng.next_below(8) < keep_in {
                    triples.push([a, b, c]);
                }
            }
        }
    }
    Palette::new(n, triples).expect("generated palette is valid")
}
