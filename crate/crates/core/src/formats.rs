//! File formats for palettes, graphs and digraph exports.
//!
//! Palettes: JSON `{"colors": n, "triples": [[c1,c2,c3], ...]}` with the
//! triples sorted lexicographically on write, or the text form
//! `palette n` followed by one `c1 c2 c3` line per triple. Duplicate triples
//! in either form are a hard error on read. Graphs are analogous with
//! `{"vertices": n, "edges": ...}` and a `graph n` header. Readers sniff the
//! format (JSON starts with `{`), writers pick it explicitly.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::digraph::{ColorDigraph, Digraph};
use crate::error::{Error, Result};
use crate::hypergraph::ThreeGraph;
use crate::palette::{Palette, Triple};

#[derive(Serialize, Deserialize)]
struct PaletteFile {
    colors: usize,
    triples: Vec<Triple>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    vertices: usize,
    edges: Vec<[usize; 3]>,
}

/// Digraph wire form; vertex `a` is color `a` on side 1 and vertex
/// `colors + a` is color `a` on side 2 when `colors` is present.
#[derive(Serialize, Deserialize)]
pub struct DigraphFile {
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colors: Option<usize>,
    pub arcs: Vec<[usize; 2]>,
}

// ---------------------------------------------------------------------------
// Palettes
// ---------------------------------------------------------------------------

pub fn palette_to_json(p: &Palette) -> String {
    let file = PaletteFile {
        colors: p.colors(),
        triples: p.triples().copied().collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("palette serializes");
    s.push('\n');
    s
}

pub fn palette_to_text(p: &Palette) -> String {
    let mut s = format!("palette {}\n", p.colors());
    for t in p.triples() {
        s.push_str(&format!("{} {} {}\n", t[0], t[1], t[2]));
    }
    s
}

pub fn palette_from_str(content: &str) -> Result<Palette> {
    let trimmed = content.trim_start();
    if trimmed.starts_with('{') {
        let file: PaletteFile = serde_json::from_str(trimmed)?;
        Palette::new(file.colors, file.triples)
    } else {
        let mut lines = non_blank_lines(content);
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty palette file".into()))?;
        let colors = parse_header(header, "palette")?;
        let mut triples: Vec<Triple> = Vec::new();
        for line in lines {
            let fields = parse_fields::<3>(line)?;
            triples.push([fields[0] as u32, fields[1] as u32, fields[2] as u32]);
        }
        Palette::new(colors, triples)
    }
}

pub fn read_palette(path: &Path) -> Result<Palette> {
    palette_from_str(&fs::read_to_string(path)?)
}

/// Writes JSON for a `.json` extension and text otherwise.
pub fn write_palette(path: &Path, p: &Palette) -> Result<()> {
    let content = if has_json_extension(path) {
        palette_to_json(p)
    } else {
        palette_to_text(p)
    };
    fs::write(path, content)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

pub fn graph_to_json(g: &ThreeGraph) -> String {
    let file = GraphFile {
        vertices: g.vertices(),
        edges: g.edges().copied().collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("graph serializes");
    s.push('\n');
    s
}

pub fn graph_to_text(g: &ThreeGraph) -> String {
    let mut s = format!("graph {}\n", g.vertices());
    for e in g.edges() {
        s.push_str(&format!("{} {} {}\n", e[0], e[1], e[2]));
    }
    s
}

pub fn graph_from_str(content: &str) -> Result<ThreeGraph> {
    let trimmed = content.trim_start();
    if trimmed.starts_with('{') {
        let file: GraphFile = serde_json::from_str(trimmed)?;
        ThreeGraph::new(file.vertices, file.edges)
    } else {
        let mut lines = non_blank_lines(content);
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty graph file".into()))?;
        let vertices = parse_header(header, "graph")?;
        let mut edges = Vec::new();
        for line in lines {
            edges.push(parse_fields::<3>(line)?);
        }
        ThreeGraph::new(vertices, edges)
    }
}

pub fn read_graph(path: &Path) -> Result<ThreeGraph> {
    graph_from_str(&fs::read_to_string(path)?)
}

pub fn write_graph(path: &Path, g: &ThreeGraph) -> Result<()> {
    let content = if has_json_extension(path) {
        graph_to_json(g)
    } else {
        graph_to_text(g)
    };
    fs::write(path, content)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Digraph exports
// ---------------------------------------------------------------------------

pub fn digraph_to_json(d: &Digraph) -> String {
    let file = DigraphFile {
        n: d.vertex_count(),
        colors: None,
        arcs: d.arcs().into_iter().map(|(u, v)| [u, v]).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("digraph serializes");
    s.push('\n');
    s
}

pub fn color_digraph_to_json(cd: &ColorDigraph) -> String {
    let file = DigraphFile {
        n: cd.digraph().vertex_count(),
        colors: Some(cd.colors()),
        arcs: cd
            .digraph()
            .arcs()
            .into_iter()
            .map(|(u, v)| [u, v])
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("digraph serializes");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

fn has_json_extension(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn non_blank_lines(content: &str) -> impl Iterator<Item = &str> {
    content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(line: &str, keyword: &str) -> Result<usize> {
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(n), None) if k == keyword => n
            .parse()
            .map_err(|_| Error::Parse(format!("bad count in header line {line:?}"))),
        _ => Err(Error::Parse(format!(
            "expected header {keyword:?} <count>, found {line:?}"
        ))),
    }
}

fn parse_fields<const N: usize>(line: &str) -> Result<[usize; N]> {
    let fields: Vec<usize> = line
        .split_whitespace()
        .map(|f| {
            f.parse()
                .map_err(|_| Error::Parse(format!("bad integer {f:?} in line {line:?}")))
        })
        .collect::<Result<_>>()?;
    fields
        .try_into()
        .map_err(|_| Error::Parse(format!("expected {N} fields in line {line:?}")))
}
