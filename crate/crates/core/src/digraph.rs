//! The palette-to-digraph reduction and the exact transitive tournament
//! search that drives the star admissibility decision.
//!
//! A palette `P` on colors `0..n` turns into a loop-free digraph `D` on two
//! disjoint copies of the color set (vertex `a` is side 1, vertex `n + a` is
//! side 2):
//!
//! * arc `a -> b` inside side 1 when `(a,b)` is `(2,3)`-good,
//! * arc `(n+a) -> (n+b)` inside side 2 when `(a,b)` is `(1,2)`-good,
//! * the pair of cross arcs `a -> (n+b)` and `(n+b) -> a` when `(a,b)` is
//!   `(1,3)`-good.
//!
//! A would-be loop (`(a,a)` good in `(2,3)` or `(1,2)`) short-circuits the
//! construction: it yields an explicit one-triple coloring showing that the
//! palette is admitted by every star, so the build returns that certificate
//! instead of a digraph. Otherwise, `S_k` admits `P` exactly when `D`
//! contains a transitive tournament on `k` vertices; the witness converts to
//! an admission certificate and is validated before being returned.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::admit::{check_certificate, AdmissionCertificate};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::hypergraph::star;
use crate::palette::{Color, Palette, Role, Triple};
use crate::rational::Rat;
use crate::rng::SplitMix64;

/// Default vertex cap for the tournament search (covers palettes on up to 64
/// colors). Callers with bigger inputs raise it explicitly.
pub const TT_VERTEX_BUDGET: usize = 128;

// ---------------------------------------------------------------------------
// Plain digraphs
// ---------------------------------------------------------------------------

/// A loop-free digraph on vertices `0..n` with adjacency stored as in- and
/// out-neighbor bitsets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Digraph {
    n: usize,
    out: Vec<BitSet>,
    inn: Vec<BitSet>,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            n,
            out: vec![BitSet::empty(n); n],
            inn: vec![BitSet::empty(n); n],
        }
    }

    /// Builds from an arc list; self-loops and out-of-range endpoints are
    /// rejected (the structures this crate studies are loop-free by
    /// construction).
    pub fn from_arcs(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut d = Digraph::new(n);
        for (u, v) in arcs {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "arc ({u},{v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {u}")));
            }
            d.add_arc(u, v);
        }
        Ok(d)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) {
        debug_assert!(u != v);
        self.out[u].insert(v);
        self.inn[v].insert(u);
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].count()
    }

    /// `m(v) = max(d+(v), d-(v))`.
    pub fn max_degree(&self, v: usize) -> usize {
        self.out_degree(v).max(self.in_degree(v))
    }

    pub fn arc_count(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v)).sum()
    }

    /// Arcs in sorted order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::with_capacity(self.arc_count());
        for u in 0..self.n {
            for v in self.out[u].iter() {
                arcs.push((u, v));
            }
        }
        arcs
    }

    /// The subdigraph induced by `vertices` (which must be sorted and
    /// distinct), relabeled to `0..vertices.len()`.
    pub fn induced(&self, vertices: &[usize]) -> Digraph {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        let mut d = Digraph::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                if i != j && self.has_arc(u, v) {
                    d.add_arc(i, j);
                }
            }
        }
        d
    }

    /// Seeded random loop-free digraph: each ordered pair `(u,v)`, `u != v`,
    /// independently receives an arc with probability `num/den`.
    pub fn random(n: usize, num: u64, den: u64, rng: &mut SplitMix64) -> Digraph {
        let mut d = Digraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.next_below(den) < num {
                    d.add_arc(u, v);
                }
            }
        }
        d
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph {\n");
        for v in 0..self.n {
            let _ = writeln!(s, "  v{v};");
        }
        for (u, v) in self.arcs() {
            let _ = writeln!(s, "  v{u} -> v{v};");
        }
        s.push('}');
        s.push('\n');
        s
    }
}

// ---------------------------------------------------------------------------
// Transitive tournament search
// ---------------------------------------------------------------------------

/// An ordered vertex sequence with an arc from every earlier vertex to every
/// later one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TTWitness {
    pub vertices: Vec<usize>,
}

impl TTWitness {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    /// Checks the defining property directly against a digraph.
    pub fn is_valid(&self, d: &Digraph) -> bool {
        for (i, &u) in self.vertices.iter().enumerate() {
            for &v in &self.vertices[i + 1..] {
                if !d.has_arc(u, v) {
                    return false;
                }
            }
        }
        let mut sorted = self.vertices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == self.vertices.len()
    }
}

/// Exact maximum transitive tournament with the default vertex budget.
/// `cutoff` allows early exit: once a tournament of at least `cutoff`
/// vertices is found the search stops and reports it (callers that only ask
/// "is there a TT of size k?" pass `cutoff = k`). Sizes strictly below the
/// cutoff are exact maxima.
pub fn max_transitive_tournament(d: &Digraph, cutoff: usize) -> Result<(usize, TTWitness)> {
    max_transitive_tournament_with_budget(d, cutoff, TT_VERTEX_BUDGET)
}

pub fn max_transitive_tournament_with_budget(
    d: &Digraph,
    cutoff: usize,
    budget: usize,
) -> Result<(usize, TTWitness)> {
    if d.n > budget {
        return Err(Error::Budget {
            what: "transitive tournament search vertices",
            requested: d.n,
            limit: budget,
        });
    }
    let mut solver = TtSolver::new(d, cutoff);
    solver.run();
    let witness = solver.best_witness(d);
    debug_assert!(witness.is_valid(d));
    Ok((solver.best, witness))
}

/// Branch-and-bound over vertex SETS.
///
/// A set `S` hosts a transitive tournament exactly when (a) every pair of
/// `S` is joined by at least one arc and (b) the one-directional arcs inside
/// `S` are acyclic: topologically ordering the one-directional arcs orients
/// every remaining (two-directional) pair freely, so some linear order
/// realizes all forward arcs. Both conditions are hereditary, so the search
/// may enumerate sets in a fixed vertex order like a maximum-clique solver,
/// maintaining candidates by adjacency intersection and re-checking
/// acyclicity on each extension. The pruning bound is a greedy partition of
/// the candidates into adjacency-independent classes (a tournament takes at
/// most one vertex per class).
struct TtSolver<'a> {
    d: &'a Digraph,
    /// position -> vertex, descending out-degree then id
    order: Vec<usize>,
    /// adjacency (some arc in either direction) in position space
    adj: Vec<BitSet>,
    /// `forced[p]` = positions q with arc p->q but not q->p
    forced: Vec<BitSet>,
    cutoff: usize,
    best: usize,
    best_set: Vec<usize>,
    stack: Vec<usize>,
    done: bool,
}

impl<'a> TtSolver<'a> {
    fn new(d: &'a Digraph, cutoff: usize) -> Self {
        let n = d.n;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(d.out_degree(v)), v));
        let mut pos_of = vec![0usize; n];
        for (p, &v) in order.iter().enumerate() {
            pos_of[v] = p;
        }
        let mut adj = vec![BitSet::empty(n); n];
        let mut forced = vec![BitSet::empty(n); n];
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let uv = d.has_arc(u, v);
                let vu = d.has_arc(v, u);
                if uv || vu {
                    adj[pos_of[u]].insert(pos_of[v]);
                }
                if uv && !vu {
                    forced[pos_of[u]].insert(pos_of[v]);
                }
            }
        }
        TtSolver {
            d,
            order,
            adj,
            forced,
            cutoff,
            best: 0,
            best_set: Vec::new(),
            stack: Vec::new(),
            done: false,
        }
    }

    fn run(&mut self) {
        let n = self.d.n;
        if n == 0 {
            return;
        }
        // A single vertex is always a (trivial) tournament.
        self.best = 1;
        self.best_set = vec![0];
        if self.cutoff <= 1 {
            self.done = true;
        } else {
            let all = BitSet::full(n);
            self.expand(&all);
        }
    }

    /// Number of greedy adjacency-independent classes covering `cands`; an
    /// upper bound on how many of them one tournament can use.
    fn color_bound(&self, cands: &BitSet) -> usize {
        let mut classes: Vec<BitSet> = Vec::new();
        for p in cands.iter() {
            match classes.iter_mut().find(|c| c.is_disjoint(&self.adj[p])) {
                Some(class) => class.insert(p),
                None => {
                    let mut class = BitSet::empty(cands.len());
                    class.insert(p);
                    classes.push(class);
                }
            }
        }
        classes.len()
    }

    /// One-directional arcs within `self.stack + [q]` must stay acyclic.
    fn extension_acyclic(&self, q: usize) -> bool {
        let members: Vec<usize> = self.stack.iter().copied().chain([q]).collect();
        let m = members.len();
        // forced-arc adjacency restricted to members, then Kahn's algorithm
        let mut arcs = vec![false; m * m];
        let mut indeg = vec![0usize; m];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                if i != j && self.forced[a].contains(b) {
                    arcs[i * m + j] = true;
                    indeg[j] += 1;
                }
            }
        }
        let mut ready: Vec<usize> = (0..m).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(i) = ready.pop() {
            seen += 1;
            for j in 0..m {
                if arcs[i * m + j] {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        ready.push(j);
                    }
                }
            }
        }
        seen == m
    }

    fn expand(&mut self, cands: &BitSet) {
        if self.done {
            return;
        }
        let mut remaining = cands.clone();
        loop {
            if self.done {
                return;
            }
            if remaining.is_empty() {
                return;
            }
            if self.stack.len() + self.color_bound(&remaining) <= self.best {
                return;
            }
            let p = remaining.first().unwrap();
            remaining.remove(p);
            let has_forced = !self.forced[p].is_empty()
                || self.stack.iter().any(|&s| self.forced[s].contains(p));
            if !has_forced || self.extension_acyclic(p) {
                self.stack.push(p);
                if self.stack.len() > self.best {
                    self.best = self.stack.len();
                    self.best_set = self.stack.clone();
                    if self.best >= self.cutoff {
                        self.done = true;
                        self.stack.pop();
                        return;
                    }
                }
                let next = remaining.intersection(&self.adj[p]);
                self.expand(&next);
                self.stack.pop();
            }
        }
    }

    /// Translates the best position set into an ordered witness: a
    /// topological order of the one-directional arcs, ties (free pairs)
    /// broken toward the smallest original vertex id.
    fn best_witness(&self, d: &Digraph) -> TTWitness {
        let members: Vec<usize> = {
            let mut v: Vec<usize> = self.best_set.iter().map(|&p| self.order[p]).collect();
            v.sort_unstable();
            v
        };
        let m = members.len();
        let forced = |u: usize, v: usize| d.has_arc(u, v) && !d.has_arc(v, u);
        let mut indeg = vec![0usize; m];
        for i in 0..m {
            for j in 0..m {
                if i != j && forced(members[i], members[j]) {
                    indeg[j] += 1;
                }
            }
        }
        let mut used = vec![false; m];
        let mut sequence = Vec::with_capacity(m);
        for _ in 0..m {
            let i = (0..m)
                .find(|&i| !used[i] && indeg[i] == 0)
                .expect("forced arcs on a feasible set are acyclic");
            used[i] = true;
            sequence.push(members[i]);
            for j in 0..m {
                if !used[j] && forced(members[i], members[j]) {
                    indeg[j] -= 1;
                }
            }
        }
        TTWitness { vertices: sequence }
    }
}

// ---------------------------------------------------------------------------
// Caro-Wei style degree bound
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct CaroWeiReport {
    pub vertex_count: usize,
    pub k: usize,
    pub max_tt: usize,
    /// The bound only applies to digraphs with no transitive tournament on
    /// `k` vertices; when that fails the witness is reported instead.
    pub applicable: bool,
    pub violating_witness: Option<TTWitness>,
    pub sum: Option<Rat>,
    pub bound: Rat,
    pub pass: bool,
}

/// Verifies the inverse-degree bound `sum_v 1/(n - m(v)) <= k - 1`, with
/// `m(v) = max(d+(v), d-(v))`, which holds for every digraph on `n`
/// vertices containing no transitive tournament on `k` vertices. The
/// hypothesis is established internally with the exact tournament solver.
pub fn verify_caro_wei(d: &Digraph, k: usize) -> Result<CaroWeiReport> {
    verify_caro_wei_with_budget(d, k, TT_VERTEX_BUDGET)
}

pub fn verify_caro_wei_with_budget(d: &Digraph, k: usize, budget: usize) -> Result<CaroWeiReport> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "the degree bound needs k >= 2, got {k}"
        )));
    }
    let n = d.vertex_count();
    let (max_tt, witness) = max_transitive_tournament_with_budget(d, n + 1, budget)?;
    let bound = Rat::from(k) - Rat::one();
    if max_tt >= k {
        return Ok(CaroWeiReport {
            vertex_count: n,
            k,
            max_tt,
            applicable: false,
            violating_witness: Some(witness),
            sum: None,
            bound,
            pass: false,
        });
    }
    let mut sum = Rat::zero();
    for v in 0..n {
        let slack = n - d.max_degree(v); // >= 1 because the digraph is loop-free
        sum += &(Rat::one() / Rat::from(slack));
    }
    let pass = sum <= bound;
    Ok(CaroWeiReport {
        vertex_count: n,
        k,
        max_tt,
        applicable: true,
        violating_witness: None,
        sum: Some(sum),
        bound,
        pass,
    })
}

// ---------------------------------------------------------------------------
// Color digraphs
// ---------------------------------------------------------------------------

/// The digraph built from a palette's good pairs, on two copies of the color
/// set: vertex `a` is color `a` on side 1, vertex `colors + a` is color `a`
/// on side 2.
#[derive(Clone, Debug)]
pub struct ColorDigraph {
    colors: usize,
    digraph: Digraph,
}

/// A `(2,3)` or `(1,2)` self-good pair found during construction. One
/// admissible triple with a repeated entry colors every star: the witness
/// certificate uses a single pair color for the leaves and the loop color
/// for the apex pairs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LoopAdmission {
    pub color: usize,
    pub role: Role,
    pub witness_triple: Triple,
}

impl LoopAdmission {
    /// The explicit certificate for `S_k`.
    pub fn certificate(&self, k: usize) -> AdmissionCertificate {
        let mut coloring = BTreeMap::new();
        match self.role {
            // witness triple (b, a, a): leaves first, apex last
            Role::R23 => {
                let b = self.witness_triple[0];
                let a = self.color as Color;
                let order: Vec<usize> = (1..=k).chain([0]).collect();
                for i in 1..=k {
                    coloring.insert((0, i), a);
                    for j in i + 1..=k {
                        coloring.insert((i, j), b);
                    }
                }
                AdmissionCertificate { order, coloring }
            }
            // witness triple (a, a, b): apex first, then leaves
            Role::R12 => {
                let b = self.witness_triple[2];
                let a = self.color as Color;
                let order: Vec<usize> = [0].into_iter().chain(1..=k).collect();
                for i in 1..=k {
                    coloring.insert((0, i), a);
                    for j in i + 1..=k {
                        coloring.insert((i, j), b);
                    }
                }
                AdmissionCertificate { order, coloring }
            }
            _ => unreachable!("loop admission only arises in roles (2,3) and (1,2)"),
        }
    }
}

/// Outcome of the digraph construction.
#[derive(Clone, Debug)]
pub enum DigraphBuild {
    Built(ColorDigraph),
    /// The palette admits every star; no digraph is materialized.
    Loop(LoopAdmission),
}

/// Builds the color digraph, or detects a loop and returns the admission
/// verdict instead (a `(1,3)` self-good pair is not a loop: it creates the
/// legitimate pair of cross arcs between the two copies of that color).
pub fn build_digraph(p: &Palette) -> Result<DigraphBuild> {
    let n = p.colors();
    if n == 0 {
        return Err(Error::InvalidPalette(
            "digraph construction needs at least one color".into(),
        ));
    }
    let table = p.good_pairs();
    for a in 0..n {
        if table.is_good(Role::R23, a, a) {
            let witness = p
                .triples_at(1, a)
                .iter()
                .copied()
                .find(|t| t[2] as usize == a)
                .ok_or_else(|| Error::Internal("good-pair table disagrees with triples".into()))?;
            return Ok(DigraphBuild::Loop(LoopAdmission {
                color: a,
                role: Role::R23,
                witness_triple: witness,
            }));
        }
        if table.is_good(Role::R12, a, a) {
            let witness = p
                .triples_at(0, a)
                .iter()
                .copied()
                .find(|t| t[1] as usize == a)
                .ok_or_else(|| Error::Internal("good-pair table disagrees with triples".into()))?;
            return Ok(DigraphBuild::Loop(LoopAdmission {
                color: a,
                role: Role::R12,
                witness_triple: witness,
            }));
        }
    }
    let mut d = Digraph::new(2 * n);
    for a in 0..n {
        for b in 0..n {
            if a != b {
                if table.is_good(Role::R23, a, b) {
                    d.add_arc(a, b);
                }
                if table.is_good(Role::R12, a, b) {
                    d.add_arc(n + a, n + b);
                }
            }
            if table.is_good(Role::R13, a, b) {
                d.add_arc(a, n + b);
                d.add_arc(n + b, a);
            }
        }
    }
    // Post-build invariant: cross arcs come in pairs.
    for a in 0..n {
        for b in 0..n {
            if d.has_arc(a, n + b) != d.has_arc(n + b, a) {
                return Err(Error::Internal(format!(
                    "unpaired cross arc between color {a} side 1 and color {b} side 2"
                )));
            }
        }
    }
    Ok(DigraphBuild::Built(ColorDigraph {
        colors: n,
        digraph: d,
    }))
}

impl ColorDigraph {
    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    /// The side-1 vertex for a color.
    pub fn side1_vertex(&self, a: usize) -> usize {
        a
    }

    /// The side-2 vertex for a color.
    pub fn side2_vertex(&self, a: usize) -> usize {
        self.colors + a
    }

    /// Induced subdigraph on side 1 (vertex ids become the colors).
    pub fn side1(&self) -> Digraph {
        let verts: Vec<usize> = (0..self.colors).collect();
        self.digraph.induced(&verts)
    }

    /// Induced subdigraph on side 2 (vertex ids become the colors).
    pub fn side2(&self) -> Digraph {
        let verts: Vec<usize> = (self.colors..2 * self.colors).collect();
        self.digraph.induced(&verts)
    }

    /// Splits a witness into its side-1 and side-2 color sequences.
    pub fn split_witness(&self, w: &TTWitness) -> (Vec<usize>, Vec<usize>) {
        let mut side1 = Vec::new();
        let mut side2 = Vec::new();
        for &v in &w.vertices {
            if v < self.colors {
                side1.push(v);
            } else {
                side2.push(v - self.colors);
            }
        }
        (side1, side2)
    }
}

// ---------------------------------------------------------------------------
// Star admissibility via the digraph
// ---------------------------------------------------------------------------

/// Why a star admission holds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum StarAdmissionReason {
    Loop(LoopAdmission),
    Tournament {
        witness: TTWitness,
        side1: usize,
        side2: usize,
    },
}

/// Decision for "does `S_k` admit `P`?".
#[derive(Clone, Debug)]
pub enum StarAdmission {
    Admitted {
        certificate: AdmissionCertificate,
        reason: StarAdmissionReason,
    },
    NotAdmitted {
        /// Exact maximum transitive tournament size in the digraph
        /// (strictly below `k`).
        max_tournament: usize,
    },
}

impl StarAdmission {
    pub fn admits(&self) -> bool {
        matches!(self, StarAdmission::Admitted { .. })
    }

    pub fn certificate(&self) -> Option<&AdmissionCertificate> {
        match self {
            StarAdmission::Admitted { certificate, .. } => Some(certificate),
            StarAdmission::NotAdmitted { .. } => None,
        }
    }
}

/// Decides whether `S_k` admits `P`: yes exactly when the construction finds
/// a loop or the digraph contains a transitive tournament on `k` vertices.
/// Every positive answer is converted to a full certificate and validated
/// before being returned.
pub fn star_admission(p: &Palette, k: usize) -> Result<StarAdmission> {
    star_admission_with_budget(p, k, TT_VERTEX_BUDGET)
}

pub fn star_admission_with_budget(p: &Palette, k: usize, budget: usize) -> Result<StarAdmission> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "star admissibility needs k >= 2, got {k}"
        )));
    }
    if p.colors() == 0 {
        // No colors: a star has edges, so no coloring exists at all.
        return Ok(StarAdmission::NotAdmitted { max_tournament: 0 });
    }
    match build_digraph(p)? {
        DigraphBuild::Loop(loop_admission) => {
            let certificate = loop_admission.certificate(k);
            let f = star(k)?;
            if !check_certificate(&f, p, &certificate)? {
                return Err(Error::Internal("loop certificate failed validation".into()));
            }
            Ok(StarAdmission::Admitted {
                certificate,
                reason: StarAdmissionReason::Loop(loop_admission),
            })
        }
        DigraphBuild::Built(cd) => {
            let (size, witness) = max_transitive_tournament_with_budget(cd.digraph(), k, budget)?;
            if size >= k {
                let truncated = TTWitness {
                    vertices: witness.vertices[..k].to_vec(),
                };
                let certificate = witness_to_certificate(p, k, &truncated, &cd)?;
                let (l, r) = cd.split_witness(&truncated);
                Ok(StarAdmission::Admitted {
                    certificate,
                    reason: StarAdmissionReason::Tournament {
                        witness: truncated,
                        side1: l.len(),
                        side2: r.len(),
                    },
                })
            } else {
                Ok(StarAdmission::NotAdmitted {
                    max_tournament: size,
                })
            }
        }
    }
}

/// Converts a transitive tournament of size `k` in the color digraph into an
/// admission certificate for `S_k`.
///
/// Side-1 witness colors (in witness order) become the apex pair colors of
/// the leaves placed before the apex, side-2 colors of the leaves placed
/// after. Each leaf-leaf pair takes the least color completing an
/// admissible triple with the two apex colors involved; the defining arcs
/// guarantee one exists. The result is validated before being returned.
pub fn witness_to_certificate(
    p: &Palette,
    k: usize,
    witness: &TTWitness,
    cd: &ColorDigraph,
) -> Result<AdmissionCertificate> {
    if witness.size() != k {
        return Err(Error::Internal(format!(
            "witness has {} vertices, expected {k}",
            witness.size()
        )));
    }
    if !witness.is_valid(cd.digraph()) {
        return Err(Error::Internal(
            "witness is not a transitive tournament in the digraph".into(),
        ));
    }
    let n = p.colors();
    let (l, r) = cd.split_witness(witness);
    let s = l.len();
    // Star layout: apex 0; leaves 1..=s sit below the apex, s+1..=k above.
    let order: Vec<usize> = (1..=s).chain([0]).chain(s + 1..=k).collect();
    let n_colors = n as Color;
    let least = |pred: &dyn Fn(Color) -> bool, what: String| -> Result<Color> {
        (0..n_colors)
            .find(|&c| pred(c))
            .ok_or(Error::Internal(format!("no admissible color for {what}")))
    };
    let mut coloring = BTreeMap::new();
    for (i, &li) in l.iter().enumerate() {
        coloring.insert((0, i + 1), li as Color);
    }
    for (j, &rj) in r.iter().enumerate() {
        coloring.insert((0, s + 1 + j), rj as Color);
    }
    for i in 0..s {
        for j in i + 1..s {
            let (la, lb) = (l[i] as Color, l[j] as Color);
            let c = least(
                &|c| p.contains(&[c, la, lb]),
                format!("leaf pair below apex ({la},{lb})"),
            )?;
            coloring.insert((i + 1, j + 1), c);
        }
    }
    for (i, &li) in l.iter().enumerate() {
        for (j, &rj) in r.iter().enumerate() {
            let (la, rb) = (li as Color, rj as Color);
            let c = least(
                &|c| p.contains(&[la, c, rb]),
                format!("mixed leaf pair ({la},{rb})"),
            )?;
            coloring.insert((i + 1, s + 1 + j), c);
        }
    }
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            let (ra, rb) = (r[i] as Color, r[j] as Color);
            let c = least(
                &|c| p.contains(&[ra, rb, c]),
                format!("leaf pair above apex ({ra},{rb})"),
            )?;
            coloring.insert((s + 1 + i, s + 1 + j), c);
        }
    }
    let certificate = AdmissionCertificate { order, coloring };
    let f = star(k)?;
    if !check_certificate(&f, p, &certificate)? {
        return Err(Error::Internal(
            "tournament certificate failed validation".into(),
        ));
    }
    Ok(certificate)
}
