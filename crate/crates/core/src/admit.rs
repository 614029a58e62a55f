//! Exact decision procedure for "the 3-graph `F` admits the palette `P`":
//! does some vertex order and some coloring of the covered vertex pairs make
//! every edge's ordered color triple admissible?
//!
//! The decider enumerates vertex orders up to the automorphism group of `F`
//! (relabeling an order by an automorphism yields an identical constraint
//! system) and runs, for each order class, a backtracking search over
//! pair-color variables with generalized arc consistency on the ternary
//! edge constraints. Verdicts are certificate-backed: an admission always
//! carries an order and coloring that [`check_certificate`] accepts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::ThreeGraph;
use crate::palette::{Color, Palette};

/// Default cap on `|V(F)|` for the factorial order enumeration.
pub const ORDER_ENUMERATION_BUDGET: usize = 8;

/// Largest color count the bitmask domains support.
const MAX_COLORS: usize = 128;

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

/// A witness that `F` admits `P`: a vertex order (listed least to greatest)
/// and a coloring of every pair that lies in at least one edge. Pairs covered
/// by no edge are unconstrained and omitted. The JSON form lists the
/// coloring as `[u, v, color]` rows, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "CertificateWire", try_from = "CertificateWire")]
pub struct AdmissionCertificate {
    pub order: Vec<usize>,
    pub coloring: BTreeMap<(usize, usize), Color>,
}

#[derive(Serialize, Deserialize)]
struct CertificateWire {
    order: Vec<usize>,
    coloring: Vec<(usize, usize, Color)>,
}

impl From<AdmissionCertificate> for CertificateWire {
    fn from(cert: AdmissionCertificate) -> Self {
        CertificateWire {
            order: cert.order,
            coloring: cert
                .coloring
                .into_iter()
                .map(|((u, v), c)| (u, v, c))
                .collect(),
        }
    }
}

impl TryFrom<CertificateWire> for AdmissionCertificate {
    type Error = String;

    fn try_from(wire: CertificateWire) -> std::result::Result<Self, String> {
        let mut coloring = BTreeMap::new();
        for (u, v, c) in wire.coloring {
            if coloring.insert((u, v), c).is_some() {
                return Err(format!("pair ({u},{v}) colored twice"));
            }
        }
        Ok(AdmissionCertificate {
            order: wire.order,
            coloring,
        })
    }
}

/// Evidence attached to a non-admission verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NonAdmissionEvidence {
    /// The general decider refuted every order class.
    OrderClassesRefuted(usize),
    /// The star decider found no loop and a maximum transitive tournament of
    /// this size (below the queried star size).
    MaxTournamentSize(usize),
}

/// Outcome of an admission decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdmissionOutcome {
    Admitted {
        certificate: AdmissionCertificate,
        order_classes_searched: usize,
    },
    NotAdmitted {
        evidence: NonAdmissionEvidence,
    },
}

impl AdmissionOutcome {
    pub fn admits(&self) -> bool {
        matches!(self, AdmissionOutcome::Admitted { .. })
    }

    pub fn certificate(&self) -> Option<&AdmissionCertificate> {
        match self {
            AdmissionOutcome::Admitted { certificate, .. } => Some(certificate),
            AdmissionOutcome::NotAdmitted { .. } => None,
        }
    }
}

fn pair_key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Validates a certificate in `O(|E(F)|)`: for every edge `uvw` with
/// `u ≺ v ≺ w` under the certificate's order, the ordered triple
/// `(φ(uv), φ(uw), φ(vw))` must be admissible. A structurally broken
/// certificate (bad order, missing pair, out-of-range color) is an error,
/// not a `false`.
pub fn check_certificate(f: &ThreeGraph, p: &Palette, cert: &AdmissionCertificate) -> Result<bool> {
    let n = f.vertices();
    if cert.order.len() != n {
        return Err(Error::MalformedCertificate(format!(
            "order has {} entries for a graph on {} vertices",
            cert.order.len(),
            n
        )));
    }
    let mut rank = vec![usize::MAX; n];
    for (pos, &v) in cert.order.iter().enumerate() {
        if v >= n || rank[v] != usize::MAX {
            return Err(Error::MalformedCertificate(
                "order is not a permutation of the vertices".into(),
            ));
        }
        rank[v] = pos;
    }
    for (&(u, v), &c) in &cert.coloring {
        if u >= v || v >= n {
            return Err(Error::MalformedCertificate(format!(
                "invalid pair ({u},{v}) in coloring"
            )));
        }
        if c as usize >= p.colors() {
            return Err(Error::MalformedCertificate(format!(
                "pair ({u},{v}) colored {c} but the palette has {} colors",
                p.colors()
            )));
        }
    }
    let color_of = |u: usize, v: usize| -> Result<Color> {
        cert.coloring.get(&pair_key(u, v)).copied().ok_or_else(|| {
            Error::MalformedCertificate(format!(
                "pair ({},{}) is covered by an edge but missing from the coloring",
                pair_key(u, v).0,
                pair_key(u, v).1
            ))
        })
    };
    for &e in f.edges() {
        let mut by_rank = e;
        by_rank.sort_by_key(|&v| rank[v]);
        let [u, v, w] = by_rank;
        let triple = [color_of(u, v)?, color_of(u, w)?, color_of(v, w)?];
        if !p.contains(&triple) {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Automorphisms and order classes
// ---------------------------------------------------------------------------

/// All vertex permutations preserving the edge set, by brute force over
/// permutations. Desk scale only; callers gate on the vertex budget.
pub fn automorphisms(f: &ThreeGraph) -> Vec<Vec<usize>> {
    let n = f.vertices();
    let mut result = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let preserves = f
            .edges()
            .all(|e| f.contains_edge(&[perm[e[0]], perm[e[1]], perm[e[2]]]));
        if preserves {
            result.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    result
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// An order is canonical when no automorphism relabels it to a
/// lexicographically smaller sequence; exactly one order per class is
/// canonical.
fn is_canonical_order(order: &[usize], autos: &[Vec<usize>]) -> bool {
    for auto in autos {
        for t in 0..order.len() {
            let mapped = auto[order[t]];
            match mapped.cmp(&order[t]) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Constraint solving for one fixed order
// ---------------------------------------------------------------------------

struct OrderCsp<'a> {
    palette: &'a Palette,
    /// Variable index -> the pair it colors.
    pairs: Vec<(usize, usize)>,
    /// Each constraint lists the three variables that must form an
    /// admissible ordered triple.
    constraints: Vec<[usize; 3]>,
    /// constraint indices touching each variable
    watching: Vec<Vec<usize>>,
}

impl<'a> OrderCsp<'a> {
    fn build(f: &ThreeGraph, palette: &'a Palette, order: &[usize]) -> Self {
        let n = f.vertices();
        let mut rank = vec![0usize; n];
        for (pos, &v) in order.iter().enumerate() {
            rank[v] = pos;
        }
        let mut pair_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut pairs = Vec::new();
        let mut constraints = Vec::new();
        for &e in f.edges() {
            let mut by_rank = e;
            by_rank.sort_by_key(|&v| rank[v]);
            let [u, v, w] = by_rank;
            let mut var_of = |a: usize, b: usize| -> usize {
                let key = pair_key(a, b);
                *pair_index.entry(key).or_insert_with(|| {
                    pairs.push(key);
                    pairs.len() - 1
                })
            };
            let triple = [var_of(u, v), var_of(u, w), var_of(v, w)];
            constraints.push(triple);
        }
        let mut watching = vec![Vec::new(); pairs.len()];
        for (ci, c) in constraints.iter().enumerate() {
            for &var in c {
                if !watching[var].contains(&ci) {
                    watching[var].push(ci);
                }
            }
        }
        OrderCsp {
            palette,
            pairs,
            constraints,
            watching,
        }
    }

    /// Removes every value without support in some constraint, to fixpoint.
    /// Returns false when a domain empties.
    fn propagate(&self, domains: &mut [u128], mut queue: Vec<usize>) -> bool {
        while let Some(ci) = queue.pop() {
            let [x, y, z] = self.constraints[ci];
            for slot in 0..3 {
                let var = self.constraints[ci][slot];
                let mut supported: u128 = 0;
                let dom = domains[var];
                let mut value_bits = dom;
                while value_bits != 0 {
                    let v = value_bits.trailing_zeros() as usize;
                    value_bits &= value_bits - 1;
                    if self.has_support(slot, v, domains[x], domains[y], domains[z]) {
                        supported |= 1 << v;
                    }
                }
                if supported != dom {
                    if supported == 0 {
                        return false;
                    }
                    domains[var] = supported;
                    for &other in &self.watching[var] {
                        if !queue.contains(&other) {
                            queue.push(other);
                        }
                    }
                }
            }
        }
        true
    }

    fn has_support(&self, slot: usize, value: usize, dx: u128, dy: u128, dz: u128) -> bool {
        let (da, db) = match slot {
            0 => (dy, dz),
            1 => (dx, dz),
            _ => (dx, dy),
        };
        let mut a_bits = da;
        while a_bits != 0 {
            let a = a_bits.trailing_zeros() as usize;
            a_bits &= a_bits - 1;
            let mut b_bits = db;
            while b_bits != 0 {
                let b = b_bits.trailing_zeros() as usize;
                b_bits &= b_bits - 1;
                let triple = match slot {
                    0 => [value as Color, a as Color, b as Color],
                    1 => [a as Color, value as Color, b as Color],
                    _ => [a as Color, b as Color, value as Color],
                };
                if self.palette.contains(&triple) {
                    return true;
                }
            }
        }
        false
    }

    /// Backtracking with most-constrained-variable ordering and ascending
    /// value order; deterministic.
    fn solve(&self) -> Option<Vec<Color>> {
        let colors = self.palette.colors();
        if colors == 0 {
            return if self.pairs.is_empty() {
                Some(Vec::new())
            } else {
                None
            };
        }
        let full: u128 = if colors == 128 {
            u128::MAX
        } else {
            (1u128 << colors) - 1
        };
        let mut domains = vec![full; self.pairs.len()];
        if !self.propagate(&mut domains, (0..self.constraints.len()).collect()) {
            return None;
        }
        self.search(&domains)
            .map(|d| d.iter().map(|dom| dom.trailing_zeros() as Color).collect())
    }

    fn search(&self, domains: &[u128]) -> Option<Vec<u128>> {
        let branch_var = domains
            .iter()
            .enumerate()
            .filter(|(_, d)| d.count_ones() > 1)
            .min_by_key(|(i, d)| (d.count_ones(), *i))
            .map(|(i, _)| i);
        let var = match branch_var {
            None => return Some(domains.to_vec()),
            Some(v) => v,
        };
        let mut value_bits = domains[var];
        while value_bits != 0 {
            let v = value_bits.trailing_zeros() as usize;
            value_bits &= value_bits - 1;
            let mut trial = domains.to_vec();
            trial[var] = 1 << v;
            if self.propagate(&mut trial, self.watching[var].clone()) {
                if let Some(done) = self.search(&trial) {
                    return Some(done);
                }
            }
        }
        None
    }
}

// ---------------------------------------------------------------------------
// The decision procedure
// ---------------------------------------------------------------------------

/// Decides admission with the default vertex budget.
pub fn decide_admission(f: &ThreeGraph, p: &Palette) -> Result<AdmissionOutcome> {
    decide_admission_with_budget(f, p, ORDER_ENUMERATION_BUDGET)
}

/// Decides admission, enumerating orders up to automorphisms. The budget
/// guards the factorial enumeration; raising it is the caller's explicit
/// choice.
pub fn decide_admission_with_budget(
    f: &ThreeGraph,
    p: &Palette,
    max_vertices: usize,
) -> Result<AdmissionOutcome> {
    if f.vertices() > max_vertices {
        return Err(Error::Budget {
            what: "admission order enumeration vertices",
            requested: f.vertices(),
            limit: max_vertices,
        });
    }
    if p.colors() > MAX_COLORS {
        return Err(Error::Budget {
            what: "admission color domain",
            requested: p.colors(),
            limit: MAX_COLORS,
        });
    }
    let autos = automorphisms(f);
    decide_over_orders(f, p, |order| is_canonical_order(order, &autos))
}

/// Oracle variant enumerating all `|V|!` orders with no automorphism
/// quotient; used to validate the quotiented enumeration.
pub fn decide_admission_full_orders(f: &ThreeGraph, p: &Palette) -> Result<AdmissionOutcome> {
    if f.vertices() > ORDER_ENUMERATION_BUDGET {
        return Err(Error::Budget {
            what: "admission order enumeration vertices",
            requested: f.vertices(),
            limit: ORDER_ENUMERATION_BUDGET,
        });
    }
    decide_over_orders(f, p, |_| true)
}

fn decide_over_orders(
    f: &ThreeGraph,
    p: &Palette,
    mut keep_order: impl FnMut(&[usize]) -> bool,
) -> Result<AdmissionOutcome> {
    let n = f.vertices();
    let mut order: Vec<usize> = (0..n).collect();
    let mut searched = 0usize;
    loop {
        if keep_order(&order) {
            searched += 1;
            let csp = OrderCsp::build(f, p, &order);
            if let Some(assignment) = csp.solve() {
                let coloring: BTreeMap<(usize, usize), Color> = csp
                    .pairs
                    .iter()
                    .copied()
                    .zip(assignment.iter().copied())
                    .collect();
                let certificate = AdmissionCertificate {
                    order: order.clone(),
                    coloring,
                };
                if !check_certificate(f, p, &certificate)? {
                    return Err(Error::Internal(
                        "solver produced a certificate that fails validation".into(),
                    ));
                }
                return Ok(AdmissionOutcome::Admitted {
                    certificate,
                    order_classes_searched: searched,
                });
            }
        }
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(AdmissionOutcome::NotAdmitted {
        evidence: NonAdmissionEvidence::OrderClassesRefuted(searched),
    })
}
