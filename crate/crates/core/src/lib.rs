//! Exact computational toolkit for palette-based lower bounds on uniform
//! Turán densities of 3-uniform hypergraphs.
//!
//! A palette is a finite color set together with a set of admissible ordered
//! color triples; a 3-graph `F` admits a palette when some vertex order and
//! pair coloring make every edge's color triple admissible. Palettes that
//! `F` does not admit give density lower bounds for `F`, and for stars the
//! admissibility question reduces to loops and transitive tournaments in a
//! digraph on two copies of the color set. This crate implements the whole
//! pipeline with exact rational arithmetic in every verdict:
//!
//! * [`palette`] — the palette model, good-pair statistics, minimality
//!   reduction and the degree-bound verifier;
//! * [`hypergraph`] — 3-graphs, stars, the seeded random pair-coloring
//!   construction and brute-force copy detection;
//! * [`admit`] — the general certificate-backed admissibility decider;
//! * [`digraph`] — the palette digraph, the exact maximum transitive
//!   tournament solver, the star-specialized decision and the Caro-Wei
//!   degree bound;
//! * [`bounds`] — the star lower-bound palette family, the
//!   inclusion-exclusion and tangent-line inequalities, the threshold scan,
//!   the full verification chain and the refined applicability analysis;
//! * [`search`] — exhaustive and local search for dense non-admitted
//!   palettes.

pub mod admit;
pub mod bitset;
pub mod bounds;
pub mod digraph;
pub mod error;
pub mod formats;
pub mod hypergraph;
pub mod palette;
pub mod rational;
pub mod rng;
pub mod search;

pub use error::{Error, Result};
pub use rational::Rat;

/// Version of every JSON schema this crate reads or writes.
pub const FORMAT_VERSION: u32 = 1;
