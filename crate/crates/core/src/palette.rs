//! Palettes: a finite set of colors `0..n` together with a set of ordered
//! color triples (the admissible triples), the basic objects whose densities
//! bound uniform Turán densities from below.
//!
//! This module owns the data model, the density and good-pair statistics,
//! color removal with relabeling, minimality reduction, and the verifier for
//! the degree lower bound `e_{i,j}(a) >= 3 d(P) - 2` that every
//! minimality-reduced palette satisfies.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// A color inside a triple. Compact on purpose: palettes at the
/// 10^8-triple scale are routinely materialized, so entry width is memory
/// bandwidth. API parameters use plain `usize` indexes.
pub type Color = u32;

/// An ordered triple of colors.
pub type Triple = [Color; 3];

// ---------------------------------------------------------------------------
// Position pairs
// ---------------------------------------------------------------------------

/// An ordered pair of distinct positions `(i, j)` with `i, j` in `{1,2,3}`,
/// the six roles in which a color pair can be good.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Role {
    R12,
    R13,
    R21,
    R23,
    R31,
    R32,
}

impl Role {
    pub const ALL: [Role; 6] = [
        Role::R12,
        Role::R13,
        Role::R21,
        Role::R23,
        Role::R31,
        Role::R32,
    ];

    /// The `(i, j)` positions, 1-based.
    pub fn positions(self) -> (usize, usize) {
        match self {
            Role::R12 => (1, 2),
            Role::R13 => (1, 3),
            Role::R21 => (2, 1),
            Role::R23 => (2, 3),
            Role::R31 => (3, 1),
            Role::R32 => (3, 2),
        }
    }

    pub fn from_positions(i: usize, j: usize) -> Option<Role> {
        match (i, j) {
            (1, 2) => Some(Role::R12),
            (1, 3) => Some(Role::R13),
            (2, 1) => Some(Role::R21),
            (2, 3) => Some(Role::R23),
            (3, 1) => Some(Role::R31),
            (3, 2) => Some(Role::R32),
            _ => None,
        }
    }

    /// The role with `i` and `j` swapped; `good[i,j][a][b] == good[j,i][b][a]`.
    pub fn swapped(self) -> Role {
        let (i, j) = self.positions();
        Role::from_positions(j, i).unwrap()
    }

    fn index(self) -> usize {
        match self {
            Role::R12 => 0,
            Role::R13 => 1,
            Role::R21 => 2,
            Role::R23 => 3,
            Role::R31 => 4,
            Role::R32 => 5,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.positions();
        write!(f, "({i},{j})")
    }
}

// ---------------------------------------------------------------------------
// Palette
// ---------------------------------------------------------------------------

/// A palette: `colors` counts the color set `0..colors`, `triples` is the set
/// of admissible ordered triples. Immutable after construction.
pub struct Palette {
    colors: usize,
    /// Sorted, duplicate-free.
    triples: Vec<Triple>,
    /// `by_position[p][a]` lists the triples whose entry at position `p`
    /// (0-based) equals `a`, for the accounting that splits `|A \ A'|` by
    /// the position of a removed color. Built on first use; palettes at
    /// large color counts often only need their density.
    by_position: OnceLock<[Vec<Vec<Triple>>; 3]>,
}

impl Clone for Palette {
    fn clone(&self) -> Self {
        Palette {
            colors: self.colors,
            triples: self.triples.clone(),
            by_position: OnceLock::new(),
        }
    }
}

impl PartialEq for Palette {
    fn eq(&self, other: &Self) -> bool {
        self.colors == other.colors && self.triples == other.triples
    }
}

impl Eq for Palette {}

impl fmt::Debug for Palette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Palette")
            .field("colors", &self.colors)
            .field("triples", &self.triples)
            .finish()
    }
}

impl Palette {
    /// Builds a palette from an explicit triple list. Rejects out-of-range
    /// entries and duplicate triples (duplicates in a file are a hard error,
    /// not silently collapsed).
    pub fn new(colors: usize, triples: impl IntoIterator<Item = Triple>) -> Result<Self> {
        let mut list: Vec<Triple> = triples.into_iter().collect();
        for t in &list {
            for &c in t {
                if c as usize >= colors {
                    return Err(Error::InvalidPalette(format!(
                        "triple ({},{},{}) uses color {} but the palette has {} colors",
                        t[0], t[1], t[2], c, colors
                    )));
                }
            }
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidPalette(format!(
                "duplicate triple ({},{},{})",
                w[0][0], w[0][1], w[0][2]
            )));
        }
        Ok(Self::from_sorted(colors, list))
    }

    /// Wraps an already sorted, duplicate-free triple list.
    pub fn from_sorted(colors: usize, triples: Vec<Triple>) -> Self {
        #[cfg(debug_assertions)]
        {
            // Exhaustive validation only at test scale; the 10^8-triple
            // palettes come from structural generators.
            if triples.len() <= 1 << 16 {
                assert!(
                    triples.windows(2).all(|w| w[0] < w[1]),
                    "triples not sorted and duplicate-free"
                );
                assert!(
                    triples
                        .iter()
                        .all(|t| t.iter().all(|&c| (c as usize) < colors)),
                    "triple color out of range"
                );
            }
        }
        Palette {
            colors,
            triples,
            by_position: OnceLock::new(),
        }
    }

    fn position_index(&self) -> &[Vec<Vec<Triple>>; 3] {
        self.by_position.get_or_init(|| {
            let mut index = [
                vec![Vec::new(); self.colors],
                vec![Vec::new(); self.colors],
                vec![Vec::new(); self.colors],
            ];
            for &t in &self.triples {
                for p in 0..3 {
                    index[p][t[p] as usize].push(t);
                }
            }
            index
        })
    }

    /// The palette on `n` colors with every triple admissible.
    pub fn complete(n: usize) -> Self {
        let m = n as Color;
        let mut list = Vec::with_capacity(n * n * n);
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    list.push([a, b, c]);
                }
            }
        }
        Self::from_sorted(n, list)
    }

    /// The palette on `n` colors with no admissible triple.
    pub fn empty(n: usize) -> Self {
        Self::from_sorted(n, Vec::new())
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.binary_search(t).is_ok()
    }

    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    /// The triples as a sorted slice.
    pub fn sorted_triples(&self) -> &[Triple] {
        &self.triples
    }

    /// Triples with entry `a` at 0-based position `p`.
    pub fn triples_at(&self, p: usize, a: usize) -> &[Triple] {
        &self.position_index()[p][a]
    }

    /// `d(P) = |A| / n^3` as an exact rational. A palette with zero colors
    /// has no density.
    pub fn density(&self) -> Result<Rat> {
        if self.colors == 0 {
            return Err(Error::InvalidPalette(
                "density of a palette with zero colors is undefined".into(),
            ));
        }
        Ok(Rat::from(self.triples.len()) / Rat::from(self.colors).pow(3))
    }

    /// Computes the full good-pair table in one pass over the triples.
    pub fn good_pairs(&self) -> GoodPairTable {
        let n = self.colors;
        let mut good = [
            vec![false; n * n],
            vec![false; n * n],
            vec![false; n * n],
            vec![false; n * n],
            vec![false; n * n],
            vec![false; n * n],
        ];
        for &[a, b, c] in &self.triples {
            let (c1, c2, c3) = (a as usize, b as usize, c as usize);
            good[Role::R12.index()][c1 * n + c2] = true;
            good[Role::R13.index()][c1 * n + c3] = true;
            good[Role::R21.index()][c2 * n + c1] = true;
            good[Role::R23.index()][c2 * n + c3] = true;
            good[Role::R31.index()][c3 * n + c1] = true;
            good[Role::R32.index()][c3 * n + c2] = true;
        }
        let degree = good
            .iter()
            .map(|m| {
                (0..n)
                    .map(|a| m[a * n..(a + 1) * n].iter().filter(|&&g| g).count())
                    .collect()
            })
            .collect::<Vec<Vec<usize>>>()
            .try_into()
            .unwrap();
        GoodPairTable { n, good, degree }
    }

    /// Removes color `a`: keeps the triples avoiding `a` and relabels the
    /// remaining colors to a contiguous 0-based range. The relabeling map is
    /// reported alongside (`old_to_new[c]` is `None` for the removed color).
    pub fn remove_color(&self, a: usize) -> Result<ColorRemoval> {
        if a >= self.colors {
            return Err(Error::InvalidPalette(format!(
                "cannot remove color {a}: palette has {} colors",
                self.colors
            )));
        }
        let old_to_new: Vec<Option<usize>> = (0..self.colors)
            .map(|c| match c.cmp(&a) {
                std::cmp::Ordering::Less => Some(c),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(c - 1),
            })
            .collect();
        let removed = a as Color;
        let relabel = |c: Color| if c < removed { c } else { c - 1 };
        // Relabeling is monotone on the surviving colors, so the filtered
        // list stays sorted.
        let kept: Vec<Triple> = self
            .triples
            .iter()
            .filter(|t| !t.contains(&removed))
            .map(|&[x, y, z]| [relabel(x), relabel(y), relabel(z)])
            .collect();
        let palette = Palette::from_sorted(self.colors - 1, kept);
        let degenerate = palette.colors == 0;
        Ok(ColorRemoval {
            palette,
            old_to_new,
            degenerate,
        })
    }

    /// Returns a color whose removal would not strictly decrease the
    /// density, or `None` when the palette is minimality-reduced. Removal
    /// from a palette with at most one color is undefined, so such palettes
    /// count as reduced.
    pub fn removable_color(&self) -> Result<Option<usize>> {
        if self.colors <= 1 {
            return Ok(None);
        }
        let d = self.density()?;
        for a in 0..self.colors {
            let removed = self.remove_color(a)?;
            if removed.palette.density()? >= d {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }

    pub fn is_minimal(&self) -> Result<bool> {
        Ok(self.removable_color()?.is_none())
    }

    /// Repeatedly removes the lowest-index color whose removal does not
    /// strictly decrease the density, until none exists. The result's
    /// density is at least the input's, and removing any further color
    /// strictly decreases it.
    pub fn minimality_reduce(&self) -> Result<Reduction> {
        let mut current = self.clone();
        // original_of[c] = label of c in the input palette
        let mut original_of: Vec<usize> = (0..self.colors).collect();
        let mut removed = Vec::new();
        loop {
            match current.removable_color()? {
                None => break,
                Some(a) => {
                    removed.push(original_of[a]);
                    original_of.remove(a);
                    current = current.remove_color(a)?.palette;
                }
            }
        }
        let mut old_to_new = vec![None; self.colors];
        for (new, &old) in original_of.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        let degenerate = current.colors == 0 || current.triples.is_empty();
        Ok(Reduction {
            palette: current,
            removed_original_colors: removed,
            old_to_new,
            degenerate,
        })
    }

    /// Checks the degree lower bound `e_{i,j}(a) >= 3 d(P) - 2` for every
    /// color and every position pair. The bound is a theorem for
    /// minimality-reduced palettes, so the input is required to be reduced;
    /// a failure on such a palette indicates a bug, and the report says so.
    pub fn verify_degree_bounds(&self) -> Result<DegreeBoundReport> {
        if let Some(a) = self.removable_color()? {
            return Err(Error::Precondition(format!(
                "palette is not minimality-reduced: removing color {a} does not decrease density"
            )));
        }
        let d = self.density()?;
        let bound = Rat::from_int(3) * &d - Rat::from_int(2);
        let table = self.good_pairs();
        let mut violations = Vec::new();
        for a in 0..self.colors {
            for role in Role::ALL {
                let e = table.e(role, a);
                if e < bound {
                    violations.push(DegreeBoundViolation {
                        color: a,
                        role,
                        e_value: e,
                    });
                }
            }
        }
        Ok(DegreeBoundReport {
            density: d,
            bound,
            colors: self.colors,
            pass: violations.is_empty(),
            violations,
        })
    }
}

/// Result of removing one color.
#[derive(Clone, Debug)]
pub struct ColorRemoval {
    pub palette: Palette,
    pub old_to_new: Vec<Option<usize>>,
    pub degenerate: bool,
}

/// Result of minimality reduction.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub palette: Palette,
    /// Colors removed, in removal order, labeled as in the input palette.
    pub removed_original_colors: Vec<usize>,
    /// Map from input colors to the reduced palette's colors.
    pub old_to_new: Vec<Option<usize>>,
    /// Set when the result has no colors or no triples.
    pub degenerate: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeBoundViolation {
    pub color: usize,
    pub role: Role,
    pub e_value: Rat,
}

/// Outcome of [`Palette::verify_degree_bounds`].
#[derive(Clone, Debug, Serialize)]
pub struct DegreeBoundReport {
    pub density: Rat,
    pub bound: Rat,
    pub colors: usize,
    pub pass: bool,
    pub violations: Vec<DegreeBoundViolation>,
}

// ---------------------------------------------------------------------------
// Good-pair table
// ---------------------------------------------------------------------------

/// For each role `(i,j)` the boolean matrix of good pairs and the degree
/// vector `d_{i,j}(a)`. Immutable once computed.
#[derive(Clone, Debug)]
pub struct GoodPairTable {
    n: usize,
    good: [Vec<bool>; 6],
    degree: [Vec<usize>; 6],
}

impl GoodPairTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether some admissible triple has `a` at position `i` and `b` at
    /// position `j`.
    pub fn is_good(&self, role: Role, a: usize, b: usize) -> bool {
        self.good[role.index()][a * self.n + b]
    }

    /// `d_{i,j}(a)`: the number of colors `b` with `(a,b)` good in `(i,j)`.
    pub fn degree(&self, role: Role, a: usize) -> usize {
        self.degree[role.index()][a]
    }

    /// `d'_{i,j}(a) = n - d_{i,j}(a)`.
    pub fn codegree(&self, role: Role, a: usize) -> usize {
        self.n - self.degree(role, a)
    }

    /// `e_{i,j}(a) = d_{i,j}(a) / n`.
    pub fn e(&self, role: Role, a: usize) -> Rat {
        Rat::from(self.degree(role, a)) / Rat::from(self.n)
    }

    /// `e'_{i,j}(a) = 1 - e_{i,j}(a)`.
    pub fn e_prime(&self, role: Role, a: usize) -> Rat {
        Rat::from(self.codegree(role, a)) / Rat::from(self.n)
    }
}
