//! The lower-bound palette family for stars and the exact-rational
//! machinery of the density bound: the inclusion-exclusion inequality, the
//! per-color degree statistics, the tangent-line inequalities with their
//! applicability thresholds, and the full verification chain.

mod chain;
mod refined;

pub use chain::{chain_verify, ChainOutcome, ChainReport, ChainStep, StepStatus};
pub use refined::{
    profile_mean_value, refined_threshold, refined_verdict, RefinedOutcome, RefinedThresholdReport,
    RefinedVerdict, TwoPointProfile,
};

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::palette::{Color, GoodPairTable, Palette, Role, Triple};
use crate::rational::Rat;

// ---------------------------------------------------------------------------
// The lower-bound palette family
// ---------------------------------------------------------------------------

/// The palette on colors `0..k-1` whose admissible triples are
/// `{(x,y,z) : x != y, y != z, z != x+1 (mod k-1)}`. Its density is
/// `(k^2-5k+7)/(k-1)^2` and the star `S_k` does not admit it, which makes it
/// the standard lower-bound construction for stars.
pub fn star_palette(k: usize) -> Result<Palette> {
    if k < 3 {
        return Err(Error::Precondition(format!(
            "the star lower-bound palette needs k >= 3, got {k}"
        )));
    }
    let n = k - 1;
    let mut triples = Vec::with_capacity(star_palette_triple_count(k)?);
    for x in 0..n {
        let banned = (x + 1) % n;
        for y in 0..n {
            if x == y {
                continue;
            }
            // z runs over 0..n with y and banned removed; pushing the
            // excluded values' complement as contiguous runs keeps the
            // inner loop branch-free.
            let (lo, hi) = if y < banned { (y, banned) } else { (banned, y) };
            let mut run = |from: usize, to: usize| {
                triples.extend((from..to).map(|z| [x as Color, y as Color, z as Color]));
            };
            if lo == hi {
                run(0, lo);
                run(lo + 1, n);
            } else {
                run(0, lo);
                run(lo + 1, hi);
                run(hi + 1, n);
            }
        }
    }
    Ok(Palette::from_sorted(n, triples))
}

/// Closed form `(k^2 - 5k + 7) / (k-1)^2` for the density of
/// [`star_palette`].
pub fn star_palette_density_formula(k: usize) -> Result<Rat> {
    if k < 3 {
        return Err(Error::Precondition(format!(
            "the density formula needs k >= 3, got {k}"
        )));
    }
    let kr = Rat::from(k);
    let num = kr.squared() - Rat::from_int(5) * &kr + Rat::from_int(7);
    let den = (kr - Rat::one()).squared();
    Ok(num / den)
}

/// Closed-form triple count `n (n^2 - 3n + 3)` with `n = k - 1`, kept as an
/// independent check against the enumeration in [`star_palette`].
pub fn star_palette_triple_count(k: usize) -> Result<usize> {
    if k < 3 {
        return Err(Error::Precondition(format!(
            "the triple count formula needs k >= 3, got {k}"
        )));
    }
    let n = k - 1;
    // n(n^2 - 3n + 3), grouped to stay nonnegative for n = 2
    Ok(n * n * n + 3 * n - 3 * n * n)
}

// ---------------------------------------------------------------------------
// Inclusion-exclusion density bound
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct InclExclReport {
    pub colors: usize,
    pub density: Rat,
    /// `1/4 + (1/2n) * sum_a sum_{i!=j} (e_{i,j}(a) - 1/2)^2`
    pub square_bound: Rat,
    pub square_bound_holds: bool,
    /// `|X_1|, |X_2|, |X_3|`: triples whose `(2,3)`-, `(1,3)`-, `(1,2)`-pair
    /// has no admissible completion.
    pub x_sizes: [usize; 3],
    /// `|X_1 ∩ X_2|, |X_1 ∩ X_3|, |X_2 ∩ X_3|`
    pub pairwise_sizes: [usize; 3],
    /// `|A| <= n^3 - sum |X_i| + sum |X_i ∩ X_j|`
    pub incl_excl_holds: bool,
    /// The first-principles counts agree with the good-pair table.
    pub table_consistent: bool,
    pub pass: bool,
}

/// Verifies the density bound
/// `d(P) <= 1/4 + (1/2n) sum_a sum_{i!=j} (e_{i,j}(a) - 1/2)^2`
/// together with the underlying inclusion-exclusion step. The sets `X_i` are
/// counted from first principles (membership scans over the triple set, not
/// the good-pair table) and then cross-checked against the table, so the two
/// routes are independent. Both inequalities hold for every palette; a
/// failure signals an implementation bug.
pub fn verify_incl_excl_bound(p: &Palette) -> Result<InclExclReport> {
    let n = p.colors();
    let density = p.density()?;
    let table = p.good_pairs();

    // First principles: bad12[a][b] = no triple (a, b, *), etc.
    let triples: HashSet<Triple> = p.triples().copied().collect();
    let mut bad12 = vec![true; n * n];
    let mut bad13 = vec![true; n * n];
    let mut bad23 = vec![true; n * n];
    let m = n as Color;
    for a in 0..n {
        for b in 0..n {
            let (ac, bc) = (a as Color, b as Color);
            for d in 0..m {
                if triples.contains(&[ac, bc, d]) {
                    bad12[a * n + b] = false;
                    break;
                }
            }
            for d in 0..m {
                if triples.contains(&[ac, d, bc]) {
                    bad13[a * n + b] = false;
                    break;
                }
            }
            for d in 0..m {
                if triples.contains(&[d, ac, bc]) {
                    bad23[a * n + b] = false;
                    break;
                }
            }
        }
    }
    let count = |m: &[bool]| m.iter().filter(|&&x| x).count();
    let x1 = n * count(&bad23);
    let x2 = n * count(&bad13);
    let x3 = n * count(&bad12);
    // X_1 ∩ X_2 = {(a,b,c) : (b,c) bad in (2,3) and (a,c) bad in (1,3)}
    let mut x12 = 0usize;
    let mut x13 = 0usize;
    let mut x23 = 0usize;
    for c in 0..n {
        let b_count = (0..n).filter(|&b| bad23[b * n + c]).count();
        let a_count = (0..n).filter(|&a| bad13[a * n + c]).count();
        x12 += b_count * a_count;
    }
    for b in 0..n {
        let c_count = (0..n).filter(|&c| bad23[b * n + c]).count();
        let a_count = (0..n).filter(|&a| bad12[a * n + b]).count();
        x13 += c_count * a_count;
    }
    for a in 0..n {
        let c_count = (0..n).filter(|&c| bad13[a * n + c]).count();
        let b_count = (0..n).filter(|&b| bad12[a * n + b]).count();
        x23 += c_count * b_count;
    }

    // Cross-check the first-principles counts against the good-pair table.
    let sum_codeg = |role: Role| -> usize { (0..n).map(|a| table.codegree(role, a)).sum() };
    let mut table_consistent = x1 == n * sum_codeg(Role::R23)
        && x1 == n * sum_codeg(Role::R32)
        && x2 == n * sum_codeg(Role::R13)
        && x2 == n * sum_codeg(Role::R31)
        && x3 == n * sum_codeg(Role::R12)
        && x3 == n * sum_codeg(Role::R21);
    let from_table_x12: usize = (0..n)
        .map(|c| table.codegree(Role::R31, c) * table.codegree(Role::R32, c))
        .sum();
    let from_table_x13: usize = (0..n)
        .map(|b| table.codegree(Role::R21, b) * table.codegree(Role::R23, b))
        .sum();
    let from_table_x23: usize = (0..n)
        .map(|a| table.codegree(Role::R12, a) * table.codegree(Role::R13, a))
        .sum();
    table_consistent =
        table_consistent && x12 == from_table_x12 && x13 == from_table_x13 && x23 == from_table_x23;

    let incl_excl_holds = (p.triple_count() as i128)
        <= (n as i128).pow(3) - (x1 + x2 + x3) as i128 + (x12 + x13 + x23) as i128;

    let half = Rat::ratio(1, 2);
    let mut square_sum = Rat::zero();
    for a in 0..n {
        for role in Role::ALL {
            square_sum += &(table.e(role, a) - &half).squared();
        }
    }
    let square_bound = Rat::ratio(1, 4) + square_sum / (Rat::from_int(2) * Rat::from(n));
    let square_bound_holds = density <= square_bound;

    Ok(InclExclReport {
        colors: n,
        density,
        square_bound,
        square_bound_holds,
        x_sizes: [x1, x2, x3],
        pairwise_sizes: [x12, x13, x23],
        incl_excl_holds,
        table_consistent,
        pass: square_bound_holds && incl_excl_holds && table_consistent,
    })
}

// ---------------------------------------------------------------------------
// Per-color statistics
// ---------------------------------------------------------------------------

/// Exact per-color aggregates of the good-pair ratios:
/// `m_A = max(e23, e32)`, `m_C = max(e12, e21)`, `m_B = m_A + e13`,
/// `m_D = m_C + e31`, and the inverse slacks `M_A = 1/(1-m_A)`,
/// `M_C = 1/(1-m_C)`, `M_B = 1/(2-m_B)`, `M_D = 1/(2-m_D)` (undefined when
/// the corresponding slack is not positive, which only happens alongside a
/// loop in the color digraph).
#[derive(Clone, Debug, Serialize)]
pub struct ColorStats {
    pub color: usize,
    pub m_a: Rat,
    pub m_b: Rat,
    pub m_c: Rat,
    pub m_d: Rat,
    pub cap_a: Option<Rat>,
    pub cap_b: Option<Rat>,
    pub cap_c: Option<Rat>,
    pub cap_d: Option<Rat>,
}

impl ColorStats {
    pub fn degenerate(&self) -> bool {
        self.cap_a.is_none() || self.cap_b.is_none() || self.cap_c.is_none() || self.cap_d.is_none()
    }
}

pub fn color_stats(table: &GoodPairTable) -> Vec<ColorStats> {
    let inv = |slack: Rat| -> Option<Rat> {
        if slack > Rat::zero() {
            Some(Rat::one() / slack)
        } else {
            None
        }
    };
    (0..table.n())
        .map(|a| {
            let m_a = table.e(Role::R23, a).max(table.e(Role::R32, a));
            let m_c = table.e(Role::R12, a).max(table.e(Role::R21, a));
            let m_b = &m_a + &table.e(Role::R13, a);
            let m_d = &m_c + &table.e(Role::R31, a);
            ColorStats {
                color: a,
                cap_a: inv(Rat::one() - &m_a),
                cap_b: inv(Rat::from_int(2) - &m_b),
                cap_c: inv(Rat::one() - &m_c),
                cap_d: inv(Rat::from_int(2) - &m_d),
                m_a,
                m_b,
                m_c,
                m_d,
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// The quadratics f, g and their inverse-slack forms
// ---------------------------------------------------------------------------

/// `f(x) = (x - 1/2)^2 + 4((k-2)/(k-1) - x)^2`
pub fn f_of_m(k: usize, x: &Rat) -> Rat {
    let kappa = Rat::from(k - 2) / Rat::from(k - 1);
    (x - &Rat::ratio(1, 2)).squared() + Rat::from_int(4) * (kappa - x).squared()
}

/// `g(x) = (1/2)(x - 1)^2 + 4((k-2)/(k-1) - x/2)^2`
pub fn g_of_m(k: usize, x: &Rat) -> Rat {
    let kappa = Rat::from(k - 2) / Rat::from(k - 1);
    Rat::ratio(1, 2) * (x - &Rat::one()).squared()
        + Rat::from_int(4) * (kappa - x / Rat::from_int(2)).squared()
}

/// `f1(x) = f(1 - 1/x) = 5/x^2 - (k+7)/((k-1)x) + 4/(k-1)^2 + 1/4`
pub fn f_of_cap(k: usize, x: &Rat) -> Rat {
    let u = Rat::one() / x; // x > 0 in every use
    Rat::from_int(5) * u.squared() - Rat::from(k + 7) / Rat::from(k - 1) * &u
        + Rat::from_int(4) / Rat::from(k - 1).squared()
        + Rat::ratio(1, 4)
}

/// `g1(x) = g(2 - 1/x) = 3/(2x^2) - (k+3)/((k-1)x) + 4/(k-1)^2 + 1/2`
pub fn g_of_cap(k: usize, x: &Rat) -> Rat {
    let u = Rat::one() / x;
    Rat::ratio(3, 2) * u.squared() - Rat::from(k + 3) / Rat::from(k - 1) * &u
        + Rat::from_int(4) / Rat::from(k - 1).squared()
        + Rat::ratio(1, 2)
}

// ---------------------------------------------------------------------------
// Tangent-line inequalities
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct TangentReport {
    pub k: usize,
    pub x: Rat,
    pub range_start: Rat,
    pub in_range: bool,
    pub curve_value: Rat,
    pub line_value: Rat,
    /// `None` when `x` is below the range (the inequality is then
    /// inapplicable, not false).
    pub holds: Option<bool>,
    /// Value of the factored cubic certifying the comparison.
    pub factored: Rat,
    /// The line-minus-curve difference times its positive normalizer equals
    /// the factored cubic; checked at the given point.
    pub formulations_agree: bool,
}

/// The tangent bound for the `f` side:
/// `f1(x) <= (k-3)/(k-1)^3 x + (k^2-10k+21)/(2k-2)^2` for all
/// `x >= 5(k-1)/(k-3)`, equivalently
/// `(x-(k-1))^2 ((k-3)x - 5(k-1)) >= 0`.
pub fn verify_f_tangent(k: usize, x: &Rat) -> Result<TangentReport> {
    if k < 4 {
        return Err(Error::Precondition(format!(
            "the f tangent bound needs k >= 4, got {k}"
        )));
    }
    if *x <= Rat::zero() {
        return Err(Error::Precondition(
            "the evaluation point must be positive".into(),
        ));
    }
    let km1 = Rat::from(k - 1);
    let range_start = Rat::from_int(5) * &km1 / Rat::from(k - 3);
    let in_range = x >= &range_start;
    let curve_value = f_of_cap(k, x);
    let line_value = Rat::from(k - 3) / km1.pow(3) * x
        + (Rat::from(k).squared() - Rat::from(10 * k) + Rat::from_int(21))
            / (Rat::from(2 * k) - Rat::from_int(2)).squared();
    let factored = (x - &km1).squared() * (Rat::from(k - 3) * x - Rat::from_int(5) * &km1);
    let normalizer = km1.pow(3) * x.squared();
    let formulations_agree = (&line_value - &curve_value) * normalizer == factored;
    let holds = if in_range {
        Some(line_value >= curve_value)
    } else {
        None
    };
    Ok(TangentReport {
        k,
        x: x.clone(),
        range_start,
        in_range,
        curve_value,
        line_value,
        holds,
        factored,
        formulations_agree,
    })
}

/// The tangent bound for the `g` side:
/// `g1(x) <= (4k-12)/(k-1)^3 x + (k^2-10k+21)/(2(k-1)^2)` for all
/// `x >= 3(k-1)/(2k-6)`, equivalently
/// `(2x-(k-1))^2 ((2k-6)x - 3(k-1)) >= 0`.
pub fn verify_g_tangent(k: usize, x: &Rat) -> Result<TangentReport> {
    if k < 4 {
        return Err(Error::Precondition(format!(
            "the g tangent bound needs k >= 4, got {k}"
        )));
    }
    if *x <= Rat::zero() {
        return Err(Error::Precondition(
            "the evaluation point must be positive".into(),
        ));
    }
    let km1 = Rat::from(k - 1);
    let range_start = Rat::from_int(3) * &km1 / (Rat::from(2 * k) - Rat::from_int(6));
    let in_range = x >= &range_start;
    let curve_value = g_of_cap(k, x);
    let line_value = (Rat::from(4 * k) - Rat::from_int(12)) / km1.pow(3) * x
        + (Rat::from(k).squared() - Rat::from(10 * k) + Rat::from_int(21))
            / (Rat::from_int(2) * km1.squared());
    let factored = (Rat::from_int(2) * x - &km1).squared()
        * ((Rat::from(2 * k) - Rat::from_int(6)) * x - Rat::from_int(3) * &km1);
    let normalizer = Rat::from_int(2) * km1.pow(3) * x.squared();
    let formulations_agree = (&line_value - &curve_value) * normalizer == factored;
    let holds = if in_range {
        Some(line_value >= curve_value)
    } else {
        None
    };
    Ok(TangentReport {
        k,
        x: x.clone(),
        range_start,
        in_range,
        curve_value,
        line_value,
        holds,
        factored,
        formulations_agree,
    })
}

// ---------------------------------------------------------------------------
// Applicability thresholds
// ---------------------------------------------------------------------------

/// Least `k` for which the derived lower bound on each inverse slack clears
/// the tangent range on the `f` side (`(k-1)^2/(9(k-2)) >= 5(k-1)/(k-3)`)
/// and on the `g` side (`(k-1)^2/(18(k-2)) >= 3(k-1)/(2k-6)`), by
/// exact-rational scan. Returns `(k_f, k_g) = (48, 30)`.
pub fn tangent_thresholds() -> (usize, usize) {
    let mut k_f = None;
    let mut k_g = None;
    for k in 4..=1000usize {
        let km1 = Rat::from(k - 1);
        let floor_f = km1.squared() / (Rat::from_int(9) * Rat::from(k - 2));
        let start_f = Rat::from_int(5) * &km1 / Rat::from(k - 3);
        if k_f.is_none() && floor_f >= start_f {
            k_f = Some(k);
        }
        let floor_g = km1.squared() / (Rat::from_int(18) * Rat::from(k - 2));
        let start_g = Rat::from_int(3) * &km1 / (Rat::from(2 * k) - Rat::from_int(6));
        if k_g.is_none() && floor_g >= start_g {
            k_g = Some(k);
        }
        if k_f.is_some() && k_g.is_some() {
            break;
        }
    }
    (
        k_f.expect("f-side threshold exists below 1000"),
        k_g.expect("g-side threshold exists below 1000"),
    )
}

/// The exact identity `1/4 + 3(k-3)^2 / (4(k-1)^2) = (k^2-5k+7)/(k-1)^2`
/// that closes the bound assembly. True for every `k >= 2`.
pub fn assembly_identity(k: usize) -> Result<bool> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "the assembly identity needs k >= 2, got {k}"
        )));
    }
    let km1 = Rat::from(k - 1);
    let km3 = Rat::from(k) - Rat::from_int(3);
    let lhs =
        Rat::ratio(1, 4) + Rat::from_int(3) * km3.squared() / (Rat::from_int(4) * km1.squared());
    let rhs = (Rat::from(k).squared() - Rat::from(5 * k) + Rat::from_int(7)) / km1.squared();
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_palette_small_cases() {
        let p3 = star_palette(3).unwrap();
        assert_eq!(p3.colors(), 2);
        let triples: Vec<Triple> = p3.triples().copied().collect();
        assert_eq!(triples, vec![[0, 1, 0], [1, 0, 1]]);
        assert_eq!(p3.density().unwrap(), Rat::ratio(1, 4));

        let p4 = star_palette(4).unwrap();
        assert_eq!(p4.colors(), 3);
        assert_eq!(p4.triple_count(), 9);
        assert_eq!(p4.density().unwrap(), Rat::ratio(1, 3));

        assert!(star_palette(2).is_err());
    }

    #[test]
    fn star_palette_density_matches_formula() {
        for k in 3..=60 {
            assert_eq!(
                star_palette(k).unwrap().density().unwrap(),
                star_palette_density_formula(k).unwrap(),
                "k={k}"
            );
            assert_eq!(
                star_palette(k).unwrap().triple_count(),
                star_palette_triple_count(k).unwrap(),
                "k={k}"
            );
        }
    }

    #[test]
    fn formula_values() {
        assert_eq!(star_palette_density_formula(3).unwrap(), Rat::ratio(1, 4));
        assert_eq!(star_palette_density_formula(4).unwrap(), Rat::ratio(1, 3));
        assert_eq!(
            star_palette_density_formula(48).unwrap(),
            Rat::ratio(2071, 2209)
        );
        assert_eq!(
            star_palette_density_formula(1000).unwrap(),
            Rat::ratio(995007, 998001)
        );
    }

    #[test]
    fn star_palette_is_minimal() {
        for k in [3, 4, 5, 8] {
            assert!(star_palette(k).unwrap().is_minimal().unwrap(), "k={k}");
        }
    }

    #[test]
    fn incl_excl_on_complete_palette_is_tight() {
        let report = verify_incl_excl_bound(&Palette::complete(3)).unwrap();
        assert!(report.pass);
        assert_eq!(report.density, report.square_bound);
        assert_eq!(report.x_sizes, [0, 0, 0]);
    }

    #[test]
    fn incl_excl_on_empty_palette() {
        let report = verify_incl_excl_bound(&Palette::empty(4)).unwrap();
        assert!(report.pass);
        assert_eq!(report.square_bound, Rat::one());
        assert_eq!(report.density, Rat::zero());
    }

    #[test]
    fn incl_excl_on_star_palettes() {
        for k in 3..=8 {
            let report = verify_incl_excl_bound(&star_palette(k).unwrap()).unwrap();
            assert!(report.pass, "k={k}");
        }
    }

    #[test]
    fn stats_on_star_palette_48() {
        let p = star_palette(48).unwrap();
        let stats = color_stats(&p.good_pairs());
        for s in &stats {
            assert_eq!(s.m_a, Rat::ratio(46, 47));
            assert_eq!(s.m_b, Rat::ratio(92, 47));
            assert_eq!(s.cap_a.clone().unwrap(), Rat::from_int(47));
            assert_eq!(s.cap_b.clone().unwrap(), Rat::ratio(47, 2));
            assert!(!s.degenerate());
        }
    }

    #[test]
    fn stats_degenerate_on_one_color_complete() {
        let p = Palette::complete(1);
        let stats = color_stats(&p.good_pairs());
        assert!(stats[0].degenerate());
        assert_eq!(stats[0].m_a, Rat::one());
    }

    #[test]
    fn cap_transcription_identities() {
        // f1(x) = f(1 - 1/x) and g1(x) = g(2 - 1/x) at random rational
        // points, for several k.
        let mut rng = crate::rng::SplitMix64::new(31337);
        for k in [4, 31, 48, 100] {
            for _ in 0..100 {
                let num = 1 + rng.next_below(400) as i64;
                let den = 1 + rng.next_below(40) as i64;
                let x = Rat::ratio(num, den) + Rat::one(); // >= 1
                let m_f = Rat::one() - Rat::one() / &x;
                assert_eq!(f_of_cap(k, &x), f_of_m(k, &m_f), "k={k} x={x}");
                let m_g = Rat::from_int(2) - Rat::one() / &x;
                assert_eq!(g_of_cap(k, &x), g_of_m(k, &m_g), "k={k} x={x}");
            }
        }
    }

    #[test]
    fn f_tangent_equality_at_k_minus_one() {
        for k in [48, 60, 100] {
            let x = Rat::from(k - 1);
            let report = verify_f_tangent(k, &x).unwrap();
            assert!(report.in_range);
            assert_eq!(report.curve_value, report.line_value);
            assert_eq!(
                report.curve_value,
                Rat::from(k - 3).squared() / (Rat::from(2 * k) - Rat::from_int(2)).squared()
            );
            assert!(report.formulations_agree);
        }
    }

    #[test]
    fn g_tangent_equality_at_half_k_minus_one() {
        for k in [31, 48, 100] {
            let x = Rat::from(k - 1) / Rat::from_int(2);
            let report = verify_g_tangent(k, &x).unwrap();
            assert!(report.in_range);
            assert_eq!(report.curve_value, report.line_value);
            assert!(report.formulations_agree);
        }
    }

    #[test]
    fn f_tangent_range_boundary_is_equality() {
        // Third root of the cubic: x = 5(k-1)/(k-3) at k = 48 is 47/9.
        let x = Rat::ratio(47, 9);
        let report = verify_f_tangent(48, &x).unwrap();
        assert!(report.in_range);
        assert_eq!(report.factored, Rat::zero());
        assert_eq!(report.curve_value, report.line_value);
    }

    #[test]
    fn tangent_below_range_is_inapplicable() {
        let report = verify_f_tangent(48, &Rat::from_int(2)).unwrap();
        assert!(!report.in_range);
        assert!(report.holds.is_none());
    }

    #[test]
    fn tangents_hold_at_random_in_range_points() {
        let mut rng = crate::rng::SplitMix64::new(4242);
        for k in [31usize, 48, 100] {
            for _ in 0..100 {
                let jitter =
                    Rat::ratio(rng.next_below(5000) as i64, 1 + rng.next_below(100) as i64);
                let fx = Rat::from_int(5) * Rat::from(k - 1) / Rat::from(k - 3) + &jitter;
                let rf = verify_f_tangent(k, &fx).unwrap();
                assert_eq!(rf.holds, Some(true), "f k={k} x={fx}");
                assert!(rf.formulations_agree);
                let gx = Rat::from_int(3) * Rat::from(k - 1)
                    / (Rat::from(2 * k) - Rat::from_int(6))
                    + &jitter;
                let rg = verify_g_tangent(k, &gx).unwrap();
                assert_eq!(rg.holds, Some(true), "g k={k} x={gx}");
                assert!(rg.formulations_agree);
            }
        }
    }

    #[test]
    fn thresholds_are_48_and_30() {
        assert_eq!(tangent_thresholds(), (48, 30));
    }

    #[test]
    fn f_threshold_fails_at_47() {
        let km1 = Rat::from_int(46);
        let floor = km1.squared() / (Rat::from_int(9) * Rat::from_int(45));
        let start = Rat::from_int(5) * &km1 / Rat::from_int(44);
        assert!(floor < start);
    }

    #[test]
    fn assembly_identity_everywhere() {
        for k in 2..=1001 {
            assert!(assembly_identity(k).unwrap(), "k={k}");
        }
        assert!(assembly_identity(3).unwrap()); // the squared term vanishes
    }
}
