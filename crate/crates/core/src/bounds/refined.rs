//! Refined applicability analysis for the f-side tangent sums below the
//! scan threshold.
//!
//! For a level `k` the chain needs `mean_a f1(M_A(a)) <= tau(k)` with
//! `tau = (k-3)^2/(2k-2)^2`, knowing only that every value is at least
//! `L = (k-1)^2/(9(k-2))` and that the mean is at most `k-1`. This module
//! decides, per `k`, whether the supremum of `mean f1` over all such value
//! profiles stays within `tau`.
//!
//! Method. Maximizing the mean of a function subject to one linear moment
//! constraint attains its supremum on profiles supported on at most two
//! points (an extreme-point argument: the feasible distributions form a
//! convex set whose extreme points have minimal support). A two-point
//! profile with both points at most `k-1` is dominated by its better point,
//! and the profile value is linear in the weight, so the candidates reduce
//! to single points `x` in `[L, k-1]` and mean-binding pairs
//! `x < k-1 < y`. Exact analysis then closes the problem:
//!
//! * `f1(k-1) = tau` exactly, so the supremum is never below `tau` and
//!   "holds" means the supremum equals `tau`.
//! * The secant slope through the touching point `(k-1, tau)`,
//!   `phi(x) = (f1(x) - tau)/(x - (k-1))`, has the closed form
//!   `phi(x) = ((k+2)x - 5(k-1)) / ((k-1)^2 x^2)` (checked at runtime); it
//!   rises to a single maximum at `10(k-1)/(k+2)` and falls beyond it, with
//!   `phi(x) -> alpha = (k-3)/(k-1)^3` (the tangent slope) as `x -> k-1`.
//! * A mean-binding pair has value `tau + w (phi(y) - phi(x))` with
//!   `w = (k-1-x)(y-k+1)/(y-x) in (0, k-1-L)`, so the supremum exceeds
//!   `tau` exactly when some `y > k-1` has `phi(y) > phi(x)` for some
//!   feasible `x`, and by unimodality that reduces to the floor test
//!   `phi(L) >= alpha` (equivalently `L >= 5(k-1)/(k-3)`, the same
//!   condition as the tangent-range threshold).
//!
//! Verdicts are one-sided rigorous: "holds" is certified by the exact floor
//! test, "fails" always carries an explicit rational witness profile whose
//! value is verified to exceed `tau`, and a grid-plus-refinement scan
//! records the trace either way. Random many-point profiles are checked in
//! tests against the reported upper bound (`profile_mean_value`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rat;

use super::f_of_cap;

/// Halving depth for the witness refinement near the touching point.
const MAX_REFINEMENT: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RefinedOutcome {
    /// The supremum equals the target; certified exactly.
    Holds,
    /// A rational witness profile exceeds the target.
    Fails,
    /// The refinement budget ran out without a certificate either way.
    Unknown,
}

/// A one- or two-point value profile with its exact mean-`f1` value.
#[derive(Clone, Debug, Serialize)]
pub struct TwoPointProfile {
    pub x: Rat,
    pub weight_x: Rat,
    pub y: Option<Rat>,
    pub weight_y: Rat,
    pub value: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinedVerdict {
    pub k: usize,
    /// `L(k) = (k-1)^2 / (9(k-2))`
    pub floor: Rat,
    /// `tau(k) = (k-3)^2 / (2k-2)^2`
    pub target: Rat,
    /// tangent slope `alpha = (k-3)/(k-1)^3`
    pub tangent_slope: Rat,
    /// secant slope at the floor, `phi(L)`
    pub secant_at_floor: Rat,
    pub outcome: RefinedOutcome,
    /// Exact lower bound for the supremum (always at least `target`).
    pub sup_lower: Rat,
    /// Exact upper bound for the supremum.
    pub sup_upper: Rat,
    /// The profile attaining `sup_lower`.
    pub witness: TwoPointProfile,
    /// Best value seen by the grid scan (a second, independent lower bound).
    pub grid_best: Rat,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinedThresholdReport {
    pub k_low: usize,
    pub k_high: usize,
    pub verdicts: Vec<RefinedVerdict>,
    /// Least `k` in range whose verdict is `Holds`.
    pub least_holds: Option<usize>,
}

fn floor_of(k: usize) -> Rat {
    Rat::from(k - 1).squared() / (Rat::from_int(9) * Rat::from(k - 2))
}

fn target_of(k: usize) -> Rat {
    Rat::from(k - 3).squared() / (Rat::from(2 * k) - Rat::from_int(2)).squared()
}

/// `phi(x) = ((k+2)x - 5(k-1)) / ((k-1)^2 x^2)`, the secant slope of `f1`
/// through `(k-1, tau)`.
fn secant_slope(k: usize, x: &Rat) -> Rat {
    (Rat::from(k + 2) * x - Rat::from_int(5) * Rat::from(k - 1))
        / (Rat::from(k - 1).squared() * x.squared())
}

/// Value of the mean-binding profile on points `x < k-1 < y`.
fn pair_value(k: usize, x: &Rat, y: &Rat) -> (Rat, Rat) {
    let km1 = Rat::from(k - 1);
    let weight_x = (y - &km1) / (y - x);
    let value = &weight_x * f_of_cap(k, x) + (Rat::one() - &weight_x) * f_of_cap(k, y);
    (weight_x, value)
}

/// Exact mean of `f1` over an explicit weighted profile, after validating
/// feasibility at level `k` (weights positive and summing to one, points at
/// least the floor, mean at most `k-1`). Used as the audit hook for the
/// two-point reduction: no feasible profile may exceed the reported
/// supremum upper bound.
pub fn profile_mean_value(k: usize, profile: &[(Rat, Rat)]) -> Result<Rat> {
    if k < 4 {
        return Err(Error::Precondition(
            "profile evaluation needs k >= 4".into(),
        ));
    }
    let floor = floor_of(k);
    let mut weight_sum = Rat::zero();
    let mut mean = Rat::zero();
    let mut value = Rat::zero();
    for (w, x) in profile {
        if *w <= Rat::zero() {
            return Err(Error::Precondition(
                "profile weights must be positive".into(),
            ));
        }
        if x < &floor {
            return Err(Error::Precondition(format!(
                "profile point {x} is below the floor {floor}"
            )));
        }
        weight_sum += w;
        mean += &(w * x);
        value += &(w * f_of_cap(k, x));
    }
    if weight_sum != Rat::one() {
        return Err(Error::Precondition(
            "profile weights must sum to one".into(),
        ));
    }
    if mean > Rat::from(k - 1) {
        return Err(Error::Precondition(format!(
            "profile mean {mean} exceeds {}",
            k - 1
        )));
    }
    Ok(value)
}

/// Decides the refined applicability question for one `k`.
pub fn refined_verdict(k: usize) -> Result<RefinedVerdict> {
    if k < 31 {
        return Err(Error::Precondition(format!(
            "the refined analysis needs k >= 31 (the g-side threshold must already hold), got {k}"
        )));
    }
    let km1 = Rat::from(k - 1);
    let floor = floor_of(k);
    let target = target_of(k);
    let tangent_slope = Rat::from(k - 3) / km1.pow(3);
    let mut notes = Vec::new();

    // Transcription guards for the closed forms used below.
    if f_of_cap(k, &km1) != target {
        return Err(Error::Internal("f1(k-1) != target".into()));
    }
    for probe in [floor.clone(), Rat::from(k), Rat::from(3 * k)] {
        let lhs = f_of_cap(k, &probe) - &target;
        let rhs = secant_slope(k, &probe) * (&probe - &km1);
        if lhs != rhs {
            return Err(Error::Internal("secant slope closed form is wrong".into()));
        }
    }

    let secant_at_floor = secant_slope(k, &floor);
    let floor_in_tangent_range = floor >= Rat::from_int(5) * &km1 / Rat::from(k - 3);
    let certified = secant_at_floor >= tangent_slope;
    if certified != floor_in_tangent_range {
        return Err(Error::Internal(
            "secant certificate disagrees with the tangent-range form".into(),
        ));
    }
    notes.push(format!(
        "certificate condition L >= 5(k-1)/(k-3): {certified}"
    ));

    // Grid scan: single points across [L, k-1] and mean-binding pairs with
    // the second point refining geometrically toward k-1. Lower bounds only;
    // the trace of the optimization surface.
    let mut grid_best = target.clone(); // x = k-1 is a feasible single point
    let span = &km1 - &floor;
    for i in 0..=16u32 {
        let x = &floor + &span * Rat::ratio(i as i64, 16);
        let v = f_of_cap(k, &x);
        if v > grid_best {
            grid_best = v;
        }
    }
    let mut pow2 = Rat::one();
    for _ in 0..12 {
        pow2 = pow2 * Rat::ratio(1, 2);
        let y = &km1 + &km1 * &pow2;
        for j in 0..=8u32 {
            let x = &floor + &span * Rat::ratio(j as i64, 8);
            if x >= km1 {
                continue;
            }
            let (_, v) = pair_value(k, &x, &y);
            if v > grid_best {
                grid_best = v;
            }
        }
    }

    if certified {
        let witness = TwoPointProfile {
            x: km1.clone(),
            weight_x: Rat::one(),
            y: None,
            weight_y: Rat::zero(),
            value: target.clone(),
        };
        if grid_best > target {
            return Err(Error::Internal(
                "grid found a profile above a certified supremum".into(),
            ));
        }
        return Ok(RefinedVerdict {
            k,
            floor,
            target: target.clone(),
            tangent_slope,
            secant_at_floor,
            outcome: RefinedOutcome::Holds,
            sup_lower: target.clone(),
            sup_upper: target,
            witness,
            grid_best,
            notes,
        });
    }

    // Not certified: the supremum strictly exceeds the target. Upper bound
    // first: pair values are tau + w (phi(y) - phi(x)) with w < k-1-L,
    // phi(y) < alpha and phi(x) >= min(phi(L), alpha) by unimodality.
    let single_upper = f_of_cap(k, &floor).max(target.clone());
    let pair_upper =
        &target + (&km1 - &floor) * (&tangent_slope - &secant_at_floor).max(Rat::zero());
    let sup_upper = single_upper.max(pair_upper);

    // Witness search. A floor point already beating the target settles it.
    let floor_value = f_of_cap(k, &floor);
    let witness = if floor_value > target {
        Some(TwoPointProfile {
            x: floor.clone(),
            weight_x: Rat::one(),
            y: None,
            weight_y: Rat::zero(),
            value: floor_value,
        })
    } else {
        // Otherwise refine y toward k-1: phi(y) -> alpha > phi(L), so some
        // dyadic y certifies the excess.
        let mut found = None;
        let mut step = Rat::one();
        for _ in 0..MAX_REFINEMENT {
            step = step * Rat::ratio(1, 2);
            let y = &km1 + &km1 * &step;
            if secant_slope(k, &y) > secant_at_floor {
                let (weight_x, value) = pair_value(k, &floor, &y);
                if value <= target {
                    return Err(Error::Internal(
                        "secant comparison and profile value disagree".into(),
                    ));
                }
                found = Some(TwoPointProfile {
                    weight_y: Rat::one() - &weight_x,
                    x: floor.clone(),
                    weight_x,
                    y: Some(y),
                    value,
                });
                break;
            }
        }
        found
    };

    match witness {
        Some(witness) => {
            let sup_lower = witness.value.clone().max(grid_best.clone());
            if sup_lower > sup_upper {
                return Err(Error::Internal("supremum bracket is inverted".into()));
            }
            notes.push(format!(
                "witness profile exceeds the target by {}",
                (&witness.value - &target).decimal_string(12)
            ));
            Ok(RefinedVerdict {
                k,
                floor,
                target,
                tangent_slope,
                secant_at_floor,
                outcome: RefinedOutcome::Fails,
                sup_lower,
                sup_upper,
                witness,
                grid_best,
                notes,
            })
        }
        None => {
            notes.push(format!(
                "no witness found within {MAX_REFINEMENT} refinement steps"
            ));
            Ok(RefinedVerdict {
                k,
                floor,
                target: target.clone(),
                tangent_slope,
                secant_at_floor,
                outcome: RefinedOutcome::Unknown,
                sup_lower: grid_best.clone().max(target.clone()),
                sup_upper,
                witness: TwoPointProfile {
                    x: km1,
                    weight_x: Rat::one(),
                    y: None,
                    weight_y: Rat::zero(),
                    value: target,
                },
                grid_best,
                notes,
            })
        }
    }
}

/// Runs [`refined_verdict`] for every `k` in `[k_low, k_high]` and reports
/// the least level whose verdict is `Holds`.
pub fn refined_threshold(k_low: usize, k_high: usize) -> Result<RefinedThresholdReport> {
    if k_low < 31 {
        return Err(Error::Precondition(format!(
            "the refined scan starts at 31 at the earliest, got {k_low}"
        )));
    }
    if k_high < k_low {
        return Err(Error::Precondition(format!(
            "empty scan range [{k_low}, {k_high}]"
        )));
    }
    let verdicts: Vec<RefinedVerdict> = (k_low..=k_high)
        .map(refined_verdict)
        .collect::<Result<_>>()?;
    let least_holds = verdicts
        .iter()
        .find(|v| v.outcome == RefinedOutcome::Holds)
        .map(|v| v.k);
    Ok(RefinedThresholdReport {
        k_low,
        k_high,
        verdicts,
        least_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn holds_at_48_with_exact_supremum() {
        let v = refined_verdict(48).unwrap();
        assert_eq!(v.outcome, RefinedOutcome::Holds);
        assert_eq!(v.sup_lower, v.sup_upper);
        assert_eq!(v.sup_upper, target_of(48));
    }

    #[test]
    fn fails_at_31_with_witness() {
        let v = refined_verdict(31).unwrap();
        assert_eq!(v.outcome, RefinedOutcome::Fails);
        assert!(v.witness.value > v.target);
        // The witness is itself a feasible profile.
        let mut profile = vec![(v.witness.weight_x.clone(), v.witness.x.clone())];
        if let Some(y) = &v.witness.y {
            profile.push((v.witness.weight_y.clone(), y.clone()));
        }
        assert_eq!(profile_mean_value(31, &profile).unwrap(), v.witness.value);
    }

    #[test]
    fn fails_at_47_needs_two_points() {
        // Just below the threshold the single floor point stays under the
        // target; only a mean-binding pair exposes the excess.
        let v = refined_verdict(47).unwrap();
        assert_eq!(v.outcome, RefinedOutcome::Fails);
        assert!(v.witness.y.is_some());
        assert!(f_of_cap(47, &v.floor) <= v.target);
    }

    #[test]
    fn boundary_over_full_range() {
        let report = refined_threshold(31, 48).unwrap();
        assert_eq!(report.least_holds, Some(48));
        for v in &report.verdicts {
            if v.k < 48 {
                assert_eq!(v.outcome, RefinedOutcome::Fails, "k={}", v.k);
            } else {
                assert_eq!(v.outcome, RefinedOutcome::Holds);
            }
            assert!(v.sup_lower <= v.sup_upper);
            assert!(v.grid_best <= v.sup_upper);
        }
    }

    #[test]
    fn random_profiles_stay_under_the_upper_bound() {
        let mut rng = SplitMix64::new(99);
        for k in [33usize, 40, 48, 60] {
            let v = refined_verdict(k).unwrap();
            'profiles: for _ in 0..60 {
                let points = 2 + rng.next_usize(4);
                // Random positive weights summing to one.
                let raw: Vec<i64> = (0..points).map(|_| 1 + rng.next_below(20) as i64).collect();
                let total: i64 = raw.iter().sum();
                let mut profile = Vec::new();
                let mut mean = Rat::zero();
                for w in raw {
                    let weight = Rat::ratio(w, total);
                    let x = &v.floor
                        + Rat::ratio(rng.next_below(4000) as i64, 1 + rng.next_below(40) as i64);
                    mean += &(&weight * &x);
                    profile.push((weight, x));
                }
                if mean > Rat::from(k - 1) {
                    continue 'profiles; // infeasible draw
                }
                let value = profile_mean_value(k, &profile).unwrap();
                assert!(
                    value <= v.sup_upper,
                    "k={k}: profile {profile:?} beats the upper bound"
                );
            }
        }
    }

    #[test]
    fn profile_validation_rejects_bad_inputs() {
        let floor = floor_of(40);
        assert!(profile_mean_value(40, &[(Rat::one(), floor.clone() - Rat::one())]).is_err());
        assert!(profile_mean_value(40, &[(Rat::ratio(1, 2), floor)]).is_err());
        assert!(profile_mean_value(40, &[(Rat::one(), Rat::from_int(1000))]).is_err());
    }

    #[test]
    fn scan_preconditions() {
        assert!(refined_threshold(30, 48).is_err());
        assert!(refined_threshold(40, 35).is_err());
    }
}
