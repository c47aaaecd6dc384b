//! Numerical invariants of double covers of abelian surfaces with `χ = 1`.
//!
//! Branch curve `D ≃ 2L` with non-negligible singular points of multiplicity `2mᵢ`.

use num::rational::Ratio;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("multiplicity m = {0} is negligible or invalid; only m ≥ 2 enters the formulas")]
    NegligibleMultiplicity(i64),
    #[error("{0} is not an integer")]
    NonIntegral(String),
    #[error("only K² = 8 is supported, got {0}")]
    Unsupported(i64),
    #[error("genus must be at least 2 and the group nontrivial")]
    BadProductData,
}

/// `L²` and the half-multiplicities `mᵢ` of the singular points of `D ≃ 2L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityProfile {
    pub l2: i64,
    pub multiplicities: Vec<i64>,
}

impl SingularityProfile {
    pub fn new(l2: i64, multiplicities: Vec<i64>) -> Result<Self, InvariantError> {
        if let Some(&m) = multiplicities.iter().find(|&&m| m < 2) {
            return Err(InvariantError::NegligibleMultiplicity(m));
        }
        Ok(SingularityProfile { l2, multiplicities })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionInvariants {
    pub chi: Ratio<i64>,
    pub chi_is_integral: bool,
    pub k2: i64,
}

/// `2χ = L² − Σ mᵢ(mᵢ−1)`, `K² = 2L² − 2Σ(mᵢ−1)²` for the canonical resolution.
pub fn resolution_invariants(p: &SingularityProfile) -> ResolutionInvariants {
    let s1: i64 = p.multiplicities.iter().map(|m| m * (m - 1)).sum();
    let s2: i64 = p.multiplicities.iter().map(|m| (m - 1) * (m - 1)).sum();
    let chi = Ratio::new(p.l2 - s1, 2);
    ResolutionInvariants { chi_is_integral: chi.is_integer(), chi, k2: 2 * p.l2 - 2 * s2 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    I,
    II,
}

/// How the singular points of a profile sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Configuration {
    Smooth,
    /// Pairwise distinct ordinary points.
    Ordinary,
    /// A quadruple point with a quadruple point in its first infinitesimal neighbourhood.
    InfinitelyNearQuadruple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchCase {
    pub label: CaseLabel,
    pub d2: i64,
    pub multiplicities: Vec<i64>,
    pub singularities: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcludedProfile {
    pub multiplicities: Vec<i64>,
    pub configuration: Configuration,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchEnumeration {
    pub cases: Vec<BranchCase>,
    pub excluded: Vec<ExcludedProfile>,
}

/// Nonincreasing sequences of `m ≥ 2` with `Σ(m − 1) ≤ budget`.
fn profiles(budget: i64) -> Vec<Vec<i64>> {
    fn go(budget: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        out.push(cur.clone());
        for m in (2..=max.min(budget + 1)).rev() {
            cur.push(m);
            go(budget - (m - 1), m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(budget, budget + 1, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(b.cmp(a)));
    out
}

fn ordinal_points(ms: &[i64]) -> String {
    let names = |m: i64| match 2 * m {
        4 => "quadruple".to_string(),
        6 => "sextuple".to_string(),
        d => format!("{d}-fold"),
    };
    match ms {
        [] => "smooth".to_string(),
        [m] => format!("one ordinary {} point", names(*m)),
        [m, n] if m == n => format!("two ordinary {} points", names(*m)),
        _ => ms.iter().map(|&m| names(m)).collect::<Vec<_>>().join(", "),
    }
}

/// Branch curves of double covers with `χ = 1` and `K² = 8` and no rational curves.
///
/// With `χ = 1`, `K̄² = 4 + 2Σ(mᵢ−1)`, so `Σ(mᵢ−1) ≤ 2`. Ordinary points are minimal,
/// which forces `K² = K̄²`; an infinitely near pair of quadruple points leaves two
/// rational curves on the resolution.
pub fn enumerate_branch_profiles(k2_target: i64) -> Result<BranchEnumeration, InvariantError> {
    if k2_target != 8 {
        return Err(InvariantError::Unsupported(k2_target));
    }
    let budget = (k2_target - 4) / 2;
    let mut cases = Vec::new();
    let mut excluded = Vec::new();
    for ms in profiles(budget) {
        let s1: i64 = ms.iter().map(|m| m * (m - 1)).sum();
        let l2 = 2 + s1;
        let inv = resolution_invariants(&SingularityProfile::new(l2, ms.clone()).unwrap());
        debug_assert_eq!(inv.chi, Ratio::from_integer(1));
        let configs: Vec<Configuration> = match ms.as_slice() {
            [] => vec![Configuration::Smooth],
            [2, 2] => vec![Configuration::Ordinary, Configuration::InfinitelyNearQuadruple],
            _ => vec![Configuration::Ordinary],
        };
        for cfg in configs {
            if inv.k2 != k2_target {
                excluded.push(ExcludedProfile {
                    multiplicities: ms.clone(),
                    configuration: cfg,
                    reason: format!("minimal singularities give K² = {} ≠ {}", inv.k2, k2_target),
                });
            } else if cfg == Configuration::InfinitelyNearQuadruple {
                excluded.push(ExcludedProfile {
                    multiplicities: ms.clone(),
                    configuration: cfg,
                    reason: "resolution contains two rational (−2)-curves".to_string(),
                });
            } else {
                let label = if ms.len() == 1 { CaseLabel::I } else { CaseLabel::II };
                cases.push(BranchCase { label, d2: 4 * l2, multiplicities: ms.clone(), singularities: ordinal_points(&ms) });
            }
        }
    }
    Ok(BranchEnumeration { cases, excluded })
}

/// `(χ, K²)` of the double cover branched on `D` with ordinary quadruple points:
/// `χ = D²/8 − n`, `K² = D²/2 − 2n`.
pub fn double_cover_invariants(d2: i64, quadruple_points: i64) -> Result<(i64, i64), InvariantError> {
    if d2 % 8 != 0 {
        return Err(InvariantError::NonIntegral(format!("D²/8 = {d2}/8")));
    }
    Ok((d2 / 8 - quadruple_points, d2 / 2 - 2 * quadruple_points))
}

/// `χ = (g−1)²/|G|`, `K² = 8χ` for `(C × C)/G` with `C` of genus `g`.
pub fn product_quotient_invariants(g: i64, group_order: i64) -> Result<(i64, i64), InvariantError> {
    if g < 2 || group_order < 1 {
        return Err(InvariantError::BadProductData);
    }
    let n = (g - 1) * (g - 1);
    if n % group_order != 0 {
        return Err(InvariantError::NonIntegral(format!("(g−1)²/|G| = {n}/{group_order}")));
    }
    let chi = n / group_order;
    Ok((chi, 8 * chi))
}

/// A smooth curve on the surface, given by self-intersection and genus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveData {
    pub self_intersection: i64,
    pub genus: i64,
}

/// `((K + ΣCᵢ)², 3·e(S − ΣCᵢ))` for pairwise disjoint smooth curves.
pub fn log_chern_sides(k2: i64, chi: i64, curves: &[CurveData]) -> (i64, i64) {
    let c2 = 12 * chi - k2;
    // adjunction: K·C = 2g − 2 − C²
    let kc: i64 = curves.iter().map(|c| 2 * c.genus - 2 - c.self_intersection).sum();
    let cc: i64 = curves.iter().map(|c| c.self_intersection).sum();
    let euler: i64 = curves.iter().map(|c| 2 - 2 * c.genus).sum();
    (k2 + 2 * kc + cc, 3 * (c2 - euler))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BallQuotientCheck {
    pub four_curves: (i64, i64),
    pub two_curves: (i64, i64),
    pub holds: bool,
}

/// Both identities for four disjoint elliptic `(−1)`-curves and two elliptic `(−2)`-curves.
pub fn ball_quotient_check_with(k2: i64, chi: i64) -> BallQuotientCheck {
    let c = CurveData { self_intersection: -1, genus: 1 };
    let z = CurveData { self_intersection: -2, genus: 1 };
    let four_curves = log_chern_sides(k2, chi, &[c; 4]);
    let two_curves = log_chern_sides(k2, chi, &[z; 2]);
    let holds = four_curves == (12, 12) && two_curves == (12, 12);
    BallQuotientCheck { four_curves, two_curves, holds }
}

pub fn ball_quotient_check() -> bool {
    ball_quotient_check_with(8, 1).holds
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn inv(l2: i64, ms: Vec<i64>) -> (Ratio<i64>, i64) {
        let r = resolution_invariants(&SingularityProfile::new(l2, ms).unwrap());
        (r.chi, r.k2)
    }

    #[test]
    fn resolution_examples() {
        let one = Ratio::from_integer(1);
        assert_eq!(inv(8, vec![3]), (one, 8));
        assert_eq!(inv(6, vec![2, 2]), (one, 8));
        assert_eq!(inv(2, vec![]), (one, 4));
        let r = resolution_invariants(&SingularityProfile::new(3, vec![]).unwrap());
        assert!(!r.chi_is_integral);
        assert_eq!(SingularityProfile::new(4, vec![1]), Err(InvariantError::NegligibleMultiplicity(1)));
    }

    #[test]
    fn branch_enumeration() {
        let e = enumerate_branch_profiles(8).unwrap();
        assert_eq!(e.cases.len(), 2);
        assert_eq!(e.cases[0].label, CaseLabel::I);
        assert_eq!(e.cases[0].d2, 32);
        assert_eq!(e.cases[0].multiplicities, vec![3]);
        assert_eq!(e.cases[0].singularities, "one ordinary sextuple point");
        assert_eq!(e.cases[1].label, CaseLabel::II);
        assert_eq!(e.cases[1].d2, 24);
        assert_eq!(e.cases[1].singularities, "two ordinary quadruple points");
        let ex: Vec<(Vec<i64>, Configuration)> = e.excluded.iter().map(|x| (x.multiplicities.clone(), x.configuration)).collect();
        assert_eq!(
            ex,
            vec![
                (vec![], Configuration::Smooth),
                (vec![2], Configuration::Ordinary),
                (vec![2, 2], Configuration::InfinitelyNearQuadruple),
            ]
        );
        assert!(e.excluded[1].reason.contains("K² = 6"));
        assert_eq!(enumerate_branch_profiles(7), Err(InvariantError::Unsupported(7)));
    }

    #[test]
    fn double_covers() {
        assert_eq!(double_cover_invariants(24, 2).unwrap(), (1, 8));
        assert_eq!(double_cover_invariants(8, 0).unwrap(), (1, 4));
        assert!(double_cover_invariants(12, 0).is_err());
        // type I goes through the resolution formulas instead
        assert_eq!(inv(32 / 4, vec![3]).1, 8);
    }

    #[test]
    fn product_quotients() {
        assert_eq!(product_quotient_invariants(3, 4).unwrap(), (1, 8));
        assert_eq!(product_quotient_invariants(2, 1).unwrap(), (1, 8));
        assert_eq!(product_quotient_invariants(5, 16).unwrap(), (1, 8));
        assert!(matches!(product_quotient_invariants(3, 3), Err(InvariantError::NonIntegral(_))));
        assert_eq!(product_quotient_invariants(1, 1), Err(InvariantError::BadProductData));
    }

    #[test]
    fn ball_quotient() {
        let b = ball_quotient_check_with(8, 1);
        assert_eq!(b.four_curves, (12, 12));
        assert_eq!(b.two_curves, (12, 12));
        assert!(ball_quotient_check());
        assert!(!ball_quotient_check_with(9, 1).holds);
    }

    proptest! {
        #[test]
        fn minimal_equality_case(ms in prop::collection::vec(2i64..=5, 0..4)) {
            // with χ = 1 the resolution gives K̄² = 4 + 2Σ(mᵢ−1)
            let l2 = 2 + ms.iter().map(|m| m * (m - 1)).sum::<i64>();
            let r = resolution_invariants(&SingularityProfile::new(l2, ms.clone()).unwrap());
            prop_assert_eq!(r.chi, Ratio::from_integer(1));
            prop_assert_eq!(r.k2, 4 + 2 * ms.iter().map(|m| m - 1).sum::<i64>());
        }
    }
}
