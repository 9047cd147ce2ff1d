//! Dimension and codimension arithmetic in the moduli space of principally
//! polarized abelian varieties, and the unlikely-intersection predicates.
//!
//! Only the integer dimension ledger is computed here: `dim A_g = g(g+1)/2`,
//! `dim T_g = 3g - 3` for the Torelli locus, and the stratum codimension
//! lower bound `Omega(P)` from lattice-point counting.

use crate::polygon::{BasicGraph, LatticeCount, NewtonPolygon, PolygonError};
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrataError {
    #[error("genus {0} too small: the Torelli dimension formula needs g >= 2")]
    GenusTooSmall(u64),
    #[error("empty member list")]
    EmptyInput,
    #[error("members must be sorted by genus")]
    MembersNotSorted,
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

/// The integer dimension ledger for genus `g >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModuliDims {
    pub g: u64,
    pub dim_ag: u64,
    pub dim_torelli: u64,
    pub codim_torelli: u64,
}

pub fn moduli_dims(g: u64) -> Result<ModuliDims, StrataError> {
    if g < 2 {
        return Err(StrataError::GenusTooSmall(g));
    }
    let dim_ag = g * (g + 1) / 2;
    let dim_torelli = 3 * g - 3;
    Ok(ModuliDims {
        g,
        dim_ag,
        dim_torelli,
        codim_torelli: dim_ag - dim_torelli,
    })
}

/// Verdict on whether a Newton stratum meets the Torelli locus in an
/// unlikely intersection, assuming a curve with this polygon exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnlikelyReport {
    pub polygon: NewtonPolygon,
    pub omega: LatticeCount,
    pub codim_torelli: u64,
    pub ambient_dim: u64,
    /// `Omega(P) + codim T_g > dim A_g`, i.e. `Omega(P) > 3g - 3`. Since
    /// `Omega` is a lower bound on the stratum codimension, `true` is always
    /// sound; `false` is definitive only when the count is exact.
    pub is_unlikely: bool,
    /// `false` verdicts that could flip: either the codimension is only a
    /// lower bound, or the sum sits exactly on the ambient dimension and the
    /// verdict hinges on the strictness convention. A `true` verdict never
    /// flips under a larger true codimension.
    pub marginal: bool,
}

pub fn is_unlikely_polygon(polygon: &NewtonPolygon) -> Result<UnlikelyReport, StrataError> {
    let dims = moduli_dims(polygon.genus())?;
    let omega = polygon.lattice_points_below();
    let sum = omega.count + dims.codim_torelli;
    let is_unlikely = sum > dims.dim_ag;
    let marginal = !is_unlikely && (!omega.exact_codimension || sum == dims.dim_ag);
    Ok(UnlikelyReport {
        polygon: polygon.clone(),
        omega,
        codim_torelli: dims.codim_torelli,
        ambient_dim: dims.dim_ag,
        is_unlikely,
        marginal,
    })
}

/// One row of an unlikely-family report.
#[derive(Clone, Debug)]
pub struct FamilyRow {
    pub g: u64,
    pub omega: LatticeCount,
    pub codim_torelli: u64,
    pub dim_ag: u64,
    pub is_unlikely: bool,
    pub marginal: bool,
    /// Exact minimum of the scaled polygon minus the reference graph.
    pub min_gap: BigRational,
    /// `Omega(P_g) / g^2`: the quadratic-growth mechanism behind unlikely
    /// families is visible as this ratio approaching a positive constant.
    pub omega_over_g2: BigRational,
}

#[derive(Clone, Debug)]
pub struct UnlikelyFamilyReport {
    pub rows: Vec<FamilyRow>,
    /// Least genus from which every later member is unlikely, if any.
    pub unlikely_from: Option<u64>,
}

/// Per-member gap and unlikeliness analysis for a family of polygons
/// `(g, P_g)` sorted by genus, against a reference basic graph.
pub fn unlikely_family_report(
    members: &[(u64, NewtonPolygon)],
    reference: &BasicGraph,
) -> Result<UnlikelyFamilyReport, StrataError> {
    if members.is_empty() {
        return Err(StrataError::EmptyInput);
    }
    if members.windows(2).any(|w| w[0].0 > w[1].0) {
        return Err(StrataError::MembersNotSorted);
    }
    let mut rows = Vec::with_capacity(members.len());
    for (g, polygon) in members {
        let report = is_unlikely_polygon(polygon)?;
        let min_gap = polygon.scaled()?.min_gap(reference);
        let g2 = BigRational::from_integer((g * g).into());
        rows.push(FamilyRow {
            g: *g,
            omega: report.omega,
            codim_torelli: report.codim_torelli,
            dim_ag: report.ambient_dim,
            is_unlikely: report.is_unlikely,
            marginal: report.marginal,
            min_gap,
            omega_over_g2: BigRational::from_integer(report.omega.count.into()) / g2,
        });
    }
    let mut unlikely_from = None;
    for row in rows.iter().rev() {
        if row.is_unlikely {
            unlikely_from = Some(row.g);
        } else {
            break;
        }
    }
    Ok(UnlikelyFamilyReport {
        rows,
        unlikely_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::Slope;

    fn half() -> Slope {
        Slope::from_integers(1, 2).unwrap()
    }

    fn ordinary(g: u64) -> NewtonPolygon {
        NewtonPolygon::from_counts([(Slope::zero(), g), (Slope::one(), g)]).unwrap()
    }

    fn supersingular(g: u64) -> NewtonPolygon {
        NewtonPolygon::from_counts([(half(), 2 * g)]).unwrap()
    }

    /// `{0,1}^(g-k(p-1)) |_| {1/2}^(2k(p-1))`.
    fn mixed(g: u64, k: u64, p: u64) -> NewtonPolygon {
        let outer = g - k * (p - 1);
        NewtonPolygon::from_counts([
            (Slope::zero(), outer),
            (half(), 2 * k * (p - 1)),
            (Slope::one(), outer),
        ])
        .unwrap()
    }

    #[test]
    fn moduli_dims_small_genera() {
        let d2 = moduli_dims(2).unwrap();
        assert_eq!((d2.dim_ag, d2.dim_torelli, d2.codim_torelli), (3, 3, 0));
        let d4 = moduli_dims(4).unwrap();
        assert_eq!((d4.dim_ag, d4.dim_torelli, d4.codim_torelli), (10, 9, 1));
        let d12 = moduli_dims(12).unwrap();
        assert_eq!((d12.dim_ag, d12.dim_torelli, d12.codim_torelli), (78, 33, 45));
    }

    #[test]
    fn moduli_dims_rejects_tiny_genus() {
        assert!(matches!(moduli_dims(0), Err(StrataError::GenusTooSmall(0))));
        assert!(matches!(moduli_dims(1), Err(StrataError::GenusTooSmall(1))));
    }

    #[test]
    fn codim_identity_all_genera() {
        for g in 2..=60 {
            let d = moduli_dims(g).unwrap();
            assert_eq!(d.codim_torelli + 3 * g - 3, g * (g + 1) / 2);
        }
    }

    #[test]
    fn ordinary_polygon_never_unlikely() {
        for g in 2..=20 {
            let r = is_unlikely_polygon(&ordinary(g)).unwrap();
            assert_eq!(r.omega.count, 0);
            assert!(!r.is_unlikely);
            assert!(!r.marginal);
        }
    }

    #[test]
    fn genus_two_supersingular_not_unlikely() {
        let r = is_unlikely_polygon(&supersingular(2)).unwrap();
        assert_eq!(r.omega.count, 2);
        assert!(!r.is_unlikely);
    }

    #[test]
    fn large_mixed_polygon_is_unlikely() {
        // g = 114, k = 18, p = 3: Omega = 18 * 19 = 342 > 3g - 3 = 339.
        let p = mixed(114, 18, 3);
        let r = is_unlikely_polygon(&p).unwrap();
        assert_eq!(r.omega.count, 342);
        assert!(r.omega.exact_codimension);
        assert!(r.is_unlikely);
        assert!(!r.marginal);
    }

    #[test]
    fn supersingular_dimension_tie() {
        // Omega + dim(supersingular locus) = dim A_g for all g <= 30.
        for g in 2..=30 {
            let omega = supersingular(g).lattice_points_below().count;
            assert_eq!(omega + g * g / 4, g * (g + 1) / 2, "g = {g}");
        }
    }

    #[test]
    fn monotone_under_lies_above_with_integer_vertices() {
        // Supersingular lies above the mixed polygon lies above ordinary;
        // all three have integral vertices for even parameters.
        for g in [6u64, 10, 14] {
            let low = ordinary(g);
            let mid = mixed(g, 1, 3);
            let high = supersingular(g);
            assert!(high.lies_above(&mid).unwrap());
            assert!(mid.lies_above(&low).unwrap());
            let (a, b, c) = (
                low.lattice_points_below(),
                mid.lattice_points_below(),
                high.lattice_points_below(),
            );
            assert!(a.exact_codimension && c.exact_codimension);
            assert!(b.count >= a.count);
            assert!(c.count >= b.count);
        }
    }

    #[test]
    fn family_report_ordinary_members() {
        let members: Vec<(u64, NewtonPolygon)> = (2..=8).map(|g| (g, ordinary(g))).collect();
        let report = unlikely_family_report(&members, &BasicGraph::parabola()).unwrap();
        assert_eq!(report.rows.len(), 7);
        assert!(report.unlikely_from.is_none());
        let minus_quarter = BigRational::new((-1).into(), 4.into());
        for row in &report.rows {
            assert!(!row.is_unlikely);
            assert_eq!(row.min_gap, minus_quarter);
        }
    }

    #[test]
    fn family_report_single_member() {
        let members = vec![(2, supersingular(2))];
        let report = unlikely_family_report(&members, &BasicGraph::parabola()).unwrap();
        assert_eq!(report.rows.len(), 1);
    }

    #[test]
    fn family_report_max_k_members_become_unlikely() {
        // Members with maximal admissible k at p = 3, d = 2: Omega grows
        // quadratically (ratio near 1/36) and every member from g = 120 on
        // is unlikely. The boundary case Omega = 3g - 3 at g = 115 is
        // flagged marginal.
        use crate::families::{construct_theorem4, max_admissible_k};
        let members: Vec<(u64, NewtonPolygon)> = (10..=200)
            .filter_map(|g| {
                let k = max_admissible_k(3, 2, g)?;
                Some((g, construct_theorem4(3, 2, g, k).unwrap().predicted))
            })
            .collect();
        let report = unlikely_family_report(&members, &BasicGraph::parabola()).unwrap();
        assert_eq!(report.unlikely_from, Some(120));
        let last = report.rows.last().unwrap();
        assert_eq!(last.g, 200);
        assert_eq!(
            last.omega_over_g2,
            BigRational::new((32 * 33).into(), (200u64 * 200).into())
        );
        let boundary = report.rows.iter().find(|r| r.g == 115).unwrap();
        assert_eq!(boundary.omega.count, 342);
        assert!(!boundary.is_unlikely);
        assert!(boundary.marginal);
    }

    #[test]
    fn family_report_rejects_empty_and_unsorted() {
        assert!(matches!(
            unlikely_family_report(&[], &BasicGraph::parabola()),
            Err(StrataError::EmptyInput)
        ));
        let members = vec![(4, ordinary(4)), (2, ordinary(2))];
        assert!(matches!(
            unlikely_family_report(&members, &BasicGraph::parabola()),
            Err(StrataError::MembersNotSorted)
        ));
    }

    #[test]
    fn inexact_false_verdict_is_marginal() {
        // {1/3,1/3,2/3,2/3} has non-integral vertices, so Omega is only a
        // lower bound and a false verdict could flip.
        let p = NewtonPolygon::from_counts([
            (Slope::from_integers(1, 3).unwrap(), 2),
            (Slope::from_integers(2, 3).unwrap(), 2),
        ])
        .unwrap();
        let r = is_unlikely_polygon(&p).unwrap();
        assert!(!r.omega.exact_codimension);
        assert!(!r.is_unlikely);
        assert!(r.marginal);
    }
}
