//! Constructive families of degree-p covers with prescribed Newton polygon
//! shapes: resolve `(p, d, g, k)` into an explicit cover spec plus its
//! predicted polygon, produce amalgamation witnesses, and report slope
//! frequencies across a family.

use crate::covers::{
    exactness_class, hodge_lower_bound, rh_genus, BranchDatum, CoverError, CoverSpec,
    ExactnessClass,
};
use crate::fp::is_odd_prime;
use crate::polygon::{NewtonPolygon, PolygonError, Slope};
use num_rational::BigRational;
use num_traits::Signed;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("conductor {conductor} is divisible by p = {p}")]
    ConductorDivisibleByP { conductor: u64, p: u64 },
    #[error("inadmissible parameters: 2g/(d+1) - 2p(p-1)/(d+1) = {available} < {required} = k*delta*(p-1)")]
    Inadmissible {
        available: BigRational,
        required: BigRational,
    },
    #[error("genus {g} too small for this construction (needs conductor d >= 1)")]
    GenusTooSmall { g: u64 },
    #[error("slope set is not symmetric at slope {0}")]
    SlopeSetNotSymmetric(BigRational),
    #[error("member of genus {g} has slope {slope} outside the slope set")]
    SlopeSetMismatch { g: u64, slope: BigRational },
    #[error("empty member list")]
    EmptyInput,
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySource {
    Theorem4,
    Theorem5,
}

/// A fully resolved family member: the cover data together with every
/// intermediate quantity of the construction and the predicted polygon.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub source: FamilySource,
    pub p: u64,
    pub d: u64,
    pub g: u64,
    pub k: u64,
    /// 1 for odd `d`, 2 for even `d` (many-branch-points construction only).
    pub delta: Option<u64>,
    /// Residue of `g`: the base-curve genus for the many-branch-points
    /// construction, `g mod (p-1)/2` for the single-pole construction.
    pub i: u64,
    /// Number of conductor-1 branch points.
    pub j: u64,
    /// The intermediate `A = j(p-1)` (many-branch-points construction only).
    pub a_value: Option<u64>,
    /// Base genus parameter of the single-pole construction.
    pub u: Option<u64>,
    /// Congruence parameter of the single-pole construction.
    pub v: Option<u64>,
    /// True when a p-divisible conductor was split as (d-2, 1).
    pub adjusted_conductors: bool,
    pub spec: CoverSpec,
    pub predicted: NewtonPolygon,
    pub exactness: ExactnessClass,
}

impl fmt::Display for FamilyMember {
    /// Canonical member row, e.g.
    /// `source=T4 p=3 d=2 g=12 k=1 delta=2 i=0 j=4 slopes=... exact=small-conductors`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.source {
            FamilySource::Theorem4 => write!(
                f,
                "source=T4 p={} d={} g={} k={} delta={} i={} j={} slopes={} exact={}",
                self.p,
                self.d,
                self.g,
                self.k,
                self.delta.unwrap_or(0),
                self.i,
                self.j,
                self.predicted,
                self.exactness
            ),
            FamilySource::Theorem5 => write!(
                f,
                "source=T5 p={} g={} k={} d={} i={} u={} v={} j={} case={} slopes={} exact={}",
                self.p,
                self.g,
                self.k,
                self.d,
                self.i,
                self.u.unwrap_or(0),
                self.v.unwrap_or(0),
                self.j,
                if self.adjusted_conductors { "II-adjusted" } else { "I" },
                self.predicted,
                self.exactness
            ),
        }
    }
}

/// Largest admissible `k` for the many-branch-points construction, if any
/// (`k = 0` is always admissible once `g >= p(p-1)`).
pub fn max_admissible_k(p: u64, d: u64, g: u64) -> Option<u64> {
    let delta = if d % 2 == 1 { 1 } else { 2 };
    let budget = 2 * g as i128 - 2 * (p * (p - 1)) as i128;
    if budget < 0 {
        return None;
    }
    Some((budget / (delta * (p - 1) * (d + 1)) as i128) as u64)
}

/// Build the genus-`g` member of the many-branch-points family: an ordinary
/// base of genus `i = g mod (p-1)` with `j` conductor-1 points and
/// `delta*k` conductor-`d` points. The predicted polygon is
/// `{0,1}^(g - k*delta*(p-1)(d-1)/2) |_| {1/d,...,(d-1)/d}^(k*delta*(p-1))`,
/// verified against the Hodge bound on every call.
pub fn construct_theorem4(p: u64, d: u64, g: u64, k: u64) -> Result<FamilyMember, FamilyError> {
    if !is_odd_prime(p) {
        return Err(FamilyError::NotOddPrime(p));
    }
    if d < 2 {
        return Err(FamilyError::InvalidParameter(format!(
            "conductor d = {d} must be >= 2"
        )));
    }
    if d.is_multiple_of(p) {
        return Err(FamilyError::ConductorDivisibleByP { conductor: d, p });
    }
    if g < 1 {
        return Err(FamilyError::InvalidParameter("genus must be >= 1".into()));
    }
    let delta: u64 = if d % 2 == 1 { 1 } else { 2 };
    // Admissibility, cleared of denominators: 2g - 2p(p-1) >= k*delta*(p-1)(d+1).
    let budget = 2 * g as i128 - 2 * (p * (p - 1)) as i128;
    let cost = (k * delta * (p - 1) * (d + 1)) as i128;
    if budget < cost {
        let dp1 = BigRational::from_integer((d + 1).into());
        return Err(FamilyError::Inadmissible {
            available: BigRational::from_integer(budget.into()) / dp1,
            required: BigRational::from_integer((k * delta * (p - 1)).into()),
        });
    }
    let i = g % (p - 1);
    // delta*(d+1)/2 is an integer by the parity choice of delta.
    let half_cost = k * delta * (p - 1) * (d + 1) / 2;
    let a = g as i128 - (i * p) as i128 + (p - 1) as i128 - half_cost as i128;
    assert!(a >= 0, "admissibility forces A >= 0");
    assert_eq!(
        a % (p - 1) as i128,
        0,
        "A is a multiple of p - 1 for every admissible parameter set"
    );
    let j = (a / (p - 1) as i128) as u64;

    let mut branches = vec![
        BranchDatum {
            conductor: 1,
            degree: 1
        };
        j as usize
    ];
    branches.extend(std::iter::repeat_n(
        BranchDatum {
            conductor: d,
            degree: 1,
        },
        (delta * k) as usize,
    ));
    let spec = CoverSpec::new(p, i, true, branches)?;
    assert_eq!(rh_genus(&spec)?, g, "Riemann-Hurwitz must give back g");
    let predicted = hodge_lower_bound(&spec)?;

    // Closed form of the predicted polygon.
    let s0 = g - k * delta * (p - 1) * (d - 1) / 2;
    let mut counts: Vec<(Slope, u64)> = vec![(Slope::zero(), s0), (Slope::one(), s0)];
    for t in 1..d {
        counts.push((Slope::from_integers(t, d)?, k * delta * (p - 1)));
    }
    let closed_form = NewtonPolygon::from_counts(counts)?;
    assert_eq!(
        predicted, closed_form,
        "Hodge bound must match the closed-form polygon"
    );

    let exactness = exactness_class(&spec);
    Ok(FamilyMember {
        source: FamilySource::Theorem4,
        p,
        d,
        g,
        k,
        delta: Some(delta),
        i,
        j,
        a_value: Some(a as u64),
        u: None,
        v: None,
        adjusted_conductors: false,
        spec,
        predicted,
        exactness,
    })
}

/// Build the genus-`g` member of the single-large-pole family: base an
/// ordinary curve of genus `u` where `p*u - (p-1) = i + m*v` with
/// `m = (p-1)/2` and `i = g mod m`, carrying one pole of order
/// `d = k - 1 - v` (split as orders `(d-2, 1)` when p divides d, which
/// keeps the Riemann-Hurwitz genus exactly g).
pub fn construct_theorem5(p: u64, g: u64) -> Result<FamilyMember, FamilyError> {
    if !is_odd_prime(p) {
        return Err(FamilyError::NotOddPrime(p));
    }
    let m = (p - 1) / 2;
    let i = g % m;
    // Minimal nonnegative solution of p*u - (p-1) = i + m*v.
    let (u, v) = if i >= 1 { (i, 2 * (i - 1)) } else { (m, p - 2) };
    debug_assert_eq!(p * u - (p - 1), i + m * v);
    let k = (g - i) / m;
    let d_signed = k as i128 - 1 - v as i128;
    if d_signed < 1 {
        return Err(FamilyError::GenusTooSmall { g });
    }
    let d = d_signed as u64;
    let adjusted = d.is_multiple_of(p);
    let branches = if adjusted {
        // d >= p >= 3 here, so d - 2 >= 1, and d - 2 = -2 mod p is coprime
        // to p. Orders (d-2, 1) keep the ramification total at d + 1.
        vec![
            BranchDatum {
                conductor: d - 2,
                degree: 1,
            },
            BranchDatum {
                conductor: 1,
                degree: 1,
            },
        ]
    } else {
        vec![BranchDatum {
            conductor: d,
            degree: 1,
        }]
    };
    let j = if adjusted { 1 } else { 0 };
    let spec = CoverSpec::new(p, u, true, branches)?;
    assert_eq!(rh_genus(&spec)?, g, "Riemann-Hurwitz must give back g");
    let predicted = hodge_lower_bound(&spec)?;
    let exactness = exactness_class(&spec);
    Ok(FamilyMember {
        source: FamilySource::Theorem5,
        p,
        d,
        g,
        k,
        delta: None,
        i,
        j,
        a_value: None,
        u: Some(u),
        v: Some(v),
        adjusted_conductors: adjusted,
        spec,
        predicted,
        exactness,
    })
}

/// An amalgamation witness: the predicted polygon of the combined member
/// equals the amalgam of the two parts' predictions.
#[derive(Clone, Debug)]
pub struct OortWitness {
    pub left: FamilyMember,
    pub right: FamilyMember,
    pub combined: FamilyMember,
    pub holds: bool,
}

pub fn oort_witness(
    p: u64,
    d: u64,
    left: (u64, u64),
    right: (u64, u64),
) -> Result<OortWitness, FamilyError> {
    let l = construct_theorem4(p, d, left.0, left.1)?;
    let r = construct_theorem4(p, d, right.0, right.1)?;
    let combined = construct_theorem4(p, d, left.0 + right.0, left.1 + right.1)?;
    let amalgam = l.predicted.amalgamate(&r.predicted);
    let holds = amalgam == combined.predicted;
    assert!(
        holds,
        "amalgamation identity failed for p={p} d={d} {left:?} + {right:?}"
    );
    Ok(OortWitness {
        left: l,
        right: r,
        combined,
        holds,
    })
}

/// Per-member slope-frequency deviations against a reference slope set.
#[derive(Clone, Debug)]
pub struct FrequencyRow {
    pub g: u64,
    /// Per distinct slope: the per-entry deviation `e_i(g)` from the
    /// equidistributed multiplicity `2g / 2r`.
    pub deviations: Vec<(Slope, BigRational)>,
}

#[derive(Clone, Debug)]
pub struct FrequencyReport {
    /// Number of entries `2r` in the slope set.
    pub entries: u64,
    pub rows: Vec<FrequencyRow>,
    /// Observed bound `epsilon`: the supremum of `|e_i(g)|` over the family.
    pub sup_abs_deviation: BigRational,
}

/// Decompose each member's polygon as `|_| {m_i}^(2g/2r + e_i(g))` over the
/// entries of `slope_set` and report the deviations and their supremum.
pub fn frequency_report(
    members: &[FamilyMember],
    slope_set: &[Slope],
) -> Result<FrequencyReport, FamilyError> {
    if members.is_empty() {
        return Err(FamilyError::EmptyInput);
    }
    if slope_set.is_empty() {
        return Err(FamilyError::InvalidParameter("empty slope set".into()));
    }
    let mut weights: BTreeMap<Slope, u64> = BTreeMap::new();
    for s in slope_set {
        *weights.entry(s.clone()).or_insert(0) += 1;
    }
    for (s, w) in &weights {
        if weights.get(&s.complement()).copied().unwrap_or(0) != *w {
            return Err(FamilyError::SlopeSetNotSymmetric(s.value().clone()));
        }
    }
    let entries = slope_set.len() as u64;
    let mut rows = Vec::with_capacity(members.len());
    let mut sup = BigRational::from_integer(0.into());
    for member in members {
        for (s, _) in member.predicted.slope_counts() {
            if !weights.contains_key(s) {
                return Err(FamilyError::SlopeSetMismatch {
                    g: member.g,
                    slope: s.value().clone(),
                });
            }
        }
        let share = BigRational::from_integer((2 * member.g).into())
            / BigRational::from_integer(entries.into());
        let mut deviations = Vec::with_capacity(weights.len());
        for (s, w) in &weights {
            let actual = BigRational::from_integer(member.predicted.multiplicity(s).into())
                / BigRational::from_integer((*w).into());
            let e = actual - &share;
            if e.clone().abs() > sup {
                sup = e.clone().abs();
            }
            deviations.push((s.clone(), e));
        }
        rows.push(FrequencyRow {
            g: member.g,
            deviations,
        });
    }
    Ok(FrequencyReport {
        entries,
        rows,
        sup_abs_deviation: sup,
    })
}
