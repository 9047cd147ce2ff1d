//! Degree-p cyclic cover bookkeeping: Artin-Schreier pole-order reduction,
//! Swan conductors, Riemann-Hurwitz genus, Deuring-Shafarevich p-rank, the
//! Hodge-theoretic Newton polygon lower bound, and the classification of
//! when that bound is known to be attained.
//!
//! The slope-zero multiplicity of the lower bound is
//! `p*g_X + (B - 1)(p - 1)` with `B` the number of geometric branch points;
//! this is the unique exponent consistent with both Riemann-Hurwitz and
//! Deuring-Shafarevich, and the test suite checks that consistency on every
//! constructed cover.

use crate::fp::{is_odd_prime, FpError, FpPoly, RatFunc};
use crate::polygon::{NewtonPolygon, PolygonError, Slope};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("conductor {conductor} is divisible by p = {p}")]
    ConductorDivisibleByP { conductor: u64, p: u64 },
    #[error("invalid branch datum: {0}")]
    InvalidBranch(String),
    #[error("pole of order {order} at the non-rational closed point ({point}): p-divisible orders are only reduced at rational points")]
    IrreduciblePoleUnsupported { point: String, order: u64 },
    #[error("function is not reduced: pole of order {order} at {location} is divisible by p")]
    NotReduced { location: String, order: u64 },
    #[error("cover data implies genus {implied} < 0 (unramified or disconnected configuration)")]
    NegativeGenus { implied: i128 },
    #[error("the p-rank formula requires an ordinary base curve")]
    BaseNotOrdinary,
    #[error("internal: lower-bound polygon has height {height} but the cover has genus {genus}")]
    HeightMismatch { height: u64, genus: u64 },
    #[error("cannot parse cover spec: {0}")]
    ParseSpec(String),
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

/// One branch point: Swan conductor plus the residue degree of the closed
/// point (1 for rational points).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BranchDatum {
    pub conductor: u64,
    pub degree: u64,
}

/// The combinatorial data of a degree-p cyclic cover of a curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSpec {
    pub p: u64,
    pub base_genus: u64,
    pub base_ordinary: bool,
    pub branches: Vec<BranchDatum>,
}

impl CoverSpec {
    pub fn new(
        p: u64,
        base_genus: u64,
        base_ordinary: bool,
        branches: Vec<BranchDatum>,
    ) -> Result<Self, CoverError> {
        if !is_odd_prime(p) {
            return Err(CoverError::NotOddPrime(p));
        }
        for b in &branches {
            if b.conductor == 0 || b.degree == 0 {
                return Err(CoverError::InvalidBranch(format!(
                    "conductor {} / degree {} must be positive",
                    b.conductor, b.degree
                )));
            }
            if b.conductor % p == 0 {
                return Err(CoverError::ConductorDivisibleByP {
                    conductor: b.conductor,
                    p,
                });
            }
        }
        Ok(CoverSpec {
            p,
            base_genus,
            base_ordinary,
            branches,
        })
    }

    /// Total number of geometric branch points (degrees summed).
    pub fn geometric_branch_points(&self) -> u64 {
        self.branches.iter().map(|b| b.degree).sum()
    }
}

impl fmt::Display for CoverSpec {
    /// Text form `p=3 gX=0 ordinary=true branches=2:1,1:2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p={} gX={} ordinary={} branches=",
            self.p, self.base_genus, self.base_ordinary
        )?;
        for (i, b) in self.branches.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}", b.conductor, b.degree)?;
        }
        Ok(())
    }
}

impl FromStr for CoverSpec {
    type Err = CoverError;

    fn from_str(s: &str) -> Result<Self, CoverError> {
        let mut p = None;
        let mut gx = None;
        let mut ordinary = None;
        let mut branches = None;
        for tok in s.split_whitespace() {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| CoverError::ParseSpec(format!("expected key=value, got {tok:?}")))?;
            match key {
                "p" => p = Some(parse_u64(value)?),
                "gX" => gx = Some(parse_u64(value)?),
                "ordinary" => {
                    ordinary = Some(value.parse::<bool>().map_err(|_| {
                        CoverError::ParseSpec(format!("bad boolean {value:?}"))
                    })?)
                }
                "branches" => branches = Some(parse_branches(value)?),
                other => {
                    return Err(CoverError::ParseSpec(format!("unknown key {other:?}")));
                }
            }
        }
        let missing = |k: &str| CoverError::ParseSpec(format!("missing key {k}"));
        CoverSpec::new(
            p.ok_or_else(|| missing("p"))?,
            gx.ok_or_else(|| missing("gX"))?,
            ordinary.ok_or_else(|| missing("ordinary"))?,
            branches.ok_or_else(|| missing("branches"))?,
        )
    }
}

fn parse_u64(s: &str) -> Result<u64, CoverError> {
    s.parse::<u64>()
        .map_err(|_| CoverError::ParseSpec(format!("bad integer {s:?}")))
}

pub(crate) fn parse_branches(s: &str) -> Result<Vec<BranchDatum>, CoverError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|tok| {
            let (d, deg) = tok.split_once(':').unwrap_or((tok, "1"));
            Ok(BranchDatum {
                conductor: parse_u64(d)?,
                degree: parse_u64(deg)?,
            })
        })
        .collect()
}

/// Principal part of a rational function at one branch point, recorded as
/// `(exponent, coefficient)` pairs in the local parameter with negative
/// exponents, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalPart {
    pub terms: Vec<(i64, u64)>,
}

impl PrincipalPart {
    pub fn pole_order(&self) -> u64 {
        self.terms.first().map_or(0, |(n, _)| (-n) as u64)
    }
}

/// Leading coefficient of the order-`n` pole of `f` at the rational point
/// `x = c`, i.e. the value of `(x - c)^n * f` there.
fn leading_coeff_at(f: &RatFunc, linear: &FpPoly, n: u64) -> u64 {
    let p = f.prime();
    let c = (p - linear.coeff(0) % p) % p;
    let q_pow = linear.pow(n as u32);
    let den_rest = f
        .den()
        .divrem(&q_pow)
        .expect("pole order n at c means (x-c)^n divides the denominator")
        .0;
    let num_val = f.num().eval(c);
    let den_val = den_rest.eval(c);
    debug_assert_ne!(den_val, 0);
    crate::fp::mod_mul(num_val, crate::fp::mod_inv(den_val, p), p)
}

/// Principal part at the rational point `x = c` (local parameter `x - c`).
pub fn principal_part_at(f: &RatFunc, c: u64) -> PrincipalPart {
    let p = f.prime();
    let linear = FpPoly::new(p, vec![(p - c % p) % p, 1]); // x - c
    let mut terms = Vec::new();
    let mut g = f.clone();
    loop {
        let n = if g.den().is_one() {
            0
        } else {
            g.den().multiplicity_of(&linear)
        };
        if n == 0 {
            break;
        }
        let b = leading_coeff_at(&g, &linear, n);
        terms.push((-(n as i64), b));
        let term = RatFunc::new(FpPoly::constant(p, b), linear.pow(n as u32))
            .expect("denominator nonzero");
        g = g.sub(&term);
    }
    PrincipalPart { terms }
}

/// Principal part at infinity (local parameter `1/x`): the degree >= 1
/// terms of the polynomial part.
pub fn principal_part_at_infinity(f: &RatFunc) -> PrincipalPart {
    let (poly, _) = f.split_polynomial_part();
    let terms = poly
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| (-(k as i64), c))
        .collect();
    PrincipalPart { terms }
}

/// Replace `f` by a function defining the same degree-p cover whose pole
/// orders are all coprime to p, by repeatedly subtracting `h^p - h`: a
/// leading principal term `a t^(-pn)` becomes `a t^(-n)` (over the prime
/// field `a` is its own p-th root). Applied at infinity for the polynomial
/// part and at each finite rational pole. If every pole dies the cover is
/// unramified and the result simply has no poles.
pub fn reduce_artin_schreier(f: &RatFunc) -> Result<RatFunc, CoverError> {
    let p = f.prime();
    if !is_odd_prime(p) {
        return Err(CoverError::NotOddPrime(p));
    }
    let mut f = f.clone();

    // Pole at infinity: lower p-divisible degrees of the polynomial part.
    loop {
        let (poly, _) = f.split_polynomial_part();
        match poly.degree() {
            Some(n) if n >= 1 && n % (p as usize) == 0 => {
                let a = poly.leading_coeff();
                let swap = FpPoly::monomial(p, a, n).sub(&FpPoly::monomial(p, a, n / p as usize));
                f = f.sub(&RatFunc::from_poly(swap));
            }
            _ => break,
        }
    }

    // Finite poles. Reductions at a rational point only touch that point,
    // so one factorization of the denominator drives the whole pass.
    for (q, mult) in f.den().clone().factor() {
        match q.degree() {
            Some(1) => loop {
                let n = if f.den().is_one() {
                    0
                } else {
                    f.den().multiplicity_of(&q)
                };
                if n == 0 || n % p != 0 {
                    break;
                }
                let b = leading_coeff_at(&f, &q, n);
                let high = RatFunc::new(FpPoly::constant(p, b), q.pow(n as u32))
                    .expect("denominator nonzero");
                let low = RatFunc::new(FpPoly::constant(p, b), q.pow((n / p) as u32))
                    .expect("denominator nonzero");
                f = f.sub(&high.sub(&low));
            },
            _ => {
                if mult % p == 0 {
                    return Err(CoverError::IrreduciblePoleUnsupported {
                        point: q.to_string(),
                        order: mult,
                    });
                }
            }
        }
    }
    Ok(f)
}

/// Read off the branch data of a reduced function: one datum per pole
/// (closed point), conductor = pole order, degree = degree of the closed
/// point. Infinity first, then finite poles in a fixed deterministic order.
pub fn swan_conductors(f: &RatFunc) -> Result<Vec<BranchDatum>, CoverError> {
    let p = f.prime();
    let mut out = Vec::new();
    let inf = f.pole_order_at_infinity();
    if inf > 0 {
        if inf.is_multiple_of(p) {
            return Err(CoverError::NotReduced {
                location: "infinity".into(),
                order: inf,
            });
        }
        out.push(BranchDatum {
            conductor: inf,
            degree: 1,
        });
    }
    if !f.den().is_one() {
        for (q, mult) in f.den().factor() {
            if mult % p == 0 {
                return Err(CoverError::NotReduced {
                    location: q.to_string(),
                    order: mult,
                });
            }
            out.push(BranchDatum {
                conductor: mult,
                degree: q.degree().expect("factor is nonconstant") as u64,
            });
        }
    }
    Ok(out)
}

/// Genus of the cover from Riemann-Hurwitz:
/// `2g_C - 2 = p(2g_X - 2) + sum_i deg_i (p-1)(d_i + 1)`.
pub fn rh_genus(spec: &CoverSpec) -> Result<u64, CoverError> {
    let p = spec.p as i128;
    let ram: i128 = spec
        .branches
        .iter()
        .map(|b| (b.degree * (spec.p - 1) * (b.conductor + 1)) as i128)
        .sum();
    let two_g = p * (2 * spec.base_genus as i128 - 2) + ram + 2;
    debug_assert_eq!(two_g % 2, 0, "p odd makes every term even");
    let g = two_g / 2;
    if g < 0 {
        return Err(CoverError::NegativeGenus { implied: g });
    }
    Ok(g as u64)
}

fn slope_zero_count(spec: &CoverSpec) -> Result<u64, CoverError> {
    let b = spec.geometric_branch_points() as i128;
    let count =
        spec.p as i128 * spec.base_genus as i128 + (b - 1) * (spec.p as i128 - 1);
    if count < 0 {
        return Err(CoverError::NegativeGenus { implied: count });
    }
    Ok(count as u64)
}

/// p-rank of the cover of an ordinary base via Deuring-Shafarevich:
/// `f_C = p*f_X + (B - 1)(p - 1)` with `B` geometric branch points. For an
/// unramified cover (`B = 0`) this reads `p*f_X - (p - 1)`.
pub fn ds_prank(spec: &CoverSpec) -> Result<u64, CoverError> {
    if !spec.base_ordinary {
        return Err(CoverError::BaseNotOrdinary);
    }
    slope_zero_count(spec)
}

/// The Newton-over-Hodge lower bound: slopes `{0,1}` with multiplicity
/// `p*g_X + (B-1)(p-1)` each, plus `{1/d, ..., (d-1)/d}` repeated
/// `deg * (p-1)` times per branch point of conductor `d`. The total height
/// must equal `2 * rh_genus`, which pins the slope-zero exponent.
pub fn hodge_lower_bound(spec: &CoverSpec) -> Result<NewtonPolygon, CoverError> {
    let genus = rh_genus(spec)?;
    let s0 = slope_zero_count(spec)?;
    let mut counts: BTreeMap<Slope, u64> = BTreeMap::new();
    if s0 > 0 {
        counts.insert(Slope::zero(), s0);
        counts.insert(Slope::one(), s0);
    }
    for b in &spec.branches {
        let copies = b.degree * (spec.p - 1);
        for t in 1..b.conductor {
            let s = Slope::from_integers(t, b.conductor)?;
            *counts.entry(s).or_insert(0) += copies;
        }
    }
    let polygon = NewtonPolygon::from_counts(counts)?;
    if polygon.height() != 2 * genus {
        return Err(CoverError::HeightMismatch {
            height: polygon.height(),
            genus,
        });
    }
    Ok(polygon)
}

/// How strong the lower bound is for a given cover spec.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactnessClass {
    /// Ordinary base, all conductors in {1, 2}: the bound is an equality
    /// for every such cover (the p-rank already pins all slopes).
    ExactSmallConductors,
    /// Ordinary base and `p = 1 mod d_i` for all i: the bound is attainable,
    /// i.e. some cover with these conductors achieves it.
    ExactBooherPries,
    LowerBoundOnly,
}

impl ExactnessClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExactnessClass::ExactSmallConductors => "small-conductors",
            ExactnessClass::ExactBooherPries => "booher-pries",
            ExactnessClass::LowerBoundOnly => "lower-bound-only",
        }
    }
}

impl fmt::Display for ExactnessClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn exactness_class(spec: &CoverSpec) -> ExactnessClass {
    if spec.base_ordinary && spec.branches.iter().all(|b| b.conductor <= 2) {
        ExactnessClass::ExactSmallConductors
    } else if spec.base_ordinary && spec.branches.iter().all(|b| (spec.p - 1).is_multiple_of(b.conductor)) {
        ExactnessClass::ExactBooherPries
    } else {
        ExactnessClass::LowerBoundOnly
    }
}
