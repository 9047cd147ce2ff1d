//! Ground-truth oracle: brute-force point counts for degree-p cyclic covers
//! of the projective line, zeta numerator recovery through Newton's
//! identities, p-adic Newton polygon extraction, and comparison against the
//! Hodge-bound predictions.
//!
//! Counting is deliberately naive - enumerate the field, evaluate, take the
//! trace - because this module is the independent check on everything else.

mod field;

pub use field::{build_field, FieldTower, FqElem, MAX_EXT_DEGREE};

use crate::covers::{
    ds_prank, exactness_class, hodge_lower_bound, reduce_artin_schreier, rh_genus,
    swan_conductors, BranchDatum, CoverError, CoverSpec, ExactnessClass,
};
use crate::fp::{FpError, RatFunc};
use crate::polygon::{NewtonPolygon, PolygonError, Slope};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use std::fmt;
use thiserror::Error;

/// Default bound on the extension degree used by counting runs; override
/// per call (the CLI reads `NEWTONLAB_FIELD_GUARD`).
pub const DEFAULT_FIELD_GUARD: u32 = 16;

#[derive(Debug, Error, Clone)]
pub enum ZetaError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("extension degree {e} exceeds the hard cap {max}")]
    DegreeTooLarge { e: usize, max: usize },
    #[error("extension degree {k} exceeds the field guard {guard}")]
    FieldGuard { k: u32, guard: u32 },
    #[error("field of order {p}^{k} is too large to enumerate")]
    EnumerationTooLarge { p: u64, k: u32 },
    #[error("round-trip failure at k = {k}: coefficients predict {expected} points, the count gives {measured}")]
    RoundTripFailure {
        k: u32,
        expected: i128,
        measured: u64,
    },
    #[error("counterexample found: measured Newton polygon violates a proved property\n{0}")]
    CounterexampleFound(Box<VerificationReport>),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Fp(#[from] FpError),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
}

/// A degree-p cyclic cover of the projective line cut out by `y^p - y = f`
/// with every pole order of `f` coprime to p.
#[derive(Clone, Debug)]
pub struct CurveOverP1 {
    f: RatFunc,
    branches: Vec<BranchDatum>,
    genus: u64,
}

impl CurveOverP1 {
    /// Wrap an already-reduced function; errors if some pole order is
    /// divisible by p or the cover would be disconnected (no poles over a
    /// rational base).
    pub fn new(f: RatFunc) -> Result<Self, ZetaError> {
        let branches = swan_conductors(&f)?;
        let spec = CoverSpec::new(f.prime(), 0, true, branches.clone())?;
        let genus = rh_genus(&spec)?;
        Ok(CurveOverP1 { f, branches, genus })
    }

    /// Reduce first, then wrap.
    pub fn from_function(f: &RatFunc) -> Result<Self, ZetaError> {
        Self::new(reduce_artin_schreier(f)?)
    }

    pub fn p(&self) -> u64 {
        self.f.prime()
    }

    pub fn function(&self) -> &RatFunc {
        &self.f
    }

    pub fn branches(&self) -> &[BranchDatum] {
        &self.branches
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn cover_spec(&self) -> CoverSpec {
        CoverSpec::new(self.p(), 0, true, self.branches.clone())
            .expect("branch data was validated on construction")
    }
}

fn eval_poly(field: &FieldTower, coeffs: &[u64], x: &FqElem) -> FqElem {
    let mut acc = field.zero();
    for &c in coeffs.iter().rev() {
        acc = field.mul(&acc, x);
        if c != 0 {
            acc = field.add_base(&acc, c);
        }
    }
    acc
}

/// `#C(F_{p^k})` by enumeration: a non-pole `x` contributes p when
/// `Tr(f(x)) = 0` and 0 otherwise; each pole (a closed point of degree e,
/// infinity included) is totally ramified and contributes e exactly when
/// `e | k`. The enumeration is split into chunks whose partial sums
/// combine associatively, so the result is identical under any scheduling.
pub fn count_points(curve: &CurveOverP1, k: u32, guard: u32) -> Result<u64, ZetaError> {
    if k == 0 || k > guard {
        return Err(ZetaError::FieldGuard { k, guard });
    }
    let p = curve.p();
    let field = build_field(p, k as usize)?;
    let order = field
        .order()
        .ok_or(ZetaError::EnumerationTooLarge { p, k })?;

    let num_coeffs = curve.f.num().coeffs();
    let den_coeffs = curve.f.den().coeffs();

    const CHUNK: u64 = 1 << 13;
    let ranges: Vec<(u64, u64)> = (0..order.div_ceil(CHUNK))
        .map(|i| (i * CHUNK, ((i + 1) * CHUNK).min(order)))
        .collect();

    let trace_zero_points: u64 = ranges
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut values: Vec<(FqElem, FqElem)> = Vec::with_capacity((hi - lo) as usize);
            for idx in lo..hi {
                let x = field.element_from_index(idx);
                let den_v = eval_poly(&field, den_coeffs, &x);
                if field.is_zero(&den_v) {
                    continue; // a pole: counted through its closed point
                }
                let num_v = eval_poly(&field, num_coeffs, &x);
                values.push((num_v, den_v));
            }
            if values.is_empty() {
                return 0u64;
            }
            // Batch inversion: one field inversion per chunk.
            let mut prefix = Vec::with_capacity(values.len());
            let mut acc = field.one();
            for (_, d) in &values {
                acc = field.mul(&acc, d);
                prefix.push(acc);
            }
            let mut suffix_inv = field
                .inv(prefix.last().unwrap())
                .expect("product of nonzero denominators is nonzero");
            let mut count = 0u64;
            for i in (0..values.len()).rev() {
                let den_inv = if i == 0 {
                    suffix_inv
                } else {
                    field.mul(&suffix_inv, &prefix[i - 1])
                };
                let fx = field.mul(&values[i].0, &den_inv);
                if field.trace(&fx) == 0 {
                    count += 1;
                }
                suffix_inv = field.mul(&suffix_inv, &values[i].1);
            }
            count
        })
        .sum();

    let mut total = trace_zero_points
        .checked_mul(p)
        .ok_or(ZetaError::EnumerationTooLarge { p, k })?;

    // The point at infinity, when it is not a pole.
    let n_deg = curve.f.num().degree().map_or(-1, |d| d as i64);
    let d_deg = curve.f.den().degree().map_or(-1, |d| d as i64);
    match n_deg.cmp(&d_deg) {
        std::cmp::Ordering::Greater => {} // pole at infinity
        std::cmp::Ordering::Less => total += p, // f(inf) = 0
        std::cmp::Ordering::Equal => {
            let c = crate::fp::mod_mul(
                curve.f.num().leading_coeff(),
                crate::fp::mod_inv(curve.f.den().leading_coeff(), p),
                p,
            );
            // Absolute trace of a prime-field constant is k*c.
            if ((k as u64 % p) * c).is_multiple_of(p) {
                total += p;
            }
        }
    }

    // Ramified closed points, one per pole.
    for b in &curve.branches {
        if (k as u64).is_multiple_of(b.degree) {
            total += b.degree;
        }
    }
    Ok(total)
}

/// Integer numerator of the zeta function, `a_0 + a_1 T + ... + a_2g T^2g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    pub p: u64,
    pub g: u64,
    pub coefficients: Vec<i128>,
    /// Highest extension degree the coefficients were checked against; the
    /// full round trip runs to `2g` and is truncated by the field guard.
    pub round_trip_checked_to: u32,
}

impl LPolynomial {
    pub fn is_round_trip_complete(&self) -> bool {
        self.round_trip_checked_to as u64 >= 2 * self.g
    }
}

/// Recover the zeta numerator from `N_1..N_g`: power sums
/// `s_k = p^k + 1 - N_k` feed Newton's identities for the low-degree
/// coefficients and the functional equation `a_(2g-i) = p^(g-i) a_i` fills
/// the rest. Counts beyond `g` (up to `min(2g, guard)`) re-measure the
/// curve against the recovered coefficients.
pub fn l_polynomial(curve: &CurveOverP1, guard: u32) -> Result<LPolynomial, ZetaError> {
    let p = curve.p();
    let g = curve.genus();
    if g == 0 {
        return Ok(LPolynomial {
            p,
            g,
            coefficients: vec![1],
            round_trip_checked_to: 0,
        });
    }
    if g > guard as u64 {
        return Err(ZetaError::FieldGuard {
            k: g as u32,
            guard,
        });
    }
    let g = g as usize;
    let pk = |k: usize| -> i128 { (p as i128).pow(k as u32) };

    let mut power_sums = vec![0i128; 2 * g + 1];
    for (k, sum) in power_sums.iter_mut().enumerate().take(g + 1).skip(1) {
        let n_k = count_points(curve, k as u32, guard)?;
        *sum = pk(k) + 1 - n_k as i128;
    }

    // Newton's identities: i*e_i = sum_{j=1..i} (-1)^(j-1) e_(i-j) s_j.
    let mut elem = vec![0i128; g + 1];
    elem[0] = 1;
    for i in 1..=g {
        let mut acc = 0i128;
        for j in 1..=i {
            let term = elem[i - j] * power_sums[j];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        assert_eq!(acc % i as i128, 0, "Newton recurrence divides exactly");
        elem[i] = acc / i as i128;
    }

    let mut coefficients = vec![0i128; 2 * g + 1];
    for i in 0..=g {
        coefficients[i] = if i % 2 == 1 { -elem[i] } else { elem[i] };
    }
    for i in 0..g {
        coefficients[2 * g - i] = pk(g - i) * coefficients[i];
    }

    // Round trip on the extensions the guard still allows.
    let top = (2 * g).min(guard as usize);
    let mut checked_to = g as u32;
    for k in g + 1..=top {
        // s_k = -k a_k - sum_{j=1..k-1} a_j s_(k-j), valid for k <= 2g.
        let mut s_k = -(k as i128) * coefficients[k];
        for j in 1..k {
            s_k -= coefficients[j] * power_sums[k - j];
        }
        power_sums[k] = s_k;
        let expected = pk(k) + 1 - s_k;
        let measured = count_points(curve, k as u32, guard)?;
        if measured as i128 != expected {
            return Err(ZetaError::RoundTripFailure {
                k: k as u32,
                expected,
                measured,
            });
        }
        checked_to = k as u32;
    }

    Ok(LPolynomial {
        p,
        g: g as u64,
        coefficients,
        round_trip_checked_to: checked_to,
    })
}

fn p_adic_valuation(mut v: i128, p: u64) -> u64 {
    debug_assert_ne!(v, 0);
    let p = p as i128;
    let mut val = 0;
    while v % p == 0 {
        v /= p;
        val += 1;
    }
    val
}

/// The p-adic Newton polygon of the zeta numerator: lower convex hull of
/// `(i, v_p(a_i))` over nonzero coefficients, hull slopes expanded to a
/// multiset of 2g rationals. Symmetry is forced by the functional equation
/// and asserted by the polygon constructor.
pub fn newton_polygon_of_l(l: &LPolynomial) -> NewtonPolygon {
    if l.g == 0 {
        return NewtonPolygon::empty();
    }
    let points: Vec<(i128, i128)> = l
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .map(|(i, &a)| (i as i128, p_adic_valuation(a, l.p) as i128))
        .collect();
    let mut hull: Vec<(i128, i128)> = Vec::with_capacity(points.len());
    for pt in points {
        while hull.len() >= 2 {
            let (x0, y0) = hull[hull.len() - 2];
            let (x1, y1) = hull[hull.len() - 1];
            if (x1 - x0) * (pt.1 - y0) - (y1 - y0) * (pt.0 - x0) <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut slopes = Vec::with_capacity(2 * l.g as usize);
    for w in hull.windows(2) {
        let dx = w[1].0 - w[0].0;
        let dy = w[1].1 - w[0].1;
        let slope = Slope::new(BigRational::new(BigInt::from(dy), BigInt::from(dx)))
            .expect("zeta slopes lie in [0, 1]");
        for _ in 0..dx {
            slopes.push(slope.clone());
        }
    }
    NewtonPolygon::from_slopes(slopes)
        .expect("the functional equation forces a symmetric slope multiset")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Above,
    Counterexample,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Equal => "equal",
            Verdict::Above => "above",
            Verdict::Counterexample => "COUNTEREXAMPLE",
        }
    }
}

/// Everything measured and predicted for one curve, plus the verdict of the
/// measured-vs-predicted comparison.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub p: u64,
    pub reduced: RatFunc,
    pub branches: Vec<BranchDatum>,
    pub genus: u64,
    pub predicted: NewtonPolygon,
    pub exactness: ExactnessClass,
    pub l_polynomial: LPolynomial,
    pub measured: NewtonPolygon,
    pub measured_prank: u64,
    pub predicted_prank: u64,
    pub verdict: Verdict,
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f={} genus={} branches=", self.reduced, self.genus)?;
        for (i, b) in self.branches.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}:{}", b.conductor, b.degree)?;
        }
        write!(
            f,
            " exact={} prank={} predicted={} measured={} checked={} verdict={}",
            self.exactness,
            self.measured_prank,
            self.predicted,
            self.measured,
            self.l_polynomial.round_trip_checked_to,
            self.verdict.as_str()
        )
    }
}

/// Reduce `f`, predict its Newton polygon from the branch data, measure the
/// true polygon through point counts, and check every property that is a
/// theorem: measured lies above predicted; measured equals predicted when
/// all conductors sit in {1, 2}; measured p-rank matches the predicted one.
/// A violated check comes back as `CounterexampleFound` carrying the full
/// report - it falsifies either this implementation or the theorem.
pub fn verify_prediction(f: &RatFunc, guard: u32) -> Result<VerificationReport, ZetaError> {
    let curve = CurveOverP1::from_function(f)?;
    let spec = curve.cover_spec();
    let predicted = hodge_lower_bound(&spec)?;
    let exactness = exactness_class(&spec);
    let predicted_prank = ds_prank(&spec)?;
    let l = l_polynomial(&curve, guard)?;
    let measured = newton_polygon_of_l(&l);
    let measured_prank = measured.slope_zero_multiplicity();

    let above = measured.lies_above(&predicted)?;
    let equal = measured == predicted;
    let exactness_holds = exactness != ExactnessClass::ExactSmallConductors || equal;
    let prank_matches = measured_prank == predicted_prank;

    let mut report = VerificationReport {
        p: curve.p(),
        reduced: curve.function().clone(),
        branches: curve.branches().to_vec(),
        genus: curve.genus(),
        predicted,
        exactness,
        l_polynomial: l,
        measured,
        measured_prank,
        predicted_prank,
        verdict: if equal { Verdict::Equal } else { Verdict::Above },
    };
    if !(above && exactness_holds && prank_matches) {
        report.verdict = Verdict::Counterexample;
        return Err(ZetaError::CounterexampleFound(Box::new(report)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::parse_ratfunc;

    fn curve(s: &str, p: u64) -> CurveOverP1 {
        CurveOverP1::new(parse_ratfunc(s, p).unwrap()).unwrap()
    }

    #[test]
    fn count_double_pole_at_origin_story() {
        // y^3 - y = x^2: x = 0 contributes 3, the pole at infinity 1.
        let c = curve("x^2", 3);
        assert_eq!(c.genus(), 1);
        assert_eq!(count_points(&c, 1, 16).unwrap(), 4);
    }

    #[test]
    fn genus_zero_cover_counts_like_the_line() {
        let c = curve("x", 3);
        assert_eq!(c.genus(), 0);
        for k in 1..=4u32 {
            assert_eq!(count_points(&c, k, 16).unwrap(), 3u64.pow(k) + 1);
        }
    }

    #[test]
    fn conductor_four_first_count() {
        let c = curve("x^4", 3);
        assert_eq!(c.genus(), 3);
        assert_eq!(count_points(&c, 1, 16).unwrap(), 4);
    }

    #[test]
    fn supersingular_elliptic_counts() {
        // L = 1 + 3T^2 gives N_1..N_4 = 4, 16, 28, 64.
        let c = curve("x^2", 3);
        assert_eq!(count_points(&c, 2, 16).unwrap(), 16);
        assert_eq!(count_points(&c, 3, 16).unwrap(), 28);
        assert_eq!(count_points(&c, 4, 16).unwrap(), 64);
    }

    #[test]
    fn brute_force_pair_enumeration_agrees() {
        // Independent recount of the trace-splitting rule: solve
        // y^p - y = f(x) directly over pairs (x, y).
        for (s, p, kmax) in [("x^2", 3u64, 3u32), ("x^4", 3, 3), ("x^2 + 2*x", 3, 3)] {
            let c = curve(s, p);
            for k in 1..=kmax {
                let field = build_field(p, k as usize).unwrap();
                let order = field.order().unwrap();
                let num = c.function().num().coeffs();
                let den = c.function().den().coeffs();
                let mut affine = 0u64;
                for xi in 0..order {
                    let x = field.element_from_index(xi);
                    let den_v = eval_poly(&field, den, &x);
                    if field.is_zero(&den_v) {
                        continue;
                    }
                    let fx = field.mul(
                        &eval_poly(&field, num, &x),
                        &field.inv(&den_v).unwrap(),
                    );
                    for yi in 0..order {
                        let y = field.element_from_index(yi);
                        let lhs = field.sub(&field.pow(&y, p as u128), &y);
                        if lhs == fx {
                            affine += 1;
                        }
                    }
                }
                let ramified: u64 = c
                    .branches()
                    .iter()
                    .filter(|b| (k as u64).is_multiple_of(b.degree))
                    .map(|b| b.degree)
                    .sum();
                assert_eq!(
                    count_points(&c, k, 16).unwrap(),
                    affine + ramified,
                    "f = {s}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn l_polynomial_supersingular_elliptic() {
        let l = l_polynomial(&curve("x^2", 3), 16).unwrap();
        assert_eq!(l.coefficients, vec![1, 0, 3]);
        assert!(l.is_round_trip_complete());
    }

    #[test]
    fn l_polynomial_genus_zero_is_one() {
        let l = l_polynomial(&curve("x", 3), 16).unwrap();
        assert_eq!(l.coefficients, vec![1]);
    }

    #[test]
    fn l_polynomial_conductor_four_regression() {
        // Frozen oracle output for y^3 - y = x^4 (genus 3), after the
        // independent pair-enumeration recount above.
        let l = l_polynomial(&curve("x^4", 3), 16).unwrap();
        assert_eq!(l.coefficients[0], 1);
        assert_eq!(l.coefficients[1], 0);
        assert!(l.is_round_trip_complete());
        let np = newton_polygon_of_l(&l);
        assert!(np
            .lies_above(&hodge_lower_bound(&curve("x^4", 3).cover_spec()).unwrap())
            .unwrap());
    }

    #[test]
    fn newton_polygon_of_small_l_polynomials() {
        let ss = LPolynomial {
            p: 3,
            g: 1,
            coefficients: vec![1, 0, 3],
            round_trip_checked_to: 2,
        };
        assert_eq!(newton_polygon_of_l(&ss).to_string(), "1/2,1/2");
        let ord = LPolynomial {
            p: 3,
            g: 1,
            coefficients: vec![1, -1, 3],
            round_trip_checked_to: 2,
        };
        assert_eq!(newton_polygon_of_l(&ord).to_string(), "0,1");
        let trivial = LPolynomial {
            p: 3,
            g: 0,
            coefficients: vec![1],
            round_trip_checked_to: 0,
        };
        assert!(newton_polygon_of_l(&trivial).is_empty());
    }

    #[test]
    fn verify_small_conductor_equality() {
        let f = parse_ratfunc("x^2", 3).unwrap();
        let report = verify_prediction(&f, 16).unwrap();
        assert_eq!(report.verdict, Verdict::Equal);
        assert_eq!(report.measured.to_string(), "1/2,1/2");
    }

    #[test]
    fn verify_genus_five_small_conductors() {
        let f = parse_ratfunc("x^2 + 1/x + 1/(x-1)", 3).unwrap();
        let report = verify_prediction(&f, 16).unwrap();
        assert_eq!(report.genus, 5);
        assert_eq!(report.exactness, ExactnessClass::ExactSmallConductors);
        assert_eq!(report.verdict, Verdict::Equal);
        assert_eq!(report.measured_prank, 4);
        assert_eq!(
            report.predicted.to_string(),
            "0,0,0,0,1/2,1/2,1,1,1,1"
        );
    }

    #[test]
    fn verify_lower_bound_only_case() {
        let f = parse_ratfunc("x^4", 3).unwrap();
        let report = verify_prediction(&f, 16).unwrap();
        assert_eq!(report.exactness, ExactnessClass::LowerBoundOnly);
        assert_eq!(
            report.predicted.to_string(),
            "1/4,1/4,1/2,1/2,3/4,3/4"
        );
        assert!(matches!(report.verdict, Verdict::Equal | Verdict::Above));
    }

    #[test]
    fn counts_invariant_under_artin_schreier_shift() {
        let p = 3;
        let base = parse_ratfunc("x^2 + 1/x", p).unwrap();
        let c0 = CurveOverP1::from_function(&base).unwrap();
        let reference: Vec<u64> = (1..=4)
            .map(|k| count_points(&c0, k, 16).unwrap())
            .collect();
        for h in ["x", "2*x + 1", "x^2", "1/(x-1)"] {
            let h = parse_ratfunc(h, p).unwrap();
            let shifted = base.add(&h.pow(3).sub(&h));
            let c = CurveOverP1::from_function(&shifted).unwrap();
            let counts: Vec<u64> = (1..=4)
                .map(|k| count_points(&c, k, 16).unwrap())
                .collect();
            assert_eq!(counts, reference, "h = {h}");
        }
    }

    #[test]
    fn weil_bound_holds_squared() {
        // |p^k + 1 - N_k|^2 <= 4 g^2 p^k, checked in exact integers.
        for s in ["x^2", "x^4", "x^2 + 1/x + 1/(x-1)"] {
            let c = curve(s, 3);
            let g = c.genus() as i128;
            for k in 1..=5u32 {
                let n = count_points(&c, k, 16).unwrap() as i128;
                let q = 3i128.pow(k);
                let defect = q + 1 - n;
                assert!(defect * defect <= 4 * g * g * q, "f = {s}, k = {k}");
            }
        }
    }

    #[test]
    fn field_guard_is_enforced() {
        let c = curve("x^2", 3);
        assert!(matches!(
            count_points(&c, 5, 4),
            Err(ZetaError::FieldGuard { k: 5, guard: 4 })
        ));
        // Guard below the genus: the L-polynomial cannot be computed.
        let big = curve("x^2 + 1/x + 1/(x-1)", 3);
        assert!(matches!(
            l_polynomial(&big, 4),
            Err(ZetaError::FieldGuard { .. })
        ));
    }

    #[test]
    fn truncated_round_trip_is_reported() {
        // Genus 5 with guard 7: round trip checks k = 6, 7 and stops.
        let c = curve("x^2 + 1/x + 1/(x-1)", 3);
        let l = l_polynomial(&c, 7).unwrap();
        assert_eq!(l.round_trip_checked_to, 7);
        assert!(!l.is_round_trip_complete());
    }

    #[test]
    fn unramified_rational_base_is_rejected() {
        let f = parse_ratfunc("x^3 + 2*x", 3).unwrap();
        assert!(matches!(
            CurveOverP1::from_function(&f),
            Err(ZetaError::Cover(CoverError::NegativeGenus { .. }))
        ));
    }
}
