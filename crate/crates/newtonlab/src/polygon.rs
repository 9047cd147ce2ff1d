//! Exact Newton polygon calculus: construction, evaluation, comparison,
//! amalgamation, scaling, and lattice-point counting.
//!
//! A Newton polygon of height `2g` is determined by its multiset of `2g`
//! rational slopes in `[0,1]`; the multiset must be symmetric under
//! `s -> 1 - s`. All arithmetic is exact rational; no floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolygonError {
    #[error("slope {0} lies outside [0, 1]")]
    SlopeOutOfRange(BigRational),
    #[error("slope multiset not symmetric: multiplicity({slope}) = {multiplicity} but multiplicity(1 - {slope}) = {complement_multiplicity}")]
    NotSymmetric {
        slope: BigRational,
        multiplicity: u64,
        complement_multiplicity: u64,
    },
    #[error("slope count {0} is odd; a Newton polygon has height 2g")]
    OddHeight(u64),
    #[error("argument {x} outside domain [0, {high}]")]
    DomainError { x: BigRational, high: BigRational },
    #[error("graphs live on different domains (heights {left} and {right})")]
    DomainMismatch { left: u64, right: u64 },
    #[error("empty polygon has no scaled graph")]
    EmptyPolygon,
    #[error("invalid basic graph: {0}")]
    InvalidBasicGraph(String),
    #[error("cannot parse slope list: {0}")]
    Parse(String),
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A single Newton polygon slope: an exact rational in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slope(BigRational);

impl Slope {
    pub fn new(value: BigRational) -> Result<Self, PolygonError> {
        if value.is_negative() || value > BigRational::one() {
            return Err(PolygonError::SlopeOutOfRange(value));
        }
        Ok(Slope(value))
    }

    pub fn from_integers(numer: u64, denom: u64) -> Result<Self, PolygonError> {
        if denom == 0 {
            return Err(PolygonError::Parse("zero denominator".into()));
        }
        Slope::new(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn zero() -> Self {
        Slope(BigRational::zero())
    }

    pub fn one() -> Self {
        Slope(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    /// The mirror slope `1 - s`.
    pub fn complement(&self) -> Slope {
        Slope(BigRational::one() - &self.0)
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Slope {
    type Err = PolygonError;

    fn from_str(s: &str) -> Result<Self, PolygonError> {
        let value = BigRational::from_str(s.trim())
            .map_err(|e| PolygonError::Parse(format!("bad slope {s:?}: {e}")))?;
        Slope::new(value)
    }
}

/// Exact count of lattice points strictly below a polygon, restricted to
/// `0 <= x <= g`, `y >= 0`. This is the codimension lower bound for the
/// corresponding Newton stratum; it is exact when all vertices are integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeCount {
    pub count: u64,
    pub exact_codimension: bool,
}

/// A symmetric multiset of rational slopes in `[0,1]`, stored sorted
/// ascending and run-length encoded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Strictly increasing slopes with positive multiplicities.
    runs: Vec<(Slope, u64)>,
    height: u64,
}

impl NewtonPolygon {
    /// The empty polygon (height 0); identity for amalgamation.
    pub fn empty() -> Self {
        NewtonPolygon {
            runs: Vec::new(),
            height: 0,
        }
    }

    /// Canonicalize a slope multiset into a Newton polygon, verifying the
    /// symmetry and parity invariants.
    pub fn from_slopes<I: IntoIterator<Item = Slope>>(slopes: I) -> Result<Self, PolygonError> {
        Self::from_counts(slopes.into_iter().map(|s| (s, 1)))
    }

    /// Same as [`from_slopes`](Self::from_slopes) but takes
    /// `(slope, multiplicity)` pairs; duplicate slopes are merged.
    pub fn from_counts<I: IntoIterator<Item = (Slope, u64)>>(
        counts: I,
    ) -> Result<Self, PolygonError> {
        let mut pairs: Vec<(Slope, u64)> = counts.into_iter().filter(|(_, m)| *m > 0).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut runs: Vec<(Slope, u64)> = Vec::with_capacity(pairs.len());
        for (s, m) in pairs {
            match runs.last_mut() {
                Some((prev, pm)) if *prev == s => *pm += m,
                _ => runs.push((s, m)),
            }
        }
        let height: u64 = runs.iter().map(|(_, m)| m).sum();
        let polygon = NewtonPolygon { runs, height };
        polygon.check_symmetry()?;
        if !height.is_multiple_of(2) {
            return Err(PolygonError::OddHeight(height));
        }
        // Symmetry forces sum of slopes = g; assert it independently.
        let sum: BigRational = polygon
            .runs
            .iter()
            .map(|(s, m)| s.value() * rat(*m))
            .sum();
        assert_eq!(
            sum,
            rat(polygon.genus()),
            "slope sum must equal the genus"
        );
        Ok(polygon)
    }

    fn check_symmetry(&self) -> Result<(), PolygonError> {
        for (s, m) in &self.runs {
            let cm = self.multiplicity(&s.complement());
            if cm != *m {
                return Err(PolygonError::NotSymmetric {
                    slope: s.value().clone(),
                    multiplicity: *m,
                    complement_multiplicity: cm,
                });
            }
        }
        Ok(())
    }

    /// Height `2g` (the number of slopes counted with multiplicity).
    pub fn height(&self) -> u64 {
        self.height
    }

    pub fn genus(&self) -> u64 {
        self.height / 2
    }

    pub fn is_empty(&self) -> bool {
        self.height == 0
    }

    /// Sorted `(slope, multiplicity)` runs with strictly increasing slopes.
    pub fn slope_counts(&self) -> &[(Slope, u64)] {
        &self.runs
    }

    /// The slopes expanded with multiplicity, ascending.
    pub fn slopes(&self) -> impl Iterator<Item = &Slope> + '_ {
        self.runs
            .iter()
            .flat_map(|(s, m)| std::iter::repeat_n(s, *m as usize))
    }

    pub fn multiplicity(&self, slope: &Slope) -> u64 {
        self.runs
            .iter()
            .find(|(s, _)| s == slope)
            .map_or(0, |(_, m)| *m)
    }

    /// Multiplicity of slope 0; for the polygon of a curve this is the p-rank.
    pub fn slope_zero_multiplicity(&self) -> u64 {
        self.multiplicity(&Slope::zero())
    }

    /// Evaluate the piecewise-linear polygon function at `x` in `[0, 2g]`;
    /// the i-th unit interval carries the i-th smallest slope.
    pub fn evaluate(&self, x: &BigRational) -> Result<BigRational, PolygonError> {
        let high = rat(self.height);
        if x.is_negative() || *x > high {
            return Err(PolygonError::DomainError {
                x: x.clone(),
                high,
            });
        }
        let mut pos = BigRational::zero();
        let mut acc = BigRational::zero();
        for (s, m) in &self.runs {
            let end = &pos + rat(*m);
            if *x <= end {
                return Ok(acc + (x - pos) * s.value());
            }
            acc += s.value() * rat(*m);
            pos = end;
        }
        Ok(acc) // x == 0 on the empty polygon
    }

    /// Vertices of the polygon: the endpoints plus every point where the
    /// slope changes. All x-coordinates are integers.
    pub fn vertices(&self) -> Vec<(BigRational, BigRational)> {
        let mut verts = vec![(BigRational::zero(), BigRational::zero())];
        let mut pos = BigRational::zero();
        let mut acc = BigRational::zero();
        for (s, m) in &self.runs {
            pos += rat(*m);
            acc += s.value() * rat(*m);
            verts.push((pos.clone(), acc.clone()));
        }
        verts
    }

    /// Whether `self` lies on or above `other` everywhere on the common
    /// domain. Both functions are piecewise linear with integral breakpoints,
    /// so it suffices to compare at the union of their vertices.
    pub fn lies_above(&self, other: &NewtonPolygon) -> Result<bool, PolygonError> {
        if self.height != other.height {
            return Err(PolygonError::DomainMismatch {
                left: self.height,
                right: other.height,
            });
        }
        let mut xs: Vec<BigRational> = self
            .vertices()
            .into_iter()
            .chain(other.vertices())
            .map(|(x, _)| x)
            .collect();
        xs.sort();
        xs.dedup();
        for x in xs {
            if self.evaluate(&x)? < other.evaluate(&x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Disjoint union of slope multisets; heights add. The empty polygon is
    /// the identity.
    pub fn amalgamate(&self, other: &NewtonPolygon) -> NewtonPolygon {
        let mut runs: Vec<(Slope, u64)> = Vec::with_capacity(self.runs.len() + other.runs.len());
        let (mut a, mut b) = (self.runs.iter().peekable(), other.runs.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((sa, ma)), Some((sb, mb))) => {
                    if sa < sb {
                        runs.push((sa.clone(), *ma));
                        a.next();
                    } else if sb < sa {
                        runs.push((sb.clone(), *mb));
                        b.next();
                    } else {
                        runs.push((sa.clone(), ma + mb));
                        a.next();
                        b.next();
                    }
                }
                (Some(_), None) => {
                    runs.extend(a.cloned());
                    break;
                }
                (None, Some(_)) => {
                    runs.extend(b.cloned());
                    break;
                }
                (None, None) => break,
            }
        }
        NewtonPolygon {
            runs,
            height: self.height + other.height,
        }
    }

    /// Scale by `1/g` to a basic graph on `[0, 2]`. Consecutive collinear
    /// vertices are already merged by the run-length representation.
    pub fn scaled(&self) -> Result<BasicGraph, PolygonError> {
        if self.height < 2 {
            return Err(PolygonError::EmptyPolygon);
        }
        let g = rat(self.genus());
        let verts = self
            .vertices()
            .into_iter()
            .map(|(x, y)| (x / &g, y / &g))
            .collect();
        BasicGraph::piecewise_linear(verts)
    }

    /// Count `#{(x, y) in Z>=0 x Z>=0 : 0 <= x <= g, y < P(x)}` by direct
    /// enumeration, and report whether all vertices are integral (the case
    /// in which the count is the exact stratum codimension).
    pub fn lattice_points_below(&self) -> LatticeCount {
        let g = self.genus();
        let mut count = 0u64;
        for x in 0..=g {
            let fx = self
                .evaluate(&rat(x))
                .expect("0 <= x <= g is inside the domain");
            let mut y = BigRational::zero();
            while y < fx {
                count += 1;
                y += BigRational::one();
            }
        }
        let exact_codimension = self.vertices().iter().all(|(_, y)| y.is_integer());
        LatticeCount {
            count,
            exact_codimension,
        }
    }
}

impl fmt::Display for NewtonPolygon {
    /// Canonical interchange form: reduced fractions ascending, comma
    /// separated, integers written without denominator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in self.slopes() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for NewtonPolygon {
    type Err = PolygonError;

    fn from_str(s: &str) -> Result<Self, PolygonError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(NewtonPolygon::empty());
        }
        let slopes: Result<Vec<Slope>, _> = s.split(',').map(Slope::from_str).collect();
        NewtonPolygon::from_slopes(slopes?)
    }
}

/// A convex graph on `[0, 2]` with endpoints `(0,0)` and `(2,1)`, symmetric
/// in the Newton sense `f(2 - x) = f(x) + 1 - x` (slopes pair as
/// `s <-> 1 - s`): either piecewise linear (e.g. a scaled Newton polygon)
/// or the parabola `y = x^2/4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasicGraph {
    PiecewiseLinear(Vec<(BigRational, BigRational)>),
    Parabola,
}

impl BasicGraph {
    pub fn parabola() -> Self {
        BasicGraph::Parabola
    }

    /// Validate a vertex list as a basic graph: endpoints `(0,0)`/`(2,1)`,
    /// strictly increasing x, convex, and symmetric under
    /// `(x, y) -> (2 - x, 1 - y)`. Collinear interior vertices are merged.
    pub fn piecewise_linear(
        vertices: Vec<(BigRational, BigRational)>,
    ) -> Result<Self, PolygonError> {
        if vertices.len() < 2 {
            return Err(PolygonError::InvalidBasicGraph(
                "need at least the two endpoints".into(),
            ));
        }
        let two = rat(2);
        if vertices[0] != (BigRational::zero(), BigRational::zero()) {
            return Err(PolygonError::InvalidBasicGraph(
                "graph must start at (0, 0)".into(),
            ));
        }
        if *vertices.last().unwrap() != (two.clone(), BigRational::one()) {
            return Err(PolygonError::InvalidBasicGraph(
                "graph must end at (2, 1)".into(),
            ));
        }
        for w in vertices.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(PolygonError::InvalidBasicGraph(
                    "x-coordinates must be strictly increasing".into(),
                ));
            }
        }
        // Merge collinear runs, then require strictly increasing slopes.
        let mut merged: Vec<(BigRational, BigRational)> = vec![vertices[0].clone()];
        for v in &vertices[1..] {
            if merged.len() >= 2 {
                let a = &merged[merged.len() - 2];
                let b = &merged[merged.len() - 1];
                let incoming = (&b.1 - &a.1) / (&b.0 - &a.0);
                let outgoing = (&v.1 - &b.1) / (&v.0 - &b.0);
                if outgoing == incoming {
                    let last = merged.len() - 1;
                    merged[last] = v.clone();
                    continue;
                }
                if outgoing < incoming {
                    return Err(PolygonError::InvalidBasicGraph("graph not convex".into()));
                }
            }
            merged.push(v.clone());
        }
        // Slope-complement symmetry: the vertex (x, y) mirrors to
        // (2 - x, y + 1 - x), so segment slopes pair up as s <-> 1 - s.
        let n = merged.len();
        for i in 0..n {
            let (x, y) = &merged[i];
            let (mx, my) = &merged[n - 1 - i];
            if x + mx != two || my != &(y + BigRational::one() - x) {
                return Err(PolygonError::InvalidBasicGraph(format!(
                    "graph not symmetric at vertex ({x}, {y})"
                )));
            }
        }
        Ok(BasicGraph::PiecewiseLinear(merged))
    }

    pub fn is_piecewise_linear(&self) -> bool {
        matches!(self, BasicGraph::PiecewiseLinear(_))
    }

    pub fn evaluate(&self, x: &BigRational) -> Result<BigRational, PolygonError> {
        let two = rat(2);
        if x.is_negative() || *x > two {
            return Err(PolygonError::DomainError {
                x: x.clone(),
                high: two,
            });
        }
        match self {
            BasicGraph::Parabola => Ok(x * x / rat(4)),
            BasicGraph::PiecewiseLinear(verts) => {
                for w in verts.windows(2) {
                    if *x <= w[1].0 {
                        let slope = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
                        return Ok(&w[0].1 + (x - &w[0].0) * slope);
                    }
                }
                unreachable!("domain was checked; last vertex is at x = 2")
            }
        }
    }

    fn vertex_xs(&self) -> Vec<BigRational> {
        match self {
            BasicGraph::Parabola => vec![BigRational::zero(), rat(2)],
            BasicGraph::PiecewiseLinear(v) => v.iter().map(|(x, _)| x.clone()).collect(),
        }
    }

    /// Exact minimum of `self - reference` over `[0, 2]`.
    ///
    /// When `self` is piecewise linear this is attained at a vertex of
    /// `self` or of `reference`: on each linear segment the difference is
    /// linear (reference piecewise linear) or concave (reference the
    /// parabola), so per-segment minima sit at segment endpoints. When
    /// `self` is the parabola and `reference` is piecewise linear the
    /// difference is convex per segment and the interior minimum of
    /// `x^2/4 - (ax + b)` at `x = 2a` must be checked as well.
    pub fn min_gap(&self, reference: &BasicGraph) -> BigRational {
        match (self, reference) {
            (BasicGraph::Parabola, BasicGraph::Parabola) => BigRational::zero(),
            (BasicGraph::PiecewiseLinear(_), _) => {
                let mut xs = self.vertex_xs();
                xs.extend(reference.vertex_xs());
                xs.sort();
                xs.dedup();
                xs.iter()
                    .map(|x| self.evaluate(x).unwrap() - reference.evaluate(x).unwrap())
                    .min()
                    .expect("vertex list is nonempty")
            }
            (BasicGraph::Parabola, BasicGraph::PiecewiseLinear(verts)) => {
                let mut best: Option<BigRational> = None;
                let mut consider = |x: &BigRational| {
                    let gap = self.evaluate(x).unwrap() - reference.evaluate(x).unwrap();
                    if best.as_ref().is_none_or(|b| gap < *b) {
                        best = Some(gap);
                    }
                };
                for w in verts.windows(2) {
                    let slope = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
                    consider(&w[0].0);
                    consider(&w[1].0);
                    let xstar = rat(2) * slope;
                    if xstar > w[0].0 && xstar < w[1].0 {
                        consider(&xstar);
                    }
                }
                best.expect("graphs have at least one segment")
            }
        }
    }

    /// Whether `self >= reference` everywhere on `[0, 2]`.
    pub fn lies_above(&self, reference: &BasicGraph) -> bool {
        !self.min_gap(reference).is_negative()
    }
}
