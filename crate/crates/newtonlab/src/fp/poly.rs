//! Dense univariate polynomials over `F_p` with full factorization
//! (squarefree decomposition, distinct-degree, and deterministic
//! equal-degree splitting).

use super::{mod_add, mod_inv, mod_mul, mod_sub, FpError};
use std::cmp::Ordering;
use std::fmt;

/// Coefficients ascending by degree, normalized to omit trailing zeros;
/// every entry reduced mod `p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in &mut coeffs {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    /// `c * x^k`.
    pub fn monomial(p: u64, c: u64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(p, coeffs)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = mod_add(mod_mul(acc, x, self.p), c, self.p);
        }
        acc
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| mod_add(self.coeff(i), other.coeff(i), self.p))
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| mod_sub(self.coeff(i), other.coeff(i), self.p))
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    pub fn neg(&self) -> FpPoly {
        FpPoly::zero(self.p).sub(self)
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] += a as u128 * b as u128;
            }
        }
        FpPoly::new(
            self.p,
            acc.into_iter().map(|c| (c % self.p as u128) as u64).collect(),
        )
    }

    pub fn mul_scalar(&self, c: u64) -> FpPoly {
        FpPoly::new(
            self.p,
            self.coeffs.iter().map(|&a| mod_mul(a, c, self.p)).collect(),
        )
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &FpPoly) -> Result<(FpPoly, FpPoly), FpError> {
        debug_assert_eq!(self.p, divisor.p);
        let d = divisor.degree().ok_or(FpError::DivisionByZero)?;
        let p = self.p;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((FpPoly::zero(p), self.clone()));
        }
        let lead_inv = mod_inv(divisor.leading_coeff(), p);
        let mut quot = vec![0u64; rem.len() - d];
        for k in (d..rem.len()).rev() {
            let c = mod_mul(rem[k], lead_inv, p);
            if c != 0 {
                quot[k - d] = c;
                for (i, &dc) in divisor.coeffs.iter().enumerate() {
                    rem[k - d + i] = mod_sub(rem[k - d + i], mod_mul(c, dc, p), p);
                }
            }
        }
        Ok((FpPoly::new(p, quot), FpPoly::new(p, rem)))
    }

    pub fn rem(&self, divisor: &FpPoly) -> Result<FpPoly, FpError> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> FpPoly {
        match self.leading_coeff() {
            0 | 1 => self.clone(),
            lc => self.mul_scalar(mod_inv(lc, self.p)),
        }
    }

    pub fn derivative(&self) -> FpPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mod_mul(i as u64 % self.p, c, self.p))
            .collect();
        FpPoly::new(self.p, coeffs)
    }

    /// `self^exp mod modulus`.
    pub fn pow_mod(&self, mut exp: u128, modulus: &FpPoly) -> Result<FpPoly, FpError> {
        let mut base = self.rem(modulus)?;
        let mut acc = FpPoly::one(self.p).rem(modulus)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            base = base.mul(&base).rem(modulus)?;
            exp >>= 1;
        }
        Ok(acc)
    }

    pub fn pow(&self, mut exp: u32) -> FpPoly {
        let mut base = self.clone();
        let mut acc = FpPoly::one(self.p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// For `f` with `f' = 0`, i.e. `f = h(x^p)`: the unique `h` with
    /// `h^p = f` (prime-field coefficients are their own p-th roots).
    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        let coeffs = self.coeffs.iter().copied().step_by(p).collect();
        FpPoly::new(self.p, coeffs)
    }

    /// Multiplicity of the monic irreducible `q` in `self`.
    pub fn multiplicity_of(&self, q: &FpPoly) -> u64 {
        assert!(!self.is_zero() && !q.is_constant());
        let mut f = self.clone();
        let mut m = 0;
        loop {
            let (quot, rem) = f.divrem(q).expect("q nonzero");
            if !rem.is_zero() {
                return m;
            }
            m += 1;
            f = quot;
        }
    }

    /// Test irreducibility of a monic polynomial of degree >= 1.
    pub fn is_irreducible(&self) -> bool {
        let e = match self.degree() {
            None | Some(0) => return false,
            Some(e) => e,
        };
        if e == 1 {
            return true;
        }
        let p = self.p;
        let x = FpPoly::x(p);
        // x^(p^e) == x mod f, and gcd(x^(p^(e/q)) - x, f) = 1 for primes q | e.
        let q_pow = |k: usize| -> u128 { (p as u128).pow(k as u32) };
        let frob_e = x.pow_mod(q_pow(e), self).expect("modulus nonzero");
        if frob_e != x.rem(self).unwrap() {
            return false;
        }
        let mut m = e;
        let mut prime_divisors = Vec::new();
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                prime_divisors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            prime_divisors.push(m);
        }
        for q in prime_divisors {
            let frob = x.pow_mod(q_pow(e / q), self).expect("modulus nonzero");
            if frob.sub(&x).gcd(self).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Full factorization of a nonzero polynomial into monic irreducibles
    /// with multiplicities, sorted by (degree, coefficient sequence); the
    /// leading coefficient is discarded. Deterministic.
    pub fn factor(&self) -> Vec<(FpPoly, u64)> {
        assert!(!self.is_zero(), "cannot factor the zero polynomial");
        let mut out: Vec<(FpPoly, u64)> = Vec::new();
        for (sqfree, mult) in self.monic().squarefree_decomposition() {
            for (product, deg) in sqfree.distinct_degree_factors() {
                let mut stack = vec![product];
                while let Some(u) = stack.pop() {
                    if u.degree() == Some(deg) {
                        out.push((u, mult));
                    } else {
                        let (a, b) = u.equal_degree_split(deg);
                        stack.push(a);
                        stack.push(b);
                    }
                }
            }
        }
        out.sort_by(|a, b| cmp_poly(&a.0, &b.0));
        out
    }

    /// Squarefree decomposition in characteristic p: pairs of coprime monic
    /// squarefree polynomials with their multiplicities.
    fn squarefree_decomposition(&self) -> Vec<(FpPoly, u64)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let deriv = self.derivative();
        if deriv.is_zero() {
            // f = v^p exactly.
            for (fac, m) in self.pth_root().squarefree_decomposition() {
                out.push((fac, m * self.p));
            }
            return out;
        }
        let mut c = self.gcd(&deriv);
        let mut w = self.divrem(&c).expect("gcd divides").0;
        let mut i = 1u64;
        while !w.is_one() {
            let y = w.gcd(&c);
            let fac = w.divrem(&y).expect("gcd divides").0;
            if !fac.is_one() {
                out.push((fac, i));
            }
            w = y;
            c = c.divrem(&w).expect("gcd divides").0;
            i += 1;
        }
        if !c.is_one() {
            for (fac, m) in c.pth_root().squarefree_decomposition() {
                out.push((fac, m * self.p));
            }
        }
        out
    }

    /// Split a monic squarefree polynomial into products of irreducibles of
    /// equal degree: returns `(product, degree)` pairs.
    fn distinct_degree_factors(&self) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        let p = self.p;
        let mut f = self.clone();
        let x = FpPoly::x(p);
        let mut h = x.rem(&f).expect("f nonconstant");
        let mut k = 0usize;
        while f.degree().unwrap_or(0) >= 2 * (k + 1) {
            k += 1;
            h = h.pow_mod(p as u128, &f).expect("f nonzero");
            let g = h.sub(&x).gcd(&f);
            if !g.is_one() {
                out.push((g.clone(), k));
                f = f.divrem(&g).expect("g divides").0;
                h = h.rem(&f).expect("f nonzero");
            }
        }
        if let Some(d) = f.degree() {
            if d > 0 {
                out.push((f, d));
            }
        }
        out
    }

    /// Cantor-Zassenhaus splitting of a product of >= 2 distinct monic
    /// irreducibles of degree `deg`, using a deterministic sweep of trial
    /// elements so repeated runs factor identically.
    fn equal_degree_split(&self, deg: usize) -> (FpPoly, FpPoly) {
        let p = self.p;
        let exponent = ((p as u128).pow(deg as u32) - 1) / 2;
        // Enumerate r = nonconstant polynomials in counter order; a constant
        // can never separate the factors.
        for counter in (p as u128..).take(200_000) {
            let mut digits = Vec::new();
            let mut n = counter;
            while n > 0 {
                digits.push((n % p as u128) as u64);
                n /= p as u128;
            }
            let r = FpPoly::new(p, digits);
            let s = r.pow_mod(exponent, self).expect("self nonzero");
            let g = s.sub(&FpPoly::one(p)).gcd(self);
            if let Some(d) = g.degree() {
                if d > 0 && d < self.degree().unwrap() {
                    let cofactor = self.divrem(&g).expect("g divides").0;
                    return (g, cofactor);
                }
            }
        }
        unreachable!("equal-degree splitting did not terminate");
    }
}

/// Deterministic ordering: by degree, then coefficient sequence from the
/// constant term up.
pub(crate) fn cmp_poly(a: &FpPoly, b: &FpPoly) -> Ordering {
    a.coeffs
        .len()
        .cmp(&b.coeffs.len())
        .then_with(|| a.coeffs.cmp(&b.coeffs))
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly(mod {}: {})", self.p, self)
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (k, 1) => write!(f, "x^{k}")?,
                (k, c) => write!(f, "{c}*x^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3(coeffs: &[u64]) -> FpPoly {
        FpPoly::new(3, coeffs.to_vec())
    }

    #[test]
    fn divrem_round_trip() {
        let a = p3(&[1, 0, 2, 0, 1]); // x^4 + 2x^2 + 1
        let b = p3(&[2, 1]); // x + 2
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree());
    }

    #[test]
    fn gcd_of_common_factor() {
        let common = p3(&[1, 1]); // x + 1
        let a = common.mul(&p3(&[1, 0, 1])); // (x+1)(x^2+1)
        let b = common.mul(&p3(&[0, 2])); // (x+1)*2x
        assert_eq!(a.gcd(&b), common);
    }

    #[test]
    fn irreducibility_over_f3() {
        assert!(p3(&[1, 0, 1]).is_irreducible()); // x^2 + 1
        assert!(!p3(&[2, 0, 1]).is_irreducible()); // x^2 + 2 = (x-1)(x+1)
        assert!(p3(&[0, 1]).is_irreducible()); // x
        assert!(!p3(&[1]).is_irreducible());
    }

    #[test]
    fn factor_mixed_multiplicities() {
        // x^2 * (x+1)^3 * (x^2+1) over F_3
        let f = FpPoly::monomial(3, 1, 2)
            .mul(&p3(&[1, 1]).pow(3))
            .mul(&p3(&[1, 0, 1]));
        let factors = f.factor();
        assert_eq!(
            factors,
            vec![
                (p3(&[0, 1]), 2),
                (p3(&[1, 1]), 3),
                (p3(&[1, 0, 1]), 1),
            ]
        );
    }

    #[test]
    fn factor_pth_power() {
        // (x+2)^3 has zero derivative over F_3.
        let f = p3(&[2, 1]).pow(3);
        assert_eq!(f.factor(), vec![(p3(&[2, 1]), 3)]);
    }

    #[test]
    fn factor_splits_equal_degree_products() {
        // (x^2+1)(x^2+x+2) both irreducible over F_3.
        let a = p3(&[1, 0, 1]);
        let b = p3(&[2, 1, 1]);
        assert!(a.is_irreducible() && b.is_irreducible());
        let factors = a.mul(&b).factor();
        assert_eq!(factors, vec![(a, 1), (b, 1)]);
    }

    #[test]
    fn factor_large_prime_field() {
        let p = 11;
        let f = FpPoly::new(p, vec![3, 1]).mul(&FpPoly::new(p, vec![7, 1]).pow(2));
        let factors = f.mul_scalar(5).factor();
        assert_eq!(
            factors,
            vec![(FpPoly::new(p, vec![3, 1]), 1), (FpPoly::new(p, vec![7, 1]), 2)]
        );
    }

    #[test]
    fn display_round_trips_shape() {
        assert_eq!(p3(&[1, 0, 2, 1]).to_string(), "x^3 + 2*x^2 + 1");
        assert_eq!(FpPoly::zero(3).to_string(), "0");
        assert_eq!(p3(&[0, 1]).to_string(), "x");
    }
}
