//! Rational functions over `F_p` kept in lowest terms with monic denominator.

use super::poly::FpPoly;
use super::FpError;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: FpPoly,
    den: FpPoly,
}

impl RatFunc {
    pub fn new(num: FpPoly, den: FpPoly) -> Result<Self, FpError> {
        if den.is_zero() {
            return Err(FpError::DivisionByZero);
        }
        let g = num.gcd(&den);
        let num = num.divrem(&g)?.0;
        let den = den.divrem(&g)?.0;
        let lc = den.leading_coeff();
        let den = den.monic();
        let num = if lc == 1 {
            num
        } else {
            num.mul_scalar(super::mod_inv(lc, num.prime()))
        };
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: FpPoly) -> Self {
        let den = FpPoly::one(p.prime());
        RatFunc { num: p, den }
    }

    pub fn zero(p: u64) -> Self {
        Self::from_poly(FpPoly::zero(p))
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::from_poly(FpPoly::constant(p, c))
    }

    pub fn x(p: u64) -> Self {
        Self::from_poly(FpPoly::x(p))
    }

    pub fn prime(&self) -> u64 {
        self.num.prime()
    }

    pub fn num(&self) -> &FpPoly {
        &self.num
    }

    pub fn den(&self) -> &FpPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RatFunc::new(num, self.den.mul(&other.den)).expect("denominator nonzero")
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("denominator nonzero")
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, FpError> {
        if other.is_zero() {
            return Err(FpError::DivisionByZero);
        }
        RatFunc::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow(&self, exp: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }

    /// Split into polynomial part plus a proper fraction
    /// (`deg num < deg den`).
    pub fn split_polynomial_part(&self) -> (FpPoly, RatFunc) {
        let (q, r) = self.num.divrem(&self.den).expect("denominator nonzero");
        (
            q,
            RatFunc {
                num: r,
                den: self.den.clone(),
            },
        )
    }

    /// Pole order at infinity: `deg num - deg den` when positive.
    pub fn pole_order_at_infinity(&self) -> u64 {
        match (self.num.degree(), self.den.degree()) {
            (Some(n), Some(d)) if n > d => (n - d) as u64,
            _ => 0,
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc(mod {}: {})", self.prime(), self)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        // (x^2 - 1)/(x - 1) = x + 1 over F_3.
        let num = FpPoly::new(3, vec![2, 0, 1]);
        let den = FpPoly::new(3, vec![2, 1]);
        let f = RatFunc::new(num, den).unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.num(), &FpPoly::new(3, vec![1, 1]));
    }

    #[test]
    fn monic_denominator_normalization() {
        // 1/(2x) = 2/x over F_3.
        let f = RatFunc::new(FpPoly::one(3), FpPoly::new(3, vec![0, 2])).unwrap();
        assert_eq!(f.den(), &FpPoly::x(3));
        assert_eq!(f.num(), &FpPoly::constant(3, 2));
    }

    #[test]
    fn arithmetic_and_poly_part() {
        let p = 3;
        let x = RatFunc::x(p);
        // f = x^2 + 1/x
        let f = x.pow(2).add(&RatFunc::constant(p, 1).div(&x).unwrap());
        assert_eq!(f.to_string(), "(x^3 + 1)/(x)");
        let (poly, proper) = f.split_polynomial_part();
        assert_eq!(poly, FpPoly::new(p, vec![0, 0, 1]));
        assert_eq!(proper.to_string(), "(1)/(x)");
        assert_eq!(f.pole_order_at_infinity(), 2);
    }
}
