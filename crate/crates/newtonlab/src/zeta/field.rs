//! Extension-field arithmetic for the point-counting kernel: `F_{p^e}` as
//! coefficient vectors modulo a deterministic irreducible, with a
//! precomputed trace form so the absolute trace costs `e` multiply-adds.

use crate::fp::FpPoly;
use crate::zeta::ZetaError;

/// Hard cap on the extension degree; the practical limit is enumeration
/// cost, not representation.
pub const MAX_EXT_DEGREE: usize = 16;

/// One element of `F_{p^e}`: coefficients of `1, x, ..., x^(e-1)` against
/// the field's modulus, entries reduced mod p, unused entries zero.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FqElem {
    c: [u64; MAX_EXT_DEGREE],
}

impl FqElem {
    pub fn coeff(&self, i: usize) -> u64 {
        self.c[i]
    }
}

/// `F_{p^e}` with the lexicographically least irreducible monic modulus
/// (non-leading coefficients read as a base-p integer, most significant
/// digit on the highest power).
pub struct FieldTower {
    pub p: u64,
    pub e: usize,
    modulus: Vec<u64>,
    /// `(p - c_i) mod p` for the non-leading modulus coefficients:
    /// `x^e = sum_i modulus_neg[i] x^i`.
    modulus_neg: Vec<u64>,
    /// `Tr(x^i)` for `i < e`: power sums of the modulus roots.
    trace_form: Vec<u64>,
}

pub fn build_field(p: u64, e: usize) -> Result<FieldTower, ZetaError> {
    if !crate::fp::is_odd_prime(p) {
        return Err(ZetaError::NotOddPrime(p));
    }
    if e == 0 || e > MAX_EXT_DEGREE {
        return Err(ZetaError::DegreeTooLarge { e, max: MAX_EXT_DEGREE });
    }
    let modulus = least_irreducible(p, e);
    let modulus_neg: Vec<u64> = modulus[..e].iter().map(|&c| (p - c) % p).collect();
    let trace_form = power_sums_of_roots(p, &modulus);
    Ok(FieldTower {
        p,
        e,
        modulus,
        modulus_neg,
        trace_form,
    })
}

/// Smallest monic irreducible of degree e over F_p in counter order: try
/// `x^e + tail` with the tail digits of n base p, n = 0, 1, 2, ...
fn least_irreducible(p: u64, e: usize) -> Vec<u64> {
    let mut n: u64 = 0;
    loop {
        let mut coeffs = vec![0u64; e + 1];
        coeffs[e] = 1;
        let mut v = n;
        for c in coeffs.iter_mut().take(e) {
            *c = v % p;
            v /= p;
        }
        assert_eq!(v, 0, "ran out of monic polynomials before an irreducible");
        let candidate = FpPoly::new(p, coeffs.clone());
        if candidate.is_irreducible() {
            return coeffs;
        }
        n += 1;
    }
}

/// `Tr(x^i)` = power sums of the modulus roots, via Newton's identities on
/// the modulus coefficients, all mod p.
fn power_sums_of_roots(p: u64, modulus: &[u64]) -> Vec<u64> {
    let e = modulus.len() - 1;
    // modulus = x^e + a_(e-1) x^(e-1) + ... + a_0; elementary symmetric
    // functions of the roots are es_k = (-1)^k a_(e-k).
    let es: Vec<u64> = (1..=e)
        .map(|k| {
            let a = modulus[e - k] % p;
            if k % 2 == 0 {
                a
            } else {
                (p - a) % p
            }
        })
        .collect();
    let mut sums = vec![0u64; e];
    sums[0] = e as u64 % p; // Tr(1) = e
    for k in 1..e {
        // s_k = sum_{j=1..k-1} (-1)^(j-1) es_j s_(k-j) + (-1)^(k-1) k es_k
        let mut acc: i128 = 0;
        for j in 1..k {
            let term = (es[j - 1] as i128) * (sums[k - j] as i128);
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let last = (k as i128 % p as i128) * es[k - 1] as i128;
        if k % 2 == 1 {
            acc += last;
        } else {
            acc -= last;
        }
        sums[k] = acc.rem_euclid(p as i128) as u64;
    }
    sums
}

impl FieldTower {
    pub fn zero(&self) -> FqElem {
        FqElem {
            c: [0; MAX_EXT_DEGREE],
        }
    }

    pub fn one(&self) -> FqElem {
        self.from_base(1)
    }

    pub fn from_base(&self, v: u64) -> FqElem {
        let mut out = self.zero();
        out.c[0] = v % self.p;
        out
    }

    /// The n-th element in enumeration order: base-p digits of `n`.
    pub fn element_from_index(&self, mut n: u64) -> FqElem {
        let mut out = self.zero();
        for i in 0..self.e {
            out.c[i] = n % self.p;
            n /= self.p;
        }
        debug_assert_eq!(n, 0);
        out
    }

    pub fn order(&self) -> Option<u64> {
        self.p.checked_pow(self.e as u32)
    }

    pub fn is_zero(&self, a: &FqElem) -> bool {
        a.c[..self.e].iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut out = self.zero();
        for i in 0..self.e {
            let s = a.c[i] + b.c[i];
            out.c[i] = if s >= self.p { s - self.p } else { s };
        }
        out
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let mut out = self.zero();
        for i in 0..self.e {
            out.c[i] = if a.c[i] >= b.c[i] {
                a.c[i] - b.c[i]
            } else {
                a.c[i] + self.p - b.c[i]
            };
        }
        out
    }

    pub fn add_base(&self, a: &FqElem, v: u64) -> FqElem {
        let mut out = *a;
        let s = out.c[0] + v % self.p;
        out.c[0] = if s >= self.p { s - self.p } else { s };
        out
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let e = self.e;
        let p = self.p as u128;
        let mut prod = [0u128; 2 * MAX_EXT_DEGREE - 1];
        for i in 0..e {
            if a.c[i] == 0 {
                continue;
            }
            let ai = a.c[i] as u128;
            for j in 0..e {
                prod[i + j] += ai * b.c[j] as u128;
            }
        }
        // Fold x^k for k >= e down via x^e = modulus_neg.
        for k in (e..2 * e - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus_neg.iter().enumerate() {
                if m != 0 {
                    prod[k - e + i] += c * m as u128;
                }
            }
        }
        let mut out = self.zero();
        for (o, acc) in out.c.iter_mut().zip(&prod[..e]) {
            *o = (acc % p) as u64;
        }
        out
    }

    pub fn pow(&self, a: &FqElem, mut exp: u128) -> FqElem {
        let mut base = *a;
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn frobenius(&self, a: &FqElem) -> FqElem {
        self.pow(a, self.p as u128)
    }

    /// Inverse via extended Euclid on the coefficient polynomials.
    pub fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if self.is_zero(a) {
            return None;
        }
        let p = self.p;
        let a_poly = FpPoly::new(p, a.c[..self.e].to_vec());
        let modulus = FpPoly::new(p, self.modulus.clone());
        // Invariant: r0 = t0 * a (mod modulus), r1 = t1 * a (mod modulus).
        let (mut r0, mut r1) = (modulus, a_poly);
        let (mut t0, mut t1) = (FpPoly::zero(p), FpPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("r1 nonzero");
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = t;
        }
        debug_assert_eq!(r0.degree(), Some(0), "modulus is irreducible");
        let scale = crate::fp::mod_inv(r0.leading_coeff(), p);
        let inv_poly = t0.mul_scalar(scale);
        let mut out = self.zero();
        for (i, &c) in inv_poly.coeffs().iter().enumerate() {
            out.c[i] = c;
        }
        Some(out)
    }

    /// Absolute trace to `F_p`, linear in the coefficients.
    pub fn trace(&self, a: &FqElem) -> u64 {
        let mut acc: u128 = 0;
        for i in 0..self.e {
            acc += a.c[i] as u128 * self.trace_form[i] as u128;
        }
        (acc % self.p as u128) as u64
    }

    pub fn modulus_poly(&self) -> FpPoly {
        FpPoly::new(self.p, self.modulus.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_trace_is_identity() {
        let f = build_field(3, 1).unwrap();
        assert_eq!(f.modulus_poly(), FpPoly::x(3));
        for v in 0..3 {
            assert_eq!(f.trace(&f.from_base(v)), v);
        }
    }

    #[test]
    fn degree_two_modulus_over_f3() {
        let f = build_field(3, 2).unwrap();
        assert_eq!(f.modulus_poly(), FpPoly::new(3, vec![1, 0, 1])); // x^2 + 1
        assert_eq!(f.order(), Some(9));
    }

    #[test]
    fn field_axioms_spot_check() {
        let f = build_field(3, 4).unwrap();
        let q = f.order().unwrap() as u128;
        for idx in 0..f.order().unwrap() {
            let a = f.element_from_index(idx);
            // x^(p^e) = x for every element.
            assert_eq!(f.pow(&a, q), a);
            if !f.is_zero(&a) {
                let inv = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &inv), f.one());
            }
        }
    }

    #[test]
    fn trace_matches_frobenius_sum_and_is_balanced() {
        for (p, e) in [(3u64, 3usize), (5, 2), (3, 5)] {
            let f = build_field(p, e).unwrap();
            let mut zero_count = 0u64;
            for idx in 0..f.order().unwrap() {
                let a = f.element_from_index(idx);
                let mut frob_sum = f.zero();
                let mut power = a;
                for _ in 0..e {
                    frob_sum = f.add(&frob_sum, &power);
                    power = f.frobenius(&power);
                }
                // The sum of Frobenius conjugates lands in the prime field.
                assert!(frob_sum.c[1..e].iter().all(|&c| c == 0));
                assert_eq!(f.trace(&a), frob_sum.c[0], "p={p} e={e}");
                if f.trace(&a) == 0 {
                    zero_count += 1;
                }
            }
            // The trace is onto F_p with balanced fibers of size p^(e-1).
            assert_eq!(zero_count, f.order().unwrap() / p);
        }
    }

    #[test]
    fn rejects_oversized_degree_and_bad_prime() {
        assert!(matches!(
            build_field(3, 17),
            Err(ZetaError::DegreeTooLarge { .. })
        ));
        assert!(matches!(build_field(9, 2), Err(ZetaError::NotOddPrime(9))));
    }
}
