//! Arithmetic in F_p for odd word-size primes.  Every prime used by the
//! pipeline is small (p < 2^31 by policy), so plain u64 arithmetic with u128
//! products is enough.

use num_bigint::BigUint;
use rand::Rng;

use crate::{Error, Result};

/// A ring with exact division, driven through a context value.  Elements are
/// plain data; all arithmetic goes through the context.
pub trait Ring {
    type E: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Quotient a/b when b exactly divides a; panics otherwise.  Subresultant
    /// sequences rely on these divisions being exact.
    fn exact_div(&self, a: &Self::E, b: &Self::E) -> Self::E;
}

/// A field: every nonzero element invertible.
pub trait Field: Ring {
    fn inv(&self, a: &Self::E) -> Self::E;
}

/// Finite field extras needed by polynomial factorization.
pub trait FiniteField: Field {
    /// Number of elements.
    fn order(&self) -> BigUint;
    fn characteristic(&self) -> u64;
    fn random_elem<R: Rng>(&self, rng: &mut R) -> Self::E;
    /// Canonical comparison key; lexicographic order on the key is the fixed
    /// element ordering used wherever a deterministic choice is needed.
    fn elem_key(&self, a: &Self::E) -> Vec<u64>;
    fn from_u64(&self, n: u64) -> Self::E;
    /// x^(p) in this field (the Frobenius of the prime field acts trivially;
    /// this is the q = p case of frobenius powers and is overridden for
    /// extensions).
    fn frobenius(&self, a: &Self::E) -> Self::E;
}

/// Context for F_p, p an odd prime below 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::Precondition("even characteristic unsupported".into()));
        }
        if p < 3 || p >= (1 << 31) || !crate::arith::is_prime_u64(p) {
            return Err(Error::Precondition(format!("{} is not an odd prime below 2^31", p)));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn reduce_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }

    pub fn reduce_bigint(&self, n: &num_bigint::BigInt) -> u64 {
        use num_integer::Integer;
        use num_traits::ToPrimitive;
        n.mod_floor(&num_bigint::BigInt::from(self.p)).to_u64().unwrap()
    }

    #[inline]
    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &a);
            }
            a = self.mul(&a, &a);
            e >>= 1;
        }
        acc
    }

    /// Legendre symbol: 1, p-1 (= -1), or 0.
    pub fn legendre(&self, a: u64) -> u64 {
        self.pow(a, (self.p - 1) / 2)
    }

    pub fn is_square(&self, a: u64) -> bool {
        a % self.p == 0 || self.legendre(a) == 1
    }

    /// Tonelli-Shanks square root; None for non-residues.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 {
            return Some(0);
        }
        if self.legendre(a) != 1 {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow(a, (p + 1) / 4));
        }
        // Write p-1 = q * 2^s with q odd.
        let mut q = p - 1;
        let mut s = 0;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        // Find a non-residue deterministically.
        let mut z = 2;
        while self.legendre(z) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(&tt, &tt);
                i += 1;
            }
            let b = self.pow(c, 1 << (m - i - 1));
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }
}

impl Ring for PrimeField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn exact_div(&self, a: &u64, b: &u64) -> u64 {
        self.mul(a, &self.inv(b))
    }
}

impl Field for PrimeField {
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a % self.p != 0, "division by zero in F_{}", self.p);
        self.pow(*a, self.p - 2)
    }
}

impl FiniteField for PrimeField {
    fn order(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn random_elem<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn elem_key(&self, a: &u64) -> Vec<u64> {
        vec![*a]
    }
    fn from_u64(&self, n: u64) -> u64 {
        n % self.p
    }
    fn frobenius(&self, a: &u64) -> u64 {
        *a
    }
}

/// The field of rationals, as a `Ring`/`Field` context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QField;

impl Ring for QField {
    type E = num_rational::BigRational;

    fn zero(&self) -> Self::E {
        num_traits::Zero::zero()
    }
    fn one(&self) -> Self::E {
        num_traits::One::one()
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        num_traits::Zero::is_zero(a)
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a + b
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a - b
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        -a
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a * b
    }
    fn exact_div(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a / b
    }
}

impl Field for QField {
    fn inv(&self, a: &Self::E) -> Self::E {
        use num_traits::One;
        num_rational::BigRational::one() / a
    }
}

/// The ring of arbitrary-precision integers, as a `Ring` context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BigIntRing;

impl Ring for BigIntRing {
    type E = num_bigint::BigInt;

    fn zero(&self) -> Self::E {
        num_traits::Zero::zero()
    }
    fn one(&self) -> Self::E {
        num_traits::One::one()
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        num_traits::Zero::is_zero(a)
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a + b
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a - b
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        -a
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        a * b
    }
    fn exact_div(&self, a: &Self::E, b: &Self::E) -> Self::E {
        use num_integer::Integer;
        let (q, r) = a.div_rem(b);
        assert!(num_traits::Zero::is_zero(&r), "inexact division in Z");
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_two_and_composites() {
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(3).is_ok());
    }

    #[test]
    fn field_ops() {
        let f = PrimeField::new(101).unwrap();
        for a in 1..101 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.pow(2, 100), 1); // Fermat
    }

    #[test]
    fn sqrt_all_squares() {
        for p in [5u64, 13, 17, 97, 101] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..p {
                let sq = f.mul(&a, &a);
                let r = f.sqrt(sq).expect("square must have a root");
                assert_eq!(f.mul(&r, &r), sq);
            }
        }
    }
}
