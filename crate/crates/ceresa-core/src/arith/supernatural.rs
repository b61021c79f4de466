use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

use crate::{Error, Result};

use super::FactoredInteger;

/// Exponent of a prime inside a supernatural number: finite or infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnExponent {
    Finite(u32),
    Infinity,
}

impl SnExponent {
    fn min(self, other: SnExponent) -> SnExponent {
        match (self, other) {
            (SnExponent::Infinity, e) | (e, SnExponent::Infinity) => e,
            (SnExponent::Finite(a), SnExponent::Finite(b)) => SnExponent::Finite(a.min(b)),
        }
    }

    fn le(self, other: SnExponent) -> bool {
        match (self, other) {
            (_, SnExponent::Infinity) => true,
            (SnExponent::Infinity, SnExponent::Finite(_)) => false,
            (SnExponent::Finite(a), SnExponent::Finite(b)) => a <= b,
        }
    }
}

impl fmt::Display for SnExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SnExponent::Finite(e) => write!(f, "{}", e),
            SnExponent::Infinity => write!(f, "inf"),
        }
    }
}

/// A formal product of prime powers with exponents in {1, 2, ...} or inf;
/// the empty map is 1.  Carrier of the p-infinity-padded gcd/lcm bookkeeping
/// when combining per-prime bounds.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SupernaturalNumber {
    exponents: BTreeMap<BigUint, SnExponent>,
}

impl SupernaturalNumber {
    pub fn one() -> Self {
        SupernaturalNumber::default()
    }

    pub fn from_factored(f: &FactoredInteger) -> Self {
        let mut exponents = BTreeMap::new();
        for (p, e) in &f.exponents {
            if *e > 0 {
                exponents.insert(p.clone(), SnExponent::Finite(*e));
            }
        }
        SupernaturalNumber { exponents }
    }

    /// Build from explicit entries; zero exponents are dropped.
    pub fn from_entries(entries: impl IntoIterator<Item = (u64, SnExponent)>) -> Self {
        let mut exponents = BTreeMap::new();
        for (p, e) in entries {
            if e != SnExponent::Finite(0) {
                exponents.insert(BigUint::from(p), e);
            }
        }
        SupernaturalNumber { exponents }
    }

    /// Multiply in `p^inf`.
    pub fn with_prime_infinity(mut self, p: &BigUint) -> Self {
        self.exponents.insert(p.clone(), SnExponent::Infinity);
        self
    }

    pub fn exponent_of(&self, p: &BigUint) -> SnExponent {
        self.exponents.get(p).copied().unwrap_or(SnExponent::Finite(0))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&BigUint, SnExponent)> {
        self.exponents.iter().map(|(p, e)| (p, *e))
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn has_infinity(&self) -> bool {
        self.exponents.values().any(|e| *e == SnExponent::Infinity)
    }

    /// The finite integer this supernatural number denotes; None if any
    /// exponent is infinite.
    pub fn to_integer(&self) -> Option<BigUint> {
        let mut v = BigUint::from(1u32);
        for (p, e) in &self.exponents {
            match e {
                SnExponent::Infinity => return None,
                SnExponent::Finite(e) => v *= p.pow(*e),
            }
        }
        Some(v)
    }

    pub fn to_display(&self) -> String {
        if self.exponents.is_empty() {
            return "1".to_string();
        }
        self.exponents
            .iter()
            .map(|(p, e)| match e {
                SnExponent::Finite(1) => p.to_string(),
                _ => format!("{}^{}", p, e),
            })
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

/// Per-prime minimum of exponents; min(inf, e) = e.
pub fn sn_gcd(values: &[SupernaturalNumber]) -> Result<SupernaturalNumber> {
    if values.is_empty() {
        return Err(Error::Precondition("sn_gcd: empty list".into()));
    }
    let mut acc = values[0].clone();
    for v in &values[1..] {
        let mut out = BTreeMap::new();
        for (p, e) in &acc.exponents {
            let m = e.min(v.exponent_of(p));
            if m != SnExponent::Finite(0) {
                out.insert(p.clone(), m);
            }
        }
        acc = SupernaturalNumber { exponents: out };
    }
    Ok(acc)
}

/// Per-prime maximum of exponents.  Infinite exponents are rejected: inputs
/// are p-stripped before entering the lcm side of the combination.
pub fn sn_lcm(values: &[SupernaturalNumber]) -> Result<SupernaturalNumber> {
    if values.is_empty() {
        return Err(Error::Precondition("sn_lcm: empty list".into()));
    }
    for v in values {
        if v.has_infinity() {
            return Err(Error::Precondition("sn_lcm: infinite exponent".into()));
        }
    }
    let mut out: BTreeMap<BigUint, SnExponent> = BTreeMap::new();
    for v in values {
        for (p, e) in &v.exponents {
            let slot = out.entry(p.clone()).or_insert(SnExponent::Finite(0));
            *slot = if e.le(*slot) { *slot } else { *e };
        }
    }
    out.retain(|_, e| *e != SnExponent::Finite(0));
    Ok(SupernaturalNumber { exponents: out })
}

/// True iff for every prime the exponent in `a` is at most the exponent in
/// `b` (with e <= inf always true).
pub fn sn_divides(a: &SupernaturalNumber, b: &SupernaturalNumber) -> bool {
    a.exponents.iter().all(|(p, e)| e.le(b.exponent_of(p)))
}

/// Remove every factor of `p`; all other exponents unchanged.
pub fn strip_prime(n: &FactoredInteger, p: u64) -> FactoredInteger {
    let pb = BigUint::from(p);
    let mut exponents = n.exponents.clone();
    exponents.remove(&pb);
    FactoredInteger { sign: n.sign, exponents }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factor_integer;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn sn(entries: &[(u64, SnExponent)]) -> SupernaturalNumber {
        SupernaturalNumber::from_entries(entries.iter().copied())
    }

    fn fin(e: u32) -> SnExponent {
        SnExponent::Finite(e)
    }

    #[test]
    fn gcd_infinity_absorbs() {
        // gcd(5^inf * 2^2 * 3, 11^inf * 2^2 * 3) = 2^2 * 3
        let a = sn(&[(5, SnExponent::Infinity), (2, fin(2)), (3, fin(1))]);
        let b = sn(&[(11, SnExponent::Infinity), (2, fin(2)), (3, fin(1))]);
        let g = sn_gcd(&[a, b]).unwrap();
        assert_eq!(g, sn(&[(2, fin(2)), (3, fin(1))]));
    }

    #[test]
    fn gcd_disjoint_supports() {
        let a = sn(&[(2, SnExponent::Infinity)]);
        let b = sn(&[(3, SnExponent::Infinity)]);
        assert!(sn_gcd(&[a, b]).unwrap().is_one());
    }

    #[test]
    fn gcd_entrywise_minima() {
        // gcd(2^inf * 3, 2^2 * 3^inf) = 2^2 * 3
        let a = sn(&[(2, SnExponent::Infinity), (3, fin(1))]);
        let b = sn(&[(2, fin(2)), (3, SnExponent::Infinity)]);
        assert_eq!(sn_gcd(&[a, b]).unwrap(), sn(&[(2, fin(2)), (3, fin(1))]));
    }

    #[test]
    fn gcd_rejects_empty() {
        assert!(sn_gcd(&[]).is_err());
    }

    #[test]
    fn lcm_examples() {
        // lcm(2^2*3, 2*3^2) = 2^2 * 3^2
        let a = sn(&[(2, fin(2)), (3, fin(1))]);
        let b = sn(&[(2, fin(1)), (3, fin(2))]);
        assert_eq!(sn_lcm(&[a, b]).unwrap(), sn(&[(2, fin(2)), (3, fin(2))]));
        // lcm(1,1) = 1
        assert!(sn_lcm(&[sn(&[]), sn(&[])]).unwrap().is_one());
        // lcm(23, 2^3) = 2^3 * 23
        let a = sn(&[(23, fin(1))]);
        let b = sn(&[(2, fin(3))]);
        assert_eq!(sn_lcm(&[a, b]).unwrap(), sn(&[(2, fin(3)), (23, fin(1))]));
    }

    #[test]
    fn lcm_rejects_infinity() {
        let a = sn(&[(2, SnExponent::Infinity)]);
        assert!(sn_lcm(&[a]).is_err());
    }

    #[test]
    fn divides_examples() {
        // 12 | 5^inf * 12
        let twelve = sn(&[(2, fin(2)), (3, fin(1))]);
        let b = sn(&[(5, SnExponent::Infinity), (2, fin(2)), (3, fin(1))]);
        assert!(sn_divides(&twelve, &b));
        // 23 does not divide 2^10 * 3^4 * 5^3
        let m = sn(&[(23, fin(1))]);
        let n = sn(&[(2, fin(10)), (3, fin(4)), (5, fin(3))]);
        assert!(!sn_divides(&m, &n));
        // 1 divides anything
        assert!(sn_divides(&sn(&[]), &n));
    }

    #[test]
    fn strip_prime_examples() {
        let n = factor_integer(&BigInt::from(40)).unwrap(); // 2^3 * 5
        let s = strip_prime(&n, 2);
        assert_eq!(s.value(), BigInt::from(5));
        let seven = factor_integer(&BigInt::from(7)).unwrap();
        assert_eq!(strip_prime(&seven, 2).value(), BigInt::from(7));
        let n = factor_integer(&BigInt::from(1 << 11)).unwrap();
        assert!(strip_prime(&n, 2).is_one());
    }

    #[test]
    fn strip_prime_reconstructs() {
        for n in [12i64, 90, 1024, 77, -360] {
            let f = factor_integer(&BigInt::from(n)).unwrap();
            for p in [2u64, 3, 5, 7] {
                let stripped = strip_prime(&f, p);
                let vp = f.exponent_of(&BigUint::from(p));
                let recon = stripped.value() * BigInt::from(BigUint::from(p).pow(vp));
                assert_eq!(recon, BigInt::from(n));
            }
        }
    }

    fn arb_sn() -> impl Strategy<Value = SupernaturalNumber> {
        prop::collection::vec((prop::sample::select(vec![2u64, 3, 5, 7, 11]), 0u32..5, any::<bool>()), 0..4)
            .prop_map(|entries| {
                SupernaturalNumber::from_entries(entries.into_iter().map(|(p, e, inf)| {
                    (p, if inf { SnExponent::Infinity } else { SnExponent::Finite(e) })
                }))
            })
    }

    proptest! {
        #[test]
        fn gcd_lcm_laws(a in arb_sn(), b in arb_sn()) {
            let g1 = sn_gcd(&[a.clone(), b.clone()]).unwrap();
            let g2 = sn_gcd(&[b.clone(), a.clone()]).unwrap();
            prop_assert_eq!(&g1, &g2);
            prop_assert_eq!(sn_gcd(&[a.clone(), a.clone()]).unwrap(), a.clone());
            prop_assert!(sn_divides(&g1, &a));
            prop_assert!(sn_divides(&g1, &b));
            if !a.has_infinity() && !b.has_infinity() {
                let l1 = sn_lcm(&[a.clone(), b.clone()]).unwrap();
                let l2 = sn_lcm(&[b.clone(), a.clone()]).unwrap();
                prop_assert_eq!(&l1, &l2);
                prop_assert!(sn_divides(&a, &l1));
                prop_assert!(sn_divides(&b, &l1));
            }
        }
    }
}
