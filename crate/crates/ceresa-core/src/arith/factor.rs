use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Trial division is pushed this far before Pollard rho takes over.
pub const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// A nonzero integer in fully factored form.
///
/// Reconstructing `sign * prod p^e` reproduces the source integer exactly;
/// every key is prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    pub sign: i8,
    pub exponents: BTreeMap<BigUint, u32>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger { sign: 1, exponents: BTreeMap::new() }
    }

    pub fn value(&self) -> BigInt {
        let mut v = BigUint::one();
        for (p, e) in &self.exponents {
            v *= p.pow(*e);
        }
        let v = BigInt::from(v);
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    pub fn abs_value(&self) -> BigUint {
        let mut v = BigUint::one();
        for (p, e) in &self.exponents {
            v *= p.pow(*e);
        }
        v
    }

    /// Exponent of `p`, zero when absent.
    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.exponents.get(p).copied().unwrap_or(0)
    }

    /// Entrywise sum of exponents; signs multiply.
    pub fn mul(&self, other: &FactoredInteger) -> FactoredInteger {
        let mut exponents = self.exponents.clone();
        for (p, e) in &other.exponents {
            *exponents.entry(p.clone()).or_insert(0) += e;
        }
        FactoredInteger { sign: self.sign * other.sign, exponents }
    }

    /// Least common multiple of absolute values.
    pub fn lcm(&self, other: &FactoredInteger) -> FactoredInteger {
        let mut exponents = self.exponents.clone();
        for (p, e) in &other.exponents {
            let slot = exponents.entry(p.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        FactoredInteger { sign: 1, exponents }
    }

    pub fn is_one(&self) -> bool {
        self.sign > 0 && self.exponents.is_empty()
    }

    /// Render as `2^10 * 3^4 * 5^3` (or `1` / `-1`).
    pub fn to_display(&self) -> String {
        let mut s = String::new();
        if self.sign < 0 {
            s.push('-');
        }
        if self.exponents.is_empty() {
            s.push('1');
            return s;
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{}^{}", p, e) })
            .collect();
        s.push_str(&parts.join(" * "));
        s
    }
}

/// A positive integer factored as far as trial division reaches, with the
/// unfactored tail kept as an explicit cofactor (1 when fully factored).
/// Every prime factor of `cofactor` exceeds `TRIAL_DIVISION_BOUND`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFactored {
    pub factored: BTreeMap<u64, u32>,
    pub cofactor: BigUint,
}

impl PartialFactored {
    pub fn value(&self) -> BigUint {
        let mut v = self.cofactor.clone();
        for (p, e) in &self.factored {
            v *= BigUint::from(*p).pow(*e);
        }
        v
    }

    pub fn to_display(&self) -> String {
        let mut parts: Vec<String> = self
            .factored
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{}^{}", p, e) })
            .collect();
        if !self.cofactor.is_one() {
            parts.push(format!("C{}", self.cofactor));
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" * ")
        }
    }
}

/// Factor a nonzero integer completely.  Trial division up to
/// `TRIAL_DIVISION_BOUND`, then Pollard rho with Brent cycle detection on the
/// remaining cofactor, with Miller-Rabin/Lucas primality testing.
pub fn factor_integer(n: &BigInt) -> Result<FactoredInteger> {
    if n.is_zero() {
        return Err(Error::Precondition("factor_integer: n = 0".into()));
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut exponents: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut m = n.abs().to_biguint().unwrap();
    if m.is_one() {
        return Ok(FactoredInteger { sign, exponents });
    }
    // Small primes first.
    let mut p: u64 = 2;
    while p <= TRIAL_DIVISION_BOUND {
        let pb = BigUint::from(p);
        if (&pb * &pb) > m {
            break;
        }
        if (&m % &pb).is_zero() {
            let mut e = 0;
            while (&m % &pb).is_zero() {
                m /= &pb;
                e += 1;
            }
            exponents.insert(pb, e);
        }
        p = next_trial(p);
    }
    if !m.is_one() {
        if let Some(small) = m.to_u64() {
            if small <= TRIAL_DIVISION_BOUND * TRIAL_DIVISION_BOUND {
                // Remaining cofactor below the trial square is prime.
                *exponents.entry(m.clone()).or_insert(0) += 1;
                return Ok(FactoredInteger { sign, exponents });
            }
        }
        factor_large(&m, &mut exponents);
    }
    Ok(FactoredInteger { sign, exponents })
}

/// Factor a u64 completely (convenience wrapper for group orders).
pub fn factor_u64(n: u64) -> BTreeMap<u64, u32> {
    assert!(n > 0);
    let f = factor_integer(&BigInt::from(n)).unwrap();
    f.exponents
        .into_iter()
        .map(|(p, e)| (p.to_u64().expect("u64 factor"), e))
        .collect()
}

/// Factor as far as trial division to `TRIAL_DIVISION_BOUND` goes; the tail
/// is left as a cofactor on purpose (determinant bounds can be astronomically
/// large and are never fully factored).
pub fn partial_factor(n: &BigUint) -> PartialFactored {
    assert!(!n.is_zero());
    let mut factored = BTreeMap::new();
    let mut m = n.clone();
    let mut p: u64 = 2;
    while p <= TRIAL_DIVISION_BOUND {
        let pb = BigUint::from(p);
        if (&pb * &pb) > m {
            break;
        }
        if (&m % &pb).is_zero() {
            let mut e = 0;
            while (&m % &pb).is_zero() {
                m /= &pb;
                e += 1;
            }
            factored.insert(p, e);
        }
        p = next_trial(p);
    }
    if !m.is_one() {
        if let Some(small) = m.to_u64() {
            if small <= TRIAL_DIVISION_BOUND {
                *factored.entry(small).or_insert(0) += 1;
                return PartialFactored { factored, cofactor: BigUint::one() };
            }
        }
    }
    PartialFactored { factored, cofactor: m }
}

fn next_trial(p: u64) -> u64 {
    match p {
        2 => 3,
        3 => 5,
        _ => {
            // 2,4,2,4,... wheel over residues coprime to 6.
            if p % 6 == 5 {
                p + 2
            } else {
                p + 4
            }
        }
    }
}

fn factor_large(n: &BigUint, out: &mut BTreeMap<BigUint, u32>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(n) {
        *out.entry(n.clone()).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho_brent(n);
    let q = n / &d;
    factor_large(&d, out);
    factor_large(&q, out);
}

/// Pollard rho with Brent cycle detection.  Deterministic: the (c, x0) seeds
/// are swept in a fixed order.
fn pollard_rho_brent(n: &BigUint) -> BigUint {
    let two = BigUint::from(2u32);
    if (n % &two).is_zero() {
        return two;
    }
    for c in 1u64..64 {
        let cb = BigUint::from(c);
        let mut y = BigUint::from(2u64 + c);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &cb) % n;
            }
            let mut k: u64 = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = 128.min(r - k);
                for _ in 0..m {
                    y = (&y * &y + &cb) % n;
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (&q * &diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            if r > (1 << 24) {
                break;
            }
        }
        if g == *n {
            // Backtrack one step at a time.
            loop {
                ys = (&ys * &ys + &cb) % n;
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return g;
        }
    }
    unreachable!("pollard rho failed on composite {}", n);
}

/// Strong probable-prime test to base `a`.
fn miller_rabin_round(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

/// Primality: deterministic Miller-Rabin bases for 64-bit inputs, the
/// standard 13-prime base set (proven for n < 3.3 * 10^24) above that, padded
/// with a strong Lucas round for the astronomically large case.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let pb = BigUint::from(p);
        if *n == pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    let bases: &[u64] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for &a in bases {
        if !miller_rabin_round(n, &BigUint::from(a)) {
            return false;
        }
    }
    if n.bits() > 81 {
        // ~3.3e24 is 82 bits; add a Lucas round beyond the proven range.
        if !strong_lucas_prp(n) {
            return false;
        }
    }
    true
}

/// Strong Lucas probable-prime test with Selfridge parameter selection.
fn strong_lucas_prp(n: &BigUint) -> bool {
    let n_int = BigInt::from(n.clone());
    // Find D = 5, -7, 9, -11, ... with jacobi(D, n) = -1.
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, &n_int) {
            0 => return d.abs() == n_int,
            -1 => break,
            _ => {}
        }
        d = if d.is_positive() { -(&d + BigInt::from(2)) } else { -(&d - BigInt::from(2)) };
        if d.abs() > BigInt::from(1_000_000) {
            // n is a perfect square.
            return false;
        }
    }
    let p = BigInt::one();
    let q = (BigInt::one() - &d) / 4;
    // n + 1 = 2^s * t
    let np1: BigInt = &n_int + 1;
    let s = np1.to_biguint().unwrap().trailing_zeros().unwrap_or(0);
    let t = (&np1 >> s).to_biguint().unwrap();
    // Lucas sequence by binary ladder on (U, V, Q^k).
    let mut u = BigInt::zero();
    let mut v = BigInt::from(2);
    let mut qk = BigInt::one();
    let bits = t.bits();
    let modn = |x: &BigInt| -> BigInt { x.mod_floor(&n_int) };
    for i in (0..bits).rev() {
        // double
        u = modn(&(&u * &v));
        v = modn(&(&v * &v - 2 * &qk));
        qk = modn(&(&qk * &qk));
        if t.bit(i) {
            let u2 = modn(&((&p * &u + &v) * inverse2(&n_int)));
            let v2 = modn(&((&d * &u + &p * &v) * inverse2(&n_int)));
            u = u2;
            v = v2;
            qk = modn(&(&qk * &q));
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = modn(&(&v * &v - 2 * &qk));
        qk = modn(&(&qk * &qk));
        if v.is_zero() {
            return true;
        }
    }
    false
}

fn inverse2(n: &BigInt) -> BigInt {
    // n odd: 2^{-1} = (n+1)/2 mod n
    (n + 1) / 2
}

fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32().unwrap() == 3 && (&n % 4u32).to_u32().unwrap() == 3 {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

pub fn is_prime_u64(n: u64) -> bool {
    is_probable_prime(&BigUint::from(n))
}

pub fn next_prime_u64(n: u64) -> u64 {
    let mut m = n + 1;
    while !is_prime_u64(m) {
        m += 1;
    }
    m
}

/// Ascending primes through `bound` (inclusive), by sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return vec![];
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    if n >= 1 {
        sieve[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

/// p-adic valuation of a nonzero integer.
pub fn v_adic(n: &BigUint, p: u64) -> u32 {
    assert!(!n.is_zero());
    let pb = BigUint::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &pb).is_zero() {
        m /= &pb;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    /// Independent trial-division oracle, used to freeze expected values.
    fn trial_division_oracle(mut n: u64) -> BTreeMap<u64, u32> {
        let mut out = BTreeMap::new();
        let mut d = 2u64;
        while d * d <= n {
            while n % d == 0 {
                *out.entry(d).or_insert(0) += 1;
                n /= d;
            }
            d += 1;
        }
        if n > 1 {
            *out.entry(n).or_insert(0) += 1;
        }
        out
    }

    #[test]
    fn factor_paper_value_10368000() {
        // 10368000 = 2^10 * 3^4 * 5^3
        let f = factor_integer(&BigInt::from(10_368_000)).unwrap();
        assert_eq!(f.sign, 1);
        let expected: BTreeMap<BigUint, u32> =
            [(2u32, 10u32), (3, 4), (5, 3)].iter().map(|&(p, e)| (BigUint::from(p), e)).collect();
        assert_eq!(f.exponents, expected);
    }

    #[test]
    fn factor_unit() {
        let f = factor_integer(&BigInt::from(1)).unwrap();
        assert!(f.is_one());
        let g = factor_integer(&BigInt::from(-1)).unwrap();
        assert_eq!(g.sign, -1);
        assert!(g.exponents.is_empty());
    }

    #[test]
    fn factor_2368_matches_trial_division_oracle() {
        // Frozen from the oracle: 2368 = 2^6 * 37.
        let oracle = trial_division_oracle(2368);
        let expected: BTreeMap<u64, u32> = [(2u64, 6u32), (37, 1)].into_iter().collect();
        assert_eq!(oracle, expected);
        assert_eq!(factor_u64(2368), expected);
    }

    #[test]
    fn factor_rejects_zero() {
        assert!(factor_integer(&BigInt::zero()).is_err());
    }

    #[test]
    fn factor_large_semiprime() {
        // Forces the rho path: two primes above the trial bound.
        let p = BigUint::from(1_000_003u64);
        let q = BigUint::from(1_000_033u64);
        let n = BigInt::from(&p * &q);
        let f = factor_integer(&n).unwrap();
        assert_eq!(f.exponents.len(), 2);
        assert_eq!(f.value(), n);
    }

    #[test]
    fn partial_factor_leaves_cofactor() {
        let p = BigUint::from(1_000_003u64);
        let n = BigUint::from(12u64) * &p;
        let pf = partial_factor(&n);
        assert_eq!(pf.factored.get(&2), Some(&2));
        assert_eq!(pf.factored.get(&3), Some(&1));
        assert_eq!(pf.cofactor, p);
        assert_eq!(pf.value(), n);
    }

    #[test]
    fn primes_up_to_30() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    proptest! {
        #[test]
        fn factor_multiplicative(a in 1i64..500_000, b in 1i64..500_000) {
            let fa = factor_integer(&BigInt::from(a)).unwrap();
            let fb = factor_integer(&BigInt::from(b)).unwrap();
            let fab = factor_integer(&BigInt::from(a * b)).unwrap();
            prop_assert_eq!(fa.mul(&fb), fab);
        }

        #[test]
        fn factor_roundtrip(n in prop::num::i64::ANY) {
            prop_assume!(n != 0);
            let f = factor_integer(&BigInt::from(n)).unwrap();
            prop_assert_eq!(f.value(), BigInt::from(n));
        }
    }
}
