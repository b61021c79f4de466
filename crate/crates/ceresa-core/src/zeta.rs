//! L-polynomials (zeta numerators) of genus-3 plane quartics and genus-1
//! binary-quartic models, from point counts via Newton's identities.
//! Construction validates the functional equation and the Weil root-modulus
//! condition exactly (Sturm sequences on the real Weil polynomial), so a bad
//! point count can never produce a usable L-polynomial.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::fp::{PrimeField, Ring};
use crate::quartic::TernaryQuarticFp;
use crate::{Error, Result};

/// Numerator of the zeta function: P(T) = prod (1 - alpha_i T), degree 2g,
/// integer coefficients, a_0 = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    pub q: u64,
    pub genus: usize,
    /// a_0..a_2g, low to high.
    pub coeffs: Vec<BigInt>,
}

impl LPolynomial {
    /// Validates all invariants: a_0 = 1, functional equation
    /// a_(2g-i) = q^(g-i) a_i, all inverse roots of absolute value sqrt(q),
    /// and P(1) > 0.
    pub fn new(q: u64, genus: usize, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != 2 * genus + 1 || !coeffs[0].is_one() {
            return Err(Error::Internal("L-polynomial has wrong shape".into()));
        }
        let qb = BigInt::from(q);
        for i in 0..=genus {
            let expect = coeffs[i].clone() * qb.pow((genus - i) as u32);
            if coeffs[2 * genus - i] != expect {
                return Err(Error::Internal(format!(
                    "functional equation fails at i={}: {} vs {}",
                    i,
                    coeffs[2 * genus - i],
                    expect
                )));
            }
        }
        let lp = LPolynomial { q, genus, coeffs };
        if !lp.weil_roots_ok() {
            return Err(Error::Internal("inverse roots are not Weil numbers".into()));
        }
        if lp.p1() <= BigInt::zero() {
            return Err(Error::Internal("P(1) is not positive".into()));
        }
        Ok(lp)
    }

    fn p1(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// |Jac(C)(F_q)| = P(1).
    pub fn jacobian_order(&self) -> BigUint {
        self.p1().to_biguint().expect("validated positive")
    }

    /// The monic characteristic polynomial of Frobenius on H^1:
    /// T^(2g) P(1/T), low to high.
    pub fn frobenius_charpoly(&self) -> Vec<BigInt> {
        let mut v = self.coeffs.clone();
        v.reverse();
        v
    }

    /// Predicted number of points over F_(q^k): q^k + 1 - sum alpha_i^k.
    pub fn predicted_count(&self, k: usize) -> BigInt {
        let ps = self.root_power_sums(k);
        BigInt::from(self.q).pow(k as u32) + 1 - &ps[k]
    }

    /// The L-polynomial of the base change to F_(q^k): eigenvalues are the
    /// k-th powers of the Frobenius eigenvalues.
    pub fn base_change(&self, k: usize) -> Result<LPolynomial> {
        if k == 1 {
            return Ok(self.clone());
        }
        let deg = 2 * self.genus;
        let ps = self.root_power_sums(deg * k);
        let ps_k: Vec<BigInt> = (0..=deg).map(|j| ps[j * k].clone()).collect();
        let e = elementary_from_power_sums(&ps_k, deg)?;
        let mut coeffs = vec![BigInt::one()];
        for (i, ei) in e.iter().enumerate() {
            let c = if (i + 1) % 2 == 1 { -ei.clone() } else { ei.clone() };
            coeffs.push(c);
        }
        let qk = self
            .q
            .checked_pow(k as u32)
            .ok_or_else(|| Error::Internal("base-change field size overflows".into()))?;
        LPolynomial::new(qk, self.genus, coeffs)
    }

    /// Power sums of the Frobenius eigenvalues alpha_i, indices 0..=n.
    pub fn root_power_sums(&self, n: usize) -> Vec<BigInt> {
        // e_i = (-1)^i a_i from P(T) = prod(1 - alpha T).
        let deg = 2 * self.genus;
        let e: Vec<BigInt> = (0..=deg)
            .map(|i| {
                let c = self.coeffs[i].clone();
                if i % 2 == 1 {
                    -c
                } else {
                    c
                }
            })
            .collect();
        power_sums_from_elementary(&e, deg, n)
    }

    /// Check all complex roots of the reciprocal polynomial have absolute
    /// value sqrt(q), via the real Weil polynomial and Sturm counting.
    fn weil_roots_ok(&self) -> bool {
        match self.genus {
            1 => {
                // a_1^2 <= 4q
                let a1 = -self.coeffs[1].clone();
                &a1 * &a1 <= BigInt::from(4 * self.q as i64)
            }
            3 => {
                let a1 = self.coeffs[1].clone();
                let a2 = self.coeffs[2].clone();
                let a3 = self.coeffs[3].clone();
                let q = BigInt::from(self.q);
                // h(x) = x^3 + a1 x^2 + (a2 - 3q) x + (a3 - 2 q a1)
                let h = vec![&a3 - 2 * &q * &a1, &a2 - 3 * &q, a1.clone(), BigInt::one()];
                all_roots_real_in_weil_interval(&h, self.q)
            }
            _ => false,
        }
    }
}

/// Newton's identities: from elementary symmetric e_1..e_deg (e_0 = 1),
/// power sums p_0..p_n of the underlying multiset of deg roots.
fn power_sums_from_elementary(e: &[BigInt], deg: usize, n: usize) -> Vec<BigInt> {
    let mut p: Vec<BigInt> = Vec::with_capacity(n + 1);
    p.push(BigInt::from(deg as i64));
    for k in 1..=n {
        // p_k = e1 p_{k-1} - e2 p_{k-2} + ... + (-1)^{k-1} k e_k
        let mut acc = BigInt::zero();
        for i in 1..=k.min(deg) {
            let term = &e[i] * &p[k - i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if k <= deg {
            let t = BigInt::from(k as i64) * &e[k];
            // the recurrence above double-counts the i = k term: p_0 e_k
            // appears with coefficient deg instead of k; correct it.
            let correction = if k % 2 == 1 { t - &e[k] * &p[0] } else { -(t - &e[k] * &p[0]) };
            acc += correction;
        }
        p.push(acc);
    }
    p
}

/// Elementary symmetric functions e_1..e_m from power sums p_1..p_m
/// (integers throughout when the underlying polynomial is integral).
pub fn elementary_from_power_sums(ps: &[BigInt], m: usize) -> Result<Vec<BigInt>> {
    // e_k = (1/k) sum_{i=1}^{k} (-1)^{i-1} e_{k-i} p_i, with e_0 = 1.
    let mut e: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=m {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &ps[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let kk = BigInt::from(k as i64);
        let (q, r) = acc.div_rem(&kk);
        if !r.is_zero() {
            return Err(Error::Internal(
                "Newton reconstruction is not integral (point-count bug)".into(),
            ));
        }
        e.push(q);
    }
    Ok(e[1..].to_vec())
}

/// True iff every root of the integer polynomial h (with multiplicity) is
/// real and lies in [-2 sqrt(q), 2 sqrt(q)].
fn all_roots_real_in_weil_interval(h: &[BigInt], q: u64) -> bool {
    use crate::fp::QField;
    use crate::poly::uni;
    let qf = QField;
    let rat = |v: &[BigInt]| -> Vec<num_rational::BigRational> {
        v.iter().map(|c| num_rational::BigRational::from_integer(c.clone())).collect()
    };
    let int_primitive = |v: &[num_rational::BigRational]| -> Vec<BigInt> {
        // clear denominators and divide by content
        let mut lcm = BigInt::one();
        for c in v {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return vec![];
        }
        ints.iter().map(|c| c / &g).collect()
    };
    // Strip x^2 - 4q factors (roots exactly at the interval endpoints); if
    // q is a perfect square the endpoints are rational, so strip the linear
    // factors too.
    let mut strips: Vec<Vec<BigInt>> =
        vec![vec![BigInt::from(-4 * q as i64), BigInt::zero(), BigInt::one()]];
    let sq = (q as f64).sqrt().round() as u64;
    if sq * sq == q {
        strips.push(vec![BigInt::from(-2 * sq as i64), BigInt::one()]);
        strips.push(vec![BigInt::from(2 * sq as i64), BigInt::one()]);
    }
    let mut r = h.to_vec();
    for s in &strips {
        loop {
            if r.len() < s.len() {
                break;
            }
            let (quo, rem) = uni::divrem(&qf, &rat(&r), &rat(s));
            if rem.iter().all(|c| c.is_zero()) {
                r = int_primitive(&quo);
            } else {
                break;
            }
        }
    }
    if r.len() <= 1 {
        return !r.is_empty(); // zero polynomial cannot happen for monic h
    }
    // Squarefree part.
    let rq = rat(&r);
    let dr = uni::derivative(&qf, &rq);
    let g = uni::gcd(&qf, &rq, &dr);
    let f = uni::divrem(&qf, &rq, &g).0;
    let f = int_primitive(&f);
    let deg_f = f.len() - 1;
    if deg_f == 0 {
        return true;
    }
    // Sturm sequence of f.
    let mut seq: Vec<Vec<num_rational::BigRational>> = Vec::new();
    seq.push(rat(&f));
    seq.push(uni::derivative(&qf, &rat(&f)));
    while !seq.last().unwrap().is_empty() && uni::deg(seq.last().unwrap()) != Some(0) {
        let n = seq.len();
        let rem = uni::divrem(&qf, &seq[n - 2], &seq[n - 1]).1;
        let neg: Vec<num_rational::BigRational> = rem.iter().map(|c| -c.clone()).collect();
        if neg.is_empty() {
            break;
        }
        seq.push(neg);
    }
    // Sign of a rational polynomial at s*2*sqrt(q), s = -1 or 1.
    let sign_at = |poly: &[num_rational::BigRational], s: i64| -> i32 {
        let ints = int_primitive(poly);
        if ints.is_empty() {
            return 0;
        }
        // value = A + B sqrt(q), A from even terms, B from odd.
        let mut a = BigInt::zero();
        let mut b = BigInt::zero();
        for (i, c) in ints.iter().enumerate() {
            // (2 s sqrt(q))^i = 2^i s^i q^(i/2) (sqrt(q) if i odd)
            let coef = c * BigInt::from(2i64).pow(i as u32) * BigInt::from(s).pow(i as u32);
            if i % 2 == 0 {
                a += &coef * BigInt::from(q).pow((i / 2) as u32);
            } else {
                b += &coef * BigInt::from(q).pow((i / 2) as u32);
            }
        }
        match (a.sign(), b.sign()) {
            (num_bigint::Sign::NoSign, num_bigint::Sign::NoSign) => 0,
            (num_bigint::Sign::NoSign, s2) => {
                if s2 == num_bigint::Sign::Plus {
                    1
                } else {
                    -1
                }
            }
            (s1, num_bigint::Sign::NoSign) => {
                if s1 == num_bigint::Sign::Plus {
                    1
                } else {
                    -1
                }
            }
            (num_bigint::Sign::Plus, num_bigint::Sign::Plus) => 1,
            (num_bigint::Sign::Minus, num_bigint::Sign::Minus) => -1,
            (s1, _) => {
                // mixed signs: compare A^2 with B^2 q
                let a2 = &a * &a;
                let b2q = &b * &b * BigInt::from(q);
                let cmp = a2.cmp(&b2q);
                let big_part_positive = s1 == num_bigint::Sign::Plus;
                match cmp {
                    std::cmp::Ordering::Equal => 0,
                    std::cmp::Ordering::Greater => {
                        if big_part_positive {
                            1
                        } else {
                            -1
                        }
                    }
                    std::cmp::Ordering::Less => {
                        if big_part_positive {
                            -1
                        } else {
                            1
                        }
                    }
                }
            }
        }
    };
    let count_changes = |s: i64| -> usize {
        let mut signs: Vec<i32> = seq.iter().map(|p| sign_at(p, s)).collect();
        signs.retain(|&x| x != 0);
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    // Roots cannot sit at the endpoints (those factors were stripped), so
    // the open-interval Sturm count is exact.  A count below deg means
    // complex roots or real roots outside the interval, either of which
    // violates the Weil condition.
    let roots_in_interval = count_changes(-1) as i64 - count_changes(1) as i64;
    roots_in_interval == deg_f as i64
}

/// L-polynomial of a smooth plane quartic over F_p from point counts over
/// F_p, F_(p^2), F_(p^3).
pub fn l_polynomial_genus3(c: &TernaryQuarticFp) -> Result<LPolynomial> {
    let p = c.p();
    let n1 = c.count_points(1)? as i64;
    let n2 = c.count_points(2)? as i64;
    let n3 = c.count_points(3)? as i64;
    l_polynomial_genus3_from_counts(p, n1, n2, n3)
}

/// Assemble a genus-3 L-polynomial from the three counts.
pub fn l_polynomial_genus3_from_counts(p: u64, n1: i64, n2: i64, n3: i64) -> Result<LPolynomial> {
    let q = BigInt::from(p);
    let ps: Vec<BigInt> = vec![
        BigInt::from(6), // p_0 placeholder (6 roots), unused by reconstruction
        &q + 1 - n1,
        q.pow(2) + 1 - n2,
        q.pow(3) + 1 - n3,
    ];
    let e = elementary_from_power_sums(&ps, 3)?;
    let mut a = vec![BigInt::one()];
    for (i, ei) in e.iter().enumerate() {
        let c = if (i + 1) % 2 == 1 { -ei.clone() } else { ei.clone() };
        a.push(c);
    }
    // Functional equation completes a4, a5, a6.
    let a4 = &a[2] * &q;
    let a5 = &a[1] * q.pow(2);
    let a6 = q.pow(3);
    a.push(a4);
    a.push(a5);
    a.push(a6);
    LPolynomial::new(p, 3, a)
}

/// Count points of the genus-1 curve w^2 = Q(y, z) (binary quartic, possibly
/// degree 3 with a single point over (1:0)) over F_p, including points at
/// infinity per the binary-form convention.
pub fn genus1_point_count(fp: &PrimeField, quartic: &[u64; 5]) -> u64 {
    let mut n = 0u64;
    // (y : 1) for all y, then (1 : 0).
    for y in 0..fp.p {
        let v = eval_binary_quartic(fp, quartic, y, 1);
        n += match fp.legendre(v) {
            0 => 1,
            1 => 2,
            _ => 0,
        };
    }
    let v = eval_binary_quartic(fp, quartic, 1, 0);
    n += match fp.legendre(v) {
        0 => 1,
        1 => 2,
        _ => 0,
    };
    n
}

pub fn eval_binary_quartic(fp: &PrimeField, q: &[u64; 5], y: u64, z: u64) -> u64 {
    let mut acc = 0u64;
    let mut ypow = 1u64;
    // q[i] is the coefficient of y^i z^(4-i).
    let mut terms = [0u64; 5];
    for i in 0..5 {
        terms[i] = fp.mul(&q[i], &ypow);
        ypow = fp.mul(&ypow, &y);
    }
    let mut zpow = 1u64;
    for i in (0..5).rev() {
        acc = fp.add(&acc, &fp.mul(&terms[i], &zpow));
        if i > 0 {
            zpow = fp.mul(&zpow, &z);
        }
    }
    acc
}

/// Squarefreeness of a binary quartic over F_p (as a divisor on P^1): no
/// repeated root, including at infinity.
pub fn binary_quartic_squarefree(fp: &PrimeField, q: &[u64; 5]) -> bool {
    use crate::poly::uni;
    // Dehomogenize at z = 1: poly in y; a repeated root at infinity means
    // deg <= 2 after dehomogenization (double root at (1:0)).
    let mut f: Vec<u64> = q.to_vec();
    uni::trim(fp, &mut f);
    if f.is_empty() {
        return false;
    }
    let deg = f.len() - 1;
    if deg < 3 {
        return false; // (1:0) is a root of multiplicity >= 2
    }
    let df = uni::derivative(fp, &f);
    let g = uni::gcd(fp, &f, &df);
    uni::deg(&g) == Some(0)
}

/// Genus-1 L-polynomial from a squarefree binary quartic model w^2 = Q(y,z).
pub fn l_polynomial_genus1(fp: &PrimeField, quartic: &[u64; 5]) -> Result<LPolynomial> {
    if !binary_quartic_squarefree(fp, quartic) {
        return Err(Error::Precondition("binary quartic is not squarefree".into()));
    }
    let n1 = genus1_point_count(fp, quartic) as i64;
    let p = fp.p as i64;
    let ap = p + 1 - n1;
    let coeffs = vec![BigInt::one(), BigInt::from(-ap), BigInt::from(p)];
    LPolynomial::new(fp.p, 1, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quartic::TernaryQuarticZ;

    fn fermat() -> TernaryQuarticZ {
        TernaryQuarticZ::parse("x^4 + y^4 + z^4").unwrap()
    }

    #[test]
    fn fermat_mod_3_trace_zero() {
        // N_1 = 4 so sum of eigenvalues = 3 + 1 - 4 = 0: a_1 = 0.
        let c = fermat().reduce_mod(3).unwrap();
        let l = l_polynomial_genus3(&c).unwrap();
        assert_eq!(l.coeffs[1], BigInt::zero());
        // P(1) in the Weil interval [(sqrt p - 1)^6, (sqrt p + 1)^6].
        let j = l.jacobian_order();
        let lo = ((3f64).sqrt() - 1.0).powi(6);
        let hi = ((3f64).sqrt() + 1.0).powi(6);
        let jf = j.to_string().parse::<f64>().unwrap();
        assert!(jf >= lo - 1e-9 && jf <= hi + 1e-9);
    }

    #[test]
    fn genus3_counts_roundtrip() {
        // The L-polynomial predicts the counts it was built from.
        for p in [5u64, 7, 11] {
            let c = fermat().reduce_mod(p).unwrap();
            let l = l_polynomial_genus3(&c).unwrap();
            for k in 1..=3usize {
                let predicted = l.predicted_count(k);
                let actual = BigInt::from(c.count_points(k).unwrap());
                assert_eq!(predicted, actual, "p={} k={}", p, k);
            }
        }
    }

    #[test]
    fn genus3_functional_equation_holds() {
        let c = fermat().reduce_mod(7).unwrap();
        let l = l_polynomial_genus3(&c).unwrap();
        let q = BigInt::from(7);
        for i in 0..=3usize {
            assert_eq!(l.coeffs[6 - i], &l.coeffs[i] * q.pow((3 - i) as u32));
        }
    }

    #[test]
    fn weil_validation_rejects_garbage() {
        // a_1 = 7 at p = 3 wildly violates |a_1| <= 6 sqrt(3).
        assert!(l_polynomial_genus3_from_counts(3, -3, 10, 28).is_err());
    }

    #[test]
    fn genus1_lpoly_hasse() {
        let fp = PrimeField::new(47).unwrap();
        // w^2 = y^4 + 1 (z-homogenized): coefficients y^0..y^4.
        let q = [1u64, 0, 0, 0, 1];
        let l = l_polynomial_genus1(&fp, &q).unwrap();
        let n1 = genus1_point_count(&fp, &q);
        assert_eq!(l.jacobian_order(), BigUint::from(n1));
        let ap = 47 + 1 - n1 as i64;
        assert!(ap * ap <= 4 * 47);
    }

    #[test]
    fn genus1_rejects_non_squarefree() {
        let fp = PrimeField::new(7).unwrap();
        // (y^2)^2: quadruple root at 0.
        let q = [0u64, 0, 0, 0, 1];
        assert!(l_polynomial_genus1(&fp, &q).is_err());
    }

    #[test]
    fn power_sums_match_direct_expansion() {
        // P(T) = (1 - 2T)(1 - 3T): e1 = 5, e2 = 6; p1 = 5, p2 = 13, p3 = 35.
        let l = LPolynomial {
            q: 6,
            genus: 1,
            coeffs: vec![BigInt::one(), BigInt::from(-5), BigInt::from(6)],
        };
        let ps = l.root_power_sums(3);
        assert_eq!(ps[1], BigInt::from(5));
        assert_eq!(ps[2], BigInt::from(13));
        assert_eq!(ps[3], BigInt::from(35));
    }
}
