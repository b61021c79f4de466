//! Dense univariate polynomials over a ring context.  A polynomial is a
//! `Vec` of coefficients, low degree first, with no trailing zeros (the zero
//! polynomial is the empty vector).

use num_bigint::BigUint;

use crate::fp::{Field, Ring};

pub type Poly<E> = Vec<E>;

pub fn trim<R: Ring>(r: &R, v: &mut Poly<R::E>) {
    while let Some(last) = v.last() {
        if r.is_zero(last) {
            v.pop();
        } else {
            break;
        }
    }
}

pub fn is_zero<E>(a: &Poly<E>) -> bool {
    a.is_empty()
}

/// Degree; zero polynomial has no degree.
pub fn deg<E>(a: &Poly<E>) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn constant<R: Ring>(r: &R, c: R::E) -> Poly<R::E> {
    let mut v = vec![c];
    trim(r, &mut v);
    v
}

pub fn monomial<R: Ring>(r: &R, c: R::E, k: usize) -> Poly<R::E> {
    if r.is_zero(&c) {
        return vec![];
    }
    let mut v = vec![r.zero(); k];
    v.push(c);
    v
}

pub fn x<R: Ring>(r: &R) -> Poly<R::E> {
    vec![r.zero(), r.one()]
}

pub fn lc<E: Clone>(a: &Poly<E>) -> E {
    a.last().expect("lc of zero polynomial").clone()
}

pub fn add<R: Ring>(r: &R, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => r.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        };
        out.push(x);
    }
    trim(r, &mut out);
    out
}

pub fn sub<R: Ring>(r: &R, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => r.sub(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => r.neg(y),
            (None, None) => unreachable!(),
        };
        out.push(x);
    }
    trim(r, &mut out);
    out
}

pub fn neg<R: Ring>(r: &R, a: &Poly<R::E>) -> Poly<R::E> {
    a.iter().map(|x| r.neg(x)).collect()
}

pub fn mul<R: Ring>(r: &R, a: &Poly<R::E>, b: &Poly<R::E>) -> Poly<R::E> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if r.is_zero(y) {
                continue;
            }
            let t = r.mul(x, y);
            out[i + j] = r.add(&out[i + j], &t);
        }
    }
    trim(r, &mut out);
    out
}

pub fn mul_scalar<R: Ring>(r: &R, a: &Poly<R::E>, c: &R::E) -> Poly<R::E> {
    if r.is_zero(c) {
        return vec![];
    }
    let mut out: Poly<R::E> = a.iter().map(|x| r.mul(x, c)).collect();
    trim(r, &mut out);
    out
}

pub fn eval<R: Ring>(r: &R, a: &Poly<R::E>, at: &R::E) -> R::E {
    let mut acc = r.zero();
    for c in a.iter().rev() {
        acc = r.mul(&acc, at);
        acc = r.add(&acc, c);
    }
    acc
}

pub fn derivative<R: Ring>(r: &R, a: &Poly<R::E>) -> Poly<R::E> {
    if a.len() <= 1 {
        return vec![];
    }
    let mut out = Vec::with_capacity(a.len() - 1);
    for (i, c) in a.iter().enumerate().skip(1) {
        let mut m = r.zero();
        // i * c by repeated addition is wasteful for big i; build i in the ring.
        let mut k = i;
        let mut base = c.clone();
        while k > 0 {
            if k & 1 == 1 {
                m = r.add(&m, &base);
            }
            base = r.add(&base, &base);
            k >>= 1;
        }
        out.push(m);
    }
    trim(r, &mut out);
    out
}

/// Division with remainder over a field.
pub fn divrem<F: Field>(f: &F, a: &Poly<F::E>, b: &Poly<F::E>) -> (Poly<F::E>, Poly<F::E>) {
    assert!(!b.is_empty(), "division by zero polynomial");
    if a.len() < b.len() {
        return (vec![], a.clone());
    }
    let lcb_inv = f.inv(&lc(b));
    let mut rem = a.clone();
    let mut quo = vec![f.zero(); a.len() - b.len() + 1];
    while !rem.is_empty() && rem.len() >= b.len() {
        let k = rem.len() - b.len();
        let c = f.mul(&lc(&rem), &lcb_inv);
        quo[k] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            let t = f.mul(&c, bj);
            rem[k + j] = f.sub(&rem[k + j], &t);
        }
        trim(f, &mut rem);
    }
    trim(f, &mut quo);
    (quo, rem)
}

pub fn rem<F: Field>(f: &F, a: &Poly<F::E>, b: &Poly<F::E>) -> Poly<F::E> {
    divrem(f, a, b).1
}

/// Make monic over a field.
pub fn monic<F: Field>(f: &F, a: &Poly<F::E>) -> Poly<F::E> {
    if a.is_empty() {
        return vec![];
    }
    let inv = f.inv(&lc(a));
    mul_scalar(f, a, &inv)
}

/// Monic gcd over a field.
pub fn gcd<F: Field>(f: &F, a: &Poly<F::E>, b: &Poly<F::E>) -> Poly<F::E> {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        monic(f, &a)
    }
}

/// Extended gcd over a field: returns (g, u, v) monic with u*a + v*b = g.
pub fn ext_gcd<F: Field>(
    f: &F,
    a: &Poly<F::E>,
    b: &Poly<F::E>,
) -> (Poly<F::E>, Poly<F::E>, Poly<F::E>) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = constant(f, f.one());
    let mut s1: Poly<F::E> = vec![];
    let mut t0: Poly<F::E> = vec![];
    let mut t1 = constant(f, f.one());
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        let t = sub(f, &t0, &mul(f, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    if r0.is_empty() {
        return (vec![], vec![], vec![]);
    }
    let inv = f.inv(&lc(&r0));
    (
        mul_scalar(f, &r0, &inv),
        mul_scalar(f, &s0, &inv),
        mul_scalar(f, &t0, &inv),
    )
}

/// a^e mod m over a field, e an arbitrary-precision exponent.
pub fn modpow<F: Field>(f: &F, a: &Poly<F::E>, e: &BigUint, m: &Poly<F::E>) -> Poly<F::E> {
    use num_traits::Zero;
    assert!(deg(m).map_or(false, |d| d >= 1), "modulus must have degree >= 1");
    let mut base = rem(f, a, m);
    let mut acc = constant(f, f.one());
    if e.is_zero() {
        return acc;
    }
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            acc = rem(f, &mul(f, &acc, &base), m);
        }
        if i + 1 < bits {
            base = rem(f, &mul(f, &base, &base), m);
        }
    }
    acc
}

/// Pseudo-division: lc(b)^(deg a - deg b + 1) * a = q*b + r with deg r < deg b.
pub fn pseudo_divrem<R: Ring>(r: &R, a: &Poly<R::E>, b: &Poly<R::E>) -> (Poly<R::E>, Poly<R::E>) {
    assert!(!b.is_empty());
    let db = b.len() - 1;
    if a.len() < b.len() {
        let da = a.len().saturating_sub(1);
        let e = (da as i64 - db as i64 + 1).max(0) as u32;
        let mut scaled = a.clone();
        let lb = lc(b);
        for _ in 0..e {
            scaled = mul_scalar(r, &scaled, &lb);
        }
        return (vec![], scaled);
    }
    let da = a.len() - 1;
    let lb = lc(b);
    let mut rem = a.clone();
    let mut quo = vec![r.zero(); da - db + 1];
    let mut steps = da - db + 1;
    while !rem.is_empty() && rem.len() >= b.len() {
        let k = rem.len() - b.len();
        let c = lc(&rem);
        // Scale everything up by lc(b), then subtract c * x^k * b.
        for q in quo.iter_mut() {
            *q = r.mul(q, &lb);
        }
        quo[k] = r.add(&quo[k], &c);
        for x in rem.iter_mut() {
            *x = r.mul(x, &lb);
        }
        for (j, bj) in b.iter().enumerate() {
            let t = r.mul(&c, bj);
            rem[k + j] = r.sub(&rem[k + j], &t);
        }
        trim(r, &mut rem);
        steps -= 1;
    }
    // Top up remaining scalings so the identity uses exactly lc^(da-db+1).
    for _ in 0..steps {
        for q in quo.iter_mut() {
            *q = r.mul(q, &lb);
        }
        rem = mul_scalar(r, &rem, &lb);
    }
    trim(r, &mut quo);
    (quo, rem)
}

/// Resultant by the subresultant polynomial remainder sequence
/// (fraction-free; all divisions exact).  Convention:
/// Res(f, g) = lc(f)^deg(g) * prod g(alpha) over roots alpha of f.
pub fn resultant<R: Ring>(r: &R, a: &Poly<R::E>, b: &Poly<R::E>) -> R::E {
    if a.is_empty() || b.is_empty() {
        return r.zero();
    }
    let da = a.len() - 1;
    let db = b.len() - 1;
    if da == 0 {
        return ring_pow(r, &a[0], db as u64);
    }
    if db == 0 {
        return ring_pow(r, &b[0], da as u64);
    }
    let (mut a, mut b, mut sign) = if da < db {
        (b.clone(), a.clone(), (da * db) % 2 == 1)
    } else {
        (a.clone(), b.clone(), false)
    };
    let mut g = r.one();
    let mut h = r.one();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
        let (_, mut rr) = pseudo_divrem(r, &a, &b);
        // r / (g * h^delta), exact.
        let denom = r.mul(&g, &ring_pow(r, &h, delta as u64));
        rr = rr.iter().map(|c| r.exact_div(c, &denom)).collect();
        trim(r, &mut rr);
        a = std::mem::replace(&mut b, rr);
        g = lc(&a);
        h = if delta == 0 {
            h
        } else {
            // h^(1-delta) * g^delta, exact in the subresultant theory.
            let num = ring_pow(r, &g, delta as u64);
            let den = ring_pow(r, &h, (delta - 1) as u64);
            r.exact_div(&num, &den)
        };
        if b.is_empty() {
            return r.zero();
        }
        if b.len() == 1 {
            // Final: s * lc(b)^(deg a) / h^(deg a - 1).
            let da = a.len() - 1;
            let num = ring_pow(r, &b[0], da as u64);
            let den = ring_pow(r, &h, da.saturating_sub(1) as u64);
            let res = r.exact_div(&num, &den);
            return if sign { r.neg(&res) } else { res };
        }
    }
}

pub fn ring_pow<R: Ring>(r: &R, a: &R::E, mut e: u64) -> R::E {
    let mut acc = r.one();
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = r.mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = r.mul(&base, &base);
        }
    }
    acc
}

/// The ring R[x] as a `Ring` context over coefficients in R, so univariate
/// algorithms can run with polynomial coefficients (bivariate resultants).
#[derive(Debug, Clone)]
pub struct PolyRing<R: Ring> {
    pub base: R,
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R) -> Self {
        PolyRing { base }
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type E = Poly<R::E>;

    fn zero(&self) -> Self::E {
        vec![]
    }
    fn one(&self) -> Self::E {
        vec![self.base.one()]
    }
    fn is_zero(&self, a: &Self::E) -> bool {
        a.is_empty()
    }
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E {
        add(&self.base, a, b)
    }
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E {
        sub(&self.base, a, b)
    }
    fn neg(&self, a: &Self::E) -> Self::E {
        neg(&self.base, a)
    }
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E {
        mul(&self.base, a, b)
    }
    fn exact_div(&self, a: &Self::E, b: &Self::E) -> Self::E {
        // Exact polynomial division over the base ring.
        assert!(!b.is_empty(), "exact_div by zero polynomial");
        if a.is_empty() {
            return vec![];
        }
        assert!(a.len() >= b.len(), "inexact polynomial division");
        let mut rem = a.clone();
        let mut quo = vec![self.base.zero(); a.len() - b.len() + 1];
        let lb = lc(b);
        while !rem.is_empty() && rem.len() >= b.len() {
            let k = rem.len() - b.len();
            let c = self.base.exact_div(&lc(&rem), &lb);
            quo[k] = c.clone();
            for (j, bj) in b.iter().enumerate() {
                let t = self.base.mul(&c, bj);
                rem[k + j] = self.base.sub(&rem[k + j], &t);
            }
            trim(&self.base, &mut rem);
        }
        assert!(rem.is_empty(), "inexact polynomial division (nonzero remainder)");
        trim(&self.base, &mut quo);
        quo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::{BigIntRing, PrimeField};
    use num_bigint::BigInt;

    fn zp(v: &[i64]) -> Poly<BigInt> {
        let r = BigIntRing;
        let mut out: Poly<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
        trim(&r, &mut out);
        out
    }

    #[test]
    fn resultant_conventions() {
        let r = BigIntRing;
        // Res(x^2 + 1, x - 1) = 2
        let f = zp(&[1, 0, 1]);
        let g = zp(&[-1, 1]);
        assert_eq!(resultant(&r, &f, &g), BigInt::from(2));
        // Res(f, c) = c^deg f
        let c = zp(&[7]);
        assert_eq!(resultant(&r, &f, &c), BigInt::from(49));
        // Res(x - a, x - b) = b - a
        let fa = zp(&[-3, 1]);
        let fb = zp(&[-5, 1]);
        assert_eq!(resultant(&r, &fa, &fb), BigInt::from(-5 - (-3)));
    }

    /// Naive Sylvester determinant oracle over F_p (Gaussian elimination).
    fn sylvester_det_oracle(p: u64, f: &Poly<u64>, g: &Poly<u64>) -> u64 {
        let fld = PrimeField::new(p).unwrap();
        let m = f.len() - 1;
        let n = g.len() - 1;
        let size = m + n;
        let mut mat = vec![vec![0u64; size]; size];
        for i in 0..n {
            for (j, c) in f.iter().rev().enumerate() {
                mat[i][i + j] = *c;
            }
        }
        for i in 0..m {
            for (j, c) in g.iter().rev().enumerate() {
                mat[n + i][i + j] = *c;
            }
        }
        // determinant
        let mut det = 1u64;
        for col in 0..size {
            let piv = (col..size).find(|&r| mat[r][col] != 0);
            let piv = match piv {
                Some(r) => r,
                None => return 0,
            };
            if piv != col {
                mat.swap(piv, col);
                det = fld.neg(&det);
            }
            det = fld.mul(&det, &mat[col][col]);
            let inv = fld.inv(&mat[col][col]);
            for r in col + 1..size {
                let factor = fld.mul(&mat[r][col], &inv);
                if factor == 0 {
                    continue;
                }
                for c in col..size {
                    let t = fld.mul(&factor, &mat[col][c]);
                    mat[r][c] = fld.sub(&mat[r][c], &t);
                }
            }
        }
        det
    }

    #[test]
    fn resultant_matches_sylvester_oracle_mod_7() {
        // Random cubics over F_7, resultant vs naive 6x6 determinant.
        use rand::{Rng, SeedableRng};
        let fld = PrimeField::new(7).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let mut f: Poly<u64> = (0..3).map(|_| rng.gen_range(0..7)).collect();
            f.push(rng.gen_range(1..7));
            let mut g: Poly<u64> = (0..3).map(|_| rng.gen_range(0..7)).collect();
            g.push(rng.gen_range(1..7));
            let got = resultant(&fld, &f, &g);
            let want = sylvester_det_oracle(7, &f, &g);
            assert_eq!(got, want, "f={:?} g={:?}", f, g);
        }
    }

    #[test]
    fn resultant_zero_iff_common_factor() {
        let r = BigIntRing;
        // (x-2)(x+3) and (x-2)(x-7) share x-2.
        let f = mul(&r, &zp(&[-2, 1]), &zp(&[3, 1]));
        let g = mul(&r, &zp(&[-2, 1]), &zp(&[-7, 1]));
        assert_eq!(resultant(&r, &f, &g), BigInt::from(0));
        let h = zp(&[1, 1]);
        assert_ne!(resultant(&r, &f, &h), BigInt::from(0));
    }

    #[test]
    fn ext_gcd_identity() {
        let f = PrimeField::new(13).unwrap();
        let a: Poly<u64> = vec![1, 0, 0, 1]; // x^3 + 1
        let b: Poly<u64> = vec![2, 1]; // x + 2
        let (g, u, v) = ext_gcd(&f, &a, &b);
        let lhs = add(&f, &mul(&f, &u, &a), &mul(&f, &v, &b));
        assert_eq!(lhs, g);
    }

    #[test]
    fn bivariate_resultant_via_polyring() {
        // Res_x(x^2 - y, x - y) in Z[y] = y^2 - y.
        let ring = PolyRing::new(BigIntRing);
        let f: Poly<Poly<BigInt>> = vec![zp(&[0, -1]), zp(&[]), zp(&[1])];
        let g: Poly<Poly<BigInt>> = vec![zp(&[0, -1]), zp(&[1])];
        let res = resultant(&ring, &f, &g);
        assert_eq!(res, zp(&[0, -1, 1]));
    }
}
