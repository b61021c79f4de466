//! Sparse polynomials in three variables over a ring context.  Exponent
//! vectors are [x, y, z] powers; no zero coefficients are stored.

use std::collections::BTreeMap;

use crate::fp::Ring;
use crate::poly::uni::{self, Poly};

/// Sparse ternary polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly<E> {
    pub terms: BTreeMap<[u16; 3], E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> MPoly<E> {
    pub fn zero() -> Self {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_terms<R: Ring<E = E>>(r: &R, terms: impl IntoIterator<Item = ([u16; 3], E)>) -> Self {
        let mut out = MPoly::zero();
        for (k, v) in terms {
            out.add_term(r, k, v);
        }
        out
    }

    pub fn constant<R: Ring<E = E>>(r: &R, c: E) -> Self {
        let mut out = MPoly::zero();
        out.add_term(r, [0, 0, 0], c);
        out
    }

    pub fn var<R: Ring<E = E>>(r: &R, i: usize) -> Self {
        let mut k = [0u16; 3];
        k[i] = 1;
        let mut out = MPoly::zero();
        out.add_term(r, k, r.one());
        out
    }

    pub fn add_term<R: Ring<E = E>>(&mut self, r: &R, k: [u16; 3], v: E) {
        if r.is_zero(&v) {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = r.add(e.get(), &v);
                if r.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add<R: Ring<E = E>>(&self, r: &R, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(r, *k, v.clone());
        }
        out
    }

    pub fn sub<R: Ring<E = E>>(&self, r: &R, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(r, *k, r.neg(v));
        }
        out
    }

    pub fn neg<R: Ring<E = E>>(&self, r: &R) -> Self {
        MPoly { terms: self.terms.iter().map(|(k, v)| (*k, r.neg(v))).collect() }
    }

    pub fn mul<R: Ring<E = E>>(&self, r: &R, other: &Self) -> Self {
        let mut out = MPoly::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let k = [ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]];
                out.add_term(r, k, r.mul(va, vb));
            }
        }
        out
    }

    pub fn mul_scalar<R: Ring<E = E>>(&self, r: &R, c: &E) -> Self {
        if r.is_zero(c) {
            return MPoly::zero();
        }
        let mut out = MPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(r, *k, r.mul(v, c));
        }
        out
    }

    pub fn pow<R: Ring<E = E>>(&self, r: &R, e: usize) -> Self {
        let mut acc = MPoly::constant(r, r.one());
        for _ in 0..e {
            acc = acc.mul(r, self);
        }
        acc
    }

    pub fn total_degree(&self) -> Option<u16> {
        self.terms.keys().map(|k| k[0] + k[1] + k[2]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|k| k[0] + k[1] + k[2]);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Partial derivative with respect to variable i.
    pub fn derivative<R: Ring<E = E>>(&self, r: &R, i: usize) -> Self {
        let mut out = MPoly::zero();
        for (k, v) in &self.terms {
            if k[i] == 0 {
                continue;
            }
            let mut nk = *k;
            nk[i] -= 1;
            // multiply coefficient by k[i]
            let mut m = r.zero();
            let mut e = k[i] as u64;
            let mut base = v.clone();
            while e > 0 {
                if e & 1 == 1 {
                    m = r.add(&m, &base);
                }
                base = r.add(&base, &base);
                e >>= 1;
            }
            out.add_term(r, nk, m);
        }
        out
    }

    pub fn eval<R: Ring<E = E>>(&self, r: &R, at: &[E; 3]) -> E {
        let mut acc = r.zero();
        for (k, v) in &self.terms {
            let mut t = v.clone();
            for i in 0..3 {
                for _ in 0..k[i] {
                    t = r.mul(&t, &at[i]);
                }
            }
            acc = r.add(&acc, &t);
        }
        acc
    }

    /// Substitute each variable by a polynomial (general composition).
    pub fn compose<R: Ring<E = E>>(&self, r: &R, args: &[MPoly<E>; 3]) -> Self {
        // Precompute powers of each argument as needed.
        let max = |i: usize| self.terms.keys().map(|k| k[i]).max().unwrap_or(0) as usize;
        let pows = |arg: &MPoly<E>, m: usize| -> Vec<MPoly<E>> {
            let mut v = Vec::with_capacity(m + 1);
            v.push(MPoly::constant(r, r.one()));
            for i in 1..=m {
                let prev = v[i - 1].clone();
                v.push(prev.mul(r, arg));
            }
            v
        };
        let px = pows(&args[0], max(0));
        let py = pows(&args[1], max(1));
        let pz = pows(&args[2], max(2));
        let mut out = MPoly::zero();
        for (k, v) in &self.terms {
            let t = px[k[0] as usize]
                .mul(r, &py[k[1] as usize])
                .mul(r, &pz[k[2] as usize])
                .mul_scalar(r, v);
            out = out.add(r, &t);
        }
        out
    }

    /// Apply an invertible linear substitution: p(M * (x,y,z)^T), rows of M
    /// give the images of x, y, z as linear forms.
    pub fn linear_substitution<R: Ring<E = E>>(&self, r: &R, m: &[[E; 3]; 3]) -> Self {
        let lin = |row: &[E; 3]| {
            let mut f = MPoly::zero();
            for (i, c) in row.iter().enumerate() {
                let mut k = [0u16; 3];
                k[i] = 1;
                f.add_term(r, k, c.clone());
            }
            f
        };
        self.compose(r, &[lin(&m[0]), lin(&m[1]), lin(&m[2])])
    }

    /// Map coefficients through a function into another ring.
    pub fn map_coeffs<E2: Clone + PartialEq + std::fmt::Debug, R2: Ring<E = E2>>(
        &self,
        r2: &R2,
        f: impl Fn(&E) -> E2,
    ) -> MPoly<E2> {
        let mut out = MPoly::zero();
        for (k, v) in &self.terms {
            out.add_term(r2, *k, f(v));
        }
        out
    }

    /// View as a univariate polynomial in variable `var` with coefficients
    /// that are polynomials in the one remaining variable, after setting
    /// variable `set_one` to 1.  The remaining variable is the third one.
    pub fn to_bivariate<R: Ring<E = E>>(&self, r: &R, var: usize, set_one: usize) -> Poly<Poly<E>> {
        assert_ne!(var, set_one);
        let other = 3 - var - set_one;
        let mut out: Poly<Poly<E>> = Vec::new();
        for (k, v) in &self.terms {
            let dx = k[var] as usize;
            let dy = k[other] as usize;
            while out.len() <= dx {
                out.push(Vec::new());
            }
            while out[dx].len() <= dy {
                out[dx].push(r.zero());
            }
            out[dx][dy] = r.add(&out[dx][dy], v);
        }
        for c in out.iter_mut() {
            uni::trim(r, c);
        }
        while out.last().map_or(false, |c| c.is_empty()) {
            out.pop();
        }
        out
    }

    /// Fully substitute one variable by a ring constant.
    pub fn substitute_var<R: Ring<E = E>>(&self, r: &R, var: usize, value: &E) -> MPoly<E> {
        let mut out = MPoly::zero();
        for (k, v) in &self.terms {
            let mut c = v.clone();
            for _ in 0..k[var] {
                c = r.mul(&c, value);
            }
            let mut nk = *k;
            nk[var] = 0;
            out.add_term(r, nk, c);
        }
        out
    }
}

/// Resultant of two ternary forms with respect to `var`, taken in the affine
/// chart where `set_one` is 1: both inputs are viewed as univariate in `var`
/// with coefficients in R[the remaining variable], and the result is a
/// univariate polynomial in that remaining variable.
pub fn resultant_wrt<R: Ring + Clone>(
    r: &R,
    f: &MPoly<R::E>,
    g: &MPoly<R::E>,
    var: usize,
    set_one: usize,
) -> Poly<R::E>
where
    R::E: Clone + PartialEq + std::fmt::Debug,
{
    let fb = f.to_bivariate(r, var, set_one);
    let gb = g.to_bivariate(r, var, set_one);
    let ring = uni::PolyRing::new(r.clone());
    uni::resultant(&ring, &fb, &gb)
}

/// Gcd of all coefficients of a univariate polynomial over a field-free ring
/// is ring-specific; this helper is for BigInt content reduction of MPoly.
pub fn content_bigint(p: &MPoly<num_bigint::BigInt>) -> num_bigint::BigInt {
    use num_integer::Integer;
    use num_traits::Zero;
    let mut g = num_bigint::BigInt::zero();
    for v in p.terms.values() {
        g = g.gcd(v);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fp::{BigIntRing, PrimeField};
    use num_bigint::BigInt;

    #[test]
    fn mul_and_derivative() {
        let r = PrimeField::new(7).unwrap();
        let x = MPoly::var(&r, 0);
        let y = MPoly::var(&r, 1);
        let f = x.mul(&r, &x).add(&r, &y); // x^2 + y
        let fx = f.derivative(&r, 0);
        assert_eq!(fx, x.mul_scalar(&r, &2));
    }

    #[test]
    fn linear_substitution_composes() {
        let r = BigIntRing;
        let x = MPoly::var(&r, 0);
        let y = MPoly::var(&r, 1);
        let z = MPoly::var(&r, 2);
        let f = x.mul(&r, &y).add(&r, &z.pow(&r, 2));
        let id = [
            [BigInt::from(1), BigInt::from(0), BigInt::from(0)],
            [BigInt::from(0), BigInt::from(1), BigInt::from(0)],
            [BigInt::from(0), BigInt::from(0), BigInt::from(1)],
        ];
        assert_eq!(f.linear_substitution(&r, &id), f);
        // swap y and z
        let swap = [
            [BigInt::from(1), BigInt::from(0), BigInt::from(0)],
            [BigInt::from(0), BigInt::from(0), BigInt::from(1)],
            [BigInt::from(0), BigInt::from(1), BigInt::from(0)],
        ];
        let g = f.linear_substitution(&r, &swap);
        let expect = x.mul(&r, &z).add(&r, &y.pow(&r, 2));
        assert_eq!(g, expect);
    }

    #[test]
    fn resultant_wrt_x() {
        // f = x^2 - y*z, g = x - y; Res_x in chart z=1: y^2 - y.
        let r = PrimeField::new(13).unwrap();
        let x = MPoly::var(&r, 0);
        let y = MPoly::var(&r, 1);
        let z = MPoly::var(&r, 2);
        let f = x.pow(&r, 2).sub(&r, &y.mul(&r, &z));
        let g = x.sub(&r, &y);
        let res = resultant_wrt(&r, &f, &g, 0, 2);
        // y^2 - y over F_13
        assert_eq!(res, vec![0u64, 12, 1]);
    }
}
