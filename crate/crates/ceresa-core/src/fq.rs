//! Extension fields F_(p^k).  Elements are dense coefficient vectors of
//! length k modulo a monic irreducible modulus over F_p.  The standard field
//! for (p, k) uses the lexicographically smallest monic irreducible of degree
//! k (coefficients compared constant term first), so runs are reproducible;
//! closed points arising from factorizations may instead carry their own
//! modulus.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use rand::Rng;

use crate::fp::{Field, FiniteField, PrimeField, Ring};
use crate::poly::factor as pfactor;
use crate::poly::uni::{self, Poly};
use crate::{Error, Result};

/// Context for F_(p^k) = F_p[t]/(modulus).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqCtx {
    pub fp: PrimeField,
    pub k: usize,
    /// Monic, length k+1, coefficients low-to-high.
    pub modulus: Vec<u64>,
}

pub type FqElem = Vec<u64>;

impl FqCtx {
    /// The standard extension of degree k: deterministic lexicographically
    /// smallest monic irreducible modulus.
    pub fn make_extension(p: u64, k: usize) -> Result<Arc<FqCtx>> {
        let fp = PrimeField::new(p)?;
        if k == 0 {
            return Err(Error::Precondition("extension degree must be >= 1".into()));
        }
        static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<FqCtx>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(ctx) = cache.lock().unwrap().get(&(p, k)) {
            return Ok(ctx.clone());
        }
        let modulus = lex_min_irreducible(fp, k);
        let ctx = Arc::new(FqCtx { fp, k, modulus });
        cache.lock().unwrap().insert((p, k), ctx.clone());
        Ok(ctx)
    }

    /// Wrap an explicit monic irreducible modulus (checked).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<FqCtx> {
        let fp = PrimeField::new(p)?;
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::Precondition("modulus must be monic of degree >= 1".into()));
        }
        if !pfactor::is_irreducible(&fp, &modulus) {
            return Err(Error::Precondition("modulus is reducible".into()));
        }
        Ok(FqCtx { fp, k: modulus.len() - 1, modulus })
    }

    /// Wrap a modulus already known to be irreducible (factorization output).
    pub fn with_modulus_unchecked(fp: PrimeField, modulus: Vec<u64>) -> FqCtx {
        debug_assert!(modulus.len() >= 2 && *modulus.last().unwrap() == 1);
        FqCtx { k: modulus.len() - 1, fp, modulus }
    }

    pub fn p(&self) -> u64 {
        self.fp.p
    }

    /// Lift an F_p scalar into this field.
    pub fn scalar(&self, c: u64) -> FqElem {
        let mut v = vec![0; self.k];
        v[0] = c % self.fp.p;
        v
    }

    /// The class of t (the field generator).
    pub fn gen(&self) -> FqElem {
        let mut v = vec![0; self.k];
        if self.k == 1 {
            // t is a root of the linear modulus: t = -c0.
            v[0] = self.fp.neg(&self.modulus[0]);
        } else {
            v[1] = 1;
        }
        v
    }

    fn from_poly(&self, mut v: Poly<u64>) -> FqElem {
        // Reduce mod modulus, then pad to length k.
        while v.len() > self.k {
            let c = v.pop().unwrap();
            if c == 0 {
                continue;
            }
            let shift = v.len() - self.k;
            for j in 0..self.k {
                let t = self.fp.mul(&c, &self.modulus[j]);
                v[shift + j] = self.fp.sub(&v[shift + j], &t);
            }
        }
        v.resize(self.k, 0);
        v
    }

    /// View as a polynomial (trailing zeros trimmed).
    pub fn to_poly(&self, a: &FqElem) -> Poly<u64> {
        let mut v = a.clone();
        uni::trim(&self.fp, &mut v);
        v
    }

    pub fn pow(&self, a: &FqElem, e: &BigUint) -> FqElem {
        use num_traits::Zero;
        if e.is_zero() {
            return self.one();
        }
        let mut acc = self.one();
        let mut base = a.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = self.mul(&acc, &base);
            }
            if i + 1 < bits {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn pow_u64(&self, a: &FqElem, e: u64) -> FqElem {
        self.pow(a, &BigUint::from(e))
    }

    /// x^(p^i); frobenius_power(x, k) = x.
    pub fn frobenius_power(&self, a: &FqElem, i: usize) -> FqElem {
        let mut out = a.clone();
        let p = BigUint::from(self.fp.p);
        for _ in 0..(i % self.k.max(1)) {
            out = self.pow(&out, &p);
        }
        out
    }

    /// Multiplicative order of a nonzero element (divides p^k - 1).
    pub fn mult_order(&self, a: &FqElem) -> BigUint {
        use num_traits::One;
        assert!(!self.is_zero(a));
        let group = self.order() - BigUint::one();
        let f = crate::arith::factor_integer(&num_bigint::BigInt::from(group.clone())).unwrap();
        let mut ord = group.clone();
        for (prime, e) in &f.exponents {
            for _ in 0..*e {
                let cand = &ord / prime;
                if self.pow(a, &cand) == self.one() {
                    ord = cand;
                } else {
                    break;
                }
            }
        }
        ord
    }

    /// The minimal subfield degree d | k over F_p containing `a`.
    pub fn subfield_degree(&self, a: &FqElem) -> usize {
        for d in 1..=self.k {
            if self.k % d != 0 {
                continue;
            }
            // a in F_{p^d} iff a^(p^d) = a.
            if self.frobenius_power(a, d) == *a {
                return d;
            }
        }
        self.k
    }
}

/// Lexicographically smallest monic irreducible of degree k over F_p,
/// scanning coefficient vectors (c_0, ..., c_{k-1}) in increasing
/// lexicographic order (constant term is the most significant position).
fn lex_min_irreducible(fp: PrimeField, k: usize) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1]; // t
    }
    let p = fp.p;
    let mut digits = vec![0u64; k]; // digits[0] = c_0
    loop {
        // Skip c_0 = 0 entirely: t divides the candidate.
        if digits[0] != 0 {
            let mut cand: Vec<u64> = digits.clone();
            cand.push(1);
            if pfactor::is_irreducible(&fp, &cand) {
                return cand;
            }
        }
        // Odometer: last coordinate fastest.
        let mut i = k - 1;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            assert!(i > 0, "no irreducible of degree {} over F_{}", k, p);
            i -= 1;
        }
    }
}

impl Ring for FqCtx {
    type E = FqElem;

    fn zero(&self) -> FqElem {
        vec![0; self.k]
    }
    fn one(&self) -> FqElem {
        self.scalar(1)
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.iter().zip(b).map(|(x, y)| self.fp.add(x, y)).collect()
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.iter().zip(b).map(|(x, y)| self.fp.sub(x, y)).collect()
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        a.iter().map(|x| self.fp.neg(x)).collect()
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        if self.k == 1 {
            return vec![self.fp.mul(&a[0], &b[0])];
        }
        let mut prod = vec![0u64; 2 * self.k - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if *y == 0 {
                    continue;
                }
                let t = self.fp.mul(x, y);
                prod[i + j] = self.fp.add(&prod[i + j], &t);
            }
        }
        self.from_poly(prod)
    }
    fn exact_div(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.mul(a, &self.inv(b))
    }
}

impl Field for FqCtx {
    fn inv(&self, a: &FqElem) -> FqElem {
        assert!(!self.is_zero(a), "division by zero in F_{}^{}", self.fp.p, self.k);
        let ap = self.to_poly(a);
        let (g, u, _) = uni::ext_gcd(&self.fp, &ap, &self.modulus);
        assert_eq!(uni::deg(&g), Some(0), "modulus not coprime to element");
        self.from_poly(u)
    }
}

impl FiniteField for FqCtx {
    fn order(&self) -> BigUint {
        BigUint::from(self.fp.p).pow(self.k as u32)
    }
    fn characteristic(&self) -> u64 {
        self.fp.p
    }
    fn random_elem<R: Rng>(&self, rng: &mut R) -> FqElem {
        (0..self.k).map(|_| rng.gen_range(0..self.fp.p)).collect()
    }
    fn elem_key(&self, a: &FqElem) -> Vec<u64> {
        a.clone()
    }
    fn from_u64(&self, n: u64) -> FqElem {
        self.scalar(n)
    }
    fn frobenius(&self, a: &FqElem) -> FqElem {
        self.frobenius_power(a, 1)
    }
}

/// An embedding F_{p^a} -> F_{p^b} (a | b), computed once per field pair by
/// sending the source generator to the smallest root of the source modulus
/// in the target (fixed element ordering).
#[derive(Debug, Clone)]
pub struct Embedding {
    /// Powers of the chosen root: gen_image^i for i < a.
    gen_powers: Vec<FqElem>,
    pub target_k: usize,
}

impl Embedding {
    pub fn new(src: &FqCtx, dst: &FqCtx) -> Result<Embedding> {
        if src.fp.p != dst.fp.p {
            return Err(Error::Precondition("embedding across characteristics".into()));
        }
        if dst.k % src.k != 0 {
            return Err(Error::Precondition(format!(
                "no embedding F_p^{} -> F_p^{}",
                src.k, dst.k
            )));
        }
        // Same presentation: the identity map.
        let root = if src.modulus == dst.modulus {
            dst.gen()
        } else {
            // Lift the source modulus to the target and take its smallest root.
            let lifted: Poly<FqElem> = src.modulus.iter().map(|&c| dst.scalar(c)).collect();
            let rs = pfactor::roots(dst, &lifted, 0x5eed);
            rs.into_iter()
                .next()
                .ok_or_else(|| Error::Internal("modulus has no root in target field".into()))?
        };
        let mut gen_powers = Vec::with_capacity(src.k);
        let mut acc = dst.one();
        for _ in 0..src.k {
            gen_powers.push(acc.clone());
            acc = dst.mul(&acc, &root);
        }
        Ok(Embedding { gen_powers, target_k: dst.k })
    }

    pub fn apply(&self, dst: &FqCtx, a: &FqElem) -> FqElem {
        let mut out = dst.zero();
        for (i, c) in a.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let t = dst.mul(&self.gen_powers[i], &dst.scalar(*c));
            out = dst.add(&out, &t);
        }
        out
    }
}
