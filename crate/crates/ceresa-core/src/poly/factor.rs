//! Univariate factorization over finite fields: squarefree decomposition,
//! distinct-degree splitting via x^(q^d) mod f, then equal-degree splitting
//! by random gcds (Cantor-Zassenhaus).  All randomness is drawn from a
//! caller-supplied seed so runs are reproducible.

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fp::FiniteField;
use crate::poly::uni::{self, Poly};

/// Derive a per-instance rng seed from a run-level seed and the polynomial
/// itself, so parallel execution order cannot change any result.
fn instance_rng<F: FiniteField>(f: &F, poly: &Poly<F::E>, seed: u64) -> ChaCha8Rng {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};
    let mut h = DefaultHasher::new();
    seed.hash(&mut h);
    f.order().to_bytes_le().hash(&mut h);
    for c in poly {
        f.elem_key(c).hash(&mut h);
    }
    ChaCha8Rng::seed_from_u64(h.finish())
}

/// Squarefree decomposition of a monic polynomial: pairwise coprime monic
/// squarefree parts with multiplicities; the product with multiplicities
/// reproduces the input.
pub fn squarefree_decomposition<F: FiniteField>(
    f: &F,
    poly: &Poly<F::E>,
) -> Vec<(Poly<F::E>, usize)> {
    assert!(!poly.is_empty());
    let mut out = Vec::new();
    sqfree_rec(f, &uni::monic(f, poly), 1, &mut out);
    out.sort_by_key(|(p, m)| (*m, p.len(), p.iter().map(|c| f.elem_key(c)).collect::<Vec<_>>()));
    out
}

fn sqfree_rec<F: FiniteField>(
    f: &F,
    poly: &Poly<F::E>,
    mult: usize,
    out: &mut Vec<(Poly<F::E>, usize)>,
) {
    if uni::deg(poly) == Some(0) || poly.is_empty() {
        return;
    }
    let p = f.characteristic() as usize;
    let d = uni::derivative(f, poly);
    if d.is_empty() {
        // poly = g(x^p); take p-th roots of coefficients.
        let q = f.order();
        let root_exp = &q / BigUint::from(p);
        let mut g = Vec::new();
        for (i, c) in poly.iter().enumerate() {
            if i % p == 0 {
                g.push(elem_pow(f, c, &root_exp));
            } else {
                assert!(f.is_zero(c), "derivative zero but stray coefficient");
            }
        }
        sqfree_rec(f, &g, mult * p, out);
        return;
    }
    let mut c = uni::gcd(f, poly, &d);
    let mut w = uni::divrem(f, poly, &c).0;
    let mut i = 1usize;
    while uni::deg(&w) != Some(0) {
        let y = uni::gcd(f, &w, &c);
        let z = uni::divrem(f, &w, &y).0;
        if uni::deg(&z) != Some(0) {
            out.push((z, mult * i));
        }
        w = y;
        c = uni::divrem(f, &c, &w).0;
        i += 1;
    }
    if uni::deg(&c) != Some(0) {
        // Remaining part is a p-th power.
        sqfree_rec(f, &c, mult, out);
    }
}

fn elem_pow<F: FiniteField>(f: &F, a: &F::E, e: &BigUint) -> F::E {
    let mut acc = f.one();
    let mut base = a.clone();
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            acc = f.mul(&acc, &base);
        }
        if i + 1 < bits {
            base = f.mul(&base, &base);
        }
    }
    if bits == 0 {
        f.one()
    } else {
        acc
    }
}

/// Distinct-degree decomposition of a monic squarefree polynomial: list of
/// (product of all irreducible factors of degree d, d).
pub fn distinct_degree<F: FiniteField>(f: &F, poly: &Poly<F::E>) -> Vec<(Poly<F::E>, usize)> {
    let q = f.order();
    let mut out = Vec::new();
    let mut rest = uni::monic(f, poly);
    let mut h = uni::x(f);
    let mut d = 0usize;
    while uni::deg(&rest).map_or(false, |dg| dg >= 1) {
        d += 1;
        if uni::deg(&rest) == Some(d) {
            out.push((rest.clone(), d));
            break;
        }
        if 2 * d > uni::deg(&rest).unwrap() {
            let dg = uni::deg(&rest).unwrap();
            out.push((rest.clone(), dg));
            break;
        }
        h = uni::modpow(f, &h, &q, &rest);
        let hx = uni::sub(f, &h, &uni::x(f));
        let g = uni::gcd(f, &hx, &rest);
        if uni::deg(&g).map_or(false, |dg| dg >= 1) {
            out.push((g.clone(), d));
            rest = uni::divrem(f, &rest, &g).0;
            h = uni::rem(f, &h, &rest);
        }
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting: factor a monic squarefree
/// product of degree-d irreducibles into the irreducibles.
pub fn equal_degree<F: FiniteField>(
    f: &F,
    poly: &Poly<F::E>,
    d: usize,
    seed: u64,
) -> Vec<Poly<F::E>> {
    let mut rng = instance_rng(f, poly, seed);
    let mut stack = vec![poly.clone()];
    let mut out = Vec::new();
    let q = f.order();
    let qd_minus_1_half: BigUint = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    while let Some(g) = stack.pop() {
        let dg = uni::deg(&g).unwrap();
        if dg == d {
            out.push(g);
            continue;
        }
        // Random splitting attempt.
        loop {
            let a: Poly<F::E> = {
                let mut v: Poly<F::E> = (0..dg).map(|_| f.random_elem(&mut rng)).collect();
                uni::trim(f, &mut v);
                v
            };
            if uni::deg(&a).map_or(true, |da| da < 1) {
                continue;
            }
            let b = uni::modpow(f, &a, &qd_minus_1_half, &g);
            let b1 = uni::sub(f, &b, &uni::constant(f, f.one()));
            let h = uni::gcd(f, &b1, &g);
            let dh = uni::deg(&h);
            if dh.map_or(false, |x| x >= 1) && dh.unwrap() < dg {
                let other = uni::divrem(f, &g, &h).0;
                stack.push(h);
                stack.push(other);
                break;
            }
        }
    }
    out.sort_by_key(|p| (p.len(), p.iter().map(|c| f.elem_key(c)).collect::<Vec<_>>()));
    out
}

/// Full factorization of a nonzero polynomial over a finite field.
/// Returns (leading coefficient, sorted list of (monic irreducible, mult)).
pub fn factor<F: FiniteField>(
    f: &F,
    poly: &Poly<F::E>,
    seed: u64,
) -> (F::E, Vec<(Poly<F::E>, usize)>) {
    assert!(!poly.is_empty(), "factor of zero polynomial");
    let lead = uni::lc(poly);
    if poly.len() == 1 {
        return (lead, vec![]);
    }
    let mut out = Vec::new();
    for (sq, mult) in squarefree_decomposition(f, poly) {
        for (dd, d) in distinct_degree(f, &sq) {
            for irr in equal_degree(f, &dd, d, seed) {
                out.push((irr, mult));
            }
        }
    }
    out.sort_by_key(|(p, _)| (p.len(), p.iter().map(|c| f.elem_key(c)).collect::<Vec<_>>()));
    (lead, out)
}

/// Distinct roots in the field, sorted by the fixed element ordering.
pub fn roots<F: FiniteField>(f: &F, poly: &Poly<F::E>, seed: u64) -> Vec<F::E> {
    assert!(!poly.is_empty());
    if poly.len() == 1 {
        return vec![];
    }
    let q = f.order();
    // Split part: gcd(x^q - x, poly).
    let xq = uni::modpow(f, &uni::x(f), &q, poly);
    let diff = uni::sub(f, &xq, &uni::x(f));
    let split = uni::gcd(f, &diff, poly);
    if uni::deg(&split).map_or(true, |d| d == 0) {
        return vec![];
    }
    let mut rs: Vec<F::E> = equal_degree(f, &split, 1, seed)
        .into_iter()
        .map(|lin| f.neg(&lin[0]))
        .collect();
    rs.sort_by_key(|r| f.elem_key(r));
    rs
}

/// Number of distinct roots in the field: deg gcd(f, x^q - x), computed via
/// square-and-multiply of x modulo f (x^q is never materialized).
pub fn count_roots_in_field<F: FiniteField>(f: &F, poly: &Poly<F::E>) -> usize {
    assert!(!poly.is_empty());
    if poly.len() == 1 {
        return 0;
    }
    let q = f.order();
    let xq = uni::modpow(f, &uni::x(f), &q, poly);
    let diff = uni::sub(f, &xq, &uni::x(f));
    let g = uni::gcd(f, &diff, poly);
    uni::deg(&g).unwrap_or(0)
}

/// Irreducibility test for a polynomial of degree >= 1 (Rabin's test).
pub fn is_irreducible<F: FiniteField>(f: &F, poly: &Poly<F::E>) -> bool {
    let n = match uni::deg(poly) {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    let q = f.order();
    let m = uni::monic(f, poly);
    // x^(q^n) == x mod f
    let mut h = uni::x(f);
    for _ in 0..n {
        h = uni::modpow(f, &h, &q, &m);
    }
    if h != uni::x(f) {
        return false;
    }
    // gcd(x^(q^(n/l)) - x, f) = 1 for each prime l | n.
    let mut primes = Vec::new();
    let mut nn = n;
    let mut p = 2;
    while p * p <= nn {
        if nn % p == 0 {
            primes.push(p);
            while nn % p == 0 {
                nn /= p;
            }
        }
        p += 1;
    }
    if nn > 1 {
        primes.push(nn);
    }
    for l in primes {
        let e = n / l;
        let mut h = uni::x(f);
        for _ in 0..e {
            h = uni::modpow(f, &h, &q, &m);
        }
        let diff = uni::sub(f, &h, &uni::x(f));
        let g = uni::gcd(f, &diff, &m);
        if uni::deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Square root in the field via factorization of t^2 - a; None for
/// non-squares.  Returns the root with the smaller element key.
pub fn sqrt_in_field<F: FiniteField>(f: &F, a: &F::E, seed: u64) -> Option<F::E> {
    if f.is_zero(a) {
        return Some(f.zero());
    }
    let poly = vec![f.neg(a), f.zero(), f.one()];
    let rs = roots(f, &poly, seed);
    rs.into_iter().next()
}
