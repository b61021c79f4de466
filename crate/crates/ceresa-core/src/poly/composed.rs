//! Composed products: the monic integer polynomial whose roots are all
//! pairwise products of the roots of two monic integer polynomials, built
//! through a bivariate resultant.

use num_bigint::BigInt;
use num_traits::One;

use crate::fp::{BigIntRing, Ring};
use crate::poly::uni::{self, Poly, PolyRing};
use crate::{Error, Result};

/// Roots of the result = { alpha * beta : f(alpha) = 0, g(beta) = 0 }, with
/// multiplicity; computed as Res_x(f(x), x^(deg g) g(y/x)) in y.
pub fn composed_product(f: &Poly<BigInt>, g: &Poly<BigInt>) -> Result<Poly<BigInt>> {
    let r = BigIntRing;
    let df = uni::deg(f).ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
    let dg = uni::deg(g).ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
    if !f[df].is_one() || !g[dg].is_one() {
        return Err(Error::Precondition("composed product requires monic inputs".into()));
    }
    // x^(deg g) * g(y/x) = sum_i g_i y^i x^(deg g - i): a polynomial in x
    // whose coefficients are monomials in y.
    let ring = PolyRing::new(r);
    let mut gstar: Poly<Poly<BigInt>> = vec![ring.zero(); dg + 1];
    for (i, c) in g.iter().enumerate() {
        // coefficient of x^(dg - i) is g_i y^i
        gstar[dg - i] = uni::monomial(&r, c.clone(), i);
    }
    let fx: Poly<Poly<BigInt>> = f.iter().map(|c| uni::constant(&r, c.clone())).collect();
    let res = uni::resultant(&ring, &fx, &gstar);
    let mut out = res;
    uni::trim(&r, &mut out);
    debug_assert_eq!(uni::deg(&out), Some(df * dg));
    debug_assert!(out[df * dg].is_one());
    Ok(out)
}

/// Specialized evaluation of the composed product at an integer without
/// materializing the bivariate result: Res_x(f(x), sum_i g_i t^i x^(dg-i)).
pub fn composed_product_eval(f: &Poly<BigInt>, g: &Poly<BigInt>, t: &BigInt) -> Result<BigInt> {
    let r = BigIntRing;
    let df = uni::deg(f).ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
    let dg = uni::deg(g).ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
    if !f[df].is_one() || !g[dg].is_one() {
        return Err(Error::Precondition("composed product requires monic inputs".into()));
    }
    let mut gt: Poly<BigInt> = vec![r.zero(); dg + 1];
    let mut tpow = BigInt::one();
    for (i, c) in g.iter().enumerate() {
        gt[dg - i] = c * &tpow;
        tpow *= t;
    }
    uni::trim(&r, &mut gt);
    if gt.is_empty() {
        return Ok(r.zero());
    }
    Ok(uni::resultant(&r, f, &gt))
}
