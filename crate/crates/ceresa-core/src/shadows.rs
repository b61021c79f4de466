//! Shadow divisors on a reduced quartic: the Frobenius shadow
//! (2g-2) X(F_p) - |X(F_p)| K_X, shadows of morphism graphs, and the
//! relative canonical shadow of a cyclic quotient.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::arith::factor_u64;
use crate::divisor::{CurveCtx, Divisor};
use crate::fp::{Field, FiniteField, PrimeField, Ring};
use crate::points::{projective_common_zeros, ClosedPoint, CommonZeros};
use crate::poly::factor as pfactor;
use crate::poly::multi::MPoly;
use crate::poly::uni;
use crate::zeta::LPolynomial;
use crate::{Error, Result};

/// The Frobenius shadow of a curve at its prime, with its order data.
#[derive(Debug, Clone)]
pub struct ShadowReport {
    pub p: u64,
    /// Number of rational points (the shadow is 4 X(F_p) - N K).
    pub rational_points: u64,
    /// Degree-0 shadow divisor.
    pub divisor: Divisor,
    /// Exact order of the class in Pic^0.
    pub order: u64,
    /// Factored order with all powers of p removed.
    pub stripped_order: BTreeMap<u64, u32>,
}

impl ShadowReport {
    pub fn stripped_order_value(&self) -> u64 {
        self.stripped_order.iter().fold(1u64, |acc, (p, e)| acc * p.pow(*e))
    }
}

/// The Frobenius shadow (2g-2) X(F_q) - |X(F_q)| K_X of the base change to
/// F_(p^degree), as an F_p-rational divisor, with its exact order (orders of
/// F_p-rational classes agree over every extension).  The supplied
/// L-polynomial is the base (degree 1) one.
pub fn frobenius_shadow_ext(
    ctx: &Arc<CurveCtx>,
    lpoly: &LPolynomial,
    degree: usize,
) -> Result<ShadowReport> {
    let p = ctx.fp.p;
    let points = ctx.extension_point_divisor(degree)?;
    let n = points.degree();
    let lq = lpoly.base_change(degree)?;
    debug_assert_eq!(num_bigint::BigInt::from(n), lq.predicted_count(1));
    if n == 0 {
        return Ok(ShadowReport {
            p,
            rational_points: 0,
            divisor: Divisor::zero(),
            order: 1,
            stripped_order: BTreeMap::new(),
        });
    }
    let k = ctx.canonical_divisor();
    let divisor = points.scale(4).sub(&k.scale(n));
    debug_assert_eq!(divisor.degree(), 0);
    let jac = lq
        .jacobian_order()
        .to_u64()
        .ok_or_else(|| Error::Internal("jacobian order exceeds u64".into()))?;
    let factored = factor_u64(jac);
    let res = ctx.class_order(&divisor, &factored)?;
    let mut stripped = factor_u64(res.order);
    stripped.remove(&p);
    Ok(ShadowReport {
        p,
        rational_points: n as u64,
        divisor,
        order: res.order,
        stripped_order: stripped,
    })
}

/// The Frobenius shadow over the base field itself.
pub fn frobenius_shadow(ctx: &Arc<CurveCtx>, lpoly: &LPolynomial) -> Result<ShadowReport> {
    frobenius_shadow_ext(ctx, lpoly, 1)
}

/// A self-morphism usable as a correspondence graph.
#[derive(Debug, Clone)]
pub enum GraphMorphism {
    Identity,
    Frobenius,
    /// An invertible 3x3 matrix over F_p that maps the curve to itself
    /// (row i is the image of the i-th coordinate).
    Linear([[u64; 3]; 3]),
}

/// The shadow Sh(Z_f, b) of the graph of f, pointed at a degree-1 divisor b:
/// (pi_1)_*(Z_f . Delta) - f(b) - f^(-1)(b) + (deg f + 1 - deg(Z_f . Delta)) b.
pub fn morphism_graph_shadow(
    ctx: &Arc<CurveCtx>,
    f: &GraphMorphism,
    b: &Divisor,
) -> Result<Divisor> {
    if b.degree() != 1 {
        return Err(Error::Precondition("base divisor must have degree 1".into()));
    }
    match f {
        GraphMorphism::Identity => {
            // (2g-2) b - K_X
            Ok(b.scale(4).sub(&ctx.canonical_divisor()))
        }
        GraphMorphism::Frobenius => {
            // X(F_p) - |X(F_p)| b
            let rational = ctx.rational_point_divisor();
            let n = rational.degree();
            Ok(rational.sub(&b.scale(n)))
        }
        GraphMorphism::Linear(m) => {
            if !is_automorphism(ctx, m)? {
                return Err(Error::Precondition("matrix does not preserve the curve".into()));
            }
            let fixed = fixed_point_divisor(ctx, m)?;
            let deg_fix = fixed.degree();
            let minv = invert_matrix(ctx.fp, m)?;
            let fb = apply_matrix_divisor(b, m);
            let finv_b = apply_matrix_divisor(b, &minv);
            // deg f = 1 for an automorphism.
            let shadow = fixed
                .sub(&fb)
                .sub(&finv_b)
                .add(&b.scale(1 + 1 - deg_fix));
            debug_assert_eq!(shadow.degree(), 0);
            Ok(shadow)
        }
    }
}

/// Relative canonical shadow of the quotient by the cyclic group generated
/// by a linear automorphism sigma of exact order n (in PGL_3):
/// -(2g_C - 2) phi^* K_C' - 2 phi^* phi_* (K_C) + (2 n g') K_C, with
/// phi^* K_C' realized as K_C - Ram by Riemann-Hurwitz and the
/// pullback-pushforward as the orbit sum of a fixed-point-avoiding line
/// section.
pub fn relative_canonical_shadow(
    ctx: &Arc<CurveCtx>,
    sigma: &[[u64; 3]; 3],
    n: usize,
) -> Result<RelativeCanonicalShadow> {
    if !is_automorphism(ctx, sigma)? {
        return Err(Error::Precondition("matrix does not preserve the curve".into()));
    }
    let fp = ctx.fp;
    // Powers of sigma, normalized projectively for order detection.
    let mut powers: Vec<[[u64; 3]; 3]> = vec![identity_matrix()];
    let mut acc = *sigma;
    for _ in 1..n {
        powers.push(acc);
        acc = mat_mul(fp, &acc, sigma);
    }
    if !is_scalar_matrix(fp, &acc) {
        return Err(Error::Precondition(format!("automorphism does not have order {}", n)));
    }
    if powers[1..].iter().any(|m| is_scalar_matrix(fp, m)) {
        return Err(Error::Precondition("automorphism order is smaller than stated".into()));
    }
    // Stabilizer orders from the fixed loci of the nontrivial powers.
    let mut stab: BTreeMap<ClosedPoint, usize> = BTreeMap::new();
    for m in &powers[1..] {
        for pt in fixed_points_on_curve(ctx, m)? {
            *stab.entry(pt).or_insert(1) += 1;
        }
    }
    let mut ram = Divisor::zero();
    for (pt, e) in &stab {
        ram.add_point(pt.clone(), (*e as i64) - 1);
    }
    let deg_ram = ram.degree();
    // Riemann-Hurwitz: 4 = n (2g' - 2) + deg Ram.
    let num = 4 - deg_ram + 2 * n as i64;
    if num % (2 * n as i64) != 0 {
        return Err(Error::Internal(format!(
            "Riemann-Hurwitz does not balance: deg Ram = {}",
            deg_ram
        )));
    }
    let g_quot = num / (2 * n as i64);
    // A line section avoiding every point with nontrivial stabilizer.
    let k_line = fixed_point_avoiding_line(ctx, stab.keys())?;
    let k = ctx.line_divisor(k_line)?;
    // Orbit sum sigma^i(K).
    let mut orbit = Divisor::zero();
    for m in &powers {
        orbit = orbit.add(&apply_matrix_divisor(&k, m));
    }
    let d0 = k
        .sub(&ram)
        .scale(-4)
        .sub(&orbit.scale(2))
        .add(&k.scale(2 * n as i64 * g_quot));
    debug_assert_eq!(d0.degree(), 0);
    Ok(RelativeCanonicalShadow { divisor: d0, quotient_genus: g_quot as usize, ramification_degree: deg_ram })
}

#[derive(Debug, Clone)]
pub struct RelativeCanonicalShadow {
    pub divisor: Divisor,
    pub quotient_genus: usize,
    pub ramification_degree: i64,
}

/// Deterministic degree-1 base divisor: closed points of smallest coprime
/// degrees a, b combined with the minimal-|u| Bezout coefficients.
pub fn base_point_divisor(ctx: &Arc<CurveCtx>) -> Result<Divisor> {
    let mut found: Vec<(usize, ClosedPoint)> = Vec::new();
    for d in 1..=8usize {
        if let Some(pt) = smallest_point_of_degree(ctx, d)? {
            found.push((d, pt));
            // gcd of available degrees
            let degs: Vec<usize> = found.iter().map(|(d, _)| *d).collect();
            let mut g = degs[0];
            for &e in &degs[1..] {
                g = gcd_usize(g, e);
            }
            if g == 1 {
                break;
            }
        }
    }
    if found.is_empty() {
        return Err(Error::Internal("no closed points of small degree".into()));
    }
    if found[0].0 == 1 {
        return Ok(Divisor::single(found[0].1.clone(), 1));
    }
    // Two coprime degrees a < b with u a + v b = 1, |u| minimal.
    for i in 0..found.len() {
        for j in (i + 1)..found.len() {
            let (a, pa) = (&found[i].0, &found[i].1);
            let (b, pb) = (&found[j].0, &found[j].1);
            if gcd_usize(*a, *b) != 1 {
                continue;
            }
            let (u, v) = bezout_min_u(*a as i64, *b as i64);
            let mut d = Divisor::single(pa.clone(), u);
            d.add_point(pb.clone(), v);
            debug_assert_eq!(d.degree(), 1);
            return Ok(d);
        }
    }
    Err(Error::Internal("no coprime point degrees found".into()))
}

fn gcd_usize(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_usize(b, a % b)
    }
}

/// u a + v b = 1 with |u| minimal.
fn bezout_min_u(a: i64, b: i64) -> (i64, i64) {
    // u ranges over a residue class mod b; pick the representative in
    // (-b/2, b/2].
    let (mut u, mut _v) = (0i64, 0i64);
    'outer: for cand in 0..b {
        for sign in [1i64, -1] {
            let uu = cand * sign;
            if (1 - uu * a) % b == 0 {
                u = uu;
                break 'outer;
            }
        }
    }
    let v = (1 - u * a) / b;
    (u, v)
}

/// The smallest (by canonical ordering) closed point of exact degree d.
fn smallest_point_of_degree(ctx: &Arc<CurveCtx>, d: usize) -> Result<Option<ClosedPoint>> {
    let fp = ctx.fp;
    if d == 1 {
        return Ok(ctx.rational_points().into_iter().min());
    }
    let fq = crate::fq::FqCtx::make_extension(fp.p, d)?;
    // Sweep (y : 1) lines in element order; for each, roots of the quartic
    // in x; keep points whose minimal field has degree exactly d.
    let mut best: Option<ClosedPoint> = None;
    let xforms = {
        let mut out = [[0u64; 5]; 5];
        for (i, mono) in MONOMIALS_REF.iter().enumerate() {
            out[mono[0] as usize][mono[1] as usize] = ctx.curve.coeffs()[i];
        }
        out
    };
    let mut counter = vec![0u64; d];
    loop {
        let y: crate::fq::FqElem = counter.clone();
        // quartic in x at (y, 1)
        let mut f: uni::Poly<crate::fq::FqElem> = Vec::with_capacity(5);
        let mut ypow = vec![fq.one()];
        for i in 1..5 {
            let t = fq.mul(&ypow[i - 1], &y);
            ypow.push(t);
        }
        for i in 0..5usize {
            let mut acc = fq.zero();
            for j in 0..=(4 - i) {
                let c = xforms[i][j];
                if c != 0 {
                    let t = fq.mul(&fq.scalar(c), &ypow[j]);
                    acc = fq.add(&acc, &t);
                }
            }
            f.push(acc);
        }
        uni::trim(&*fq, &mut f);
        if !f.is_empty() {
            for x in pfactor::roots(&*fq, &f, 0xba5e) {
                let pt = ClosedPoint::from_coords(&fq, [x, y.clone(), fq.one()]);
                if pt.degree() == d && best.as_ref().map_or(true, |b| pt < *b) {
                    best = Some(pt);
                }
            }
        }
        if best.is_some() {
            // Element order is the canonical order, so the first line that
            // produces a point cannot be beaten by later lines... points on
            // later lines can still be smaller (ordering mixes coordinates),
            // so keep scanning a little: stop after a full sweep.
        }
        let mut i = 0;
        loop {
            if i == d {
                break;
            }
            counter[i] += 1;
            if counter[i] < fp.p {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
        if i == d {
            break;
        }
    }
    // Also the line at infinity (y:z) = (1:0) and the point (1:0:0).
    let mut f: uni::Poly<crate::fq::FqElem> = Vec::with_capacity(5);
    for i in 0..5usize {
        let c = xforms[i][4 - i];
        f.push(fq.scalar(c));
    }
    uni::trim(&*fq, &mut f);
    if !f.is_empty() {
        for x in pfactor::roots(&*fq, &f, 0xba5e) {
            let pt = ClosedPoint::from_coords(&fq, [x, fq.one(), fq.zero()]);
            if pt.degree() == d && best.as_ref().map_or(true, |b| pt < *b) {
                best = Some(pt);
            }
        }
    }
    Ok(best)
}

use crate::quartic::MONOMIALS as MONOMIALS_REF;

fn identity_matrix() -> [[u64; 3]; 3] {
    [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
}

fn mat_mul(fp: PrimeField, a: &[[u64; 3]; 3], b: &[[u64; 3]; 3]) -> [[u64; 3]; 3] {
    let mut out = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0u64;
            for k in 0..3 {
                s = fp.add(&s, &fp.mul(&a[i][k], &b[k][j]));
            }
            out[i][j] = s;
        }
    }
    out
}

fn is_scalar_matrix(fp: PrimeField, m: &[[u64; 3]; 3]) -> bool {
    let d = m[0][0];
    if d == 0 {
        return false;
    }
    for i in 0..3 {
        for j in 0..3 {
            let expect = if i == j { d } else { 0 };
            if m[i][j] != expect {
                return false;
            }
        }
    }
    let _ = fp;
    true
}

fn invert_matrix(fp: PrimeField, m: &[[u64; 3]; 3]) -> Result<[[u64; 3]; 3]> {
    let mul = |a: u64, b: u64| fp.mul(&a, &b);
    let sub = |a: u64, b: u64| fp.sub(&a, &b);
    let cof = |r1: usize, c1: usize, r2: usize, c2: usize| {
        sub(mul(m[r1][c1], m[r2][c2]), mul(m[r1][c2], m[r2][c1]))
    };
    let det = {
        let t1 = mul(m[0][0], cof(1, 1, 2, 2));
        let t2 = mul(m[0][1], cof(1, 0, 2, 2));
        let t3 = mul(m[0][2], cof(1, 0, 2, 1));
        fp.add(&fp.sub(&t1, &t2), &t3)
    };
    if det == 0 {
        return Err(Error::Precondition("singular matrix".into()));
    }
    let dinv = fp.inv(&det);
    let adj = [
        [cof(1, 1, 2, 2), sub(mul(m[0][2], m[2][1]), mul(m[0][1], m[2][2])), cof(0, 1, 1, 2)],
        [sub(mul(m[1][2], m[2][0]), mul(m[1][0], m[2][2])), cof(0, 0, 2, 2), sub(mul(m[0][2], m[1][0]), mul(m[0][0], m[1][2]))],
        [cof(1, 0, 2, 1), sub(mul(m[0][1], m[2][0]), mul(m[0][0], m[2][1])), cof(0, 0, 1, 1)],
    ];
    let mut out = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = fp.mul(&adj[i][j], &dinv);
        }
    }
    Ok(out)
}

/// Does the substitution by M send the quartic to a scalar multiple of
/// itself?
pub fn is_automorphism(ctx: &Arc<CurveCtx>, m: &[[u64; 3]; 3]) -> Result<bool> {
    let sub = ctx.curve.apply_substitution(m);
    match sub {
        Ok(c2) => {
            // Compare up to scalar.
            let a = ctx.curve.coeffs();
            let b = c2.coeffs();
            let i = (0..15).find(|&i| a[i] != 0 || b[i] != 0).unwrap();
            if a[i] == 0 || b[i] == 0 {
                return Ok(false);
            }
            let fp = ctx.fp;
            let lambda = fp.mul(&b[i], &fp.inv(&a[i]));
            Ok((0..15).all(|j| fp.mul(&a[j], &lambda) == b[j]))
        }
        Err(_) => Ok(false),
    }
}

/// Pushforward of a divisor under the automorphism given by M.
pub fn apply_matrix_divisor(d: &Divisor, m: &[[u64; 3]; 3]) -> Divisor {
    let mut out = Divisor::zero();
    for (p, n) in d.iter() {
        out.add_point(p.apply_matrix(m), n);
    }
    out
}

/// Fixed closed points of the automorphism M on the curve (reduced set).
pub fn fixed_points_on_curve(
    ctx: &Arc<CurveCtx>,
    m: &[[u64; 3]; 3],
) -> Result<Vec<ClosedPoint>> {
    let fp = ctx.fp;
    // Image coordinate forms.
    let row = |i: usize| -> MPoly<u64> {
        MPoly::from_terms(
            &fp,
            [([1u16, 0, 0], m[i][0]), ([0, 1, 0], m[i][1]), ([0, 0, 1], m[i][2])],
        )
    };
    let mx = row(0);
    let my = row(1);
    let mz = row(2);
    let x = MPoly::var(&fp, 0);
    let y = MPoly::var(&fp, 1);
    let z = MPoly::var(&fp, 2);
    let minors = [
        x.mul(&fp, &my).sub(&fp, &y.mul(&fp, &mx)),
        x.mul(&fp, &mz).sub(&fp, &z.mul(&fp, &mx)),
        y.mul(&fp, &mz).sub(&fp, &z.mul(&fp, &my)),
    ];
    let first = minors
        .iter()
        .find(|q| !q.is_zero())
        .ok_or_else(|| Error::Precondition("matrix is scalar".into()))?;
    let candidates = match projective_common_zeros(fp, ctx.mpoly(), first, 0xf1fe) {
        CommonZeros::SharedComponent => {
            return Err(Error::Internal("quartic shares a component with a quadric".into()))
        }
        CommonZeros::Points(pts) => pts,
    };
    let mut out = Vec::new();
    'cand: for pt in candidates {
        let fq = pt.field();
        for q in &minors {
            if q.is_zero() {
                continue;
            }
            if !fq.is_zero(&pt.eval_form(q)) {
                continue 'cand;
            }
        }
        out.push(pt);
    }
    Ok(out)
}

/// The fixed-point divisor Z_sigma . Delta: each fixed point weighted by the
/// intersection multiplicity of the graph with the diagonal, computed from
/// the local series of the point and its image.
pub fn fixed_point_divisor(ctx: &Arc<CurveCtx>, m: &[[u64; 3]; 3]) -> Result<Divisor> {
    let pts = fixed_points_on_curve(ctx, m)?;
    let mut div = Divisor::zero();
    for pt in pts {
        let fq = pt.field();
        let mut prec = 4usize;
        let mult;
        loop {
            let coords = ctx.expand_point(&pt, prec);
            // Image series under M.
            let img: [crate::divisor::Series; 3] = {
                let mut out = [
                    vec![fq.zero(); prec],
                    vec![fq.zero(); prec],
                    vec![fq.zero(); prec],
                ];
                for i in 0..3 {
                    for j in 0..3 {
                        if m[i][j] == 0 {
                            continue;
                        }
                        let scaled: crate::divisor::Series = coords[j]
                            .iter()
                            .map(|c| fq.mul(c, &fq.scalar(m[i][j])))
                            .collect();
                        out[i] = crate::divisor::series_add(&fq, &out[i], &scaled);
                    }
                }
                out
            };
            // Minors of the 2x3 matrix [coords; img].
            let minor = |a: usize, b: usize| -> crate::divisor::Series {
                let t1 = crate::divisor::series_mul(&fq, &coords[a], &img[b], prec);
                let t2 = crate::divisor::series_mul(&fq, &coords[b], &img[a], prec);
                crate::divisor::series_sub(&fq, &t1, &t2)
            };
            let vals: Vec<Option<usize>> = [(0, 1), (0, 2), (1, 2)]
                .iter()
                .map(|&(a, b)| crate::divisor::series_valuation(&fq, &minor(a, b)))
                .collect();
            if let Some(v) = vals.iter().flatten().min() {
                mult = *v;
                break;
            }
            prec *= 2;
            if prec > 64 {
                return Err(Error::Internal(
                    "graph-diagonal multiplicity did not stabilize".into(),
                ));
            }
        }
        div.add_point(pt, mult as i64);
    }
    Ok(div)
}

/// A line (as [a, b, c]) not vanishing at any of the given points.
fn fixed_point_avoiding_line<'a>(
    ctx: &Arc<CurveCtx>,
    pts: impl Iterator<Item = &'a ClosedPoint> + Clone,
) -> Result<[u64; 3]> {
    let fp = ctx.fp;
    let candidates: Vec<[u64; 3]> = {
        let mut v = vec![[0, 0, 1], [0, 1, 0], [1, 0, 0]];
        for a in 0..fp.p.min(8) {
            for b in 0..fp.p.min(8) {
                v.push([1, a, b]);
                v.push([a, 1, b]);
            }
        }
        v
    };
    'line: for line in candidates {
        let form = MPoly::from_terms(
            &fp,
            [([1u16, 0, 0], line[0]), ([0, 1, 0], line[1]), ([0, 0, 1], line[2])],
        );
        if form.is_zero() {
            continue;
        }
        for pt in pts.clone() {
            let fq = pt.field();
            if fq.is_zero(&pt.eval_form(&form)) {
                continue 'line;
            }
        }
        return Ok(line);
    }
    Err(Error::Internal("no fixed-point-avoiding line found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::CurveCtx;
    use crate::quartic::TernaryQuarticZ;
    use crate::zeta::l_polynomial_genus3;

    fn fermat_ctx(p: u64) -> Arc<CurveCtx> {
        let c = TernaryQuarticZ::parse("x^4 + y^4 + z^4").unwrap().reduce_mod(p).unwrap();
        CurveCtx::new(c).unwrap()
    }

    #[test]
    fn frobenius_shadow_degree_zero_and_divides_jacobian() {
        let ctx = fermat_ctx(13);
        let l = l_polynomial_genus3(&ctx.curve).unwrap();
        let rep = frobenius_shadow(&ctx, &l).unwrap();
        assert_eq!(rep.divisor.degree(), 0);
        use num_traits::ToPrimitive;
        let jac = l.jacobian_order().to_u64().unwrap();
        assert_eq!(jac % rep.order, 0);
    }

    #[test]
    fn fermat_shadow_is_4_torsion() {
        // The Fermat quartic is semidiagonal: shadows divide 4.
        for p in [5u64, 13, 17] {
            let ctx = fermat_ctx(p);
            let l = l_polynomial_genus3(&ctx.curve).unwrap();
            let rep = frobenius_shadow(&ctx, &l).unwrap();
            assert!(4 % rep.order == 0, "p={} order={}", p, rep.order);
        }
    }

    #[test]
    fn identity_shadow_with_canonical_base_point() {
        // For b with 4b ~ K the identity shadow is principal; any degree-1
        // b gives a principal shadow iff 4b ~ K.  Use b from a rational
        // point of the pointy curve and check consistency of the formula.
        let c = TernaryQuarticZ::parse("x^4 + z^4 - y^3*z").unwrap().reduce_mod(5).unwrap();
        let ctx = CurveCtx::new(c).unwrap();
        let b = base_point_divisor(&ctx).unwrap();
        assert_eq!(b.degree(), 1);
        let sh = morphism_graph_shadow(&ctx, &GraphMorphism::Identity, &b).unwrap();
        assert_eq!(sh.degree(), 0);
        // 4 Sh(id, b) = 4(4b - K) and Sh principal iff 4b ~ K; verify the
        // equivalence through is_principal both ways.
        let four_b_minus_k = b.scale(4).sub(&ctx.canonical_divisor());
        assert_eq!(
            ctx.is_principal(&sh).unwrap(),
            ctx.is_principal(&four_b_minus_k).unwrap()
        );
    }

    #[test]
    fn frobenius_graph_shadow_matches_pointless_shadow() {
        // (2g-2) Sh(Frob, b) and the Frobenius shadow differ by a principal
        // divisor, independent of b.
        let c = TernaryQuarticZ::parse("x^4 + z^4 - y^3*z").unwrap().reduce_mod(5).unwrap();
        let ctx = CurveCtx::new(c).unwrap();
        let l = l_polynomial_genus3(&ctx.curve).unwrap();
        let b = base_point_divisor(&ctx).unwrap();
        let graph_sh = morphism_graph_shadow(&ctx, &GraphMorphism::Frobenius, &b).unwrap();
        let frob = frobenius_shadow(&ctx, &l).unwrap();
        // 4 * graph shadow + N * (4b - K) = pointless shadow, so the
        // difference 4*graph - shadow is principal iff N(4b - K) is; check
        // the exact identity instead: shadow = 4*Sh + N*(4b - K).
        let n = frob.rational_points as i64;
        let recomposed = graph_sh
            .scale(4)
            .add(&b.scale(4).sub(&ctx.canonical_divisor()).scale(n));
        let diff = recomposed.sub(&frob.divisor);
        assert_eq!(diff.degree(), 0);
        assert!(ctx.is_principal(&diff).unwrap());
    }

    #[test]
    fn signed_permutation_automorphism_shadow_order() {
        // x -> -x on the Fermat quartic mod 13.
        let ctx = fermat_ctx(13);
        let m = [[12u64, 0, 0], [0, 1, 0], [0, 0, 1]];
        assert!(is_automorphism(&ctx, &m).unwrap());
        let b = base_point_divisor(&ctx).unwrap();
        let sh = morphism_graph_shadow(&ctx, &GraphMorphism::Linear(m), &b).unwrap();
        assert_eq!(sh.degree(), 0);
        let l = l_polynomial_genus3(&ctx.curve).unwrap();
        use num_traits::ToPrimitive;
        let fac = crate::arith::factor_u64(l.jacobian_order().to_u64().unwrap());
        let res = ctx.class_order(&sh, &fac).unwrap();
        // Frozen from the p = 13 principality engine (exhaustive oracle is
        // exercised in the divisor module): the order divides the Jacobian
        // order and is stable.
        assert!(l.jacobian_order().to_u64().unwrap() % res.order == 0);
    }

    #[test]
    fn fixed_point_divisor_of_involution() {
        // x -> -x on Fermat mod 13 fixes the 8 points on x = 0 and the 4 on
        // the line... in P^2 the fixed locus is {x = 0} plus (1:0:0); on the
        // curve: C intersect {x=0} (degree 4) plus (1:0:0) if on curve (it
        // is not).
        let ctx = fermat_ctx(13);
        let m = [[12u64, 0, 0], [0, 1, 0], [0, 0, 1]];
        let fix = fixed_point_divisor(&ctx, &m).unwrap();
        assert_eq!(fix.degree(), 4);
        assert!(fix.is_effective());
    }

    #[test]
    fn relative_canonical_identity_telescopes() {
        let ctx = fermat_ctx(13);
        let sh = relative_canonical_shadow(&ctx, &identity_matrix(), 1).unwrap();
        assert_eq!(sh.quotient_genus, 3);
        assert_eq!(sh.divisor.degree(), 0);
        assert!(ctx.is_principal(&sh.divisor).unwrap());
    }

    #[test]
    fn relative_canonical_involution_quotient() {
        // Quotient of Fermat by x -> -x: genus-1 quotient, shadow well
        // defined of degree 0.
        let ctx = fermat_ctx(13);
        let m = [[12u64, 0, 0], [0, 1, 0], [0, 0, 1]];
        let sh = relative_canonical_shadow(&ctx, &m, 2).unwrap();
        assert_eq!(sh.quotient_genus, 1);
        assert_eq!(sh.ramification_degree, 4);
        assert_eq!(sh.divisor.degree(), 0);
    }

    #[test]
    fn base_point_divisor_pointless_curve() {
        // Fermat mod 5 has no rational points: base divisor combines
        // higher-degree points.
        let ctx = fermat_ctx(5);
        assert!(ctx.rational_points().is_empty());
        let b = base_point_divisor(&ctx).unwrap();
        assert_eq!(b.degree(), 1);
    }
}
