//! Closed points of the projective plane over F_p: Galois orbits of
//! geometric points, stored through one canonical representative in the
//! standard field of the right degree.  Also the chart-partition enumeration
//! of common zeros of two ternary forms, the basic ingredient for
//! intersection divisors and smoothness tests.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::fp::{Field, FiniteField, PrimeField, Ring};
use crate::fq::{Embedding, FqCtx, FqElem};
use crate::linalg;
use crate::poly::factor as pfactor;
use crate::poly::multi::MPoly;
use crate::poly::uni::{self, Poly, PolyRing};

/// A closed point of P^2 over F_p: the Frobenius orbit of a geometric point
/// whose minimal field is F_(p^degree).  The stored representative is
/// projectively normalized (first nonzero coordinate 1) and is the
/// lexicographically smallest point of its orbit, so closed points compare
/// and hash structurally.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClosedPoint {
    degree: usize,
    p: u64,
    coords: [FqElem; 3],
}

impl ClosedPoint {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> Arc<FqCtx> {
        FqCtx::make_extension(self.p, self.degree).expect("standard field")
    }

    pub fn coords(&self) -> &[FqElem; 3] {
        &self.coords
    }

    /// A rational point.
    pub fn from_rational(fp: PrimeField, coords: [u64; 3]) -> ClosedPoint {
        let ctx = FqCtx::make_extension(fp.p, 1).unwrap();
        let c = [ctx.scalar(coords[0]), ctx.scalar(coords[1]), ctx.scalar(coords[2])];
        ClosedPoint::from_coords(&ctx, c)
    }

    /// Canonicalize arbitrary coordinates in a standard field: normalize
    /// projectively, descend to the minimal subfield, minimize over the
    /// Frobenius orbit.
    pub fn from_coords(ctx: &Arc<FqCtx>, coords: [FqElem; 3]) -> ClosedPoint {
        assert!(coords.iter().any(|c| !ctx.is_zero(c)), "zero coordinates");
        // Projective normalization.
        let i = (0..3).find(|&i| !ctx.is_zero(&coords[i])).unwrap();
        let inv = ctx.inv(&coords[i]);
        let c = [
            ctx.mul(&coords[0], &inv),
            ctx.mul(&coords[1], &inv),
            ctx.mul(&coords[2], &inv),
        ];
        // Minimal field degree.
        let d0 = (1..=ctx.k)
            .filter(|d| ctx.k % d == 0)
            .find(|&d| c.iter().all(|x| ctx.frobenius_power(x, d) == *x))
            .unwrap_or(ctx.k);
        let (ctx0, mut c) = if d0 == ctx.k {
            (ctx.clone(), c)
        } else {
            let ctx0 = FqCtx::make_extension(ctx.p(), d0).unwrap();
            let emb = standard_embedding(&ctx0, ctx);
            let down = |x: &FqElem| descend_element(&ctx0, ctx, &emb, x);
            let c0 = [down(&c[0]), down(&c[1]), down(&c[2])];
            (ctx0, c0)
        };
        // Smallest Frobenius conjugate.
        let key = |v: &[FqElem; 3]| -> Vec<u64> {
            let mut k = Vec::with_capacity(3 * ctx0.k);
            for x in v {
                k.extend(ctx0.elem_key(x));
            }
            k
        };
        let mut best = c.clone();
        let mut best_key = key(&best);
        for _ in 1..ctx0.k {
            c = [
                ctx0.frobenius(&c[0]),
                ctx0.frobenius(&c[1]),
                ctx0.frobenius(&c[2]),
            ];
            let k = key(&c);
            if k < best_key {
                best_key = k;
                best = c.clone();
            }
        }
        ClosedPoint { degree: ctx0.k, p: ctx0.p(), coords: best }
    }

    /// Evaluate a ternary form with F_p coefficients at this point.
    pub fn eval_form(&self, form: &MPoly<u64>) -> FqElem {
        let ctx = self.field();
        let at = [self.coords[0].clone(), self.coords[1].clone(), self.coords[2].clone()];
        let lifted = form.map_coeffs(&*ctx, |c| ctx.scalar(*c));
        lifted.eval(&*ctx, &at)
    }

    /// Image under an invertible matrix over F_p (rows act on coordinates).
    pub fn apply_matrix(&self, m: &[[u64; 3]; 3]) -> ClosedPoint {
        let ctx = self.field();
        let mut out = [ctx.zero(), ctx.zero(), ctx.zero()];
        for i in 0..3 {
            for j in 0..3 {
                if m[i][j] != 0 {
                    let t = ctx.mul(&ctx.scalar(m[i][j]), &self.coords[j]);
                    out[i] = ctx.add(&out[i], &t);
                }
            }
        }
        ClosedPoint::from_coords(&ctx, out)
    }

    /// Is this the same chart-partition slot: z != 0, then z = 0 & y != 0,
    /// then (1:0:0).
    pub fn chart(&self) -> usize {
        let ctx = self.field();
        if !ctx.is_zero(&self.coords[2]) {
            0
        } else if !ctx.is_zero(&self.coords[1]) {
            1
        } else {
            2
        }
    }
}

/// Smallest root of a monic irreducible u over F_p inside the standard field
/// of matching degree, cached globally.
pub fn smallest_root_in_standard(fp: PrimeField, u: &Poly<u64>) -> (Arc<FqCtx>, FqElem) {
    static CACHE: OnceLock<Mutex<HashMap<(u64, Vec<u64>), FqElem>>> = OnceLock::new();
    let d = uni::deg(u).expect("nonzero modulus");
    let ctx = FqCtx::make_extension(fp.p, d).unwrap();
    if d == 1 {
        // Root of x + c is -c.
        return (ctx.clone(), vec![fp.neg(&u[0])]);
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (fp.p, u.clone());
    if let Some(r) = cache.lock().unwrap().get(&key) {
        return (ctx, r.clone());
    }
    let lifted: Poly<FqElem> = u.iter().map(|&c| ctx.scalar(c)).collect();
    let rs = pfactor::roots(&*ctx, &lifted, xr00t_seed());
    let root = rs.into_iter().next().expect("irreducible factor must split in its own field");
    cache.lock().unwrap().insert(key, root.clone());
    (ctx, root)
}

const fn xr00t_seed() -> u64 {
    0x526f6f74
}

/// Cached embedding between standard fields (p, a) -> (p, b), a | b.
pub fn standard_embedding(src: &Arc<FqCtx>, dst: &Arc<FqCtx>) -> Arc<Embedding> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize, usize), Arc<Embedding>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (src.p(), src.k, dst.k);
    if let Some(e) = cache.lock().unwrap().get(&key) {
        return e.clone();
    }
    let emb = Arc::new(Embedding::new(src, dst).expect("standard embedding"));
    cache.lock().unwrap().insert(key, emb.clone());
    emb
}

/// Express an element of dst known to lie in the image of src back in src
/// coordinates (linear solve against the embedding matrix).
pub fn descend_element(src: &Arc<FqCtx>, dst: &Arc<FqCtx>, emb: &Embedding, x: &FqElem) -> FqElem {
    let fp = src.fp;
    // Columns: images of src basis elements.
    let mut mat = vec![vec![0u64; src.k]; dst.k];
    for j in 0..src.k {
        let mut basis = src.zero();
        basis[j] = 1;
        let img = emb.apply(dst, &basis);
        for i in 0..dst.k {
            mat[i][j] = img[i];
        }
    }
    linalg::solve(&fp, &mat, x).expect("element does not lie in the subfield")
}

/// Closed points of P^2 where two ternary forms over F_p simultaneously
/// vanish.
pub enum CommonZeros {
    Points(Vec<ClosedPoint>),
    /// The forms share a positive-dimensional component.
    SharedComponent,
}

/// Enumerate the common zeros of two nonzero ternary forms over F_p (all
/// closed points of the locus f = g = 0), or report a shared component.
/// Charts are disjoint: {z != 0}, {z = 0, y != 0}, {(1:0:0)}.
pub fn projective_common_zeros(
    fp: PrimeField,
    f: &MPoly<u64>,
    g: &MPoly<u64>,
    seed: u64,
) -> CommonZeros {
    assert!(!f.is_zero() && !g.is_zero());
    let mut out: Vec<ClosedPoint> = Vec::new();

    // Chart z = 1.
    match affine_common_zeros(fp, f, g, seed) {
        AffineZeros::SharedComponent => return CommonZeros::SharedComponent,
        AffineZeros::Points(pts) => out.extend(pts),
    }

    // Line z = 0, chart y = 1: univariate in x.
    let f0 = {
        let t = f.substitute_var(&fp, 2, &0);
        t.to_bivariate(&fp, 0, 1).into_iter().map(|c| c.first().copied().unwrap_or(0)).collect::<Vec<u64>>()
    };
    let g0 = {
        let t = g.substitute_var(&fp, 2, &0);
        t.to_bivariate(&fp, 0, 1).into_iter().map(|c| c.first().copied().unwrap_or(0)).collect::<Vec<u64>>()
    };
    let mut f0 = f0;
    let mut g0 = g0;
    uni::trim(&fp, &mut f0);
    uni::trim(&fp, &mut g0);
    let on_line = |poly: &Poly<u64>| -> Option<Poly<u64>> {
        if poly.is_empty() {
            None
        } else {
            Some(poly.clone())
        }
    };
    let gcd_line = match (on_line(&f0), on_line(&g0)) {
        (None, None) => {
            // Both vanish on the whole line z = 0.
            return CommonZeros::SharedComponent;
        }
        (None, Some(h)) | (Some(h), None) => h,
        (Some(a), Some(b)) => uni::gcd(&fp, &a, &b),
    };
    if uni::deg(&gcd_line).map_or(false, |d| d >= 1) {
        let (_, factors) = pfactor::factor(&fp, &gcd_line, seed);
        for (irr, _) in factors {
            let (ctx, xi) = smallest_root_in_standard(fp, &irr);
            let pt = ClosedPoint::from_coords(&ctx, [xi, ctx.one(), ctx.zero()]);
            out.push(pt);
        }
    }

    // The point (1:0:0).
    let at = |h: &MPoly<u64>| -> u64 {
        h.terms.get(&[h.total_degree().unwrap_or(0), 0, 0]).copied().unwrap_or(0)
    };
    if at(f) == 0 && at(g) == 0 {
        out.push(ClosedPoint::from_rational(fp, [1, 0, 0]));
    }

    out.sort();
    out.dedup();
    CommonZeros::Points(out)
}

enum AffineZeros {
    Points(Vec<ClosedPoint>),
    SharedComponent,
}

/// Common zeros in the affine chart z = 1.
fn affine_common_zeros(fp: PrimeField, f: &MPoly<u64>, g: &MPoly<u64>, seed: u64) -> AffineZeros {
    // Bivariate views: univariate in x over F_p[y].
    let fb = f.to_bivariate(&fp, 0, 2);
    let gb = g.to_bivariate(&fp, 0, 2);
    if fb.is_empty() || gb.is_empty() {
        // One form is divisible by z... impossible for nonzero forms: the
        // dehomogenization at z=1 of a nonzero form is nonzero.
        unreachable!("dehomogenization of nonzero form vanished");
    }
    let dx_f = fb.len() - 1;
    let dx_g = gb.len() - 1;
    let mut pts = Vec::new();
    if dx_f == 0 && dx_g == 0 {
        // Both univariate in y: common zeros form vertical lines.
        let gcd = uni::gcd(&fp, &fb[0], &gb[0]);
        if uni::deg(&gcd).map_or(false, |d| d >= 1) {
            return AffineZeros::SharedComponent;
        }
        return AffineZeros::Points(pts);
    }
    if dx_f == 0 || dx_g == 0 {
        // One is u(y); zeros live over roots of u.
        let (u, other) = if dx_f == 0 { (&fb[0], &gb) } else { (&gb[0], &fb) };
        let (_, factors) = pfactor::factor(&fp, u, seed);
        for (irr, _) in factors {
            let d = uni::deg(&irr).unwrap();
            let (ctx, eta) = smallest_root_in_standard(fp, &irr);
            // other(x, eta) as univariate in x over ctx.
            let ox: Poly<FqElem> = other
                .iter()
                .map(|cy| {
                    let cl: Poly<FqElem> = cy.iter().map(|&c| ctx.scalar(c)).collect();
                    uni::eval(&*ctx, &cl, &eta)
                })
                .collect();
            let mut ox = ox;
            uni::trim(&*ctx, &mut ox);
            if ox.is_empty() {
                return AffineZeros::SharedComponent;
            }
            pts.extend(points_above(fp, &ctx, &eta, &ox, d, seed));
        }
        return AffineZeros::Points(pts);
    }
    // Both have positive x-degree: eliminate x.
    let ring = PolyRing::new(fp);
    let res = uni::resultant(&ring, &fb, &gb);
    if res.is_empty() {
        return AffineZeros::SharedComponent;
    }
    let (_, factors) = pfactor::factor(&fp, &res, seed);
    for (irr, _) in factors {
        let d = uni::deg(&irr).unwrap();
        let (ctx, eta) = smallest_root_in_standard(fp, &irr);
        let spec = |b: &Poly<Poly<u64>>| -> Poly<FqElem> {
            let mut v: Poly<FqElem> = b
                .iter()
                .map(|cy| {
                    let cl: Poly<FqElem> = cy.iter().map(|&c| ctx.scalar(c)).collect();
                    uni::eval(&*ctx, &cl, &eta)
                })
                .collect();
            uni::trim(&*ctx, &mut v);
            v
        };
        let fx = spec(&fb);
        let gx = spec(&gb);
        if fx.is_empty() || gx.is_empty() {
            // Degenerate specialization: a whole vertical line of zeros of
            // one form; intersect the other with the line x free.
            let other = if fx.is_empty() { &gx } else { &fx };
            if other.is_empty() {
                return AffineZeros::SharedComponent;
            }
            pts.extend(points_above(fp, &ctx, &eta, other, d, seed));
            continue;
        }
        let common = uni::gcd(&*ctx, &fx, &gx);
        if uni::deg(&common).map_or(true, |dd| dd == 0) {
            continue; // spurious resultant root
        }
        pts.extend(points_above(fp, &ctx, &eta, &common, d, seed));
    }
    AffineZeros::Points(pts)
}

/// Closed points (xi : eta : 1) for xi running over roots of `w` (a poly
/// over the degree-d field containing eta), one per irreducible factor.
fn points_above(
    fp: PrimeField,
    ctx: &Arc<FqCtx>,
    eta: &FqElem,
    w: &Poly<FqElem>,
    _d: usize,
    seed: u64,
) -> Vec<ClosedPoint> {
    let mut out = Vec::new();
    let (_, factors) = pfactor::factor(&**ctx, w, seed);
    for (irr, _) in factors {
        let e = uni::deg(&irr).unwrap();
        if e == 1 {
            let xi = ctx.neg(&irr[0]);
            out.push(ClosedPoint::from_coords(ctx, [xi, eta.clone(), ctx.one()]));
        } else {
            // Move to the degree d*e standard field.
            let big = FqCtx::make_extension(fp.p, ctx.k * e).unwrap();
            let emb = standard_embedding(ctx, &big);
            let lifted: Poly<FqElem> = irr.iter().map(|c| emb.apply(&big, c)).collect();
            let rs = pfactor::roots(&*big, &lifted, seed ^ 0x9e3779b97f4a7c15);
            let xi = rs.into_iter().next().expect("factor splits in composite field");
            let eta_big = emb.apply(&big, eta);
            out.push(ClosedPoint::from_coords(&big, [xi, eta_big, big.one()]));
        }
    }
    out
}
