//! Plane quartic data model: integer and mod-p quartics in a fixed monomial
//! order, parsing, smoothness tests, reduction, point counting, signed
//! permutations and canonical forms, linear substitutions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::fp::{BigIntRing, PrimeField, Ring};
use crate::fq::FqCtx;
use crate::points::{projective_common_zeros, CommonZeros};
use crate::poly::factor as pfactor;
use crate::poly::multi::MPoly;
use crate::poly::uni::{self, Poly, PolyRing};
use crate::{Error, Result};

/// The fixed monomial order: exponent vectors [x, y, z] of the 15 quartic
/// monomials.  Every coefficient vector in the library and in every file
/// format uses this order.
pub const MONOMIALS: [[u16; 3]; 15] = [
    [4, 0, 0], // x^4
    [3, 1, 0], // x^3 y
    [3, 0, 1], // x^3 z
    [2, 2, 0], // x^2 y^2
    [2, 1, 1], // x^2 y z
    [2, 0, 2], // x^2 z^2
    [1, 3, 0], // x y^3
    [1, 2, 1], // x y^2 z
    [1, 1, 2], // x y z^2
    [1, 0, 3], // x z^3
    [0, 4, 0], // y^4
    [0, 3, 1], // y^3 z
    [0, 2, 2], // y^2 z^2
    [0, 1, 3], // y z^3
    [0, 0, 4], // z^4
];

fn monomial_index(k: [u16; 3]) -> Option<usize> {
    MONOMIALS.iter().position(|m| *m == k)
}

/// A plane quartic over the integers: 15 coefficients in the fixed monomial
/// order, content-reduced, first nonzero coefficient positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TernaryQuarticZ {
    coeffs: Vec<BigInt>,
}

impl TernaryQuarticZ {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != 15 {
            return Err(Error::Parse(format!("expected 15 coefficients, got {}", coeffs.len())));
        }
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::Parse("zero polynomial is not a quartic".into()));
        }
        let mut g = BigInt::zero();
        for c in &coeffs {
            g = g.gcd(c);
        }
        let first = coeffs.iter().find(|c| !c.is_zero()).unwrap();
        if first.is_negative() {
            g = -g;
        }
        let coeffs = coeffs.iter().map(|c| c / &g).collect();
        Ok(TernaryQuarticZ { coeffs })
    }

    pub fn from_i64(coeffs: [i64; 15]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients as i64 when they fit.
    pub fn coeffs_i64(&self) -> Option<[i64; 15]> {
        use num_traits::ToPrimitive;
        let mut out = [0i64; 15];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = c.to_i64()?;
        }
        Some(out)
    }

    pub fn to_mpoly(&self) -> MPoly<BigInt> {
        let r = BigIntRing;
        MPoly::from_terms(&r, MONOMIALS.iter().copied().zip(self.coeffs.iter().cloned()))
    }

    pub fn from_mpoly(p: &MPoly<BigInt>) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::Parse("zero polynomial is not a quartic".into()));
        }
        let mut coeffs = vec![BigInt::zero(); 15];
        for (k, v) in &p.terms {
            let idx = monomial_index(*k).ok_or_else(|| {
                Error::Parse(format!(
                    "not homogeneous of degree 4: monomial x^{} y^{} z^{}",
                    k[0], k[1], k[2]
                ))
            })?;
            coeffs[idx] = v.clone();
        }
        TernaryQuarticZ::new(coeffs)
    }

    /// Parse either a comma-separated 15-vector or a polynomial expression
    /// in x, y, z.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.contains(',') {
            let parts: Vec<&str> = t.split(',').collect();
            if parts.len() != 15 {
                return Err(Error::Parse(format!(
                    "coefficient vector must have 15 entries, got {}",
                    parts.len()
                )));
            }
            let mut coeffs = Vec::with_capacity(15);
            for p in parts {
                let c: BigInt = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer {:?}", p.trim())))?;
                coeffs.push(c);
            }
            return TernaryQuarticZ::new(coeffs);
        }
        let mp = parse_expression(t)?;
        if !mp.is_homogeneous() || mp.total_degree() != Some(4) {
            return Err(Error::Parse("polynomial is not homogeneous of degree 4".into()));
        }
        TernaryQuarticZ::from_mpoly(&mp)
    }

    /// Render as a polynomial expression.
    pub fn expression(&self) -> String {
        let vars = ["x", "y", "z"];
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono: Vec<String> = (0..3)
                .filter(|&v| MONOMIALS[i][v] > 0)
                .map(|v| {
                    if MONOMIALS[i][v] == 1 {
                        vars[v].to_string()
                    } else {
                        format!("{}^{}", vars[v], MONOMIALS[i][v])
                    }
                })
                .collect();
            let mono = mono.join("*");
            let abs = c.abs();
            let coeff_part = if abs.is_one() { String::new() } else { format!("{}*", abs) };
            if s.is_empty() {
                if c.is_negative() {
                    s.push('-');
                }
            } else if c.is_negative() {
                s.push_str(" - ");
            } else {
                s.push_str(" + ");
            }
            s.push_str(&coeff_part);
            s.push_str(&mono);
        }
        s
    }

    /// Reduce modulo p; errors if the reduction is singular.
    pub fn reduce_mod(&self, p: u64) -> Result<TernaryQuarticFp> {
        let fp = PrimeField::new(p)?;
        let coeffs: Vec<u64> = self.coeffs.iter().map(|c| fp.reduce_bigint(c)).collect();
        TernaryQuarticFp::new(fp, coeffs.try_into().unwrap())
    }

    /// Reduction without the smoothness requirement (for smoothness probing).
    pub fn reduce_mod_unchecked(&self, p: u64) -> Result<(PrimeField, [u64; 15])> {
        let fp = PrimeField::new(p)?;
        let coeffs: Vec<u64> = self.coeffs.iter().map(|c| fp.reduce_bigint(c)).collect();
        Ok((fp, coeffs.try_into().unwrap()))
    }

    /// Smoothness over Q: smooth modulo any odd prime <= 37 is sufficient;
    /// otherwise decide exactly over Q via resultant elimination.
    pub fn is_smooth_over_q(&self) -> bool {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 3] {
            if let Ok((fp, coeffs)) = self.reduce_mod_unchecked(p) {
                if is_smooth_quartic_fp(fp, &coeffs) {
                    return true;
                }
            }
        }
        !exact_singular_over_q(self)
    }

    /// Ascending odd good primes up to `bound`: primes where the reduction
    /// is smooth.  2 is never good by policy; 3 only when `include_3`.
    pub fn good_primes(&self, bound: u64, include_3: bool) -> Vec<u64> {
        crate::arith::primes_up_to(bound)
            .into_iter()
            .filter(|&p| p >= 3 && (p > 3 || include_3))
            .filter(|&p| {
                self.reduce_mod_unchecked(p)
                    .map(|(fp, coeffs)| is_smooth_quartic_fp(fp, &coeffs))
                    .unwrap_or(false)
            })
            .collect()
    }

    /// Apply an invertible integer matrix substitution (row i is the linear
    /// form substituted for the i-th variable), content-reducing the result.
    pub fn apply_substitution(&self, m: &[[BigInt; 3]; 3]) -> Result<TernaryQuarticZ> {
        let det = det3(m);
        if det.is_zero() {
            return Err(Error::Precondition("singular substitution matrix".into()));
        }
        let r = BigIntRing;
        let sub = self.to_mpoly().linear_substitution(&r, m);
        TernaryQuarticZ::from_mpoly(&sub)
    }

    /// Canonical orbit representative under the 24 signed permutations and
    /// global negation; requires all coefficients in {-1, 0, 1}.
    pub fn canonical_form(&self) -> Result<TernaryQuarticZ> {
        let small = self.coeffs_small()?;
        let best = canonical_small(&small);
        TernaryQuarticZ::new(best.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs_small(&self) -> Result<[i8; 15]> {
        let mut out = [0i8; 15];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c > &BigInt::one() || c < &BigInt::from(-1) {
                return Err(Error::Precondition(
                    "canonical form requires coefficients in {-1,0,1}".into(),
                ));
            }
            out[i] = if c.is_zero() {
                0
            } else if c.is_negative() {
                -1
            } else {
                1
            };
        }
        Ok(out)
    }

    /// Number of signed permutations g (of the 24, mod global sign) with
    /// C o g = +-C: the rational automorphism order visible to signed
    /// permutations.
    pub fn signed_stabilizer_order(&self) -> Result<usize> {
        let small = self.coeffs_small()?;
        let mut count = 0;
        for table in signed_perm_tables() {
            let t = apply_table(&small, table);
            if t == small || negate15(&t) == small {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Size of the orbit under the 24 signed permutations and negation.
    pub fn orbit_size(&self) -> Result<usize> {
        let small = self.coeffs_small()?;
        let mut set = std::collections::BTreeSet::new();
        for table in signed_perm_tables() {
            let t = apply_table(&small, table);
            set.insert(negate15(&t));
            set.insert(t);
        }
        Ok(set.len())
    }
}

impl std::fmt::Display for TernaryQuarticZ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.expression())
    }
}

fn det3(m: &[[BigInt; 3]; 3]) -> BigInt {
    let a = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]);
    let b = &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0]);
    let c = &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    a - b + c
}

pub fn negate15(v: &[i8; 15]) -> [i8; 15] {
    let mut out = *v;
    for c in out.iter_mut() {
        *c = -*c;
    }
    out
}

/// Apply a signed-permutation action table to a small coefficient vector.
pub fn apply_table(v: &[i8; 15], table: &[(usize, i8); 15]) -> [i8; 15] {
    let mut out = [0i8; 15];
    for (src, &(dst, s)) in table.iter().enumerate() {
        out[dst] = s * v[src];
    }
    out
}

/// Canonical representative of the orbit of a {-1,0,1} coefficient vector:
/// lexicographically smallest sign-normalized image (first nonzero
/// coefficient positive) over the 24 signed permutations.
pub fn canonical_small(v: &[i8; 15]) -> [i8; 15] {
    let normalize = |mut w: [i8; 15]| -> [i8; 15] {
        if let Some(first) = w.iter().find(|&&c| c != 0) {
            if *first < 0 {
                w = negate15(&w);
            }
        }
        w
    };
    let mut best: Option<[i8; 15]> = None;
    for table in signed_perm_tables() {
        let t = normalize(apply_table(v, table));
        if best.as_ref().map_or(true, |b| t < *b) {
            best = Some(t);
        }
    }
    best.unwrap()
}

/// Action tables for the 24 signed permutations modulo the global scalar -1:
/// entry `src` holds (destination index, sign) for the coefficient at `src`.
pub fn signed_perm_tables() -> &'static Vec<[(usize, i8); 15]> {
    use std::sync::OnceLock;
    static TABLES: OnceLock<Vec<[(usize, i8); 15]>> = OnceLock::new();
    TABLES.get_or_init(|| {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let signs: [[i8; 3]; 4] = [[1, 1, 1], [1, 1, -1], [1, -1, 1], [1, -1, -1]];
        let mut tables = Vec::with_capacity(24);
        for perm in perms {
            for sgn in signs {
                let mut table = [(0usize, 0i8); 15];
                for (src, mono) in MONOMIALS.iter().enumerate() {
                    // x_i -> s_i * x_{perm[i]}: new exponent at perm[i] is
                    // the old exponent at i.
                    let mut nk = [0u16; 3];
                    let mut s: i8 = 1;
                    for i in 0..3 {
                        nk[perm[i]] = mono[i];
                        if mono[i] % 2 == 1 && sgn[i] < 0 {
                            s = -s;
                        }
                    }
                    let dst = monomial_index(nk).expect("monomial closed under action");
                    table[src] = (dst, s);
                }
                tables.push(table);
            }
        }
        tables
    })
}

/// A plane quartic over F_p, smooth by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TernaryQuarticFp {
    pub fp: PrimeField,
    coeffs: [u64; 15],
}

impl TernaryQuarticFp {
    pub fn new(fp: PrimeField, coeffs: [u64; 15]) -> Result<Self> {
        let coeffs: [u64; 15] =
            coeffs.iter().map(|&c| c % fp.p).collect::<Vec<_>>().try_into().unwrap();
        if coeffs.iter().all(|&c| c == 0) {
            return Err(Error::Precondition("quartic vanishes mod p".into()));
        }
        if !is_smooth_quartic_fp(fp, &coeffs) {
            return Err(Error::NotSmooth(format!("quartic is singular mod {}", fp.p)));
        }
        Ok(TernaryQuarticFp { fp, coeffs })
    }

    pub fn coeffs(&self) -> &[u64; 15] {
        &self.coeffs
    }

    pub fn p(&self) -> u64 {
        self.fp.p
    }

    pub fn to_mpoly(&self) -> MPoly<u64> {
        MPoly::from_terms(&self.fp, MONOMIALS.iter().copied().zip(self.coeffs.iter().copied()))
    }

    /// Number of points over F_(p^k).
    pub fn count_points(&self, k: usize) -> Result<u64> {
        if k == 1 {
            return self.count_points_prime();
        }
        let ctx = FqCtx::make_extension(self.fp.p, k)?;
        let xforms = self.x_coefficient_forms();
        let mut total: u64 = 0;
        if self.coeffs[0] == 0 {
            total += 1; // (1:0:0)
        }
        // Enumerate (y : 1) for all y in F_q, then (1 : 0).
        let mut counter = vec![0u64; k];
        loop {
            total += self.count_x_roots(&ctx, &xforms, &counter, &ctx.one())? as u64;
            let mut i = 0;
            loop {
                if i == k {
                    break;
                }
                counter[i] += 1;
                if counter[i] < self.fp.p {
                    break;
                }
                counter[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        total += self.count_x_roots(&ctx, &xforms, &ctx.one(), &ctx.zero())? as u64;
        Ok(total)
    }

    fn count_points_prime(&self) -> Result<u64> {
        let fp = self.fp;
        let mut total: u64 = 0;
        if self.coeffs[0] == 0 {
            total += 1;
        }
        for y in 0..fp.p {
            let f = self.x_poly_at(&fp, y, 1);
            if f.is_empty() {
                return Err(Error::Internal("smooth quartic contains a line".into()));
            }
            total += pfactor::count_roots_in_field(&fp, &f) as u64;
        }
        let f = self.x_poly_at(&fp, 1, 0);
        if f.is_empty() {
            return Err(Error::Internal("smooth quartic contains a line".into()));
        }
        total += pfactor::count_roots_in_field(&fp, &f) as u64;
        Ok(total)
    }

    /// The quartic as a polynomial in x for fixed (y, z) over F_p.
    fn x_poly_at(&self, fp: &PrimeField, y: u64, z: u64) -> Poly<u64> {
        let mut out = vec![0u64; 5];
        for (i, mono) in MONOMIALS.iter().enumerate() {
            if self.coeffs[i] == 0 {
                continue;
            }
            let mut t = self.coeffs[i];
            for _ in 0..mono[1] {
                t = fp.mul(&t, &y);
            }
            for _ in 0..mono[2] {
                t = fp.mul(&t, &z);
            }
            out[mono[0] as usize] = fp.add(&out[mono[0] as usize], &t);
        }
        uni::trim(fp, &mut out);
        out
    }

    /// Coefficient of x^i y^j z^(4-i-j), indexed [i][j].
    fn x_coefficient_forms(&self) -> [[u64; 5]; 5] {
        let mut out = [[0u64; 5]; 5];
        for (i, mono) in MONOMIALS.iter().enumerate() {
            out[mono[0] as usize][mono[1] as usize] = self.coeffs[i];
        }
        out
    }

    fn count_x_roots(
        &self,
        ctx: &FqCtx,
        xforms: &[[u64; 5]; 5],
        y: &crate::fq::FqElem,
        z: &crate::fq::FqElem,
    ) -> Result<usize> {
        let mut ypow = Vec::with_capacity(5);
        let mut zpow = Vec::with_capacity(5);
        ypow.push(ctx.one());
        zpow.push(ctx.one());
        for i in 1..5 {
            let yp = ctx.mul(&ypow[i - 1], y);
            ypow.push(yp);
            let zp = ctx.mul(&zpow[i - 1], z);
            zpow.push(zp);
        }
        let mut f: Poly<crate::fq::FqElem> = Vec::with_capacity(5);
        for i in 0..5usize {
            let mut acc = ctx.zero();
            for j in 0..=(4 - i) {
                let c = xforms[i][j];
                if c == 0 {
                    continue;
                }
                let t = ctx.mul(&ctx.scalar(c), &ctx.mul(&ypow[j], &zpow[4 - i - j]));
                acc = ctx.add(&acc, &t);
            }
            f.push(acc);
        }
        uni::trim(ctx, &mut f);
        if f.is_empty() {
            return Err(Error::Internal("smooth quartic contains a line".into()));
        }
        Ok(pfactor::count_roots_in_field(ctx, &f))
    }

    /// Apply an invertible matrix over F_p.
    pub fn apply_substitution(&self, m: &[[u64; 3]; 3]) -> Result<TernaryQuarticFp> {
        let fp = self.fp;
        let mul = |a: u64, b: u64| fp.mul(&a, &b);
        let det = {
            let s1 = mul(m[0][0], fp.sub(&mul(m[1][1], m[2][2]), &mul(m[1][2], m[2][1])));
            let s2 = mul(m[0][1], fp.sub(&mul(m[1][0], m[2][2]), &mul(m[1][2], m[2][0])));
            let s3 = mul(m[0][2], fp.sub(&mul(m[1][0], m[2][1]), &mul(m[1][1], m[2][0])));
            fp.add(&fp.sub(&s1, &s2), &s3)
        };
        if det == 0 {
            return Err(Error::Precondition("singular substitution matrix".into()));
        }
        let sub = self.to_mpoly().linear_substitution(&fp, m);
        let mut coeffs = [0u64; 15];
        for (k, v) in &sub.terms {
            coeffs[monomial_index(*k).expect("degree-4 monomial")] = *v;
        }
        TernaryQuarticFp::new(fp, coeffs)
    }
}

/// Smoothness of a quartic over F_p (geometric: no singular point over the
/// algebraic closure).
pub fn is_smooth_quartic_fp(fp: PrimeField, coeffs: &[u64; 15]) -> bool {
    if coeffs.iter().all(|&c| c == 0) {
        return false;
    }
    let c = MPoly::from_terms(&fp, MONOMIALS.iter().copied().zip(coeffs.iter().copied()));
    let gx = c.derivative(&fp, 0);
    let gy = c.derivative(&fp, 1);
    let gz = c.derivative(&fp, 2);
    // A vanishing partial means the remaining constraints always share a
    // projective zero (two curves in P^2 always meet).
    if gx.is_zero() || gy.is_zero() || gz.is_zero() {
        return false;
    }
    match projective_common_zeros(fp, &gx, &gy, 0x5315) {
        CommonZeros::SharedComponent => false,
        CommonZeros::Points(pts) => !pts.iter().any(|pt| {
            let ctx = pt.field();
            ctx.is_zero(&pt.eval_form(&gz))
        }),
    }
}

/// Exact singularity test over Q: does the quartic have a geometric singular
/// point in characteristic zero.  Resultants of the pencil C_y + s*C_z
/// against C_x after a shear; a nonconstant gcd across seven shifts pins a
/// genuine common zero.
pub fn exact_singular_over_q(c: &TernaryQuarticZ) -> bool {
    let r = BigIntRing;
    let cp = c.to_mpoly();
    let v = find_nonvanishing_point(&cp);
    let mut m = [
        [BigInt::zero(), BigInt::zero(), BigInt::zero()],
        [BigInt::zero(), BigInt::zero(), BigInt::zero()],
        [BigInt::zero(), BigInt::zero(), BigInt::zero()],
    ];
    for i in 0..3 {
        m[i][0] = v[i].clone();
    }
    let t = (0..3).find(|&i| !v[i].is_zero()).unwrap();
    m[(t + 1) % 3][1] = BigInt::one();
    m[(t + 2) % 3][2] = BigInt::one();
    let sheared = cp.linear_substitution(&r, &m);
    let f = sheared.derivative(&r, 0);
    let g = sheared.derivative(&r, 1);
    let h = sheared.derivative(&r, 2);
    if f.is_zero() || g.is_zero() || h.is_zero() {
        return true;
    }
    for chart in [2usize, 1usize] {
        let mut resultants: Vec<Poly<BigInt>> = Vec::new();
        for s in 0..7i64 {
            let gs = g.add(&r, &h.mul_scalar(&r, &BigInt::from(s)));
            if gs.is_zero() {
                return true;
            }
            let fb = f.to_bivariate(&r, 0, chart);
            let gb = gs.to_bivariate(&r, 0, chart);
            let ring = PolyRing::new(r);
            let u_s = uni::resultant(&ring, &fb, &gb);
            if u_s.is_empty() {
                return true;
            }
            resultants.push(u_s);
        }
        let qf = crate::fp::QField;
        let mut gq = rational_poly(&resultants[0]);
        for u in &resultants[1..] {
            gq = uni::gcd(&qf, &gq, &rational_poly(u));
            if uni::deg(&gq) == Some(0) {
                break;
            }
        }
        if uni::deg(&gq).map_or(false, |d| d >= 1) {
            return true;
        }
    }
    false
}

fn rational_poly(p: &Poly<BigInt>) -> Poly<num_rational::BigRational> {
    p.iter().map(|c| num_rational::BigRational::from_integer(c.clone())).collect()
}

fn find_nonvanishing_point(c: &MPoly<BigInt>) -> [BigInt; 3] {
    let r = BigIntRing;
    for h in 1i64..64 {
        for x in -h..=h {
            for y in -h..=h {
                for z in -h..=h {
                    if x.abs().max(y.abs()).max(z.abs()) != h {
                        continue;
                    }
                    let at = [BigInt::from(x), BigInt::from(y), BigInt::from(z)];
                    if !c.eval(&r, &at).is_zero() {
                        return at;
                    }
                }
            }
        }
    }
    unreachable!("nonzero quartic vanishing on a huge box")
}

/// Expression parser: +, -, *, ^, parentheses, integer literals, variables
/// x, y, z, implicit multiplication by juxtaposition.
fn parse_expression(text: &str) -> Result<MPoly<BigInt>> {
    let tokens = tokenize(text)?;
    let mut pos = 0usize;
    let e = parse_sum(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::Parse(format!("unexpected trailing token {:?}", tokens[pos])));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            'x' => {
                out.push(Tok::Var(0));
                i += 1;
            }
            'y' => {
                out.push(Tok::Var(1));
                i += 1;
            }
            'z' => {
                out.push(Tok::Var(2));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Tok::Int(s.parse().unwrap()));
            }
            other => {
                return Err(Error::Parse(format!("unexpected character {:?}", other)));
            }
        }
    }
    Ok(out)
}

fn parse_sum(tokens: &[Tok], pos: &mut usize) -> Result<MPoly<BigInt>> {
    let r = BigIntRing;
    let mut acc = MPoly::zero();
    let mut parsed_any = false;
    loop {
        let mut negate = false;
        while *pos < tokens.len() {
            match tokens[*pos] {
                Tok::Plus => {
                    *pos += 1;
                }
                Tok::Minus => {
                    negate = !negate;
                    *pos += 1;
                }
                _ => break,
            }
        }
        if *pos >= tokens.len() || tokens[*pos] == Tok::RParen {
            if !parsed_any {
                return Err(Error::Parse("empty expression".into()));
            }
            break;
        }
        let term = parse_term(tokens, pos)?;
        acc = if negate { acc.sub(&r, &term) } else { acc.add(&r, &term) };
        parsed_any = true;
        match tokens.get(*pos) {
            Some(Tok::Plus) | Some(Tok::Minus) => continue,
            Some(Tok::RParen) | None => break,
            Some(t) => return Err(Error::Parse(format!("unexpected token {:?}", t))),
        }
    }
    Ok(acc)
}

fn parse_term(tokens: &[Tok], pos: &mut usize) -> Result<MPoly<BigInt>> {
    let r = BigIntRing;
    let mut acc = parse_factor(tokens, pos)?;
    loop {
        match tokens.get(*pos) {
            Some(Tok::Star) => {
                *pos += 1;
                let f = parse_factor(tokens, pos)?;
                acc = acc.mul(&r, &f);
            }
            Some(Tok::Int(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                let f = parse_factor(tokens, pos)?;
                acc = acc.mul(&r, &f);
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_factor(tokens: &[Tok], pos: &mut usize) -> Result<MPoly<BigInt>> {
    let r = BigIntRing;
    let base = match tokens.get(*pos) {
        Some(Tok::Int(n)) => {
            *pos += 1;
            MPoly::constant(&r, n.clone())
        }
        Some(Tok::Var(v)) => {
            *pos += 1;
            MPoly::var(&r, *v)
        }
        Some(Tok::LParen) => {
            *pos += 1;
            let inner = parse_sum(tokens, pos)?;
            match tokens.get(*pos) {
                Some(Tok::RParen) => {
                    *pos += 1;
                }
                _ => return Err(Error::Parse("missing closing parenthesis".into())),
            }
            inner
        }
        t => return Err(Error::Parse(format!("unexpected token {:?}", t))),
    };
    if let Some(Tok::Caret) = tokens.get(*pos) {
        *pos += 1;
        match tokens.get(*pos) {
            Some(Tok::Int(n)) => {
                *pos += 1;
                use num_traits::ToPrimitive;
                let e = n.to_usize().ok_or_else(|| Error::Parse("exponent too large".into()))?;
                Ok(base.pow(&r, e))
            }
            _ => Err(Error::Parse("exponent must be a positive integer".into())),
        }
    } else {
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn fermat() -> TernaryQuarticZ {
        TernaryQuarticZ::parse("x^4 + y^4 + z^4").unwrap()
    }

    #[test]
    fn parse_fermat_vector() {
        let c = fermat();
        let mut expect = vec![BigInt::zero(); 15];
        expect[0] = BigInt::one();
        expect[10] = BigInt::one();
        expect[14] = BigInt::one();
        assert_eq!(c.coeffs(), &expect[..]);
    }

    #[test]
    fn parse_2_3_6_curve() {
        let c = TernaryQuarticZ::parse(
            "x^4 + x^3*y + x^3*z + x^2*y^2 + x^2*z^2 + x*y^2*z + x*y*z^2 - y^3*z - y^2*z^2 - y*z^3",
        )
        .unwrap();
        let expect: [i64; 15] = [1, 1, 1, 1, 0, 1, 0, 1, 1, 0, 0, -1, -1, -1, 0];
        assert_eq!(c.coeffs_i64().unwrap(), expect);
        let c2 = TernaryQuarticZ::parse(
            "x^4 + x^3y + x^3z + x^2y^2 + x^2z^2 + xy^2z + xyz^2 - y^3z - y^2z^2 - yz^3",
        )
        .unwrap();
        assert_eq!(c, c2);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(TernaryQuarticZ::parse("x^3 + y^3").is_err());
        assert!(TernaryQuarticZ::parse("x^4 + y^3").is_err());
        assert!(TernaryQuarticZ::parse("x^4 + w^4").is_err());
        assert!(TernaryQuarticZ::parse("1,2,3").is_err());
    }

    #[test]
    fn fermat_smooth_squared_conic_not() {
        assert!(fermat().is_smooth_over_q());
        let sq = TernaryQuarticZ::parse("(x^2 + y^2 + z^2)^2").unwrap();
        assert!(!sq.is_smooth_over_q());
        let bloch = TernaryQuarticZ::parse("x^4 + x^2*y^2 - y^4 - x^2*y*z + x^2*z^2 - y^2*z^2 - z^4")
            .unwrap();
        assert!(bloch.is_smooth_over_q());
    }

    #[test]
    fn exact_smoothness_path_agrees() {
        // Force the exact path (skip the mod-p shortcut) on a smooth and a
        // singular curve.
        assert!(!exact_singular_over_q(&fermat()));
        let nodal = TernaryQuarticZ::parse("x^2*y^2 + y^4 + z^4").unwrap();
        assert!(exact_singular_over_q(&nodal));
        let sq = TernaryQuarticZ::parse("(x^2 + y^2 + z^2)^2").unwrap();
        assert!(exact_singular_over_q(&sq));
    }

    #[test]
    fn fermat_good_primes_bound_10() {
        let c = fermat();
        assert_eq!(c.good_primes(10, true), vec![3, 5, 7]);
        assert_eq!(c.good_primes(10, false), vec![5, 7]);
    }

    #[test]
    fn fermat_mod_3_has_4_points() {
        // Exhaustive oracle over P^2(F_3).
        let c = fermat().reduce_mod(3).unwrap();
        let fp = PrimeField::new(3).unwrap();
        let mp = c.to_mpoly();
        let mut reps: Vec<[u64; 3]> = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                reps.push([x, y, 1]);
            }
        }
        for x in 0..3 {
            reps.push([x, 1, 0]);
        }
        reps.push([1, 0, 0]);
        let oracle =
            reps.iter().filter(|rep| mp.eval(&fp, &[rep[0], rep[1], rep[2]]) == 0).count() as u64;
        assert_eq!(oracle, 4);
        assert_eq!(c.count_points(1).unwrap(), 4);
    }

    #[test]
    fn count_points_extension_matches_exhaustive() {
        let c5 = fermat().reduce_mod(5).unwrap();
        let n2 = c5.count_points(2).unwrap();
        let ctx = FqCtx::make_extension(5, 2).unwrap();
        let mp = c5.to_mpoly();
        let lifted = mp.map_coeffs(&*ctx, |c| ctx.scalar(*c));
        let elems: Vec<crate::fq::FqElem> = (0..25u64).map(|n| vec![n % 5, n / 5]).collect();
        let mut all: Vec<[crate::fq::FqElem; 3]> = Vec::new();
        for a in &elems {
            for b in &elems {
                all.push([a.clone(), b.clone(), ctx.one()]);
            }
        }
        for a in &elems {
            all.push([a.clone(), ctx.one(), ctx.zero()]);
        }
        all.push([ctx.one(), ctx.zero(), ctx.zero()]);
        let oracle = all.iter().filter(|pt| ctx.is_zero(&lifted.eval(&*ctx, pt))).count() as u64;
        assert_eq!(n2, oracle);
    }

    #[test]
    fn weil_bound_on_counts() {
        for p in [5u64, 7, 11] {
            let c = fermat().reduce_mod(p).unwrap();
            for k in 1..=2usize {
                let n = c.count_points(k).unwrap() as i64;
                let q = (p as i64).pow(k as u32);
                let bound = 6.0 * (q as f64).sqrt();
                assert!(((n - q - 1).abs() as f64) <= bound + 1e-9);
            }
        }
    }

    #[test]
    fn substitution_functorial() {
        let c = fermat();
        let big = |n: i64| BigInt::from(n);
        let id = [
            [big(1), big(0), big(0)],
            [big(0), big(1), big(0)],
            [big(0), big(0), big(1)],
        ];
        assert_eq!(c.apply_substitution(&id).unwrap(), c);
        let cm = TernaryQuarticZ::parse("x^4 + y^4 - z^4").unwrap();
        let swap = [
            [big(1), big(0), big(0)],
            [big(0), big(0), big(1)],
            [big(0), big(1), big(0)],
        ];
        let swapped = cm.apply_substitution(&swap).unwrap();
        let expect = TernaryQuarticZ::parse("x^4 - y^4 + z^4").unwrap();
        assert_eq!(swapped, expect);
        // Composition law on a random-ish quartic.
        let q = TernaryQuarticZ::parse("x^4 + 2*x^3*y - x*y^2*z + 3*y*z^3 + z^4").unwrap();
        let m1 = [
            [big(1), big(1), big(0)],
            [big(0), big(1), big(0)],
            [big(2), big(0), big(1)],
        ];
        let m2 = [
            [big(1), big(0), big(3)],
            [big(1), big(1), big(1)],
            [big(0), big(0), big(1)],
        ];
        let lhs = q.apply_substitution(&m1).unwrap().apply_substitution(&m2).unwrap();
        // apply(M1) then apply(M2) is substitution by M1 * M2 acting on the
        // coordinate column: rows compose as M1 o M2 evaluated row-wise.
        let prod = {
            let mut out = [
                [big(0), big(0), big(0)],
                [big(0), big(0), big(0)],
                [big(0), big(0), big(0)],
            ];
            for i in 0..3 {
                for j in 0..3 {
                    let mut s = big(0);
                    for l in 0..3 {
                        s += &m1[i][l] * &m2[l][j];
                    }
                    out[i][j] = s;
                }
            }
            out
        };
        let rhs = q.apply_substitution(&prod).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_form_idempotent_and_orbit() {
        let c = TernaryQuarticZ::parse("x^4 + x^3*y - y^4 + z^4").unwrap();
        let cf = c.canonical_form().unwrap();
        assert_eq!(cf.canonical_form().unwrap(), cf);
        assert!(c.orbit_size().unwrap() <= 48);
        assert_eq!(48 % c.orbit_size().unwrap(), 0);
        let big = |n: i64| BigInt::from(n);
        let m = [
            [big(-1), big(0), big(0)],
            [big(0), big(0), big(1)],
            [big(0), big(1), big(0)],
        ];
        let c2 = c.apply_substitution(&m).unwrap();
        assert_eq!(c2.canonical_form().unwrap(), cf);
    }

    #[test]
    fn smooth_substitution_preserves_smoothness() {
        let c = fermat().reduce_mod(7).unwrap();
        let m = [[1u64, 2, 0], [0, 1, 0], [3, 0, 1]];
        let c2 = c.apply_substitution(&m).unwrap();
        assert_eq!(c.count_points(1).unwrap(), c2.count_points(1).unwrap());
    }
}
