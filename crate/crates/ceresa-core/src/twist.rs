//! Exact arithmetic in Q[t]/(f) and the two Galois-twist constructions:
//! the orbit-sum quartic over a cyclic cubic field (a rational form of the
//! Fermat quartic) and the zeta_5 coordinate-change twist for quartics with
//! the order-4 symmetry (x:y:z) -> (-y:x:z).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::fp::{Field, QField, Ring};
use crate::poly::multi::MPoly;
use crate::poly::uni::{self, Poly};
use crate::quartic::TernaryQuarticZ;
use crate::{Error, Result};

/// The number field Q[t]/(f) with an explicit automorphism (for cyclic
/// fields), as a ring/field context; elements are coefficient vectors.
#[derive(Debug, Clone)]
pub struct NumberFieldCtx {
    /// Monic irreducible integer polynomial, low to high.
    pub modulus: Vec<BigInt>,
    /// Image of the generator under the distinguished automorphism.
    pub sigma_gen: Vec<BigRational>,
    pub degree: usize,
}

pub type NfElem = Vec<BigRational>;

impl NumberFieldCtx {
    /// Build the field and verify: f monic irreducible (certified by an
    /// irreducible reduction mod some prime), sigma a root of f, and
    /// sigma^order = id.
    pub fn new(modulus: Vec<BigInt>, sigma_gen_int: &[i64], order: usize) -> Result<Self> {
        let n = modulus.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| {
            Error::Precondition("modulus must have degree >= 1".into())
        })?;
        if !modulus[n].is_one() {
            return Err(Error::Precondition("modulus must be monic".into()));
        }
        if !irreducible_over_q(&modulus) {
            return Err(Error::Precondition(
                "could not certify the modulus irreducible over Q".into(),
            ));
        }
        let mut sigma_gen: NfElem =
            sigma_gen_int.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        sigma_gen.resize(n, BigRational::zero());
        let ctx = NumberFieldCtx { modulus, sigma_gen, degree: n };
        // f(sigma(t)) = 0 mod f.
        let lifted: Poly<NfElem> =
            ctx.modulus.iter().map(|c| ctx.scalar(BigRational::from_integer(c.clone()))).collect();
        let image = uni::eval(&ctx, &lifted, &ctx.sigma());
        if !ctx.is_zero(&image) {
            return Err(Error::Precondition("sigma does not permute the roots".into()));
        }
        // sigma^order = id.
        let mut acc = ctx.sigma();
        for _ in 1..order {
            acc = ctx.apply_sigma(&acc);
        }
        if acc != ctx.gen() {
            return Err(Error::Precondition(format!("sigma does not have order {}", order)));
        }
        Ok(ctx)
    }

    /// Q(zeta_7)^+ = Q[t]/(t^3 + t^2 - 2t - 1), sigma(t) = t^2 - 2 (the
    /// Galois action on cosines), of order 3.
    pub fn zeta7_plus() -> NumberFieldCtx {
        NumberFieldCtx::new(
            vec![BigInt::from(-1), BigInt::from(-2), BigInt::from(1), BigInt::from(1)],
            &[-2, 0, 1],
            3,
        )
        .expect("shipped field is valid")
    }

    /// Q(zeta_5) = Q[t]/(t^4 + t^3 + t^2 + t + 1), sigma(zeta) = zeta^2,
    /// of order 4.
    pub fn zeta5() -> NumberFieldCtx {
        NumberFieldCtx::new(
            vec![
                BigInt::one(),
                BigInt::one(),
                BigInt::one(),
                BigInt::one(),
                BigInt::one(),
            ],
            &[0, 0, 1, 0],
            4,
        )
        .expect("shipped field is valid")
    }

    pub fn scalar(&self, c: BigRational) -> NfElem {
        let mut v = vec![BigRational::zero(); self.degree];
        v[0] = c;
        v
    }

    pub fn from_int(&self, c: i64) -> NfElem {
        self.scalar(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn gen(&self) -> NfElem {
        let mut v = vec![BigRational::zero(); self.degree];
        if self.degree == 1 {
            v[0] = -BigRational::from_integer(self.modulus[0].clone());
        } else {
            v[1] = BigRational::one();
        }
        v
    }

    /// Powers of the generator: zeta^k reduced mod f.
    pub fn gen_pow(&self, k: usize) -> NfElem {
        let mut acc = self.one();
        let g = self.gen();
        for _ in 0..k {
            acc = self.mul(&acc, &g);
        }
        acc
    }

    pub fn sigma(&self) -> NfElem {
        self.sigma_gen.clone()
    }

    /// Apply the distinguished automorphism to an element.
    pub fn apply_sigma(&self, a: &NfElem) -> NfElem {
        // a = sum c_i t^i maps to sum c_i sigma(t)^i.
        let mut acc = self.zero();
        let mut spow = self.one();
        for c in a {
            if !c.is_zero() {
                let term: NfElem = spow.iter().map(|x| x * c).collect();
                acc = self.add(&acc, &term);
            }
            spow = self.mul(&spow, &self.sigma_gen);
        }
        acc
    }

    fn reduce(&self, mut v: Poly<BigRational>) -> NfElem {
        let n = self.degree;
        while v.len() > n {
            let c = v.pop().unwrap();
            if c.is_zero() {
                continue;
            }
            let shift = v.len() - n;
            for j in 0..n {
                let m = BigRational::from_integer(self.modulus[j].clone());
                v[shift + j] -= &c * m;
            }
        }
        v.resize(n, BigRational::zero());
        v
    }

    /// Is the element rational (all higher coordinates zero)?
    pub fn as_rational(&self, a: &NfElem) -> Option<BigRational> {
        if a[1..].iter().all(|c| c.is_zero()) {
            Some(a[0].clone())
        } else {
            None
        }
    }
}

impl Ring for NumberFieldCtx {
    type E = NfElem;

    fn zero(&self) -> NfElem {
        vec![BigRational::zero(); self.degree]
    }
    fn one(&self) -> NfElem {
        self.scalar(BigRational::one())
    }
    fn is_zero(&self, a: &NfElem) -> bool {
        a.iter().all(|c| c.is_zero())
    }
    fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
    fn neg(&self, a: &NfElem) -> NfElem {
        a.iter().map(|x| -x).collect()
    }
    fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        let mut prod = vec![BigRational::zero(); 2 * self.degree - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] += x * y;
            }
        }
        self.reduce(prod)
    }
    fn exact_div(&self, a: &NfElem, b: &NfElem) -> NfElem {
        self.mul(a, &self.inv(b))
    }
}

impl Field for NumberFieldCtx {
    fn inv(&self, a: &NfElem) -> NfElem {
        assert!(!self.is_zero(a), "inverse of zero in number field");
        let qf = QField;
        let mut ap: Poly<BigRational> = a.clone();
        uni::trim(&qf, &mut ap);
        let modulus: Poly<BigRational> =
            self.modulus.iter().map(|c| BigRational::from_integer(c.clone())).collect();
        let (g, u, _) = uni::ext_gcd(&qf, &ap, &modulus);
        assert_eq!(uni::deg(&g), Some(0), "element not invertible");
        let mut out = u;
        out.resize(self.degree, BigRational::zero());
        out
    }
}

/// Certify irreducibility over Q by finding a prime with irreducible
/// reduction (sufficient; works for every shipped field).
fn irreducible_over_q(f: &[BigInt]) -> bool {
    use crate::fp::PrimeField;
    use crate::poly::factor as pfactor;
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    for p in crate::arith::primes_up_to(200) {
        if p < 3 {
            continue;
        }
        let Ok(fp) = PrimeField::new(p) else { continue };
        let red: Poly<u64> = f.iter().map(|c| fp.reduce_bigint(c)).collect();
        if red.len() != f.len() || *red.last().unwrap() == 0 {
            continue;
        }
        if pfactor::is_irreducible(&fp, &red) {
            return true;
        }
    }
    false
}

/// A linear form over the number field.
#[derive(Debug, Clone)]
pub struct LinearFormNf {
    pub coeffs: [NfElem; 3],
}

impl LinearFormNf {
    pub fn new(ctx: &NumberFieldCtx, coeffs: [NfElem; 3]) -> Result<Self> {
        if coeffs.iter().all(|c| ctx.is_zero(c)) {
            return Err(Error::Precondition("linear form must be nonzero".into()));
        }
        Ok(LinearFormNf { coeffs })
    }

    /// The linear form from the Fermat-twist construction:
    /// (-1 + a + a^2) x + (1 + a) y + (-1 - a^2) z over Q(zeta_7)^+.
    pub fn fermat_twist_form(ctx: &NumberFieldCtx) -> LinearFormNf {
        let a = ctx.gen();
        let a2 = ctx.mul(&a, &a);
        let m1 = ctx.from_int(-1);
        let one = ctx.one();
        let cx = ctx.add(&ctx.add(&m1, &a), &a2);
        let cy = ctx.add(&one, &a);
        let cz = ctx.sub(&ctx.from_int(-1), &a2);
        LinearFormNf { coeffs: [cx, cy, cz] }
    }
}

/// The orbit-sum quartic sum_i (l^(sigma^i))^4 over a cyclic cubic field:
/// a rational form of the Fermat quartic.
pub fn galois_orbit_quartic(ctx: &NumberFieldCtx, l: &LinearFormNf) -> Result<TernaryQuarticZ> {
    if ctx.degree != 3 {
        return Err(Error::Precondition("orbit-sum construction needs a cubic field".into()));
    }
    let mut total: MPoly<NfElem> = MPoly::zero();
    let mut coeffs = l.coeffs.clone();
    for _ in 0..3 {
        let mut form: MPoly<NfElem> = MPoly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let mut k = [0u16; 3];
            k[i] = 1;
            form.add_term(ctx, k, c.clone());
        }
        let quartic = form.pow(ctx, 4);
        total = total.add(ctx, &quartic);
        coeffs = [
            ctx.apply_sigma(&coeffs[0]),
            ctx.apply_sigma(&coeffs[1]),
            ctx.apply_sigma(&coeffs[2]),
        ];
    }
    rational_quartic(ctx, &total, "orbit sum has an irrational coefficient (sigma wrong)")
}

/// Apply the zeta_5 coordinate change to a quartic invariant under the
/// order-4 signed permutation (x:y:z) -> (-y:x:z); the result is another
/// rational model of the same curve over the closure.
pub fn zeta5_twist(curve: &TernaryQuarticZ) -> Result<TernaryQuarticZ> {
    // Required symmetry.
    let t = [
        [BigInt::zero(), BigInt::from(-1), BigInt::zero()],
        [BigInt::one(), BigInt::zero(), BigInt::zero()],
        [BigInt::zero(), BigInt::zero(), BigInt::one()],
    ];
    let image = curve.apply_substitution(&t)?;
    if image != *curve {
        return Err(Error::Precondition(
            "curve lacks the (x:y:z) -> (-y:x:z) symmetry".into(),
        ));
    }
    let ctx = NumberFieldCtx::zeta5();
    let z1 = ctx.gen_pow(1);
    let z2 = ctx.gen_pow(2);
    let z3 = ctx.gen_pow(3);
    let z4 = ctx.gen_pow(4);
    let a = ctx.sub(&z1, &z4);
    let b = ctx.sub(&z2, &z3);
    let zero = ctx.zero();
    let one = ctx.one();
    let m = [
        [a.clone(), b.clone(), zero.clone()],
        [b.clone(), ctx.neg(&a), zero.clone()],
        [zero, ctx.scalar(BigRational::zero()), one],
    ];
    let lifted: MPoly<NfElem> = curve
        .to_mpoly()
        .map_coeffs(&ctx, |c| ctx.scalar(BigRational::from_integer(c.clone())));
    let twisted = lifted.linear_substitution(&ctx, &m);
    let out = rational_quartic(&ctx, &twisted, "twist did not descend to Q")?;
    if !out.is_smooth_over_q() {
        return Err(Error::Internal("twist of a smooth curve came out singular".into()));
    }
    Ok(out)
}

fn rational_quartic(
    ctx: &NumberFieldCtx,
    form: &MPoly<NfElem>,
    err: &str,
) -> Result<TernaryQuarticZ> {
    let mut rational: MPoly<BigRational> = MPoly::zero();
    let qf = QField;
    for (k, v) in &form.terms {
        let c = ctx
            .as_rational(v)
            .ok_or_else(|| Error::Precondition(format!("{}: x^{}y^{}z^{}", err, k[0], k[1], k[2])))?;
        rational.add_term(&qf, *k, c);
    }
    // Clear denominators.
    let mut lcm = BigInt::one();
    for c in rational.terms.values() {
        lcm = num_integer::Integer::lcm(&lcm, c.denom());
    }
    let mut coeffs = vec![BigInt::zero(); 15];
    for (k, v) in &rational.terms {
        let idx = crate::quartic::MONOMIALS
            .iter()
            .position(|m| m == k)
            .ok_or_else(|| Error::Internal("twist output is not a quartic".into()))?;
        coeffs[idx] = v.numer() * (&lcm / v.denom());
    }
    TernaryQuarticZ::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta7_plus_field_checks() {
        let ctx = NumberFieldCtx::zeta7_plus();
        // sigma has order exactly 3 (checked at construction); inverse law.
        let a = ctx.add(&ctx.gen(), &ctx.from_int(2));
        let inv = ctx.inv(&a);
        assert_eq!(ctx.mul(&a, &inv), ctx.one());
    }

    #[test]
    fn rational_form_orbit_sum() {
        // All-rational coefficients: the orbit sum is 3 * (form)^4 up to
        // content.
        let ctx = NumberFieldCtx::zeta7_plus();
        let l = LinearFormNf::new(
            &ctx,
            [ctx.from_int(1), ctx.from_int(2), ctx.from_int(-1)],
        )
        .unwrap();
        let c = galois_orbit_quartic(&ctx, &l).unwrap();
        let direct = TernaryQuarticZ::parse("(x + 2y - z)^4").unwrap();
        assert_eq!(c, direct);
    }

    #[test]
    fn fermat_twist_is_smooth_rational_quartic() {
        let ctx = NumberFieldCtx::zeta7_plus();
        let l = LinearFormNf::fermat_twist_form(&ctx);
        let c = galois_orbit_quartic(&ctx, &l).unwrap();
        assert!(c.is_smooth_over_q());
    }

    #[test]
    fn random_small_orbit_sums_smooth() {
        // Independence: the three conjugate forms span; the resulting
        // quartic is a smooth Fermat form.
        let ctx = NumberFieldCtx::zeta7_plus();
        let cases: [[i64; 9]; 2] = [
            [1, 1, 0, 0, 1, 0, 1, 0, 1],
            [2, -1, 0, 1, 1, 1, 0, 0, 1],
        ];
        for case in cases {
            let elem = |v: &[i64]| -> NfElem {
                let mut out = ctx.zero();
                for (i, &c) in v.iter().enumerate() {
                    out[i] = BigRational::from_integer(BigInt::from(c));
                }
                out
            };
            let l = LinearFormNf::new(
                &ctx,
                [elem(&case[0..3]), elem(&case[3..6]), elem(&case[6..9])],
            )
            .unwrap();
            // Rank oracle: the three conjugate coefficient rows must be
            // linearly independent over Q for smoothness.
            let rows: Vec<[NfElem; 3]> = {
                let mut rows = Vec::new();
                let mut coeffs = l.coeffs.clone();
                for _ in 0..3 {
                    rows.push(coeffs.clone());
                    coeffs = [
                        ctx.apply_sigma(&coeffs[0]),
                        ctx.apply_sigma(&coeffs[1]),
                        ctx.apply_sigma(&coeffs[2]),
                    ];
                }
                rows
            };
            let det = {
                // 3x3 determinant over the field
                let m = &rows;
                let t1 = ctx.mul(
                    &m[0][0],
                    &ctx.sub(&ctx.mul(&m[1][1], &m[2][2]), &ctx.mul(&m[1][2], &m[2][1])),
                );
                let t2 = ctx.mul(
                    &m[0][1],
                    &ctx.sub(&ctx.mul(&m[1][0], &m[2][2]), &ctx.mul(&m[1][2], &m[2][0])),
                );
                let t3 = ctx.mul(
                    &m[0][2],
                    &ctx.sub(&ctx.mul(&m[1][0], &m[2][1]), &ctx.mul(&m[1][1], &m[2][0])),
                );
                ctx.add(&ctx.sub(&t1, &t2), &t3)
            };
            let independent = !ctx.is_zero(&det);
            let c = galois_orbit_quartic(&ctx, &l).unwrap();
            if independent {
                assert!(c.is_smooth_over_q(), "case {:?}", case);
            }
        }
    }

    #[test]
    fn zeta5_twist_of_fermat() {
        let fermat = TernaryQuarticZ::parse("x^4 + y^4 + z^4").unwrap();
        let tw = zeta5_twist(&fermat).unwrap();
        assert!(tw.is_smooth_over_q());
        // Twisting is invertible in spirit: the twist differs from the
        // original but shares good reduction behavior away from 2 and 5.
        assert_ne!(tw, fermat);
    }

    #[test]
    fn zeta5_twist_rejects_asymmetric_input() {
        let c = TernaryQuarticZ::parse("x^4 + x^3*y + y^4 + z^4").unwrap();
        assert!(zeta5_twist(&c).is_err());
    }
}
