//! The per-prime upper bound: the exact integer determinant of
//! (Frobenius - identity) acting on the middle cohomology of the triple
//! product, twisted twice, computed from the curve's L-polynomial through
//! composed products of the Frobenius characteristic polynomial.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::arith::{partial_factor, PartialFactored};
use crate::poly::composed::{composed_product, composed_product_eval};
use crate::zeta::LPolynomial;
use crate::{Error, Result};

/// Which part of the middle cohomology the determinant ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMode {
    /// All of H^3 of the triple product: the (1,1,1) tensor block plus the
    /// six H^0 x H^1 x H^2 permutation blocks.
    FullH3,
    /// Only the (1,1,1) Kunneth block (a divisor of the full determinant,
    /// hence a sharper bound).
    Kunneth111,
}

impl BoundMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundMode::FullH3 => "full_h3",
            BoundMode::Kunneth111 => "kunneth_111",
        }
    }

    pub fn parse(s: &str) -> Result<BoundMode> {
        match s {
            "full_h3" => Ok(BoundMode::FullH3),
            "kunneth_111" => Ok(BoundMode::Kunneth111),
            other => Err(Error::Parse(format!("unknown bound mode {:?}", other))),
        }
    }
}

/// det(Frob - I) on the chosen module, as an exact rational with p-power
/// denominator, plus its p-stripped absolute value.
#[derive(Debug, Clone)]
pub struct DetBound {
    pub p: u64,
    pub mode: BoundMode,
    /// Numerator of the exact value; the denominator is p^den_exponent.
    pub numerator: BigInt,
    pub den_exponent: u32,
    pub sign: i8,
    /// |value| with all powers of p removed (an integer), factored as far
    /// as trial division goes.
    pub stripped: PartialFactored,
}

impl DetBound {
    pub fn stripped_value(&self) -> BigUint {
        self.stripped.value()
    }
}

/// Compute the determinant bound from a genus-3 L-polynomial.
///
/// With P_c the monic degree-6 characteristic polynomial of Frobenius on H^1
/// (roots alpha_i), the (1,1,1) block contributes
/// prod_(a,b,c) (alpha_a alpha_b alpha_c / q^2 - 1) = P3(q^2) / q^432 where
/// P3 is the triple composed product, and each of the six H^0 x H^1 x H^2
/// blocks contributes prod_i (alpha_i / q - 1) = P_c(q) / q^6.
pub fn frobenius_det_bound(l: &LPolynomial, mode: BoundMode) -> Result<DetBound> {
    if l.genus != 3 {
        return Err(Error::Precondition("determinant bound needs a genus-3 L-polynomial".into()));
    }
    let p = l.q;
    let pc = l.frobenius_charpoly();
    let q2 = BigInt::from(p) * BigInt::from(p);
    // P2 = P_c o P_c (degree 36), then P3(q^2) evaluated lazily.
    let p2 = composed_product(&pc, &pc)?;
    let p3_at_q2 = composed_product_eval(&p2, &pc, &q2)?;
    if p3_at_q2.is_zero() {
        return Err(Error::Internal(
            "determinant vanishes on the (1,1,1) block: weight condition violated".into(),
        ));
    }
    let (numerator, den_exponent) = match mode {
        BoundMode::Kunneth111 => (p3_at_q2, 432u32),
        BoundMode::FullH3 => {
            let pc_at_q = crate::poly::uni::eval(&crate::fp::BigIntRing, &pc, &BigInt::from(p));
            if pc_at_q.is_zero() {
                return Err(Error::Internal(
                    "determinant vanishes on an H0xH1xH2 block: weight condition violated".into(),
                ));
            }
            (pc_at_q.pow(6) * p3_at_q2, 432 + 36u32)
        }
    };
    let sign = if numerator.is_negative() { -1 } else { 1 };
    let mut abs = numerator.abs().to_biguint().unwrap();
    // Strip p (the full value has p-power denominator and possibly p-power
    // content; only the prime-to-p part matters).
    let pb = BigUint::from(p);
    while (&abs % &pb).is_zero() {
        abs /= &pb;
    }
    let stripped = partial_factor(&abs);
    Ok(DetBound { p, mode, numerator, den_exponent, sign, stripped })
}
