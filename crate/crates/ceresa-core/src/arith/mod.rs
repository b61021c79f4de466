//! Arbitrary-precision integer utilities: factorization, primality, prime
//! iteration, and the supernatural-number bookkeeping used when combining
//! per-prime bounds.

mod factor;
mod supernatural;

pub use factor::{
    factor_integer, factor_u64, is_prime_u64, is_probable_prime, next_prime_u64,
    partial_factor, primes_up_to, v_adic, FactoredInteger, PartialFactored, TRIAL_DIVISION_BOUND,
};
pub use supernatural::{sn_divides, sn_gcd, sn_lcm, strip_prime, SnExponent, SupernaturalNumber};
