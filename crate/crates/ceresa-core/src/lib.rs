//! Certification of non-torsionness for the Ceresa / modified diagonal cycle
//! of a smooth plane quartic over Q.
//!
//! The library computes, at many good primes p, a lower bound on the order of
//! the modified diagonal class (the order of the Frobenius shadow in the
//! Jacobian of the reduced curve) and an upper bound (the determinant of
//! Frobenius minus identity on the middle cohomology of the triple product),
//! and combines them: when the combined lower bound does not divide the
//! combined upper bound, the cycle has infinite order.  A second pipeline
//! handles semidiagonal quartics, whose Frobenius shadows are uniformly
//! 4-torsion, through elliptic quotients and an isogeny-twisted shadow.

pub mod arith;
pub mod bloch;
pub mod bounds;
pub mod census;
pub mod certifier;
pub mod divisor;
pub mod elliptic;
pub mod fp;
pub mod linalg;
pub mod fq;
pub mod points;
pub mod poly;
pub mod quartic;
pub mod shadows;
pub mod twist;
pub mod zeta;

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("curve is not smooth: {0}")]
    NotSmooth(String),
    #[error("no usable prime: {0}")]
    NoGoodPrime(String),
    #[error("certificate is malformed: {0}")]
    Certificate(String),
    #[error("checkpoint corrupt: {0}")]
    Checkpoint(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Tool version recorded into certificates.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Certificate schema version.
pub const SCHEMA_VERSION: u32 = 1;
