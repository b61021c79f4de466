//! Exact polynomial arithmetic: generic univariate polynomials over a ring
//! context (integers, prime fields, extension fields, polynomial rings),
//! factorization over finite fields, sparse multivariate polynomials, and the
//! composed-product construction.

pub mod composed;
pub mod factor;
pub mod multi;
pub mod uni;

pub use composed::{composed_product, composed_product_eval};
pub use multi::MPoly;
