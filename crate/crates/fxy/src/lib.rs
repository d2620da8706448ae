//! Exact arithmetic for f-expressions over f(x,y) = x^2 + y^3: enumeration,
//! e-equivalence, identity search, structural analysis, and bounded
//! exponential Diophantine solving in powers of 2 and 3.

pub mod cache;
pub mod claims;
pub mod dioph;
pub mod error;
pub mod eval;
pub mod multivar;
pub mod poly;
pub mod structure;
pub mod term;

pub use error::Error;
pub use term::Term;
