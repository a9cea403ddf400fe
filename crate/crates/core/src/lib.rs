//! Exact algebra and certified numerics for verifying Schwarz-genus and
//! topological-complexity lower bounds of classical enumerative problems.

pub mod arith;
pub mod bpu;
pub mod claims;
pub mod geometry;
pub mod koszul;
pub mod numeric;
pub mod linalg;
pub mod poly;
pub mod restriction;
