//! Exact computational group theory for monodromy subgroups of Sp4(Z).
//!
//! The crate reconstructs the monodromy groups `G(d,k)` of a family of
//! fourth-order Calabi-Yau operators as subgroups of the integral symplectic
//! group, and verifies their published index computations by independent
//! means: Todd-Coxeter coset enumeration over the Behr presentation of
//! Sp4(Z), order computations in Sp4(Z/N) (hashed BFS closure and
//! Schreier-Sims stabilizer chains), congruence-subgroup membership tests,
//! and the finite symplectic geometry of `(Z/2)^4`.
//!
//! All arithmetic is exact; no floating point appears anywhere.

pub mod catalog;
pub mod coset;
pub mod cyclotomic;
pub mod error;
pub mod geometry;
pub mod matrix;
pub mod modgroup;
pub mod modmat;
pub mod words;

pub use error::{Error, Result};
