//! Exact machinery for a census of closed non-orientable 3-manifolds of low
//! triangulation complexity.
//!
//! Everything here is integer or rational arithmetic on small combinatorial
//! objects: one-vertex triangulations and their dual spines, simplicial
//! homology over Z and Z/2, Seifert invariants, torus bundle monodromies, and
//! the census enumeration itself. No floating point, no randomness, no IO.
//! The companion `norc-cli` crate carries file formats and the command line.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod census;
pub mod homology;
pub mod seifert;
pub mod solbundle;
pub mod spine;
pub mod trig;

pub use trig::perm::Perm4;
